//! Brute-force oracles written directly from the definitions. Nothing here
//! calls into the library except to convert results for comparison.

#![allow(dead_code)]

use toppling::{Configuration, Permutation};

/// All permutations of `1..=n` in lexicographic order.
pub fn perms(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
    out
}

/// A configuration as a list of sites `1..=n`, each a list of chips.
pub type Sites = Vec<Vec<usize>>;

/// Every member of `S(n,p)`, in lexicographic order of the flat layout.
pub fn configs(n: usize, p: usize) -> Vec<Sites> {
    perms(n + 1)
        .into_iter()
        .filter(|v| v[p - 1] < v[p])
        .map(|v| flat_to_sites(&v, p))
        .collect()
}

pub fn flat_to_sites(v: &[usize], p: usize) -> Sites {
    let mut sites: Sites = v[..p - 1].iter().map(|&c| vec![c]).collect();
    sites.push(vec![v[p - 1], v[p]]);
    sites.extend(v[p + 1..].iter().map(|&c| vec![c]));
    sites
}

pub fn to_config(sites: &Sites) -> Configuration {
    Configuration::from_sites(sites).unwrap()
}

pub fn to_perm(v: &[usize]) -> Permutation {
    Permutation::new(v.to_vec()).unwrap()
}

/// Stable state reached by repeatedly toppling the leftmost site holding
/// two or more chips, always with its two largest chips. Returns the
/// occupancy of sites `0..=n+1`.
pub fn naive_stabilize(sites: &Sites) -> Vec<Option<usize>> {
    let n = sites.len();
    let mut s: Vec<Vec<usize>> = Vec::with_capacity(n + 2);
    s.push(Vec::new());
    s.extend(sites.iter().cloned());
    s.push(Vec::new());
    while let Some(i) = s.iter().position(|x| x.len() >= 2) {
        assert!(i >= 1 && i <= n, "chip escaped the path");
        s[i].sort_unstable();
        let hi = s[i].pop().unwrap();
        let lo = s[i].pop().unwrap();
        s[i - 1].push(lo);
        s[i + 1].push(hi);
    }
    s.into_iter().map(|x| x.first().copied()).collect()
}

/// Resultant and empty site.
pub fn naive_resultant(sites: &Sites) -> (Vec<usize>, usize) {
    let occ = naive_stabilize(sites);
    let empty = occ.iter().position(Option::is_none).unwrap();
    (occ.into_iter().flatten().collect(), empty)
}

pub fn is_sorted(v: &[usize]) -> bool {
    v.iter().enumerate().all(|(i, &c)| c == i + 1)
}

pub fn naive_toppleable(sites: &Sites) -> bool {
    is_sorted(&naive_resultant(sites).0)
}

/// `pi^(r,p)` as sites: entries `>= r` shift up and `r` joins site `p`.
pub fn naive_lift(pi: &[usize], r: usize, p: usize) -> Sites {
    let mut sites: Sites = pi
        .iter()
        .map(|&v| vec![if v < r { v } else { v + 1 }])
        .collect();
    sites[p - 1].push(r);
    sites
}

/// Left-to-right maxima values.
pub fn left_maxima(v: &[usize]) -> Vec<usize> {
    let mut best = 0;
    v.iter()
        .copied()
        .filter(|&x| {
            let rec = x > best;
            best = best.max(x);
            rec
        })
        .collect()
}

/// Right-to-left minima values, in left-to-right order.
pub fn right_minima(v: &[usize]) -> Vec<usize> {
    let mut best = usize::MAX;
    let mut out: Vec<usize> = v
        .iter()
        .rev()
        .copied()
        .filter(|&x| {
            let rec = x < best;
            best = best.min(x);
            rec
        })
        .collect();
    out.reverse();
    out
}

/// Binary `n x k` matrices with no `2 x 2` submatrix equal to a
/// permutation matrix.
pub fn lonesum_count(n: usize, k: usize) -> u64 {
    let cells = n * k;
    let mut count = 0;
    for bits in 0u64..1 << cells {
        let at = |i: usize, j: usize| bits >> (i * k + j) & 1;
        let mut ok = true;
        'outer: for i1 in 0..n {
            for i2 in i1 + 1..n {
                for j1 in 0..k {
                    for j2 in j1 + 1..k {
                        let (a, b, c, d) = (at(i1, j1), at(i1, j2), at(i2, j1), at(i2, j2));
                        if a == d && b == c && a != b {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        count += ok as u64;
    }
    count
}

/// Unsigned Stirling numbers of the first kind by the defining recurrence.
pub fn stirling1_row(n: usize) -> Vec<u64> {
    let mut row = vec![1u64];
    for m in 0..n {
        let mut next = vec![0u64; row.len() + 1];
        for (k, &x) in row.iter().enumerate() {
            next[k] += x * m as u64;
            next[k + 1] += x;
        }
        row = next;
    }
    row
}

/// Acyclic orientations of `K_{n,k}`, split by sink count: entry `[0]` is
/// the total, `[1]` those with exactly one sink, `[2]` those whose only
/// sink is vertex 0.
pub fn ao_counts(n: usize, k: usize) -> [u64; 3] {
    let edges = n * k;
    let v = n + k;
    let mut out = [0u64; 3];
    for bits in 0u64..1 << edges {
        let mut adj = vec![Vec::new(); v];
        for a in 0..n {
            for b in 0..k {
                if bits >> (a * k + b) & 1 == 1 {
                    adj[a].push(n + b);
                } else {
                    adj[n + b].push(a);
                }
            }
        }
        // Repeatedly strip vertices with no outgoing edge left.
        let mut removed = vec![false; v];
        let mut left = v;
        loop {
            let sink = (0..v).find(|&x| !removed[x] && adj[x].iter().all(|&y| removed[y]));
            match sink {
                Some(x) => {
                    removed[x] = true;
                    left -= 1;
                }
                None => break,
            }
        }
        if left > 0 {
            continue;
        }
        out[0] += 1;
        let sinks: Vec<usize> = (0..v).filter(|&x| adj[x].is_empty()).collect();
        if sinks.len() == 1 {
            out[1] += 1;
            if sinks[0] == 0 {
                out[2] += 1;
            }
        }
    }
    out
}

/// `-k <= v_i - i <= n`.
pub fn vesztergombi(v: &[usize], k: usize, n: usize) -> bool {
    v.iter()
        .enumerate()
        .all(|(i, &x)| x as i64 - (i as i64 + 1) >= -(k as i64) && x as i64 - (i as i64 + 1) <= n as i64)
}

/// `-k <= v_i - i < n`.
pub fn window_c(v: &[usize], n: usize, k: usize) -> bool {
    v.iter()
        .enumerate()
        .all(|(i, &x)| x as i64 - (i as i64 + 1) >= -(k as i64) && (x as i64 - (i as i64 + 1)) < n as i64)
}

/// Runs of values `<= u` increase, runs of values `> u` decrease.
pub fn callan(v: &[usize], u: usize) -> bool {
    v.windows(2).all(|w| match (w[0] <= u, w[1] <= u) {
        (true, true) => w[0] < w[1],
        (false, false) => w[0] > w[1],
        _ => true,
    })
}

pub fn excedance_set_is_prefix(v: &[usize], k: usize) -> bool {
    let exc: Vec<usize> = (1..=v.len()).filter(|&i| v[i - 1] > i).collect();
    exc == (1..=k).collect::<Vec<_>>()
}
