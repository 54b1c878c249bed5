//! Callan words to Vesztergombi permutations and back, and the map `phi`
//! reducing configurations with a given resultant to toppleable
//! configurations of a smaller size.

use crate::characterize::is_p_toppleable;
use crate::config::Configuration;
use crate::engine::resultant;
use crate::error::{Error, Result};
use crate::families::{is_vesztergombi, Block, CallanWord};
use crate::perm::Permutation;

/// Sends a `(u,o)`-Callan word `w` to a `(u,o)`-Vesztergombi permutation
/// `sigma`, indexed by the letters of `w`:
///
/// * a non-leading underlined letter gets its predecessor plus `o + 1`,
///   a non-leading overlined letter its predecessor minus `u + 1`;
/// * the leader of an underlined first block gets `o + 1`, the leader of an
///   overlined last block gets `o`;
/// * the remaining underlined leaders, in order of appearance, take the
///   unused values `<= o` in increasing order, and the remaining overlined
///   leaders take the unused values `> o`.
pub fn callan_to_vesztergombi(w: &CallanWord) -> Permutation {
    let (u, o) = (w.u(), w.o());
    let total = u + o;
    let mut sigma = vec![0usize; total + 1];
    let blocks = w.blocks();
    let last = blocks.len() - 1;
    let mut under_leaders = Vec::new();
    let mut over_leaders = Vec::new();
    for (bi, b) in blocks.iter().enumerate() {
        if b.underlined {
            if bi == 0 {
                sigma[b.leader()] = o + 1;
            } else {
                under_leaders.push(b.leader());
            }
            for t in b.values.windows(2) {
                sigma[t[1]] = t[0] + o + 1;
            }
        } else {
            if bi == last {
                sigma[b.leader()] = o;
            } else {
                over_leaders.push(b.leader());
            }
            for t in b.values.windows(2) {
                sigma[t[1]] = t[0] - u - 1;
            }
        }
    }
    let mut used = vec![false; total + 2];
    for &v in &sigma[1..] {
        used[v] = true;
    }
    let mut small = (1..=o).filter(|&v| !used[v]);
    for a in under_leaders {
        sigma[a] = small.next().expect("one free small value per underlined leader");
    }
    let mut big = (o + 1..=total).filter(|&v| !used[v]);
    for b in over_leaders {
        sigma[b] = big.next().expect("one free large value per overlined leader");
    }
    sigma.remove(0);
    Permutation::from_vec_unchecked(sigma)
}

/// Inverse of [`callan_to_vesztergombi`].
pub fn vesztergombi_to_callan(sigma: &Permutation, u: usize, o: usize) -> Result<CallanWord> {
    if !is_vesztergombi(sigma, u, o)? {
        return Err(Error::NotVesztergombi { k: u, n: o });
    }
    let total = u + o;
    let s = |a: usize| sigma.at(a);
    let mut next = vec![0usize; total + 1];
    let mut first_under = None;
    let mut last_over = None;
    let mut under_leaders = Vec::new();
    let mut over_leaders = Vec::new();
    for a in 1..=total {
        let v = s(a);
        if a <= u {
            if v >= o + 2 {
                next[v - o - 1] = a;
            } else if v == o + 1 {
                first_under = Some(a);
            } else {
                under_leaders.push(a);
            }
        } else if v < o {
            next[v + u + 1] = a;
        } else if v == o {
            last_over = Some(a);
        } else {
            over_leaders.push(a);
        }
    }
    under_leaders.sort_by_key(|&a| s(a));
    over_leaders.sort_by_key(|&a| s(a));
    let chain = |leader: usize, underlined: bool| {
        let mut values = vec![leader];
        let mut cur = leader;
        while next[cur] != 0 && values.len() <= total {
            cur = next[cur];
            values.push(cur);
        }
        Block { underlined, values }
    };
    let unders: Vec<Block> = first_under
        .into_iter()
        .chain(under_leaders)
        .map(|a| chain(a, true))
        .collect();
    let overs: Vec<Block> = over_leaders
        .into_iter()
        .chain(last_over)
        .map(|a| chain(a, false))
        .collect();
    let start_under = first_under.is_some();
    let balanced = if start_under == last_over.is_some() {
        unders.len() == overs.len()
    } else if start_under {
        unders.len() == overs.len() + 1
    } else {
        overs.len() == unders.len() + 1
    };
    if !balanced {
        return Err(Error::NotVesztergombi { k: u, n: o });
    }
    let mut word = Vec::with_capacity(total);
    let (mut ui, mut oi) = (unders.iter(), overs.iter());
    let mut take_under = start_under;
    loop {
        let b = if take_under { ui.next() } else { oi.next() };
        match b {
            Some(b) => word.extend_from_slice(&b.values),
            None => break,
        }
        take_under = !take_under;
    }
    if word.len() != total {
        return Err(Error::NotVesztergombi { k: u, n: o });
    }
    Ok(CallanWord::new_unchecked(
        Permutation::from_vec_unchecked(word),
        u,
        o,
    ))
}

/// Deletes from `c` every chip that is neither a left-to-right maximum of
/// the left part of `pi` nor a right-to-left minimum of its right part, and
/// relabels the survivors `1..=i` (left records) and `i+1..=i+j` (right
/// records). `pi` must be the resultant of `c`; the image lies in
/// `S(i+j-1, j)` and is `j`-toppleable.
pub fn phi(c: &Configuration, pi: &Permutation) -> Result<Configuration> {
    let n = c.n();
    if pi.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            found: pi.len(),
        });
    }
    let split = pi.split_at(c.p())?;
    let lefts = split.left_records();
    let rights = split.right_records();
    let mut label = vec![0usize; n + 2];
    for (t, &v) in lefts.iter().chain(&rights).enumerate() {
        label[v] = t + 1;
    }
    let sites: Vec<Vec<usize>> = c
        .sites()
        .map(|site| site.iter().filter(|&&x| label[x] != 0).map(|&x| label[x]).collect::<Vec<_>>())
        .filter(|s| !s.is_empty())
        .collect();
    let image = Configuration::from_sites(&sites).map_err(|_| mismatch(c, pi))?;
    if image.p() != rights.len() || !is_p_toppleable(&image) {
        return Err(mismatch(c, pi));
    }
    Ok(image)
}

fn mismatch(c: &Configuration, pi: &Permutation) -> Error {
    Error::ResultantMismatch {
        expected: pi.to_string(),
        actual: resultant(c).0.to_string(),
    }
}

/// [`phi`] with the resultant computed by stabilizing `c`.
pub fn phi_checked(c: &Configuration) -> Result<(Configuration, Permutation)> {
    let (pi, _) = resultant(c);
    Ok((phi(c, &pi)?, pi))
}

/// Inverse of [`phi`]: rebuilds the configuration of `S(|pi|-1, p)` that
/// topples to `pi` from its image `c_small`.
///
/// The non-record letters of `pi` return as singleton sites in a forced
/// order: those of the right part that precede the `t`-th right record are
/// placed just before record site `t`, and those of the left part that
/// follow the `t`-th left record are placed just after it.
pub fn phi_inverse(c_small: &Configuration, pi: &Permutation, p: usize) -> Result<Configuration> {
    let split = pi.split_at(p)?;
    if pi.len() < 2 || p >= pi.len() {
        return Err(Error::Precondition(format!(
            "{pi} is not a {p}-resultant permutation"
        )));
    }
    let lefts = split.left_records();
    let rights = split.right_records();
    let (i, j) = (lefts.len(), rights.len());
    if c_small.n() != i + j - 1 || c_small.p() != j {
        return Err(Error::Precondition(format!(
            "expected a configuration in S({}, {j}), got S({}, {})",
            i + j - 1,
            c_small.n(),
            c_small.p()
        )));
    }
    if !is_p_toppleable(c_small) {
        return Err(Error::Precondition(format!("{c_small} is not {j}-toppleable")));
    }
    let mut left_groups = vec![Vec::new(); i];
    let mut t = 0;
    for &x in &split.left {
        if t < i && x == lefts[t] {
            t += 1;
        } else {
            left_groups[t - 1].push(x);
        }
    }
    let mut right_groups = vec![Vec::new(); j];
    let mut t = 0;
    for &x in &split.right {
        if x == rights[t] {
            t += 1;
        } else {
            right_groups[t].push(x);
        }
    }
    let value = |k: usize| if k <= i { lefts[k - 1] } else { rights[k - i - 1] };
    let relabel = |site: usize| c_small.site(site).iter().map(|&k| value(k)).collect::<Vec<_>>();
    let mut sites: Vec<Vec<usize>> = Vec::with_capacity(pi.len() - 1);
    for t in 1..=j {
        sites.extend(right_groups[t - 1].iter().map(|&x| vec![x]));
        sites.push(relabel(t));
    }
    for t in 1..=i {
        sites.extend(left_groups[t - 1].iter().map(|&x| vec![x]));
        if t < i {
            sites.push(relabel(j + t));
        }
    }
    let out = Configuration::from_sites(&sites)?;
    debug_assert_eq!(out.p(), p);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn c(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example() {
        let w = CallanWord::new(p("5,7,12,11,1,4,8,14,3,6,9,15,13,10,2"), 9, 6).unwrap();
        let sigma = callan_to_vesztergombi(&w);
        assert_eq!(sigma, p("1,6,4,8,7,10,12,11,13,3,2,9,5,14,15"));
        assert_eq!(sigma.inverse().at(7), w.word().at(1));
        assert_eq!(vesztergombi_to_callan(&sigma, 9, 6).unwrap(), w);
    }

    #[test]
    fn smallest_cases() {
        let w = CallanWord::new(p("12"), 1, 1).unwrap();
        let sigma = callan_to_vesztergombi(&w);
        assert_eq!(sigma, p("21"));
        assert_eq!(vesztergombi_to_callan(&sigma, 1, 1).unwrap(), w);
        let w = CallanWord::new(p("21"), 1, 1).unwrap();
        assert_eq!(callan_to_vesztergombi(&w), p("12"));
        assert!(vesztergombi_to_callan(&p("21"), 0, 2).is_err());
    }

    #[test]
    fn phi_examples() {
        let conf = c("4,(1,2),3");
        let pi = p("1243");
        let img = phi(&conf, &pi).unwrap();
        assert_eq!(img, c("(1,2),3"));
        assert_eq!(phi_inverse(&img, &pi, 2).unwrap(), conf);
        let conf = c("1,(2,3),4");
        let img = phi(&conf, &Permutation::identity(4)).unwrap();
        assert_eq!(img, conf);
        assert_eq!(phi_checked(&conf).unwrap().0, conf);
        assert!(phi(&c("4,(1,2),3"), &Permutation::identity(4)).is_err());
        assert!(phi_inverse(&c("(1,2)"), &pi, 2).is_err());
    }
}
