//! Recognizers and brute-force enumerators for the permutation families
//! counted by poly-Bernoulli numbers, acyclic orientations of complete
//! bipartite graphs, and resultant validation.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{par_count, Permutation, Permutations};

fn check_len(pi: &Permutation, expected: usize) -> Result<()> {
    if pi.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            found: pi.len(),
        });
    }
    Ok(())
}

/// `-k <= pi_i - i <= n` at every position of `pi` in `S_{k+n}`.
pub fn is_vesztergombi(pi: &Permutation, k: usize, n: usize) -> Result<bool> {
    check_len(pi, k + n)?;
    Ok(pi.values().iter().enumerate().all(|(i, &v)| {
        let pos = i + 1;
        v + k >= pos && v <= pos + n
    }))
}

/// `-k <= pi_i - i < n` at every position of `pi` in `S_{n+k}`.
pub fn is_window_c(pi: &Permutation, n: usize, k: usize) -> Result<bool> {
    check_len(pi, n + k)?;
    Ok(pi.values().iter().enumerate().all(|(i, &v)| {
        let pos = i + 1;
        v + k >= pos && v < pos + n
    }))
}

/// Every maximal run of values in `1..=u` increases and every maximal run
/// of values in `u+1..=u+o` decreases.
pub fn is_callan(pi: &Permutation, u: usize, o: usize) -> Result<bool> {
    check_len(pi, u + o)?;
    Ok(pi.values().windows(2).all(|w| {
        let (a, b) = (w[0], w[1]);
        match (a <= u, b <= u) {
            (true, true) => a < b,
            (false, false) => a > b,
            _ => true,
        }
    }))
}

/// Positions `i` with `pi_i > i`.
pub fn excedance_set(pi: &Permutation) -> Vec<usize> {
    pi.excedances()
}

/// A maximal run of one value class inside a Callan word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub underlined: bool,
    pub values: Vec<usize>,
}

impl Block {
    pub fn leader(&self) -> usize {
        self.values[0]
    }
}

/// A `(u, o)`-Callan word: values `1..=u` are underlined, `u+1..=u+o`
/// overlined.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CallanWord {
    word: Permutation,
    u: usize,
    o: usize,
}

impl CallanWord {
    pub fn new(word: Permutation, u: usize, o: usize) -> Result<Self> {
        if !is_callan(&word, u, o)? {
            return Err(Error::NotCallan { u, o });
        }
        Ok(CallanWord { word, u, o })
    }

    pub(crate) fn new_unchecked(word: Permutation, u: usize, o: usize) -> Self {
        CallanWord { word, u, o }
    }

    pub fn word(&self) -> &Permutation {
        &self.word
    }

    pub fn into_word(self) -> Permutation {
        self.word
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn o(&self) -> usize {
        self.o
    }

    pub fn is_underlined(&self, value: usize) -> bool {
        value <= self.u
    }

    pub fn starts_underlined(&self) -> bool {
        self.word.at(1) <= self.u
    }

    pub fn blocks(&self) -> Vec<Block> {
        let mut out: Vec<Block> = Vec::new();
        for &v in self.word.values() {
            let underlined = v <= self.u;
            match out.last_mut() {
                Some(b) if b.underlined == underlined => b.values.push(v),
                _ => out.push(Block {
                    underlined,
                    values: vec![v],
                }),
            }
        }
        out
    }
}

impl fmt::Display for CallanWord {
    /// Underlined values are written bare and overlined values with a
    /// trailing `'`, blocks separated by `|`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = self.blocks();
        for (bi, b) in blocks.iter().enumerate() {
            if bi > 0 {
                f.write_str("|")?;
            }
            for (vi, v) in b.values.iter().enumerate() {
                if vi > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}{}", if b.underlined { "" } else { "'" })?;
            }
        }
        Ok(())
    }
}

/// A brute-force enumerable family of permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    /// `(k,n)`-Vesztergombi permutations of `S_{k+n}`; `B(n,k)` of them.
    Vesztergombi { k: usize, n: usize },
    /// `(u,o)`-Callan words; `B(u,o)` of them.
    Callan { u: usize, o: usize },
    /// `(u,o)`-Callan words whose first letter is `r`.
    CallanFirst { u: usize, o: usize, r: usize },
    /// `(u,o)`-Callan words starting with an underlined letter; `C(u,o)`.
    CallanUnderlinedFirst { u: usize, o: usize },
    /// `-k <= pi_i - i < n` in `S_{n+k}`; `C(n,k)` of them.
    WindowC { n: usize, k: usize },
    /// Permutations of `S_{n+k}` with excedance set exactly `{1..k}`.
    ExcedanceSet { n: usize, k: usize },
}

impl FamilySpec {
    /// Length of the member permutations.
    pub fn size(&self) -> usize {
        match *self {
            FamilySpec::Vesztergombi { k, n } => k + n,
            FamilySpec::Callan { u, o }
            | FamilySpec::CallanFirst { u, o, .. }
            | FamilySpec::CallanUnderlinedFirst { u, o } => u + o,
            FamilySpec::WindowC { n, k } | FamilySpec::ExcedanceSet { n, k } => n + k,
        }
    }

    pub fn contains(&self, pi: &Permutation) -> bool {
        if pi.len() != self.size() {
            return false;
        }
        match *self {
            FamilySpec::Vesztergombi { k, n } => is_vesztergombi(pi, k, n).unwrap_or(false),
            FamilySpec::Callan { u, o } => is_callan(pi, u, o).unwrap_or(false),
            FamilySpec::CallanFirst { u, o, r } => {
                pi.at(1) == r && is_callan(pi, u, o).unwrap_or(false)
            }
            FamilySpec::CallanUnderlinedFirst { u, o } => {
                pi.at(1) <= u && is_callan(pi, u, o).unwrap_or(false)
            }
            FamilySpec::WindowC { n, k } => is_window_c(pi, n, k).unwrap_or(false),
            FamilySpec::ExcedanceSet { k, .. } => {
                let exc = pi.excedances();
                exc.len() == k && exc.iter().enumerate().all(|(i, &e)| e == i + 1)
            }
        }
    }

    fn check_cap(&self, cap: usize) -> Result<usize> {
        let m = self.size();
        if m > cap {
            return Err(Error::CapExceeded {
                what: "permutation length",
                size: m as u128,
                cap: cap as u128,
            });
        }
        if m == 0 {
            return Err(Error::EmptyPermutation);
        }
        Ok(m)
    }

    /// Members in lexicographic order, filtered lazily from `S_m`.
    pub fn enumerate(self, cap: usize) -> Result<impl Iterator<Item = Permutation>> {
        let m = self.check_cap(cap)?;
        Ok(Permutations::new(m).filter(move |pi| self.contains(pi)))
    }

    /// Number of members, counted in parallel over rank ranges.
    pub fn count(&self, cap: usize) -> Result<u128> {
        let m = self.check_cap(cap)?;
        Ok(par_count(m, |pi| self.contains(pi)))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Vesztergombi { k, n } => write!(f, "vesztergombi(k={k},n={n})"),
            FamilySpec::Callan { u, o } => write!(f, "callan(u={u},o={o})"),
            FamilySpec::CallanFirst { u, o, r } => write!(f, "callan-first(u={u},o={o},r={r})"),
            FamilySpec::CallanUnderlinedFirst { u, o } => {
                write!(f, "callan-underlined-first(u={u},o={o})")
            }
            FamilySpec::WindowC { n, k } => write!(f, "window-c(n={n},k={k})"),
            FamilySpec::ExcedanceSet { n, k } => write!(f, "excedance-set(n={n},k={k})"),
        }
    }
}

/// Which acyclic orientations of `K_{n,k}` to count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AoMode {
    All,
    /// Exactly one sink, wherever it is.
    UniqueSinkAnywhere,
    /// Exactly one sink, and it is the first vertex of the `n`-side.
    UniqueSinkFixedVertex,
}

/// Counts acyclic orientations of `K_{n,k}` by trying all `2^{nk}` edge
/// orientations; `nk` may not exceed `cap`.
pub fn count_acyclic_orientations(n: usize, k: usize, mode: AoMode, cap: usize) -> Result<u64> {
    let edges = n * k;
    if edges > cap || edges >= 63 {
        return Err(Error::CapExceeded {
            what: "edge count",
            size: edges as u128,
            cap: cap.min(62) as u128,
        });
    }
    let v = n + k;
    Ok((0u64..1 << edges)
        .into_par_iter()
        .filter(|&bits| {
            let mut out_deg = vec![0usize; v];
            let mut in_deg = vec![0usize; v];
            let mut succ = vec![Vec::new(); v];
            for a in 0..n {
                for b in 0..k {
                    let e = a * k + b;
                    let (from, to) = if bits >> e & 1 == 1 { (a, n + b) } else { (n + b, a) };
                    succ[from].push(to);
                    out_deg[from] += 1;
                    in_deg[to] += 1;
                }
            }
            let mut stack: Vec<usize> = (0..v).filter(|&x| in_deg[x] == 0).collect();
            let mut seen = 0;
            while let Some(x) = stack.pop() {
                seen += 1;
                for &y in &succ[x] {
                    in_deg[y] -= 1;
                    if in_deg[y] == 0 {
                        stack.push(y);
                    }
                }
            }
            if seen != v {
                return false;
            }
            let mut sinks = (0..v).filter(|&x| out_deg[x] == 0);
            match mode {
                AoMode::All => true,
                AoMode::UniqueSinkAnywhere => sinks.next().is_some() && sinks.next().is_none(),
                AoMode::UniqueSinkFixedVertex => sinks.next() == Some(0) && sinks.next().is_none(),
            }
        })
        .count() as u64)
}

/// Whether `pi` in `S_n` arises by stabilizing some configuration of
/// `S(n-1, p)`: the first `n-p` entries are a permutation of `1..=n-p`.
pub fn is_p_resultant(pi: &Permutation, p: usize) -> bool {
    p >= 1 && p < pi.len() && pi.split_at(p).is_ok()
}

/// Whether `pi` can be reached from a lift with extra chip `r` at site `p`:
/// `pi` is a `p`-resultant and `r` is a left-to-right maximum of the left
/// part (when `r <= n-p`) or a right-to-left minimum of the right part.
pub fn validate_r_placement(pi: &Permutation, p: usize, r: usize) -> Result<bool> {
    let n = pi.len();
    Error::check_range("r", r, 1, n)?;
    if !is_p_resultant(pi, p) {
        return Ok(false);
    }
    let split = pi.split_at(p)?;
    Ok(if r <= n - p {
        split.left_records().contains(&r)
    } else {
        split.right_records().contains(&r)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn vesztergombi_examples() {
        let sigma = p("1,6,4,8,7,10,12,11,13,3,2,9,5,14,15");
        assert!(is_vesztergombi(&sigma, 9, 6).unwrap());
        assert!(is_vesztergombi(&Permutation::identity(4), 0, 4).unwrap());
        assert!(is_vesztergombi(&p("21"), 1, 1).unwrap());
        assert!(!is_vesztergombi(&p("21"), 0, 2).unwrap());
        assert!(is_vesztergombi(&p("123"), 1, 1).is_err());
        let fam = FamilySpec::Vesztergombi { k: 2, n: 2 };
        assert_eq!(fam.count(8).unwrap(), 14);
        assert_eq!(fam.enumerate(8).unwrap().count(), 14);
    }

    #[test]
    fn callan_examples() {
        assert!(is_callan(&p("4312"), 2, 2).unwrap());
        assert!(!is_callan(&p("3412"), 2, 2).unwrap());
        assert!(is_callan(&p("12"), 1, 1).is_ok());
        assert!(is_callan(&p("12"), 2, 1).is_err());
        let w = CallanWord::new(p("4312"), 2, 2).unwrap();
        assert_eq!(w.blocks().len(), 2);
        assert_eq!(w.to_string(), "4',3'|1,2");
        assert!(!w.starts_underlined());
        assert!(CallanWord::new(p("3412"), 2, 2).is_err());
        let list: Vec<String> = FamilySpec::Callan { u: 2, o: 2 }
            .enumerate(8)
            .unwrap()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(list.len(), 14);
        assert!(list.contains(&"4312".to_string()));
    }

    #[test]
    fn family_counts() {
        assert_eq!(FamilySpec::CallanFirst { u: 4, o: 2, r: 3 }.count(8).unwrap(), 22);
        assert_eq!(FamilySpec::WindowC { n: 2, k: 1 }.count(8).unwrap(), 3);
        assert_eq!(FamilySpec::ExcedanceSet { n: 2, k: 1 }.count(8).unwrap(), 3);
        assert_eq!(FamilySpec::CallanUnderlinedFirst { u: 2, o: 2 }.count(8).unwrap(), 7);
        assert!(FamilySpec::Callan { u: 5, o: 5 }.count(8).is_err());
    }

    #[test]
    fn excedance_examples() {
        assert!(excedance_set(&Permutation::identity(4)).is_empty());
        assert_eq!(excedance_set(&p("21")), vec![1]);
    }

    #[test]
    fn orientations() {
        assert_eq!(count_acyclic_orientations(1, 1, AoMode::All, 20).unwrap(), 2);
        assert_eq!(count_acyclic_orientations(2, 2, AoMode::All, 20).unwrap(), 14);
        assert_eq!(count_acyclic_orientations(2, 2, AoMode::UniqueSinkAnywhere, 20).unwrap(), 12);
        assert_eq!(count_acyclic_orientations(2, 2, AoMode::UniqueSinkFixedVertex, 20).unwrap(), 3);
        assert!(count_acyclic_orientations(5, 5, AoMode::All, 20).is_err());
    }

    #[test]
    fn resultant_validation() {
        assert!(is_p_resultant(&p("1243"), 2));
        assert!(!is_p_resultant(&p("2413"), 2));
        assert!(!is_p_resultant(&p("1243"), 4));
        assert!(validate_r_placement(&p("214365"), 2, 2).unwrap());
        assert!(!validate_r_placement(&p("214365"), 2, 1).unwrap());
        assert!(validate_r_placement(&p("214365"), 2, 5).unwrap());
        assert!(!validate_r_placement(&p("214365"), 2, 6).unwrap());
        assert!(validate_r_placement(&p("214365"), 2, 7).is_err());
    }
}
