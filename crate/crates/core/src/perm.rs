//! Permutations in one-line notation and their record statistics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection on `{1..n}` in one-line notation, `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

/// Which record statistic to read off a permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `pi_j = max(pi_1..pi_j)`
    LeftMax,
    /// `pi_j = min(pi_j..pi_n)`
    RightMin,
}

/// A record as a 1-based position and the value found there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Record {
    pub position: usize,
    pub value: usize,
}

/// Records in increasing position order. For both directions the values
/// increase along the list as well.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RecordList(Vec<Record>);

impl RecordList {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Record] {
        &self.0
    }

    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|r| r.value)
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|r| r.position)
    }

    pub fn contains_value(&self, value: usize) -> bool {
        self.0.iter().any(|r| r.value == value)
    }
}

impl Permutation {
    /// Validates `values` as a permutation of `1..=values.len()`.
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::EmptyPermutation);
        }
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n {
                return Err(Error::ValueOutOfRange { value: v, n });
            }
            if seen[v] {
                return Err(Error::DuplicateValue(v));
            }
            seen[v] = true;
        }
        Ok(Permutation(values))
    }

    /// Caller guarantees the bijection invariant.
    pub(crate) fn from_vec_unchecked(values: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation(values)
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "identity of S_0");
        Permutation((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for the `len`/`is_empty` pairing lint.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation(inv)
    }

    pub fn records(&self, direction: Direction) -> RecordList {
        let mut out = Vec::new();
        match direction {
            Direction::LeftMax => {
                let mut best = 0;
                for (i, &v) in self.0.iter().enumerate() {
                    if v > best {
                        best = v;
                        out.push(Record {
                            position: i + 1,
                            value: v,
                        });
                    }
                }
            }
            Direction::RightMin => {
                let mut best = usize::MAX;
                for (i, &v) in self.0.iter().enumerate().rev() {
                    if v < best {
                        best = v;
                        out.push(Record {
                            position: i + 1,
                            value: v,
                        });
                    }
                }
                out.reverse();
            }
        }
        RecordList(out)
    }

    /// Splits off the last `p` entries. Succeeds iff the first `n - p`
    /// entries form a permutation of `1..=n-p`; the right part keeps its
    /// original values `n-p+1..=n`.
    pub fn split_at(&self, p: usize) -> Result<Split> {
        let n = self.len();
        Error::check_range("p", p, 1, n)?;
        let cut = n - p;
        if self.0[..cut].iter().any(|&v| v > cut) {
            return Err(Error::NotDecomposable(cut));
        }
        Ok(Split {
            left: self.0[..cut].to_vec(),
            right: self.0[cut..].to_vec(),
        })
    }

    /// Reverse-complement in `S_n`: position reversal and `v -> n+1-v`.
    pub fn reverse_complement(&self) -> Permutation {
        let n = self.len();
        Permutation(self.0.iter().rev().map(|&v| n + 1 - v).collect())
    }

    /// Concatenation `self ⊕ other`, shifting `other` up by `self.len()`.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let shift = self.len();
        let mut v = self.0.clone();
        v.extend(other.0.iter().map(|&x| x + shift));
        Permutation(v)
    }

    /// Positions `i` with `pi_i > i`.
    pub fn excedances(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|&(i, &v)| v > i + 1)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// The two halves of a decomposable permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    /// A permutation of `1..=n-p` (empty when `p == n`).
    pub left: Vec<usize>,
    /// Values `n-p+1..=n` in their original order.
    pub right: Vec<usize>,
}

impl Split {
    pub fn left_records(&self) -> Vec<usize> {
        let mut best = 0;
        self.left
            .iter()
            .copied()
            .filter(|&v| {
                let rec = v > best;
                best = best.max(v);
                rec
            })
            .collect()
    }

    pub fn right_records(&self) -> Vec<usize> {
        let mut best = usize::MAX;
        let mut out: Vec<usize> = self
            .right
            .iter()
            .rev()
            .copied()
            .filter(|&v| {
                let rec = v < best;
                best = best.min(v);
                rec
            })
            .collect();
        out.reverse();
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(values: Vec<usize>) -> Result<Self> {
        Permutation::new(values)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    /// Contiguous digits for `n <= 9`, comma separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.len() <= 9 { "" } else { "," };
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let values = parse_values(s)?;
        Permutation::new(values).map_err(|e| Error::parse(s, e.to_string()))
    }
}

/// Comma-separated integers, or a run of single digits.
pub(crate) fn parse_values(s: &str) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(Error::parse(s, "empty"));
    }
    if s.contains(',') {
        s.split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<usize>()
                    .map_err(|_| Error::parse(tok, "expected a positive integer"))
            })
            .collect()
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::parse(c.to_string(), "expected a digit"))
            })
            .collect()
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Lazy lexicographic iterator over `S_n`, optionally restricted to a rank
/// range so that enumeration can be chunked across workers.
#[derive(Debug, Clone)]
pub struct Permutations {
    current: Option<Vec<usize>>,
    remaining: u128,
}

impl Permutations {
    pub fn new(n: usize) -> Self {
        Self::range(n, 0, factorial(n))
    }

    /// Permutations with lexicographic rank in `start..end`.
    pub fn range(n: usize, start: u128, end: u128) -> Self {
        let total = factorial(n);
        let end = end.min(total);
        if n == 0 || start >= end {
            return Permutations {
                current: None,
                remaining: 0,
            };
        }
        Permutations {
            current: Some(unrank(n, start)),
            remaining: end - start,
        }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.remaining == 0 {
            return None;
        }
        let cur = self.current.take()?;
        self.remaining -= 1;
        if self.remaining > 0 {
            let mut next = cur.clone();
            if next_permutation(&mut next) {
                self.current = Some(next);
            } else {
                self.remaining = 0;
            }
        }
        Some(Permutation(cur))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, usize::try_from(self.remaining).ok())
    }
}

/// Contiguous lexicographic rank ranges covering `S_n`, a few per worker.
pub fn rank_chunks(n: usize) -> Vec<(u128, u128)> {
    let total = factorial(n);
    let want = (rayon::current_num_threads() as u128 * 4).max(1);
    let step = total.div_ceil(want).max(1);
    (0..total)
        .step_by(step as usize)
        .map(|s| (s, (s + step).min(total)))
        .collect()
}

/// Folds every permutation of `S_n` in parallel; `fold` runs once per rank
/// range from a fresh `init()` and the partial results are merged with
/// `merge` in rank order, so the outcome does not depend on scheduling.
pub fn par_fold<A, I, F, M>(n: usize, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(A, Permutation) -> A + Sync,
    M: Fn(A, A) -> A,
{
    use rayon::prelude::*;
    let parts: Vec<A> = rank_chunks(n)
        .into_par_iter()
        .map(|(s, e)| Permutations::range(n, s, e).fold(init(), &fold))
        .collect();
    parts.into_iter().fold(init(), merge)
}

pub fn par_count(n: usize, pred: impl Fn(&Permutation) -> bool + Sync) -> u128 {
    par_fold(n, || 0u128, |acc, pi| acc + pred(&pi) as u128, |a, b| a + b)
}

/// In-place lexicographic successor; false when `v` was the last one.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The permutation of `1..=n` with lexicographic rank `rank` (0-based).
pub fn unrank(n: usize, mut rank: u128) -> Vec<usize> {
    let mut pool: Vec<usize> = (1..=n).collect();
    let mut out = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let f = factorial(k);
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(idx));
    }
    out
}

/// Lexicographic rank of a permutation of `1..=n`.
pub fn rank(values: &[usize]) -> u128 {
    let n = values.len();
    let mut r = 0u128;
    for i in 0..n {
        let smaller = values[i + 1..].iter().filter(|&&v| v < values[i]).count();
        r += smaller as u128 * factorial(n - 1 - i);
    }
    r
}
