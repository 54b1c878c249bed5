//! Stirling numbers, poly-Bernoulli numbers of types B and C, the forward
//! difference and binomial transform, and the closed-form counts built on
//! them.
//!
//! Orientation follows the standard tables: `B(0,k) = B(n,0) = 1`,
//! `C(n,0) = 1`, `C(0,k) = 0` for `k >= 1`, with `B(n,k) = B(k,n)` and
//! `C(n+1,k) = C(k+1,n)`.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::families::validate_r_placement;
use crate::perm::Permutation;
use crate::scalar::{binomial, factorial, pow, sign, Count};

/// How to evaluate `B(n,k)` or `C(n,k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Sum of `(m!)^2` times a product of Stirling numbers of the second kind.
    Closed,
    /// Alternating sum over surjections.
    InclusionExclusion,
    /// Column-by-column recurrence from the `k = 0` column.
    Recurrence,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Closed, Method::InclusionExclusion, Method::Recurrence];
}

/// Formula for the number of `(r,p)`-toppleable permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToppleCountMethod {
    /// Iterated forward difference of a type-B column.
    Delta,
    /// Binomially weighted sum of type-C numbers.
    CSum,
}

/// Formula for `N_pi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NPiMethod {
    Delta,
    /// The type-C shortcut, valid only when `r` is `n-p` or `n-p+1`.
    TypeC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    B,
    C,
}

/// Memoized poly-Bernoulli and Stirling values over any [`Count`] type.
///
/// Safe to share between threads; lookups take a read lock and misses
/// compute outside any lock before inserting.
#[derive(Debug, Default)]
pub struct PolyBernoulliTable<T> {
    memo: RwLock<HashMap<(Kind, usize, usize), T>>,
    stirling2_rows: RwLock<Vec<Vec<T>>>,
    stirling1_rows: RwLock<Vec<Vec<T>>>,
    cross_check: bool,
}

impl<T: Count> PolyBernoulliTable<T> {
    pub fn new() -> Self {
        PolyBernoulliTable {
            memo: RwLock::new(HashMap::new()),
            stirling2_rows: RwLock::new(Vec::new()),
            stirling1_rows: RwLock::new(Vec::new()),
            cross_check: false,
        }
    }

    /// A table that evaluates all three methods the first time each `B` or
    /// `C` entry is requested and panics if they disagree.
    pub fn with_cross_check() -> Self {
        PolyBernoulliTable {
            cross_check: true,
            ..Self::new()
        }
    }

    /// Stirling number of the second kind `S(n, m)`.
    pub fn stirling2(&self, n: usize, m: usize) -> T {
        triangle_entry(&self.stirling2_rows, n, m, |prev, _, j| {
            T::from_usize_exact(j) * prev[j].clone() + prev[j - 1].clone()
        })
    }

    /// Unsigned Stirling number of the first kind.
    pub fn stirling1(&self, n: usize, k: usize) -> T {
        triangle_entry(&self.stirling1_rows, n, k, |prev, row, j| {
            T::from_usize_exact(row - 1) * prev[j].clone() + prev[j - 1].clone()
        })
    }

    pub fn b(&self, n: usize, k: usize) -> T {
        self.memoized(Kind::B, n, k)
    }

    pub fn c(&self, n: usize, k: usize) -> T {
        self.memoized(Kind::C, n, k)
    }

    fn memoized(&self, kind: Kind, n: usize, k: usize) -> T {
        if let Some(v) = self.memo.read().unwrap().get(&(kind, n, k)) {
            return v.clone();
        }
        let eval = |m| match kind {
            Kind::B => self.b_with(n, k, m),
            Kind::C => self.c_with(n, k, m),
        };
        let v = eval(Method::Closed);
        if self.cross_check {
            for m in [Method::InclusionExclusion, Method::Recurrence] {
                let w = eval(m);
                assert_eq!(v, w, "{kind:?}({n},{k}): closed form {v} but {m:?} gives {w}");
            }
        }
        self.memo.write().unwrap().insert((kind, n, k), v.clone());
        v
    }

    /// `B(n,k)` by the named method, bypassing the memo.
    pub fn b_with(&self, n: usize, k: usize, method: Method) -> T {
        match method {
            Method::Closed => (0..=n.min(k))
                .map(|m| {
                    let f: T = factorial(m);
                    f.clone() * f * self.stirling2(n + 1, m + 1) * self.stirling2(k + 1, m + 1)
                })
                .fold(T::zero(), |a, b| a + b),
            Method::InclusionExclusion => (0..=n)
                .map(|m| {
                    sign::<T>((n - m) % 2 == 1)
                        * factorial::<T>(m)
                        * self.stirling2(n, m)
                        * pow::<T>(m + 1, k)
                })
                .fold(T::zero(), |a, b| a + b),
            Method::Recurrence => {
                // col[i] = B(i, current column)
                let mut col = vec![T::one(); n + 1];
                for _ in 0..k {
                    col = (0..=n)
                        .map(|i| {
                            (1..=i).fold(col[i].clone(), |acc, m| {
                                acc + binomial::<T>(i, m) * col[i - m + 1].clone()
                            })
                        })
                        .collect();
                }
                col[n].clone()
            }
        }
    }

    /// `C(n,k)` by the named method, bypassing the memo.
    pub fn c_with(&self, n: usize, k: usize, method: Method) -> T {
        match method {
            Method::Closed => (0..=n.min(k))
                .map(|m| {
                    let f: T = factorial(m);
                    f.clone() * f * self.stirling2(n + 1, m + 1) * self.stirling2(k, m)
                })
                .fold(T::zero(), |a, b| a + b),
            // Alternating sum over the second index; summing over the first
            // index instead yields the transposed array C(k,n).
            Method::InclusionExclusion => (0..=k)
                .map(|m| {
                    sign::<T>((k + m) % 2 == 1)
                        * factorial::<T>(m)
                        * pow::<T>(m + 1, n)
                        * self.stirling2(k + 1, m + 1)
                })
                .fold(T::zero(), |a, b| a + b),
            Method::Recurrence => {
                let mut col = vec![T::one(); n + 1];
                for _ in 0..k {
                    col = (0..=n)
                        .map(|i| {
                            (1..=i).fold(T::zero(), |acc, m| {
                                acc + binomial::<T>(i, m) * col[i - m + 1].clone()
                            })
                        })
                        .collect();
                }
                col[n].clone()
            }
        }
    }

    /// `Δ^order` of `i -> B(i, k)` at `base`.
    pub fn delta_b(&self, order: usize, base: usize, k: usize) -> T {
        forward_difference(|i| self.b(i, k), order, base)
    }

    /// Number of p-toppleable configurations in `S(n,p)`: `B(n-p+1, p) / 2`.
    pub fn count_toppleable_configs(&self, n: usize, p: usize) -> Result<T> {
        Error::check_range("p", p, 1, n)?;
        half(self.b(n - p + 1, p), || format!("B({},{})", n - p + 1, p))
    }

    /// `|T_n^(r,p)|`, the number of `(r,p)`-toppleable permutations of `S_n`.
    pub fn count_rp_toppleable(&self, n: usize, p: usize, r: usize, method: ToppleCountMethod) -> Result<T> {
        Error::check_range("p", p, 1, n)?;
        Error::check_range("r", r, 1, n + 1)?;
        let m = n - p + 1;
        match method {
            ToppleCountMethod::Delta => {
                if r <= m {
                    Ok(self.delta_b(r - 1, m - r, p))
                } else {
                    // reflect to (p', r') = (n+1-p, n+2-r), where r' <= n-p'+1
                    let (p2, r2) = (n + 1 - p, n + 2 - r);
                    Ok(self.delta_b(r2 - 1, n - p2 + 1 - r2, p2))
                }
            }
            ToppleCountMethod::CSum => {
                if r <= m {
                    let top = m - r;
                    Ok((0..=top)
                        .map(|i| binomial::<T>(top, i) * self.c(p, n - p - i))
                        .fold(T::zero(), |a, b| a + b))
                } else {
                    let top = r - m - 1;
                    Ok((0..=top)
                        .map(|i| binomial::<T>(top, i) * self.c(m, p - i - 1))
                        .fold(T::zero(), |a, b| a + b))
                }
            }
        }
    }

    /// Permutations of `S_n` that are `(r,p)`-toppleable for every `r`:
    /// `C(p, n-p)`.
    pub fn count_all_r_toppleable(&self, n: usize, p: usize) -> Result<T> {
        Error::check_range("p", p, 1, n)?;
        Ok(self.c(p, n - p))
    }

    /// Configurations toppling to one resultant permutation with `i` left
    /// records and `j` right records: `B(i,j) / 2`.
    pub fn count_resultant_class(&self, i: usize, j: usize) -> Result<T> {
        if i == 0 || j == 0 {
            return Err(Error::Precondition("class indices start at 1".into()));
        }
        half(self.b(i, j), || format!("B({i},{j})"))
    }

    /// `N_pi(r,p)`: permutations `sigma` of `S_{n-1}` whose lift
    /// `sigma^(r,p)` topples to `pi`, where `n = |pi|`.
    pub fn count_n_pi(&self, pi: &Permutation, r: usize, p: usize, method: NPiMethod) -> Result<T> {
        let n = pi.len();
        if n < 2 {
            return Err(Error::Precondition("a resultant has at least two entries".into()));
        }
        Error::check_range("p", p, 1, n - 1)?;
        Error::check_range("r", r, 1, n)?;
        if !validate_r_placement(pi, p, r)? {
            return Err(Error::Precondition(format!(
                "{pi} is not reachable with chip {r} added at site {p}"
            )));
        }
        if r > n - p {
            return self.count_n_pi(&pi.reverse_complement(), n + 1 - r, n - p, method);
        }
        let split = pi.split_at(p)?;
        let lefts = split.left_records();
        let k = split.right_records().len();
        let below = lefts.iter().filter(|&&v| v < r).count();
        let above = lefts.iter().filter(|&&v| v > r).count();
        match method {
            NPiMethod::Delta => Ok(self.delta_b(below, above, k)),
            NPiMethod::TypeC => {
                if r != n - p {
                    return Err(Error::Precondition(format!(
                        "type-C shortcut needs r = n-p or n-p+1, got r = {r}, n-p = {}",
                        n - p
                    )));
                }
                Ok(self.c(k, lefts.len() - 1))
            }
        }
    }
}

fn half<T: Count>(v: T, what: impl FnOnce() -> String) -> Result<T> {
    let (q, r) = v.div_rem(&(T::one() + T::one()));
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::InexactDivision(format!("{} = {v} is odd", what())))
    }
}

/// Row-wise triangle `a(row, j)` with `a(0,0) = 1`, `a(row,0) = 0` for
/// `row > 0`, zero above the diagonal; `next` computes `a(row, j)` for
/// `1 <= j <= row` from the previous row.
fn triangle_entry<T: Count>(
    rows: &RwLock<Vec<Vec<T>>>,
    n: usize,
    m: usize,
    next: impl Fn(&[T], usize, usize) -> T,
) -> T {
    if m > n {
        return T::zero();
    }
    if let Some(row) = rows.read().unwrap().get(n) {
        return row[m].clone();
    }
    let mut rows = rows.write().unwrap();
    while rows.len() <= n {
        let row_idx = rows.len();
        let row = if row_idx == 0 {
            vec![T::one()]
        } else {
            // pad the previous row so prev[row_idx] reads as zero
            let mut prev = rows[row_idx - 1].clone();
            prev.push(T::zero());
            let mut row = vec![T::zero(); row_idx + 1];
            for j in 1..=row_idx {
                row[j] = next(&prev, row_idx, j);
            }
            row
        };
        rows.push(row);
    }
    rows[n][m].clone()
}

/// `Δ^order f` at `base`: `sum_j (-1)^(order-j) binom(order,j) f(base+j)`.
pub fn forward_difference<T: Count>(f: impl Fn(usize) -> T, order: usize, base: usize) -> T {
    (0..=order)
        .map(|j| sign::<T>((order - j) % 2 == 1) * binomial::<T>(order, j) * f(base + j))
        .fold(T::zero(), |a, b| a + b)
}

/// `b_n = sum_k (-1)^k binom(n,k) a_k` for every `n` covered by `a`.
pub fn binomial_transform<T: Count>(a: &[T]) -> Vec<T> {
    (0..a.len())
        .map(|n| {
            (0..=n)
                .map(|k| sign::<T>(k % 2 == 1) * binomial::<T>(n, k) * a[k].clone())
                .fold(T::zero(), |x, y| x + y)
        })
        .collect()
}
