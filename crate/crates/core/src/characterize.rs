//! Closed-form toppleability tests. None of these run the dynamics.

use crate::config::{lift, Configuration};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Whether `config` stabilizes to the sorted arrangement: every chip `i`
/// sits on a site `s` with `p+i-n-1 <= s <= p+i-1`. Both chips on the
/// doubled site count as being at `p`.
#[allow(clippy::int_plus_one)]
pub fn is_p_toppleable(config: &Configuration) -> bool {
    let n = config.n() as isize;
    let p = config.p() as isize;
    config
        .site_of()
        .iter()
        .enumerate()
        .skip(1)
        .all(|(i, &s)| {
            let (i, s) = (i as isize, s as isize);
            p + i - n - 1 <= s && s <= p + i - 1
        })
}

/// Whether `pi^(r,p)` is p-toppleable.
pub fn is_rp_toppleable(pi: &Permutation, r: usize, p: usize) -> Result<bool> {
    Ok(is_p_toppleable(lift(pi, r, p)?.config()))
}

/// Whether `pi^(r,p)` is toppleable for every `r` in `1..=n+1`, i.e.
/// `p+i-n <= pi^{-1}_i <= p+i-1` for all `i`.
#[allow(clippy::int_plus_one)]
pub fn is_all_r_toppleable(pi: &Permutation, p: usize) -> Result<bool> {
    let n = pi.len();
    Error::check_range("p", p, 1, n)?;
    let (n, p) = (n as isize, p as isize);
    Ok(pi.inverse().values().iter().enumerate().all(|(i, &pos)| {
        let (i, pos) = (i as isize + 1, pos as isize);
        p + i - n <= pos && pos <= p + i - 1
    }))
}
