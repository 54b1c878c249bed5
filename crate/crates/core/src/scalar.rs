use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

/// Exact signed integer arithmetic used by the counting kernel.
///
/// Implemented for `i64`, `i128` and `BigInt`. The machine types overflow
/// (and panic in debug builds) once values outgrow them; `BigInt` is the
/// default everywhere sizes are not known to be small.
pub trait Count:
    Integer + Signed + FromPrimitive + Clone + Debug + Display + Hash + Send + Sync + 'static
{
    fn from_usize_exact(v: usize) -> Self {
        Self::from_usize(v).expect("usize fits the count type")
    }

    fn from_u128_exact(v: u128) -> Self {
        Self::from_u128(v).expect("u128 fits the count type")
    }
}

impl<T> Count for T where
    T: Integer + Signed + FromPrimitive + Clone + Debug + Display + Hash + Send + Sync + 'static
{
}

/// `binom(n, k)`, zero for `k > n`.
pub fn binomial<T: Count>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1)
        acc = acc * T::from_usize_exact(n - i) / T::from_usize_exact(i + 1);
    }
    acc
}

pub fn factorial<T: Count>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, i| acc * T::from_usize_exact(i))
}

pub fn pow<T: Count>(base: usize, exp: usize) -> T {
    num_traits::pow(T::from_usize_exact(base), exp)
}

#[inline]
pub(crate) fn sign<T: Count>(odd: bool) -> T {
    if odd {
        -T::one()
    } else {
        T::one()
    }
}
