use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest index served by [`fibonacci`] and [`lucas`].
pub const DEFAULT_SEQUENCE_CAP: u64 = 300;

/// `(F_k, F_{k+1})` by fast doubling.
fn fib_pair(k: u64) -> (BigUint, BigUint) {
    if k == 0 {
        return (BigUint::zero(), BigUint::one());
    }
    let (a, b) = fib_pair(k / 2);
    let c = &a * ((&b << 1u32) - &a);
    let d = &a * &a + &b * &b;
    if k.is_multiple_of(2) {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

pub fn fibonacci_capped(k: u64, cap: u64) -> Result<BigUint> {
    if k > cap {
        return Err(Error::CapExceeded { index: k, cap });
    }
    Ok(fib_pair(k).0)
}

/// `L_k = 2 F_{k+1} - F_k`.
pub fn lucas_capped(k: u64, cap: u64) -> Result<BigUint> {
    if k > cap {
        return Err(Error::CapExceeded { index: k, cap });
    }
    let (f, g) = fib_pair(k);
    Ok((g << 1u32) - f)
}

pub fn fibonacci(k: u64) -> Result<BigUint> {
    fibonacci_capped(k, DEFAULT_SEQUENCE_CAP)
}

pub fn lucas(k: u64) -> Result<BigUint> {
    lucas_capped(k, DEFAULT_SEQUENCE_CAP)
}
