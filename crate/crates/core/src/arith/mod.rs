//! Arbitrary-precision integer number theory used by the rest of the crate.
//!
//! Hot paths (class-number enumeration, form composition) work on machine
//! integers; the `BigUint`/`BigInt` entry points dispatch to them whenever the
//! operands fit.

mod factor;
pub(crate) mod modsqrt;
mod prime;
mod seq;
mod symbol;

pub use factor::{factor, factor_u64, squarefree_part_signed, FactorBudget, Factorization};
pub use modsqrt::{sqrt_mod, sqrt_mod_prime_power_u64, sqrt_mod_u64};
pub use prime::{is_prime, is_prime_u64, primes_up_to, MR_DETERMINISTIC_LIMIT};
pub use seq::{fibonacci, fibonacci_capped, lucas, lucas_capped, DEFAULT_SEQUENCE_CAP};
pub use symbol::{jacobi_u64, kronecker, kronecker_i128};

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Floor square root.
pub fn isqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Returns the root when `n` is a perfect square; negative inputs are never squares.
pub fn is_perfect_square(n: &BigInt) -> Option<BigUint> {
    if n.is_negative() {
        return None;
    }
    let m = n.magnitude();
    // Squares mod 64 occupy 12 residues; reject the rest before the root.
    let low = m.iter_u64_digits().next().unwrap_or(0) & 63;
    if (0x0202_0212_0203_0213u64 >> low) & 1 == 0 {
        return None;
    }
    let r = m.sqrt();
    (&r * &r == *m).then_some(r)
}

pub fn is_perfect_square_u128(n: u128) -> Option<u128> {
    let r = isqrt_u128(n);
    (r * r == n).then_some(r)
}
