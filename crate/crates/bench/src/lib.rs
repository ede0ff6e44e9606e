//! Fixed inputs shared by the benchmarks.

use num_bigint::BigUint;
use quadclass_core::{Discriminant, QuadForm};

/// Discriminants spanning several orders of magnitude.
pub const DISCRIMINANTS: [i128; 4] = [-212, -595_507, -1_102_867_934_788, -107_341_753_212_499];

pub fn discriminant(value: i128) -> Discriminant {
    Discriminant::new(value).expect("fixture discriminant is valid")
}

/// Two non-identity classes of `D = -1102867934788`.
pub fn form_pair() -> (QuadForm, QuadForm) {
    let disc = discriminant(DISCRIMINANTS[2]);
    let mut split = quadclass_core::arith::primes_up_to(1000)
        .into_iter()
        .filter_map(|ell| quadclass_core::qform::prime_form(&disc, ell));
    let f = split.next().expect("a split prime below 1000");
    let g = split.next().expect("two split primes below 1000");
    (f, g)
}

/// `(2^61 - 1)(2^31 - 1)`, a semiprime that needs rho past trial division.
pub fn semiprime() -> BigUint {
    BigUint::from((1u64 << 61) - 1) * BigUint::from((1u64 << 31) - 1)
}
