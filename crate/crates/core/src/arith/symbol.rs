use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Jacobi symbol `(a|n)` for odd `n`.
pub fn jacobi_u64(a: u64, n: u64) -> i8 {
    debug_assert!(n & 1 == 1);
    jacobi_u128(a as u128, n as u128)
}

fn jacobi_u128(mut a: u128, mut n: u128) -> i8 {
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z & 1 == 1 && matches!(n & 7, 3 | 5) {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        if a & 3 == 3 && n & 3 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(a|n)` on machine integers.
pub fn kronecker_i128(a: i128, n: i128) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut t = 1i8;
    let mut n_abs = n.unsigned_abs();
    if n < 0 && a < 0 {
        t = -t;
    }
    let v = n_abs.trailing_zeros();
    if v > 0 {
        if a & 1 == 0 {
            return 0;
        }
        if v & 1 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            t = -t;
        }
        n_abs >>= v;
    }
    if n_abs == 1 {
        return t;
    }
    let a_mod = a.rem_euclid(n_abs as i128) as u128;
    t * jacobi_u128(a_mod, n_abs)
}

/// Kronecker symbol `(a|n)` on arbitrary-precision integers.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    if let (Some(a), Some(n)) = (a.to_i128(), n.to_i128()) {
        return kronecker_i128(a, n);
    }
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut t = 1i8;
    if n.is_negative() && a.is_negative() {
        t = -t;
    }
    let mut m = n.abs();
    let v = m.trailing_zeros().unwrap_or(0);
    if v > 0 {
        if a.is_even() {
            return 0;
        }
        let r = a.mod_floor(&BigInt::from(8)).to_u8().unwrap();
        if v & 1 == 1 && matches!(r, 3 | 5) {
            t = -t;
        }
        m >>= v;
    }
    // Jacobi symbol on big odd modulus.
    let mut x = a.mod_floor(&m);
    let mut y = m;
    while !x.is_zero() {
        let z = x.trailing_zeros().unwrap_or(0);
        x >>= z;
        let y8 = (&y % 8u32).to_u8().unwrap();
        if z & 1 == 1 && matches!(y8, 3 | 5) {
            t = -t;
        }
        std::mem::swap(&mut x, &mut y);
        if (&x % 4u32).to_u8() == Some(3) && (&y % 4u32).to_u8() == Some(3) {
            t = -t;
        }
        x = x.mod_floor(&y);
    }
    if y.is_one() {
        t
    } else {
        0
    }
}
