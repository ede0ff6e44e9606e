use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::factor::{factor, factor_u64, FactorBudget};
use super::symbol::{jacobi_u64, kronecker};
use super::{mul_mod, pow_mod};
use crate::error::Result;

/// Square root of a quadratic residue `n` modulo an odd prime `p` (Tonelli-Shanks).
pub(crate) fn sqrt_mod_prime_u64(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(n);
    }
    if jacobi_u64(n, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(n, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..p).find(|&z| jacobi_u64(z, p) == -1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(n, q, p);
    let mut r = pow_mod(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Roots of `y^2 = n (mod p^f)` for `n` coprime to `p`.
fn unit_roots_u64(n: u64, p: u64, f: u32) -> Vec<u64> {
    let pf = p.pow(f);
    if p == 2 {
        return match f {
            1 => vec![1],
            2 if n % 4 == 1 => vec![1, 3],
            2 => vec![],
            _ if n % 8 != 1 => vec![],
            _ => {
                let mut r = 1u64;
                for i in 3..f {
                    let modulus = 1u128 << (i + 1);
                    if !(r as u128 * r as u128 + modulus - (n as u128 % modulus)).is_multiple_of(modulus) {
                        r += 1 << (i - 1);
                    }
                }
                let half = pf / 2;
                let mut out = vec![r, pf - r, (r + half) % pf, (pf - r + half) % pf];
                out.sort_unstable();
                out.dedup();
                out
            }
        };
    }
    let Some(mut r) = sqrt_mod_prime_u64(n % p, p) else {
        return vec![];
    };
    // Hensel lifting one power at a time.
    let mut modulus = p;
    for _ in 1..f {
        modulus *= p;
        let nm = n % modulus;
        let r2 = mul_mod(r, r, modulus);
        let diff = (r2 + modulus - nm) % modulus;
        let inv = mod_inverse_u64(mul_mod(2, r, modulus), modulus).expect("2r is a unit");
        r = (r + modulus - mul_mod(diff, inv, modulus)) % modulus;
    }
    if r == 0 {
        return vec![0];
    }
    let mut out = vec![r, pf - r];
    out.sort_unstable();
    out.dedup();
    out
}

/// All `x` in `[0, p^k)` with `x^2 = a (mod p^k)`, unsorted.
pub fn sqrt_mod_prime_power_u64(a: i128, p: u64, k: u32) -> Vec<u64> {
    let pk = p.pow(k);
    let n = a.rem_euclid(pk as i128) as u64;
    if n == 0 {
        let step = p.pow(k.div_ceil(2));
        return (0..p.pow(k / 2)).map(|t| t * step).collect();
    }
    let mut v = 0;
    let mut unit = n;
    while unit.is_multiple_of(p) {
        unit /= p;
        v += 1;
    }
    if v % 2 == 1 {
        return vec![];
    }
    let f = k - v;
    let h = v / 2;
    let pf = p.pow(f);
    let ph = p.pow(h);
    let mut out = Vec::new();
    for y0 in unit_roots_u64(unit, p, f) {
        for t in 0..ph {
            out.push(ph * (y0 + t * pf));
        }
    }
    out
}

fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// Combine root sets modulo coprime moduli by the Chinese remainder theorem.
pub(crate) fn crt_combine_u64(acc: &[u64], acc_mod: u64, roots: &[u64], modulus: u64) -> Vec<u64> {
    let inv = mod_inverse_u64(acc_mod % modulus, modulus).expect("coprime moduli");
    let total = acc_mod as u128 * modulus as u128;
    let mut out = Vec::with_capacity(acc.len() * roots.len());
    for &r1 in acc {
        for &r2 in roots {
            let delta = (r2 as i128 - r1 as i128).rem_euclid(modulus as i128) as u64;
            let t = mul_mod(delta, inv, modulus);
            out.push(((r1 as u128 + acc_mod as u128 * t as u128) % total) as u64);
        }
    }
    out
}

/// Roots of `x^2 = a` modulo the number whose factorization is given.
pub(crate) fn sqrt_mod_factored_u64(a: i128, factors: &[(u64, u32)]) -> Vec<u64> {
    let mut acc = vec![0u64];
    let mut acc_mod = 1u64;
    for &(p, k) in factors {
        let roots = sqrt_mod_prime_power_u64(a, p, k);
        if roots.is_empty() {
            return roots;
        }
        let pk = p.pow(k);
        acc = crt_combine_u64(&acc, acc_mod, &roots, pk);
        acc_mod *= pk;
    }
    acc
}

/// Sorted roots of `x^2 = a (mod m)` in `[0, m)`.
pub fn sqrt_mod_u64(a: i128, m: u64, budget: &FactorBudget) -> Result<Vec<u64>> {
    let mut out = sqrt_mod_factored_u64(a, &factor_u64(m, budget)?);
    if m == 1 {
        out = vec![0];
    }
    out.sort_unstable();
    Ok(out)
}

fn sqrt_mod_prime_big(n: &BigUint, p: &BigUint) -> Option<BigUint> {
    let n = n % p;
    if n.is_zero() {
        return Some(n);
    }
    if kronecker(&BigInt::from(n.clone()), &BigInt::from(p.clone())) != 1 {
        return None;
    }
    let one = BigUint::one();
    let p_minus_1 = p - 1u32;
    let s = p_minus_1.trailing_zeros().unwrap_or(0);
    let q = &p_minus_1 >> s;
    let mut z = BigUint::from(2u32);
    while kronecker(&BigInt::from(z.clone()), &BigInt::from(p.clone())) != -1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = n.modpow(&q, p);
    let mut r = n.modpow(&((&q + 1u32) >> 1u32), p);
    while t != one {
        let mut i = 0;
        let mut t2 = t.clone();
        while t2 != one {
            t2 = &t2 * &t2 % p;
            i += 1;
        }
        let b = c.modpow(&(BigUint::one() << (m - i - 1)), p);
        m = i;
        c = &b * &b % p;
        t = t * &c % p;
        r = r * &b % p;
    }
    Some(r)
}

fn unit_roots_big(n: &BigUint, p: &BigUint, f: u32) -> Vec<BigUint> {
    let pf = p.pow(f);
    if *p == BigUint::from(2u32) {
        let n8 = (n % 8u32).to_u8().unwrap();
        return match f {
            1 => vec![BigUint::one()],
            2 if n8 % 4 == 1 => vec![BigUint::one(), BigUint::from(3u32)],
            2 => vec![],
            _ if n8 != 1 => vec![],
            _ => {
                let mut r = BigUint::one();
                for i in 3..f {
                    let modulus = BigUint::one() << (i + 1);
                    if (&r * &r) % &modulus != n % &modulus {
                        r += BigUint::one() << (i - 1);
                    }
                }
                let half = &pf >> 1u32;
                let mut out = vec![
                    r.clone(),
                    &pf - &r,
                    (&r + &half) % &pf,
                    (&pf - &r + &half) % &pf,
                ];
                out.sort();
                out.dedup();
                out
            }
        };
    }
    let Some(mut r) = sqrt_mod_prime_big(n, p) else {
        return vec![];
    };
    let mut modulus = p.clone();
    for _ in 1..f {
        modulus *= p;
        let diff = (&r * &r + &modulus - n % &modulus) % &modulus;
        let two_r = BigInt::from((&r << 1u32) % &modulus);
        let inv = two_r
            .extended_gcd(&BigInt::from(modulus.clone()))
            .x
            .mod_floor(&BigInt::from(modulus.clone()))
            .to_biguint()
            .unwrap();
        r = (&r + &modulus - diff * inv % &modulus) % &modulus;
    }
    if r.is_zero() {
        return vec![r];
    }
    let mut out = vec![&pf - &r, r];
    out.sort();
    out.dedup();
    out
}

fn sqrt_mod_prime_power_big(a: &BigInt, p: &BigUint, k: u32) -> Vec<BigUint> {
    let pk = p.pow(k);
    let n = a.mod_floor(&BigInt::from(pk.clone())).to_biguint().unwrap();
    if n.is_zero() {
        let step = p.pow(k.div_ceil(2));
        let count = p.pow(k / 2).to_u64().expect("root count fits in memory");
        return (0..count).map(|t| &step * t).collect();
    }
    let mut v = 0;
    let mut unit = n;
    while (&unit % p).is_zero() {
        unit /= p;
        v += 1;
    }
    if v % 2 == 1 {
        return vec![];
    }
    let pf = p.pow(k - v);
    let ph = p.pow(v / 2);
    let count = ph.to_u64().expect("root count fits in memory");
    let mut out = Vec::new();
    for y0 in unit_roots_big(&unit, p, k - v) {
        for t in 0..count {
            out.push(&ph * (&y0 + &pf * t));
        }
    }
    out
}

/// Sorted roots of `x^2 = a (mod m)` in `[0, m)` for any positive modulus.
pub fn sqrt_mod(a: &BigInt, m: &BigUint, budget: &FactorBudget) -> Result<Vec<BigUint>> {
    if m.is_zero() {
        return Err(crate::Error::InvalidInput("modulus must be positive".into()));
    }
    if let Some(small) = m.to_u64() {
        let a_red = a.mod_floor(&BigInt::from(small)).to_i128().unwrap();
        return Ok(sqrt_mod_u64(a_red, small, budget)?
            .into_iter()
            .map(BigUint::from)
            .collect());
    }
    let f = factor(m, budget)?;
    let mut acc = vec![BigUint::zero()];
    let mut acc_mod = BigUint::one();
    for (p, k) in f.factors() {
        let roots = sqrt_mod_prime_power_big(a, p, *k);
        if roots.is_empty() {
            return Ok(roots);
        }
        let pk = p.pow(*k);
        let inv = BigInt::from(&acc_mod % &pk)
            .extended_gcd(&BigInt::from(pk.clone()))
            .x
            .mod_floor(&BigInt::from(pk.clone()))
            .to_biguint()
            .unwrap();
        let mut next = Vec::with_capacity(acc.len() * roots.len());
        for r1 in &acc {
            for r2 in &roots {
                let delta = (r2 + &pk - (r1 % &pk)) % &pk;
                next.push(r1 + &acc_mod * (delta * &inv % &pk));
            }
        }
        acc = next;
        acc_mod *= &pk;
    }
    acc.sort();
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exhaustive(a: i64, m: u64) -> Vec<u64> {
        (0..m)
            .filter(|&x| ((x as i128 * x as i128) - a as i128).rem_euclid(m as i128) == 0)
            .collect()
    }

    #[test]
    fn examples() {
        let b = FactorBudget::default();
        assert_eq!(sqrt_mod_u64(4, 24, &b).unwrap(), vec![2, 10, 14, 22]);
        assert_eq!(exhaustive(4, 24), vec![2, 10, 14, 22]);
        assert_eq!(sqrt_mod_u64(0, 4, &b).unwrap(), vec![0, 2]);
        assert_eq!(sqrt_mod_u64(3, 5, &b).unwrap(), Vec::<u64>::new());
        assert_eq!(sqrt_mod_u64(-212, 24, &b).unwrap(), vec![2, 10, 14, 22]);
        assert_eq!(sqrt_mod_u64(7, 1, &b).unwrap(), vec![0]);
    }

    #[test]
    fn agrees_with_exhaustive_scan() {
        let b = FactorBudget::default();
        for m in 1..=10_000u64 {
            for a in [0i64, 1, -1, 2, -3, -4, 4, -23, -212, 17, 9 * 25, -(m as i64) * 3, 64] {
                assert_eq!(sqrt_mod_u64(a as i128, m, &b).unwrap(), exhaustive(a, m), "a={a} m={m}");
            }
        }
    }

    #[test]
    fn tonelli_on_p_1_mod_8() {
        // 1 mod 2^k primes exercise the full Tonelli-Shanks loop.
        for p in [17u64, 97, 257, 65537, 998_244_353] {
            for n in 1..200u64 {
                if let Some(r) = sqrt_mod_prime_u64(n, p) {
                    assert_eq!(mul_mod(r, r, p), n % p);
                } else {
                    assert_eq!(jacobi_u64(n, p), -1);
                }
            }
        }
    }

    #[test]
    fn big_modulus_matches_u64_path() {
        let b = FactorBudget::default();
        // Modulus above u64 built from known factors.
        let m: BigUint = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64) * 8u32 * 9u32;
        for a in [-7i64, -23, 1, 4, 49, -212] {
            let roots = sqrt_mod(&BigInt::from(a), &m, &b).unwrap();
            for r in &roots {
                assert!((BigInt::from(r * r) - a).mod_floor(&BigInt::from(m.clone())).is_zero());
            }
            // Reducing each root modulo a small factor lands in the small root set.
            let small = sqrt_mod_u64(a as i128, 72, &b).unwrap();
            for r in &roots {
                assert!(small.contains(&(r % 72u32).to_u64().unwrap()));
            }
        }
        let p: BigUint = "1000000000000000003".parse().unwrap();
        let roots = sqrt_mod(&BigInt::from(-23), &(&p * 4u32), &b).unwrap();
        for r in &roots {
            assert!((BigInt::from(r * r) + BigInt::from(23)).mod_floor(&BigInt::from(&p * 4u32)).is_zero());
        }
    }
}
