use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::prime::{is_prime, is_prime_u64, small_primes};
use super::{is_perfect_square, mul_mod};
use crate::error::{Error, Result};

/// Work limits for [`factor`]: trial division up to `trial_bound`, then
/// Brent's variant of Pollard rho for at most `rho_iterations` steps per
/// composite cofactor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    pub trial_bound: u64,
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        Self {
            trial_bound: 1_000_000,
            rho_iterations: 100_000_000,
        }
    }
}

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    fn from_unsorted(value: BigUint, mut primes: Vec<BigUint>) -> Self {
        primes.sort();
        let mut factors: Vec<(BigUint, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        debug_assert_eq!(
            factors.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e)),
            value
        );
        Self { value, factors }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    pub fn reassemble(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }
}

/// Factor a positive integer within `budget`.
pub fn factor(n: &BigUint, budget: &FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    if let Some(small) = n.to_u64() {
        let primes = factor_u64(small, budget)?
            .into_iter()
            .flat_map(|(p, e)| std::iter::repeat_n(BigUint::from(p), e as usize))
            .collect();
        return Ok(Factorization::from_unsorted(n.clone(), primes));
    }
    let mut primes = Vec::new();
    let mut rest = n.clone();
    for &p in small_primes() {
        if p > budget.trial_bound {
            break;
        }
        let pp = BigUint::from(p * p);
        if pp > rest {
            break;
        }
        while (&rest % p).is_zero() {
            rest /= p;
            primes.push(BigUint::from(p));
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            for (p, e) in factor_u64(small, budget)? {
                primes.extend(std::iter::repeat_n(BigUint::from(p), e as usize));
            }
            continue;
        }
        if is_prime(&m) {
            primes.push(m);
            continue;
        }
        if let Some(r) = is_perfect_square(&BigInt::from_biguint(Sign::Plus, m.clone())) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let d = rho_big(&m, budget.rho_iterations).ok_or_else(|| Error::EffortExceeded {
            value: n.to_string(),
        })?;
        stack.push(&m / &d);
        stack.push(d);
    }
    Ok(Factorization::from_unsorted(n.clone(), primes))
}

/// Factor a machine integer; returns sorted `(prime, exponent)` pairs.
pub fn factor_u64(n: u64, budget: &FactorBudget) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let mut primes = Vec::new();
    let mut rest = n;
    for &p in small_primes() {
        if p > budget.trial_bound || p * p > rest {
            break;
        }
        while rest.is_multiple_of(p) {
            rest /= p;
            primes.push(p);
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            primes.push(m);
            continue;
        }
        let r = (m as f64).sqrt() as u64;
        if let Some(r) = (r.saturating_sub(1)..=r + 1).find(|&r| r.checked_mul(r) == Some(m)) {
            stack.push(r);
            stack.push(r);
            continue;
        }
        let d = rho_u64(m, budget.rho_iterations).ok_or_else(|| Error::EffortExceeded {
            value: n.to_string(),
        })?;
        stack.push(m / d);
        stack.push(d);
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

const RHO_BATCH: u64 = 128;

/// Brent's cycle-finding rho over several polynomial constants; `None` once
/// `max_iterations` steps have been spent without a nontrivial divisor.
fn rho_u64(n: u64, max_iterations: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let mut spent = 0u64;
    for c in 1u64.. {
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let (mut x, mut ys) = (y, y);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = RHO_BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += steps;
                spent += steps;
            }
            r *= 2;
            if spent > max_iterations {
                return None;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    unreachable!()
}

fn rho_big(n: &BigUint, max_iterations: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let mut spent = 0u64;
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let (mut r, mut q, mut g) = (1u64, BigUint::one(), BigUint::one());
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let steps = RHO_BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += steps;
                spent += steps;
            }
            r *= 2;
            if spent > max_iterations {
                return None;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    unreachable!()
}

/// Write `n = d * s^2` with `d` squarefree and carrying the sign of `n`.
pub fn squarefree_part_signed(n: &BigInt, budget: &FactorBudget) -> Result<(BigInt, BigUint)> {
    if n.is_zero() {
        return Err(Error::InvalidInput("squarefree part of 0".into()));
    }
    let f = factor(n.magnitude(), budget)?;
    let mut core = BigUint::one();
    let mut root = BigUint::one();
    for (p, e) in f.factors() {
        if e % 2 == 1 {
            core *= p;
        }
        root *= p.pow(e / 2);
    }
    Ok((BigInt::from_biguint(n.sign(), core), root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn examples() {
        let b = FactorBudget::default();
        assert!(factor(&big(1), &b).unwrap().factors().is_empty());
        assert_eq!(factor_u64(54, &b).unwrap(), vec![(2, 1), (3, 3)]);
        // |1 - 4 * 53^3|
        assert_eq!(factor_u64(595507, &b).unwrap(), trial_division(595507));
        assert!(factor(&big(0), &b).is_err());
    }

    #[test]
    fn rho_path_is_exercised() {
        // Trial division disabled forces every split through rho.
        let b = FactorBudget { trial_bound: 1, rho_iterations: 10_000_000 };
        let n = 1_000_003u64 * 999_983 * 999_983;
        assert_eq!(factor_u64(n, &b).unwrap(), vec![(999_983, 2), (1_000_003, 1)]);
        let p: BigUint = "1000000000000000003".parse().unwrap();
        let q: BigUint = "1000000007".parse().unwrap();
        let n = &p * &q * &q;
        let f = factor(&n, &b).unwrap();
        assert_eq!(f.factors(), &[(q.clone(), 2), (p.clone(), 1)]);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let b = FactorBudget { trial_bound: 10, rho_iterations: 50 };
        let p = 1_000_000_007u64;
        let q = 998_244_353u64;
        assert!(matches!(factor_u64(p * q, &b), Err(Error::EffortExceeded { .. })));
    }

    #[test]
    fn squarefree_examples() {
        let b = FactorBudget::default();
        let sf = |n: i64| squarefree_part_signed(&BigInt::from(n), &b).unwrap();
        assert_eq!(sf(-53), (BigInt::from(-53), big(1)));
        assert_eq!(sf(-595508), (BigInt::from(-53), big(106)));
        assert_eq!(-53i64 * 106 * 106, -595508);
        assert_eq!(sf(12), (BigInt::from(3), big(2)));
        assert_eq!(sf(-1), (BigInt::from(-1), big(1)));
    }

    proptest! {
        #[test]
        fn factor_reassembles(n in 1u64..1_000_000_000_000) {
            let b = FactorBudget::default();
            let f = factor(&big(n), &b).unwrap();
            prop_assert_eq!(f.reassemble(), big(n));
            let mut prev = BigUint::zero();
            for (p, e) in f.factors() {
                prop_assert!(is_prime(p));
                prop_assert!(*e >= 1);
                prop_assert!(*p > prev);
                prev = p.clone();
            }
        }

        #[test]
        fn squarefree_part_is_squarefree(n in -1_000_000_000_000i64..1_000_000_000_000) {
            prop_assume!(n != 0);
            let b = FactorBudget::default();
            let (d, s) = squarefree_part_signed(&BigInt::from(n), &b).unwrap();
            prop_assert_eq!(&d * BigInt::from(&s * &s), BigInt::from(n));
            prop_assert_eq!(d.sign(), BigInt::from(n).sign());
            prop_assert!(factor(d.magnitude(), &b).unwrap().is_squarefree());
        }
    }
}
