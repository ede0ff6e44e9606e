use std::collections::HashSet;

use rayon::prelude::*;

use super::form::{compose, identity_form, prime_form, reduce, QuadForm};
use super::{Discriminant, EngineBounds};
use crate::arith::{isqrt_u128, jacobi_u64, primes_up_to, sqrt_mod_u64, FactorBudget};
use crate::error::{Error, Result};

const BLOCK: u64 = 1 << 14;
const MAX_DISTINCT_PRIMES: usize = 12;

/// Largest `a` of a reduced form of discriminant `D`: `a <= sqrt(|D| / 3)`.
fn a_limit(disc: &Discriminant) -> u64 {
    isqrt_u128(disc.abs() / 3) as u64
}

fn check_enum_bound(disc: &Discriminant, bounds: &EngineBounds) -> Result<()> {
    if disc.abs() > bounds.enum_bound {
        return Err(Error::BoundExceeded {
            what: "|discriminant|",
            value: disc.abs().to_string(),
            bound: bounds.enum_bound.to_string(),
        });
    }
    Ok(())
}

/// Distinct prime factors of each `a` in `[lo, hi)`, by a segmented sieve.
struct BlockFactors {
    lo: u64,
    counts: Vec<u8>,
    primes: Vec<[u64; MAX_DISTINCT_PRIMES]>,
}

impl BlockFactors {
    fn sieve(lo: u64, hi: u64, small: &[u64]) -> Self {
        let len = (hi - lo) as usize;
        let mut rest: Vec<u64> = (lo..hi).collect();
        let mut counts = vec![0u8; len];
        let mut primes = vec![[0u64; MAX_DISTINCT_PRIMES]; len];
        for &p in small {
            if p * p >= hi {
                break;
            }
            let first = lo.div_ceil(p) * p;
            let mut m = first;
            while m < hi {
                let i = (m - lo) as usize;
                primes[i][counts[i] as usize] = p;
                counts[i] += 1;
                while rest[i].is_multiple_of(p) {
                    rest[i] /= p;
                }
                m += p;
            }
        }
        for i in 0..len {
            if rest[i] > 1 {
                primes[i][counts[i] as usize] = rest[i];
                counts[i] += 1;
            }
        }
        Self { lo, counts, primes }
    }

    fn of(&self, a: u64) -> &[u64] {
        let i = (a - self.lo) as usize;
        &self.primes[i][..self.counts[i] as usize]
    }
}

/// Visit every reduced primitive form with leading coefficient in `[lo, hi)`.
fn scan_block(disc: i128, lo: u64, hi: u64, small: &[u64], mut visit: impl FnMut(QuadForm)) {
    let block = BlockFactors::sieve(lo, hi, small);
    let mut factors: Vec<(u64, u32)> = Vec::with_capacity(MAX_DISTINCT_PRIMES + 1);
    'next_a: for a in lo..hi {
        factors.clear();
        let mut two_power = 2u32;
        for &p in block.of(a) {
            let mut e = 0u32;
            let mut t = a;
            while t % p == 0 {
                t /= p;
                e += 1;
            }
            if p == 2 {
                two_power += e;
                continue;
            }
            // Inert primes cannot divide the leading coefficient.
            let r = disc.rem_euclid(p as i128) as u64;
            if r != 0 && jacobi_u64(r, p) == -1 {
                continue 'next_a;
            }
            factors.push((p, e));
        }
        factors.push((2, two_power));
        let roots = crate::arith::modsqrt::sqrt_mod_factored_u64(disc, &factors);
        let a_i = a as i128;
        let two_a = 2 * a_i;
        for root in roots {
            let root = root as i128;
            if root >= two_a {
                continue;
            }
            let b = if root > a_i { root - two_a } else { root };
            let c = (b * b - disc) / (4 * a_i);
            if c < a_i || (c == a_i && b < 0) {
                continue;
            }
            let f = QuadForm::new_unchecked(a_i, b, c);
            if f.is_primitive() {
                visit(f);
            }
        }
    }
}

fn sieve_primes(limit: u64) -> Vec<u64> {
    primes_up_to(isqrt_u128(limit as u128) as u64 + 1)
}

fn blocks(limit: u64) -> Vec<(u64, u64)> {
    (1..=limit)
        .step_by(BLOCK as usize)
        .map(|lo| (lo, (lo + BLOCK).min(limit + 1)))
        .collect()
}

/// Number of reduced primitive forms of discriminant `D`.
///
/// Loops over `a <= sqrt(|D|/3)`, solving `b^2 = D (mod 4a)` from the
/// factorization of `a` supplied by a segmented sieve. Blocks are counted in
/// parallel; the sum does not depend on the partition.
pub fn class_number(disc: &Discriminant, bounds: &EngineBounds) -> Result<u64> {
    check_enum_bound(disc, bounds)?;
    let limit = a_limit(disc);
    let small = sieve_primes(limit);
    let d = disc.value();
    Ok(blocks(limit)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut count = 0u64;
            scan_block(d, lo, hi, &small, |_| count += 1);
            count
        })
        .sum())
}

/// All reduced primitive forms of discriminant `D`, sorted canonically.
pub fn reduced_forms(disc: &Discriminant, bounds: &EngineBounds) -> Result<Vec<QuadForm>> {
    check_enum_bound(disc, bounds)?;
    let limit = a_limit(disc);
    let small = sieve_primes(limit);
    let d = disc.value();
    let mut all: Vec<QuadForm> = blocks(limit)
        .into_par_iter()
        .flat_map_iter(|(lo, hi)| {
            let mut out = Vec::new();
            scan_block(d, lo, hi, &small, |f| out.push(f));
            out
        })
        .collect();
    all.sort_by(|x, y| x.canonical_cmp(y));
    Ok(all)
}

/// Order of the subgroup generated by the prime forms of norm `ell <= ell_max`,
/// built by closing under composition. An independent route to `h(D)` when
/// `ell_max` reaches the Minkowski-type bound.
pub fn class_number_by_generation(disc: &Discriminant, ell_max: u64) -> u64 {
    let id = identity_form(disc);
    let mut members: HashSet<QuadForm> = HashSet::from([id]);
    let mut list = vec![id];
    for ell in primes_up_to(ell_max) {
        let Some(g) = prime_form(disc, ell) else { continue };
        if members.contains(&g) {
            continue;
        }
        let old = list.clone();
        let mut y = g;
        while !members.contains(&y) {
            for h in &old {
                let z = compose(&y, h);
                members.insert(z);
                list.push(z);
            }
            y = compose(&y, &g);
        }
    }
    list.len() as u64
}

/// Reduced classes of the primitive forms `(n, B, C)` of discriminant `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormsOfNorm {
    /// Distinct reduced classes, sorted canonically.
    pub classes: Vec<QuadForm>,
    /// Candidates `(n, B, C)` dropped because `gcd(n, B, C) > 1`.
    pub non_primitive: Vec<QuadForm>,
}

/// Classes containing a primitive form `(n, B, C)`, `B^2 = D (mod 4n)`.
pub fn forms_of_norm(disc: &Discriminant, n: u64, budget: &FactorBudget) -> Result<FormsOfNorm> {
    if n == 0 {
        return Err(Error::InvalidInput("norm must be positive".into()));
    }
    let d = disc.value();
    let modulus = n.checked_mul(4).ok_or_else(|| Error::InvalidInput(format!("norm {n} too large")))?;
    let mut classes = Vec::new();
    let mut non_primitive = Vec::new();
    for b in sqrt_mod_u64(d, modulus, budget)? {
        let f = QuadForm::from_ab(n as i128, b as i128, d).expect("b^2 = D mod 4n");
        if f.is_primitive() {
            classes.push(reduce(&f));
        } else {
            non_primitive.push(f);
        }
    }
    classes.sort_by(|x, y| x.canonical_cmp(y));
    classes.dedup();
    Ok(FormsOfNorm { classes, non_primitive })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i128) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    /// Plain double loop over `a` and `b`, straight from the reduction conditions.
    fn brute_force_forms(d: i128) -> Vec<QuadForm> {
        let mut out = Vec::new();
        let mut a = 1i128;
        while 3 * a * a <= -d {
            for b in -a + 1..=a {
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let c = num / (4 * a);
                let f = QuadForm::new_unchecked(a, b, c);
                if f.is_reduced() && f.is_primitive() {
                    out.push(f);
                }
            }
            a += 1;
        }
        out.sort_by(|x, y| x.canonical_cmp(y));
        out
    }

    #[test]
    fn class_number_examples() {
        let b = EngineBounds::default();
        assert_eq!(class_number(&disc(-3), &b).unwrap(), 1);
        assert_eq!(class_number(&disc(-4), &b).unwrap(), 1);
        assert_eq!(class_number(&disc(-23), &b).unwrap(), 3);
        let h = class_number(&disc(-212), &b).unwrap();
        assert_eq!(h, brute_force_forms(-212).len() as u64);
        assert_eq!(h % 3, 0);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let b = EngineBounds::default();
        for d in (3..6000i128).map(|x| -x).filter(|d| matches!(d.rem_euclid(4), 0 | 1)) {
            let forms = reduced_forms(&disc(d), &b).unwrap();
            assert_eq!(forms, brute_force_forms(d), "D = {d}");
        }
    }

    #[test]
    fn blocks_cover_range_once() {
        let b = EngineBounds::default();
        // Crosses several sieve blocks.
        let d = disc(-4 * 1_000_000_007);
        let h = class_number(&d, &b).unwrap();
        assert_eq!(h, reduced_forms(&d, &b).unwrap().len() as u64);
        assert_eq!(h, class_number_by_generation(&d, 40_000));
    }

    #[test]
    fn bound_is_enforced() {
        let b = EngineBounds { enum_bound: 100, ..EngineBounds::default() };
        assert!(matches!(class_number(&disc(-212), &b), Err(Error::BoundExceeded { .. })));
        assert!(class_number(&disc(-23), &b).is_ok());
    }

    #[test]
    fn generation_examples() {
        assert_eq!(class_number_by_generation(&disc(-23), 46), 3);
        assert_eq!(class_number_by_generation(&disc(-3), 6), 1);
    }

    #[test]
    fn forms_of_norm_examples() {
        let budget = FactorBudget::default();
        let six = forms_of_norm(&disc(-212), 6, &budget).unwrap();
        assert!(six.classes.contains(&reduce(&QuadForm::new(6, 2, 9).unwrap())));
        assert_eq!(
            forms_of_norm(&disc(-23), 1, &budget).unwrap().classes,
            vec![QuadForm::new(1, 1, 6).unwrap()]
        );
        // B^2 = -3 mod 16 has roots, but every (4, B, C) must be checked for primitivity.
        let four = forms_of_norm(&disc(-3), 4, &budget).unwrap();
        let scan: Vec<i128> = (0..16).filter(|b: &i128| (b * b + 3) % 16 == 0).collect();
        assert_eq!(four.classes.len() + four.non_primitive.len() >= 1, !scan.is_empty());
        for f in &four.classes {
            assert_eq!(f.discriminant(), -3);
        }
    }
}
