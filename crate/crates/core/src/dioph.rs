//! Bounded solvers for `D1 x^2 + D2 = lambda^2 k^y` and the exceptional
//! families attached to its solution counts.
//!
//! `lambda` is carried as `lambda^2 in {1, 2, 4}` so all arithmetic stays
//! integral. Everything here is exact; solutions are re-checked by substitution
//! in the tests.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{fibonacci_capped, is_perfect_square, is_prime_u64, lucas_capped, DEFAULT_SEQUENCE_CAP};
use crate::error::{Error, Result};

pub const DEFAULT_Y_MAX: u32 = 200;
pub const DEFAULT_H_R_MAX: u32 = 64;
pub const DEFAULT_H_S_MAX: u64 = 1_000_000;

/// The equation `D1 x^2 + D2 = lambda_sq * k^y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiophInstance {
    lambda_sq: u64,
    d1: u64,
    d2: u64,
    k: u64,
}

impl DiophInstance {
    pub fn new(lambda_sq: u64, d1: u64, d2: u64, k: u64) -> Result<Self> {
        if !matches!(lambda_sq, 1 | 2 | 4) {
            return Err(Error::InvalidInput(format!("lambda^2 = {lambda_sq} not in {{1, 2, 4}}")));
        }
        if d1 == 0 || d2 == 0 {
            return Err(Error::InvalidInput("D1 and D2 must be positive".into()));
        }
        if d1.gcd(&d2) != 1 {
            return Err(Error::InvalidInput(format!("gcd(D1, D2) = gcd({d1}, {d2}) > 1")));
        }
        if k < 2 {
            return Err(Error::InvalidInput(format!("k = {k} must be at least 2")));
        }
        Ok(Self { lambda_sq, d1, d2, k })
    }

    pub fn lambda_sq(&self) -> u64 {
        self.lambda_sq
    }

    pub fn d1(&self) -> u64 {
        self.d1
    }

    pub fn d2(&self) -> u64 {
        self.d2
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Exact check of `D1 x^2 + D2 = lambda^2 k^y`.
    pub fn satisfied_by(&self, x: &BigUint, y: u32) -> bool {
        BigUint::from(self.d1) * x * x + self.d2 == BigUint::from(self.lambda_sq) * BigUint::from(self.k).pow(y)
    }
}

/// Positive solutions with `y <= y_max`, sorted by `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionList {
    pub instance: DiophInstance,
    pub y_max: u32,
    pub solutions: Vec<(BigUint, u32)>,
    /// Every `y` in `1..=y_max` was examined.
    pub complete_up_to_bound: bool,
}

impl SolutionList {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }
}

/// Tests each `y <= y_max` for `(lambda^2 k^y - D2) / D1` being a positive square.
pub fn solve_bounded(inst: &DiophInstance, y_max: u32) -> SolutionList {
    let mut solutions = Vec::new();
    let d1 = BigInt::from(inst.d1);
    let mut rhs = BigInt::from(inst.lambda_sq);
    for y in 1..=y_max {
        rhs *= inst.k;
        let num = &rhs - inst.d2;
        if num <= BigInt::zero() {
            continue;
        }
        let (quot, rem) = num.div_rem(&d1);
        if !rem.is_zero() {
            continue;
        }
        if let Some(x) = is_perfect_square(&quot) {
            solutions.push((x, y));
        }
    }
    SolutionList {
        instance: *inst,
        y_max,
        solutions,
        complete_up_to_bound: true,
    }
}

/// Solutions of `D x^2 + 1 = 2 q^y`; at most one is expected for `D > 3`.
pub fn count_lemma23(d: u64, q: u64, y_max: u32) -> Result<SolutionList> {
    if d <= 3 {
        return Err(Error::InvalidInput(format!("D = {d} must exceed 3")));
    }
    if q < 3 || !is_prime_u64(q) {
        return Err(Error::InvalidInput(format!("q = {q} is not an odd prime")));
    }
    Ok(solve_bounded(&DiophInstance::new(2, d, 1, q)?, y_max))
}

/// Which index pattern to use for the Fibonacci/Lucas family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FibonacciVariant {
    /// `(F_{j-2e}, L_{j+e}, F_j)`.
    #[default]
    SetDefinition,
    /// `(F_{j-e}, L_{j+e}, F_j)`.
    LemmaProof,
}

/// Witness `(j, e)` with `(D1, D2, k)` equal to the Fibonacci/Lucas triple at
/// index `j >= 2`, `e = +-1`.
pub fn in_family_f(d1: u64, d2: u64, k: u64, variant: FibonacciVariant) -> Result<Option<(u64, i8)>> {
    in_family_f_capped(d1, d2, k, variant, DEFAULT_SEQUENCE_CAP)
}

pub fn in_family_f_capped(
    d1: u64,
    d2: u64,
    k: u64,
    variant: FibonacciVariant,
    cap: u64,
) -> Result<Option<(u64, i8)>> {
    let (d1, d2, k) = (BigUint::from(d1), BigUint::from(d2), BigUint::from(k));
    let shift = match variant {
        FibonacciVariant::SetDefinition => 2,
        FibonacciVariant::LemmaProof => 1,
    };
    let mut j = 2u64;
    loop {
        // Indices up to j + 2 are touched.
        let fj = fibonacci_capped(j, cap.saturating_sub(2))?;
        if fj > k {
            return Ok(None);
        }
        if fj == k {
            for eps in [1i8, -1] {
                let first = if eps == 1 { j - shift } else { j + shift };
                let second = if eps == 1 { j + 1 } else { j - 1 };
                if fibonacci_capped(first, cap)? == d1 && lucas_capped(second, cap)? == d2 {
                    return Ok(Some((j, eps)));
                }
            }
        }
        j += 1;
    }
}

/// Witness `r` with `(D1, D2, k) = (1, 4k^r - 1, k)`.
pub fn in_family_g(d1: u64, d2: u64, k: u64) -> Option<u32> {
    if d1 != 1 || k < 2 {
        return None;
    }
    let target = BigUint::from(d2) + 1u32;
    let k = BigUint::from(k);
    let mut power = BigUint::from(4u32) * &k;
    let mut r = 1;
    while power <= target {
        if power == target {
            return Some(r);
        }
        power *= &k;
        r += 1;
    }
    None
}

/// Witness `(r, s)` with `D1 s^2 + D2 = lambda^2 k^r` and
/// `3 D1 s^2 - D2 = +-lambda^2`, `r <= r_max`, `s <= s_max`.
///
/// The second equation fixes `s^2 = (D2 +- lambda^2) / (3 D1)`, so at most
/// two values of `s` need checking.
pub fn in_family_h(d1: u64, d2: u64, k: u64, lambda_sq: u64, r_max: u32, s_max: u64) -> Option<(u32, u64)> {
    if k < 2 || d1 == 0 {
        return None;
    }
    let three_d1 = 3 * d1 as u128;
    let mut candidates = Vec::new();
    for num in [d2 as i128 + lambda_sq as i128, d2 as i128 - lambda_sq as i128] {
        if num <= 0 || !(num as u128).is_multiple_of(three_d1) {
            continue;
        }
        if let Some(s) = crate::arith::is_perfect_square_u128(num as u128 / three_d1) {
            if s >= 1 && s <= s_max as u128 {
                candidates.push(s as u64);
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    for s in candidates {
        let lhs = BigUint::from(d1) * s * s + d2;
        let (t, rem) = lhs.div_rem(&BigUint::from(lambda_sq));
        if !rem.is_zero() {
            continue;
        }
        let mut power = BigUint::from(k);
        for r in 1..=r_max {
            if power == t {
                return Some((r, s));
            }
            if power > t {
                break;
            }
            power *= k;
        }
    }
    None
}

/// `(lambda^2, D1, D2, k)` tuples with exactly two solutions outside the families.
pub const SPORADIC: [(u64, u64, u64, u64); 7] = [
    (4, 13, 3, 2),
    (2, 7, 11, 3),
    (1, 2, 1, 3),
    (4, 7, 1, 2),
    (2, 1, 1, 5),
    (2, 1, 1, 13),
    (4, 1, 3, 7),
];

pub fn is_sporadic(lambda_sq: u64, d1: u64, d2: u64, k: u64) -> bool {
    SPORADIC.contains(&(lambda_sq, d1, d2, k))
}

/// Membership summary used to explain a solution count of two or more.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMembership {
    pub sporadic: bool,
    pub f: Option<(u64, i8)>,
    pub g: Option<u32>,
    pub h: Option<(u32, u64)>,
}

impl FamilyMembership {
    pub fn any(&self) -> bool {
        self.sporadic || self.f.is_some() || self.g.is_some() || self.h.is_some()
    }
}

pub fn classify(inst: &DiophInstance, variant: FibonacciVariant) -> Result<FamilyMembership> {
    Ok(FamilyMembership {
        sporadic: is_sporadic(inst.lambda_sq, inst.d1, inst.d2, inst.k),
        f: in_family_f(inst.d1, inst.d2, inst.k, variant)?,
        g: in_family_g(inst.d1, inst.d2, inst.k),
        h: in_family_h(inst.d1, inst.d2, inst.k, inst.lambda_sq, DEFAULT_H_R_MAX, DEFAULT_H_S_MAX),
    })
}

/// Integer points `(x, y)`, `1 <= x <= x_max`, `y >= 0`, on `y^2 = (1 - 2x^p) / d0`.
pub fn siegel_scan(d0: i64, p: u32, x_max: u64) -> Result<Vec<(u64, BigUint)>> {
    if d0 == 0 {
        return Err(Error::InvalidInput("d0 must be nonzero".into()));
    }
    let d0 = BigInt::from(d0);
    let mut out = Vec::new();
    for x in 1..=x_max {
        let num: BigInt = BigInt::one() - BigInt::from(2) * BigInt::from(x).pow(p);
        let (quot, rem) = num.div_rem(&d0);
        if !rem.is_zero() {
            continue;
        }
        if let Some(y) = is_perfect_square(&quot) {
            out.push((x, y));
        }
    }
    Ok(out)
}

/// `x` values of a solution list as machine integers when they fit.
pub fn small_solutions(list: &SolutionList) -> Vec<(u64, u32)> {
    list.solutions
        .iter()
        .filter_map(|(x, y)| x.to_u64().map(|x| (x, *y)))
        .collect()
}
