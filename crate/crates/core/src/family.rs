//! The field families whose class numbers are checked for divisibility:
//!
//! - `Q(sqrt(1 - 2m^p))` for odd primes `p, q` and `m = q^r`;
//! - the consecutive pairs `Q(sqrt(d))`, `Q(sqrt(d + 1))` with
//!   `d = 4(1 - 2m^p)^p`, where `d + 1 = 1 - 4U^p` for `U = 2m^p - 1`;
//! - `Q(sqrt(1 - 4U^k))` for odd `k`.
//!
//! Every check is per instance. A `false` divisibility verdict is reported in
//! the record rather than raised, so sweeps can surface it as a red flag.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{is_perfect_square, is_prime_u64, primes_up_to, squarefree_part_signed, FactorBudget};
use crate::error::{Error, Result};
use crate::qform::{
    class_number, field_discriminant, form_pow, forms_of_norm, identity_form, Discriminant, EngineBounds,
    QuadForm,
};

/// `(p, q, r)` with `p, q` odd primes and `m = q^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyParams {
    p: u32,
    q: u64,
    r: u32,
    m: BigUint,
}

impl FamilyParams {
    pub fn new(p: u32, q: u64, r: u32) -> Result<Self> {
        if p < 3 || !is_prime_u64(p as u64) {
            return Err(Error::InvalidInput(format!("p = {p} is not an odd prime")));
        }
        if q < 3 || !is_prime_u64(q) {
            return Err(Error::InvalidInput(format!("q = {q} is not an odd prime")));
        }
        if r == 0 {
            return Err(Error::InvalidInput("r must be positive".into()));
        }
        Ok(Self { p, q, r, m: BigUint::from(q).pow(r) })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    /// `m^p`.
    fn m_pow_p(&self) -> BigInt {
        BigInt::from(self.m.pow(self.p))
    }

    /// `1 - 2m^p`.
    pub fn radicand(&self) -> BigInt {
        BigInt::one() - 2 * self.m_pow_p()
    }
}

/// One imaginary quadratic field `Q(sqrt(radicand))` with an optional class
/// number and the verdict `modulus | h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticField {
    pub radicand: BigInt,
    /// Signed squarefree part `d` with `radicand = d * s^2`.
    pub d: Option<BigInt>,
    pub s: Option<BigUint>,
    /// Fundamental discriminant of `Q(sqrt(d))`.
    pub discriminant: Option<BigInt>,
    pub modulus: u64,
    pub class_number: Option<u64>,
    pub divisible: Option<bool>,
    pub skipped_reason: Option<String>,
}

impl QuadraticField {
    /// Splits off the square part of `radicand`; a factoring failure is
    /// recorded as the skip reason.
    pub fn new(radicand: BigInt, modulus: u64, budget: &FactorBudget) -> Result<Self> {
        if !radicand.is_negative() {
            return Err(Error::InvalidInput(format!("radicand {radicand} is not negative")));
        }
        let mut field = Self {
            radicand,
            d: None,
            s: None,
            discriminant: None,
            modulus,
            class_number: None,
            divisible: None,
            skipped_reason: None,
        };
        match squarefree_part_signed(&field.radicand, budget) {
            Ok((d, s)) => field.set_core(d, s),
            Err(e @ Error::EffortExceeded { .. }) => field.skipped_reason = Some(e.to_string()),
            Err(e) => return Err(e),
        }
        Ok(field)
    }

    /// Field with a squarefree decomposition known in advance.
    fn with_core(radicand: BigInt, d: BigInt, s: BigUint, modulus: u64) -> Result<Self> {
        if &d * BigInt::from(&s * &s) != radicand {
            return Err(Error::InvariantViolated(format!("{d} * {s}^2 != {radicand}")));
        }
        let mut field = Self {
            radicand,
            d: None,
            s: None,
            discriminant: None,
            modulus,
            class_number: None,
            divisible: None,
            skipped_reason: None,
        };
        field.set_core(d, s);
        Ok(field)
    }

    fn set_core(&mut self, d: BigInt, s: BigUint) {
        self.discriminant = Some(field_discriminant(&d));
        self.d = Some(d);
        self.s = Some(s);
    }

    /// Computes `h` when the discriminant is within the enumeration bound.
    pub fn evaluate(&mut self, bounds: &EngineBounds) {
        if self.skipped_reason.is_some() {
            return;
        }
        let Some(disc) = &self.discriminant else { return };
        let outcome = Discriminant::from_big(disc).and_then(|disc| class_number(&disc, bounds));
        match outcome {
            Ok(h) => {
                self.class_number = Some(h);
                self.divisible = Some(h % self.modulus == 0);
            }
            Err(e) => self.skipped_reason = Some(e.to_string()),
        }
    }

    pub fn form_discriminant(&self) -> Result<Discriminant> {
        match &self.discriminant {
            Some(d) => Discriminant::from_big(d),
            None => Err(Error::InvalidInput("discriminant unknown".into())),
        }
    }
}

/// A member of the `Q(sqrt(1 - 2m^p))` family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldRecord {
    pub params: FamilyParams,
    pub field: QuadraticField,
}

impl FieldRecord {
    pub fn p_divides(&self) -> Option<bool> {
        self.field.divisible
    }
}

/// `Q(sqrt(1 - 2m^p))` with its squarefree part and discriminant.
pub fn base_field(params: &FamilyParams, budget: &FactorBudget) -> Result<FieldRecord> {
    let field = QuadraticField::new(params.radicand(), params.p as u64, budget)?;
    if let Some(d) = &field.d {
        if *d == BigInt::from(-1) {
            return Err(Error::QiExcluded);
        }
        // 1 - 2m^p = 3 (mod 4) for odd m, and so is its squarefree part.
        if d.mod_floor(&BigInt::from(4)) != BigInt::from(3) {
            return Err(Error::InvariantViolated(format!("d = {d} is not 3 mod 4")));
        }
    }
    Ok(FieldRecord { params: params.clone(), field })
}

/// [`base_field`] plus the class number and the verdict `p | h`.
pub fn verify_thm1(params: &FamilyParams, bounds: &EngineBounds) -> Result<FieldRecord> {
    let mut rec = base_field(params, &bounds.budget)?;
    rec.field.evaluate(bounds);
    Ok(rec)
}

/// The pair `Q(sqrt(d))`, `Q(sqrt(d + 1))` with `d = 4(1 - 2m^p)^p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    pub params: FamilyParams,
    pub d_pair: BigInt,
    /// `U = 2m^p - 1`, so that `d + 1 = 1 - 4U^p`.
    pub u: BigUint,
    pub left: QuadraticField,
    pub right: QuadraticField,
    pub both_divisible: Option<bool>,
}

/// Builds the pair; the left squarefree part is inherited from the base field.
pub fn pair(params: &FamilyParams, budget: &FactorBudget) -> Result<PairRecord> {
    let base = base_field(params, budget)?;
    let p = params.p;
    let radicand = params.radicand();
    let d_pair: BigInt = 4 * radicand.pow(p);
    let u = BigUint::from(2u32) * params.m.pow(p) - 1u32;
    let right_radicand = &d_pair + 1;
    let identity = BigInt::one() - 4 * BigInt::from(u.pow(p));
    if right_radicand != identity {
        return Err(Error::InvariantViolated(format!("d + 1 != 1 - 4U^{p} for {params:?}")));
    }
    // 4(d s^2)^p = d * (2 s^p |d|^((p-1)/2))^2 for odd p.
    let left = match (&base.field.d, &base.field.s) {
        (Some(d), Some(s)) => {
            let s_left = BigUint::from(2u32) * s.pow(p) * d.magnitude().pow((p - 1) / 2);
            QuadraticField::with_core(d_pair.clone(), d.clone(), s_left, p as u64)?
        }
        _ => QuadraticField::new(d_pair.clone(), p as u64, budget)?,
    };
    let right = QuadraticField::new(right_radicand, p as u64, budget)?;
    Ok(PairRecord {
        params: params.clone(),
        d_pair,
        u,
        left,
        right,
        both_divisible: None,
    })
}

/// [`pair`] with both class numbers evaluated.
pub fn verify_thm2_pair(params: &FamilyParams, bounds: &EngineBounds) -> Result<PairRecord> {
    let mut rec = pair(params, &bounds.budget)?;
    rec.left.evaluate(bounds);
    rec.right.evaluate(bounds);
    rec.both_divisible = match (rec.left.divisible, rec.right.divisible) {
        (Some(l), Some(r)) => Some(l && r),
        _ => None,
    };
    Ok(rec)
}

/// A member of the `Q(sqrt(1 - 4U^k))` family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LouboutinRecord {
    pub u: u64,
    pub k: u32,
    pub field: QuadraticField,
}

/// `Q(sqrt(1 - 4U^k))` with the verdict `k | h`.
pub fn louboutin_field(u: u64, k: u32, bounds: &EngineBounds) -> Result<LouboutinRecord> {
    if u < 2 {
        return Err(Error::InvalidInput(format!("U = {u} must be at least 2")));
    }
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("k = {k} must be odd and at least 3")));
    }
    let radicand = BigInt::one() - 4 * BigInt::from(u).pow(k);
    let mut field = QuadraticField::new(radicand, k as u64, &bounds.budget)?;
    field.evaluate(bounds);
    Ok(LouboutinRecord { u, k, field })
}

/// Element `(x + y sqrt(d)) / 2` of the ring of integers of `Q(sqrt(d))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfIntegral {
    pub x: BigInt,
    pub y: BigInt,
}

impl HalfIntegral {
    fn mul(&self, other: &Self, d: &BigInt) -> Self {
        let x = &self.x * &other.x + d * &self.y * &other.y;
        let y = &self.x * &other.y + &self.y * &other.x;
        debug_assert!(x.is_even() && y.is_even());
        Self { x: x / 2, y: y / 2 }
    }

    fn pow(&self, e: u32, d: &BigInt) -> Self {
        let mut acc = Self { x: BigInt::from(2), y: BigInt::zero() };
        for _ in 0..e {
            acc = acc.mul(self, d);
        }
        acc
    }

    fn neg(&self) -> Self {
        Self { x: -&self.x, y: -&self.y }
    }
}

/// Outcome of the brute-force p-th power test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PthPowerVerdict {
    NotPthPower,
    /// `beta^p = sign * target` with `beta = (x + y sqrt(d)) / 2`.
    IsPthPower { beta: HalfIntegral, sign: i8 },
    Skipped(String),
}

/// Searches the finitely many `beta` of norm `norm` in the ring of integers of
/// `Q(sqrt(d))`, `d < 0` squarefree, for `beta^p = +-target`.
pub fn find_pth_root(d: &BigInt, norm: &BigUint, p: u32, target: &HalfIntegral) -> PthPowerVerdict {
    if !d.is_negative() {
        return PthPowerVerdict::Skipped(format!("d = {d} is not negative"));
    }
    let abs_d = BigInt::from(d.magnitude().clone());
    let four_n = BigInt::from(norm * 4u32);
    let half_integral = d.mod_floor(&BigInt::from(4)) == BigInt::one();
    let neg_target = target.neg();
    let mut y = BigInt::zero();
    // x^2 + |d| y^2 = 4N
    while &abs_d * &y * &y <= four_n {
        let rest = &four_n - &abs_d * &y * &y;
        if let Some(x) = is_perfect_square(&rest) {
            let x = BigInt::from(x);
            let parity_ok = if half_integral {
                x.is_even() == y.is_even()
            } else {
                x.is_even() && y.is_even()
            };
            if parity_ok {
                for sx in [1, -1] {
                    for sy in [1, -1] {
                        let beta = HalfIntegral { x: &x * sx, y: &y * sy };
                        let power = beta.pow(p, d);
                        if power == *target {
                            return PthPowerVerdict::IsPthPower { beta, sign: 1 };
                        }
                        if power == neg_target {
                            return PthPowerVerdict::IsPthPower { beta, sign: -1 };
                        }
                    }
                }
            }
        }
        y += 1;
    }
    PthPowerVerdict::NotPthPower
}

/// Whether `+-2^((p-1)/2) (1 + sqrt(1 - 2m^p))` is a p-th power in the ring
/// of integers, by enumerating every `beta` of norm `2m`.
pub fn check_pth_power(params: &FamilyParams, budget: &FactorBudget) -> PthPowerVerdict {
    let rec = match base_field(params, budget) {
        Ok(rec) => rec,
        Err(e) => return PthPowerVerdict::Skipped(e.to_string()),
    };
    let (Some(d), Some(s)) = (&rec.field.d, &rec.field.s) else {
        return PthPowerVerdict::Skipped(rec.field.skipped_reason.unwrap_or_default());
    };
    let p = params.p;
    // N(2^((p-1)/2) alpha) = 2^(p-1) * 2m^p = (2m)^p
    let scale = BigInt::from(2).pow((p - 1) / 2 + 1);
    let target = HalfIntegral { x: scale.clone(), y: scale * BigInt::from(s.clone()) };
    let norm = &params.m * 2u32;
    find_pth_root(d, &norm, p, &target)
}

/// Whether `+-(1 + sqrt(1 - 4U^k)) / 2`, of norm `U^k`, is a k-th power.
pub fn check_louboutin_kth_power(u: u64, k: u32, budget: &FactorBudget) -> PthPowerVerdict {
    let radicand = BigInt::one() - 4 * BigInt::from(u).pow(k);
    let (d, s) = match squarefree_part_signed(&radicand, budget) {
        Ok(v) => v,
        Err(e) => return PthPowerVerdict::Skipped(e.to_string()),
    };
    let target = HalfIntegral { x: BigInt::one(), y: BigInt::from(s) };
    find_pth_root(&d, &BigUint::from(u), k, &target)
}

/// Result of the order-p witness search among classes of norm `2m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSearch {
    Found(QuadForm),
    NotFound { candidates: Vec<QuadForm> },
}

/// First class (canonical order) of norm `2m` with `f != 1` and `f^p = 1`.
pub fn witness_order_p(params: &FamilyParams, bounds: &EngineBounds) -> Result<WitnessSearch> {
    let rec = base_field(params, &bounds.budget)?;
    let disc = rec.field.form_discriminant()?;
    if disc.abs() > bounds.enum_bound {
        return Err(Error::BoundExceeded {
            what: "|discriminant|",
            value: disc.abs().to_string(),
            bound: bounds.enum_bound.to_string(),
        });
    }
    let norm = (&params.m * 2u32)
        .to_u64()
        .ok_or_else(|| Error::InvalidInput("norm 2m exceeds 64 bits".into()))?;
    let candidates = forms_of_norm(&disc, norm, &bounds.budget)?.classes;
    let id = identity_form(&disc);
    let found = candidates
        .iter()
        .find(|f| **f != id && form_pow(f, params.p as u64) == id);
    Ok(match found {
        Some(f) => WitnessSearch::Found(*f),
        None => WitnessSearch::NotFound { candidates },
    })
}

/// Scan of `S = { m = q^r : p | h(Q(sqrt(1 - 2m^p))) }` over a grid.
#[derive(Debug, Clone, Default)]
pub struct SScan {
    pub admitted: Vec<FieldRecord>,
    /// Evaluated instances with `p` not dividing `h`.
    pub rejected: Vec<FieldRecord>,
    /// Instances without a class number (bounds, effort, exclusions).
    pub skipped: Vec<(FamilyParams, String)>,
}

/// All `(p, q, r)` with odd primes `q <= q_max` and `r <= r_max`.
pub fn generate_s(p: u32, q_max: u64, r_max: u32, bounds: &EngineBounds) -> Result<SScan> {
    let grid: Vec<FamilyParams> = primes_up_to(q_max)
        .into_iter()
        .filter(|&q| q >= 3)
        .flat_map(|q| (1..=r_max).map(move |r| (q, r)))
        .map(|(q, r)| FamilyParams::new(p, q, r))
        .collect::<Result<_>>()?;
    let results: Vec<(FamilyParams, Result<FieldRecord>)> = grid
        .into_par_iter()
        .map(|params| {
            let rec = verify_thm1(&params, bounds);
            (params, rec)
        })
        .collect();
    let mut scan = SScan::default();
    for (params, rec) in results {
        match rec {
            Ok(rec) => match rec.p_divides() {
                Some(true) => scan.admitted.push(rec),
                Some(false) => scan.rejected.push(rec),
                None => {
                    let reason = rec.field.skipped_reason.clone().unwrap_or_default();
                    scan.skipped.push((params, reason));
                }
            },
            Err(e) => scan.skipped.push((params, e.to_string())),
        }
    }
    Ok(scan)
}
