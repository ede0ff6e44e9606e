//! Positive definite binary quadratic forms of negative discriminant and the
//! form class group they realize.
//!
//! Coefficients are machine integers (`i128`); discriminants are limited to
//! `|D| < 2^62`, which keeps every intermediate of composition in range.

mod classnum;
mod form;
mod structure;

pub use classnum::{class_number, class_number_by_generation, forms_of_norm, reduced_forms, FormsOfNorm};
pub use form::{compose, form_pow, identity_form, inverse, prime_form, reduce, QuadForm};
pub use structure::{class_group_structure, element_order, element_order_with_class_number, ClassGroupStructure};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::{factor_u64, FactorBudget};
use crate::error::{Error, Result};

/// Largest supported `|D|` (exclusive).
pub const MAX_ABS_DISCRIMINANT: i128 = 1 << 62;

/// A negative discriminant `D = 0, 1 (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Discriminant {
    value: i128,
    fundamental: bool,
}

impl Discriminant {
    pub fn new(value: i128) -> Result<Self> {
        if value >= 0 {
            return Err(Error::InvalidInput(format!("discriminant {value} is not negative")));
        }
        if !matches!(value.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidInput(format!("discriminant {value} is not 0 or 1 mod 4")));
        }
        if -value >= MAX_ABS_DISCRIMINANT {
            return Err(Error::BoundExceeded {
                what: "|discriminant|",
                value: (-value).to_string(),
                bound: MAX_ABS_DISCRIMINANT.to_string(),
            });
        }
        let fundamental = is_fundamental(value)?;
        Ok(Self { value, fundamental })
    }

    pub fn from_big(value: &BigInt) -> Result<Self> {
        match value.to_i128() {
            Some(v) => Self::new(v),
            None => Err(Error::BoundExceeded {
                what: "|discriminant|",
                value: value.to_string(),
                bound: MAX_ABS_DISCRIMINANT.to_string(),
            }),
        }
    }

    /// Discriminant of `Q(sqrt(d))` for squarefree `d < 0`: `d` if `d = 1 (mod 4)`, else `4d`.
    pub fn of_field(d: &BigInt) -> Result<Self> {
        Self::from_big(&field_discriminant(d))
    }

    pub fn value(&self) -> i128 {
        self.value
    }

    pub fn abs(&self) -> u128 {
        self.value.unsigned_abs()
    }

    pub fn is_fundamental(&self) -> bool {
        self.fundamental
    }
}

impl std::fmt::Display for Discriminant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Field discriminant of `Q(sqrt(d))` for squarefree `d`, without range checks.
pub fn field_discriminant(d: &BigInt) -> BigInt {
    if d.mod_floor(&BigInt::from(4)) == BigInt::from(1) {
        d.clone()
    } else {
        d * 4
    }
}

fn is_fundamental(value: i128) -> Result<bool> {
    let abs = value.unsigned_abs() as u64;
    let squarefree = |n: u64| -> Result<bool> {
        Ok(factor_u64(n, &FactorBudget::default())?.iter().all(|&(_, e)| e == 1))
    };
    if value.rem_euclid(4) == 1 {
        return squarefree(abs);
    }
    let d = value / 4;
    Ok(matches!(d.rem_euclid(4), 2 | 3) && squarefree(d.unsigned_abs() as u64)?)
}

/// Limits for the enumeration engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineBounds {
    /// Largest `|D|` for which reduced forms are enumerated.
    pub enum_bound: u128,
    /// Largest class number for which the group structure is computed.
    pub struct_bound: u64,
    pub budget: FactorBudget,
}

impl Default for EngineBounds {
    fn default() -> Self {
        Self {
            enum_bound: 1_000_000_000_000_000,
            struct_bound: 10_000_000,
            budget: FactorBudget::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_validation() {
        assert!(Discriminant::new(-3).unwrap().is_fundamental());
        assert!(Discriminant::new(-4).unwrap().is_fundamental());
        assert!(Discriminant::new(-212).unwrap().is_fundamental());
        assert!(!Discriminant::new(-12).unwrap().is_fundamental());
        assert!(!Discriminant::new(-16).unwrap().is_fundamental());
        assert!(!Discriminant::new(-27).unwrap().is_fundamental());
        assert!(Discriminant::new(-8).unwrap().is_fundamental());
        assert!(Discriminant::new(-5).is_err());
        assert!(Discriminant::new(4).is_err());
        assert!(Discriminant::new(-(1 << 62)).is_err());
    }

    #[test]
    fn field_discriminants() {
        assert_eq!(field_discriminant(&BigInt::from(-53)), BigInt::from(-212));
        assert_eq!(field_discriminant(&BigInt::from(-23)), BigInt::from(-23));
        assert_eq!(field_discriminant(&BigInt::from(-1)), BigInt::from(-4));
        assert_eq!(field_discriminant(&BigInt::from(-2)), BigInt::from(-8));
    }
}
