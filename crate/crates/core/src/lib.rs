//! Class numbers and class-group structure of imaginary quadratic fields,
//! computed with reduced binary quadratic forms, together with instance
//! checkers for p-divisibility families of class numbers and the bounded
//! Diophantine scans that go with them.
//!
//! Modules:
//! - [`arith`]: primality, factoring, square roots modulo composites, Kronecker
//!   symbols, Fibonacci/Lucas numbers.
//! - [`qform`]: reduction, composition, class numbers and class-group structure.
//! - [`family`]: the fields `Q(sqrt(1 - 2m^p))`, the consecutive pairs
//!   `Q(sqrt(d))`, `Q(sqrt(d + 1))` and the `Q(sqrt(1 - 4U^k))` family.
//! - [`dioph`]: `D1 x^2 + D2 = lambda^2 k^y` solvers and family classifiers.

pub mod arith;
pub mod dioph;
pub mod error;
pub mod family;
pub mod qform;

pub use arith::{FactorBudget, Factorization};
pub use dioph::{DiophInstance, SolutionList};
pub use error::{Error, Result};
pub use family::{FamilyParams, FieldRecord, PairRecord, PthPowerVerdict};
pub use qform::{ClassGroupStructure, Discriminant, EngineBounds, QuadForm};
