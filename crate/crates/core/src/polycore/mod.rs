//! Exact polynomial arithmetic over the integers with a weighted grading,
//! plus fractions whose denominators are products of linear forms.

mod fraction;
pub mod int;
mod monomial;
mod poly;
mod var;

use thiserror::Error;

pub use fraction::{sum_fractions, LinearFormProduct, StructuredFraction};
pub use int::Int;
pub use monomial::Monomial;
pub use poly::{product, sum, Polynomial};
pub use var::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division has a nonzero remainder")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("expected a nonzero homogeneous linear form, got {0}")]
    NotLinear(String),
}
