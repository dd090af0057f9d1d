//! Exact rational arithmetic, multivariate polynomials, monomial ideals and
//! weighted graded pieces.

mod ideal;
pub mod linalg;
mod monomial;
pub(crate) mod parse;
mod polynomial;
mod rational;

use alloc::string::String;
use core::fmt;

pub use ideal::{graded_ideal, weighted_degree, MonomialIdeal, WeightVector};
pub use monomial::Monomial;
pub(crate) use monomial::write_power_product;
pub use polynomial::Polynomial;
pub(crate) use polynomial::write_coeff_term;
pub use rational::{
    binomial, ceil_i64, common_denominator, falling, floor_i64, int, is_integer, parse_rational,
    rat, rising, Rational,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactAlgError {
    Syntax { position: usize, message: String },
    ZeroDenominator,
    VariableOutOfRange { index: usize, dim: usize },
    DimensionMismatch { expected: usize, found: usize },
    NonPositiveWeight,
}

impl fmt::Display for ExactAlgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactAlgError::Syntax { position, message } => {
                write!(f, "syntax error at offset {position}: {message}")
            }
            ExactAlgError::ZeroDenominator => f.write_str("zero denominator"),
            ExactAlgError::VariableOutOfRange { index, dim } => {
                write!(f, "variable index {index} exceeds dimension {dim}")
            }
            ExactAlgError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            ExactAlgError::NonPositiveWeight => f.write_str("weights must be positive"),
        }
    }
}

/// Parses a polynomial in `x1..x{dim}`.
pub fn poly_parse(text: &str, dim: usize) -> Result<Polynomial, ExactAlgError> {
    Polynomial::parse(text, dim)
}

/// Canonical text form; `poly_parse(poly_print(p)) == p`.
pub fn poly_print(p: &Polynomial) -> String {
    alloc::format!("{p}")
}

#[cfg(test)]
mod tests;
