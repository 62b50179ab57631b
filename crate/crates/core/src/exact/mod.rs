//! Exact arithmetic: rationals, polynomials, rational functions, matrices.

pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod ratfun;
pub mod rational;

use thiserror::Error;

pub use matrix::{RatMatrix, RatMatrixJson};
pub use poly::Polynomial;
pub use ratfun::{RationalFunction, RationalFunctionJson};
pub use rational::{int, parse_rational, rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("singular matrix")]
    Singular,
    #[error("pole at x = {0}")]
    Pole(String),
    #[error("substitution makes a denominator vanish identically")]
    DegenerateComposition,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
}
