//! Exact and certified arithmetic: rationals, quadratic surds, real algebraic
//! numbers of small degree, dyadic balls and Gaussian integers.

mod alg;
mod ball;
mod complex;
mod gaussian;
mod parse;
mod poly;
mod rational;
mod surd;

pub use alg::{Alg, NumberField};
pub use ball::{ball_refine, BallReal, RealSource};
pub use complex::Cx;
pub use gaussian::{gaussian_primitive, GaussianInt, GaussianVector};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use parse::{parse_rational, parse_real, parse_surd};
pub use rational::{ceil_rat, floor_rat, rat, rat_to_f64};
pub use surd::{surd_cmp, QuadraticSurd};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("incomparable surd fields: sqrt {0} and sqrt {1}")]
    IncomparableFields(BigInt, BigInt),
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted after {0} bits")]
    Undecidable(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid number field: {0}")]
    InvalidField(String),
}
