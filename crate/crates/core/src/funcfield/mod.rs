//! Exact arithmetic in ℚ, ℚ(√D), polynomials and rational functions over them,
//! places of the projective line, valuations and residue fields.

mod factor;
mod field;
mod parse;
mod place;
mod poly;
mod ratfunc;
mod residue;

use thiserror::Error;

pub use factor::{factorize, squarefree_decomposition, Factorization};
pub use field::{is_perfect_square, quadratic_sqrt, rat, ratio, rational_sqrt, Field, Quadratic, Rational};
pub use parse::{
    parse_poly, parse_poly_in, parse_quadratic, parse_quadratic_in, parse_ratfunc, parse_ratfunc_in,
    split_square, ParseError,
};
pub use place::{poly_valuation, valuation, Place};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use residue::{is_square_in_residue, reduce_at, LocalRing, ResidueElt, SquareTest};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FuncFieldError {
    #[error("the zero polynomial has no factorisation")]
    ZeroPolynomial,
    #[error("zero has no square class")]
    ZeroInput,
    #[error("function has a pole at the place")]
    NegativeValuation,
    #[error("{0} is not a monic irreducible polynomial")]
    NotAPlace(String),
    #[error("residue field of degree above 2")]
    Undetermined,
    #[error("the place at infinity must be handled in the chart t = 1/s")]
    InfinityNeedsChart,
    #[error("place {0} of degree above 1 with quadratic coefficients is not supported")]
    UnsupportedPlace(String),
    #[error("coefficients from a different quadratic field")]
    FieldMismatch,
}
