//! Weierstrass models over ℚ(t), admissible changes of coordinates, minimal
//! models, twists and base change.

mod minimal;
mod model;

use thiserror::Error;

use crate::funcfield::FuncFieldError;

pub use minimal::chart_point_at_infinity;
pub use model::{AdmissibleTransform, Chart, WeierstrassModel, WEIGHTS};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WeierstrassError {
    #[error("discriminant vanishes identically")]
    NotElliptic,
    #[error("model has no singular fibre")]
    NoSingularFibre,
    #[error("twist parameter {0} is not squarefree")]
    NonSquarefreeTwist(String),
    #[error("twist parameter must be non-zero")]
    ZeroTwist,
    #[error("base change map must be non-constant")]
    ConstantMap,
    #[error("model has non-polynomial coefficients")]
    NotIntegral,
    #[error(transparent)]
    FuncField(#[from] FuncFieldError),
}
