//! Sections of an elliptic surface: group law, intersection numbers,
//! fibre components and the height pairing.

mod components;
mod height;
mod section;

use thiserror::Error;

use crate::funcfield::FuncFieldError;
use crate::kodaira::KodairaError;
use crate::lattices::LatticeError;
use crate::weierstrass::WeierstrassError;

pub use components::{identify_at_finite, ComponentLabel};
pub use height::{
    correction, height_from_data, ns_discriminant, rational_determinant, ComponentId, EllipticSurface, HeightReport, LocalContact,
};
pub use section::{Coord, GroupLaw, Section};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MordellWeilError {
    #[error("point {0} is not on the curve")]
    OffCurve(String),
    #[error("pole orders of ({x}, {y}) at {place} are not of the form (-2k, -3k)")]
    MalformedPole { x: String, y: String, place: String },
    #[error("operation needs a finite section, got the zero section")]
    FinitePointRequired,
    #[error("Gram matrix of the free part is singular")]
    SingularGram,
    #[error("the two sections coincide; use the height instead")]
    DistinctnessViolation,
    #[error("component labels {0} do not fit the fibre")]
    LabelMismatch(String),
    #[error("inconsistent local data: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Kodaira(#[from] KodairaError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error(transparent)]
    FuncField(#[from] FuncFieldError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
