//! Exact computations on elliptic surfaces over ℚ(t).

pub mod configs;
pub mod funcfield;
pub mod kodaira;
pub mod lattices;
pub mod mordell_weil;
pub mod weierstrass;
