//! Exact algebra for polycyclic nilpotent groups, their Laurent group
//! algebras and finite-dimensional modules.

pub mod descent;
pub mod error;
pub mod factor;
pub mod groebner;
pub mod indmod;
pub mod lattice;
pub mod laurent;
pub mod linalg;
pub mod nilgroup;
pub mod poly;
pub mod scalar;
pub mod upoly;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
