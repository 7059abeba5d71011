//! prolongkit: exact-arithmetic symmetry analysis of cubic hypersurfaces.
//!
//! Given a cubic form on a rational vector space, the crate computes the Lie
//! algebra of infinitesimal linear symmetries of its cone, the first
//! prolongation of that algebra, a canonical decomposition of prolongation
//! elements through the character and the polar map, and pointwise Gauss-map
//! probes — all over exact rationals, so every reported identity holds with
//! zero residual. A built-in catalog provides the four secant-of-Severi
//! cubics (symmetric determinant, determinant, Pfaffian, and the 27-variable
//! octonion norm cubic) together with independent oracle actions used to
//! cross-check the solvers.

pub mod error;
pub mod rat;
pub mod linalg;
pub mod multilinear;
pub mod octonion;
pub mod jordan;
pub mod hss;
pub mod aut;
pub mod prolong;
pub mod gauss;
pub mod decomp;
pub mod json;
pub mod verify;
pub mod report;
pub mod catalog;

pub use error::{Error, Result};
pub use rat::Rat;
