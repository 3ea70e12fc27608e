//! Exact computations with twisted full toroidal Lie algebras, their Lie-torus
//! gradings, and their level-zero irreducible integrable modules.

pub mod error;
pub mod grading;
pub mod linalg;
pub mod liealg;
pub mod repmod;
pub mod scalar;
pub mod toroidal;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::CycScalar;
