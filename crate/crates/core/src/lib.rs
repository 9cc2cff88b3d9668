//! Split and displacement decompositions of the standard module of a
//! Q-polynomial distance-regular graph, with an independent decomposition
//! into irreducible modules of the subconstituent algebra as a cross-check.

pub mod drg;
pub mod families;
pub mod linalg;
pub mod terwilliger;

pub use drg::{DrgError, DrgProfile, Graph};
pub use linalg::{Matrix, Mode, Rational, Scalar, Subspace, Tolerance};
