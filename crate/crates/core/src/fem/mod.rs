//! Grid, mixed finite element operators, projections and tridiagonal solves.

pub mod grid;
pub mod operators;
pub mod profile;
pub mod projection;
pub mod quadrature;
pub mod tridiag;

pub use grid::Grid;
pub use operators::{assemble, OperatorSet};
pub use profile::{potentials, sources, Profile, ProfileKind};
pub use tridiag::{SymTriDiag, TriDiagLdl};
