//! Mixed finite element semi-discretization of the 1D wave equation with a
//! nonnegative potential, its boundary observability, and least-squares
//! reconstruction of a separable source from boundary data.

// `!(x > 0.0)` deliberately rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod fem;
pub mod inverse;
pub mod observability;
pub mod output;
pub mod registry;
pub mod rng;
pub mod spectral;
pub mod wave;

pub use error::{Error, Result};
