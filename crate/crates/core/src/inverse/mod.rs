//! Recovery of the spatial profile `f` of a source `λ(t) f(x)` from the
//! boundary observation, by least squares on the fully discrete problem.

pub mod functional;
pub mod minimize;
pub mod reconstruct;
pub mod setup;
pub mod synth;

pub use functional::{functional_j, gradient_j, ForwardMap};
pub use minimize::{minimizers, MinimizeOutcome, Minimizer, QuadraticObjective, StopRule};
pub use reconstruct::{
    reconstruct, write_profile_csv, ReconstructOptions, ReconstructionErrors, ReconstructionResult,
};
pub use setup::{discretize_initial_data, discretize_source, InitialDataSpec, InverseSetup};
pub use synth::{fine_mesh_size, synthesize_observation, SyntheticObservation};
