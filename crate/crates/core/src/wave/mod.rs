//! Time integration of `M W'' + (K + L) W = λ(t) M F` and boundary signals.

pub mod intensity;
pub mod newmark;
pub mod signal;
pub mod time;

pub use intensity::{intensities, Intensity};
pub use newmark::{energy, integrate, integrate_with, Forcing, NewmarkStepper, State, Trajectory};
pub use signal::{boundary_trace, observation_y, trapezoid_weights, ObservationSignal};
pub use time::TimeGrid;
