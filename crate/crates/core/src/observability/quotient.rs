//! Direct evaluation of the observability quotient from a full simulation.

use crate::error::{Error, Result};
use crate::fem::OperatorSet;
use crate::wave::{boundary_trace, integrate, TimeGrid};

/// `min(h, T/3000)`.
pub fn default_quotient_dt(h: f64, t_final: f64) -> f64 {
    h.min(t_final / 3000.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientTerms {
    /// `∫ |u₁/h|²`.
    pub first: f64,
    /// `∫ |u₁'/2|²`.
    pub second: f64,
    /// `‖(W0, W1)‖²_{1,M}`.
    pub energy_norm_sq: f64,
}

impl QuotientTerms {
    pub fn quotient(&self) -> f64 {
        (self.first + self.second) / self.energy_norm_sq
    }

    pub fn first_term_quotient(&self) -> f64 {
        self.first / self.energy_norm_sq
    }
}

/// Simulates the free evolution of `(W0, W1)` up to `T` with steps of at most
/// `dt` and returns the observed and initial energies.
pub fn observability_quotient(
    ops: &OperatorSet,
    w0: &[f64],
    w1: &[f64],
    t_final: f64,
    dt: f64,
) -> Result<QuotientTerms> {
    let energy_norm_sq = ops.energy_norm_1m(w0, w1)?.powi(2);
    if energy_norm_sq == 0.0 {
        return Err(Error::invalid("observability quotient of the zero datum"));
    }
    let grid = TimeGrid::covering(t_final, dt)?;
    let traj = integrate(ops, w0, w1, None, grid)?;
    let (first, second) = boundary_trace(ops, &traj).component_norms_sq();
    Ok(QuotientTerms {
        first,
        second,
        energy_norm_sq,
    })
}
