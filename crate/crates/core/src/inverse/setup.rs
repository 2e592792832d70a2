//! Discrete sources, initial data and the problem description.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem::projection::{project_p1, project_p2};
use crate::fem::quadrature::{integrate_weighted, SUBDIVISIONS_PER_CELL};
use crate::fem::{OperatorSet, Profile};
use crate::wave::{Intensity, TimeGrid};

/// `M F = [½ ∫_{x_{j-1}}^{x_{j+1}} f]_j`.
pub fn discretize_source(f: &dyn Profile, ops: &OperatorSet) -> Result<Vec<f64>> {
    project_p2(f, ops)
}

/// Continuous initial data `(w⁰, w¹)`; `w⁰` must provide its derivative.
#[derive(Debug, Clone)]
pub struct InitialDataSpec {
    pub w0: Arc<dyn Profile>,
    pub w1: Arc<dyn Profile>,
}

/// `U⁰_j = w¹(x_j)` and `M U¹ = [½ ∫ (w⁰ₓₓ - a w⁰)]_j`, where the second
/// derivative is integrated exactly as `w⁰ₓ(x_{j+1}) - w⁰ₓ(x_{j-1})`.
pub fn discretize_initial_data(
    spec: &InitialDataSpec,
    ops: &OperatorSet,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let grid = ops.grid();
    let u0 = project_p1(spec.w1.as_ref(), grid)?;
    let w0 = spec.w0.as_ref();
    let dw = |x: f64| {
        w0.derivative(x).ok_or_else(|| {
            Error::invalid(format!(
                "initial displacement {} has no derivative",
                w0.label()
            ))
        })
    };
    let a = ops.potential().as_ref();
    let mut rhs = Vec::with_capacity(ops.n());
    for j in 1..=ops.n() {
        let (xl, xr) = (grid.node(j - 1), grid.node(j + 1));
        let second = dw(xr)? - dw(xl)?;
        let potential_term =
            integrate_weighted(a, &|x| w0.eval(x), xl, xr, 2 * SUBDIVISIONS_PER_CELL);
        rhs.push(0.5 * (second - potential_term));
    }
    let u1 = ops.solve_mass(&rhs)?;
    Ok((u0, u1))
}

/// Everything the forward map needs besides the unknown source shape.
#[derive(Debug, Clone)]
pub struct InverseSetup {
    ops: OperatorSet,
    intensity: Arc<dyn Intensity>,
    time: TimeGrid,
    initial: Option<InitialDataSpec>,
    u0: Vec<f64>,
    u1: Vec<f64>,
}

impl InverseSetup {
    /// Uniform steps of at most `dt` on `[0, T]`.
    pub fn new(
        ops: OperatorSet,
        intensity: Arc<dyn Intensity>,
        t_final: f64,
        dt: f64,
        initial: Option<InitialDataSpec>,
    ) -> Result<Self> {
        let lam0 = intensity.eval(0.0);
        if lam0 == 0.0 || !lam0.is_finite() {
            return Err(Error::invalid(format!(
                "intensity {} must be nonzero at t = 0",
                intensity.label()
            )));
        }
        let time = TimeGrid::covering(t_final, dt)?;
        let (u0, u1) = match &initial {
            Some(spec) => discretize_initial_data(spec, &ops)?,
            None => (vec![0.0; ops.n()], vec![0.0; ops.n()]),
        };
        Ok(Self {
            ops,
            intensity,
            time,
            initial,
            u0,
            u1,
        })
    }

    pub fn ops(&self) -> &OperatorSet {
        &self.ops
    }

    pub fn n(&self) -> usize {
        self.ops.n()
    }

    pub fn intensity(&self) -> &Arc<dyn Intensity> {
        &self.intensity
    }

    pub fn time_grid(&self) -> &TimeGrid {
        &self.time
    }

    pub fn initial(&self) -> Option<&InitialDataSpec> {
        self.initial.as_ref()
    }

    /// Discrete data `(U⁰, U¹)` of the free part of the solution.
    pub fn discrete_initial(&self) -> (&[f64], &[f64]) {
        (&self.u0, &self.u1)
    }

    pub fn has_initial_data(&self) -> bool {
        self.u0.iter().chain(&self.u1).any(|v| *v != 0.0)
    }

    /// Same problem on another mesh with the time step scaled like `h`.
    pub fn on_mesh(&self, ops: OperatorSet) -> Result<Self> {
        let dt = self.time.dt() * ops.h() / self.ops.h();
        Self::new(
            ops,
            self.intensity.clone(),
            self.time.t_final(),
            dt,
            self.initial.clone(),
        )
    }
}
