//! Least-squares reconstruction of the source shape.

use std::path::Path;

use super::functional::{ForwardMap, LeastSquares};
use super::minimize::{minimizers, StopRule};
use super::setup::{discretize_source, InverseSetup};
use crate::error::Result;
use crate::fem::projection::{hat_l2_distance, psi_cell_values, psi_l2_distance};
use crate::fem::{Grid, OperatorSet, Profile};
use crate::output::{fmt_f64, write_csv};
use crate::wave::ObservationSignal;

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructOptions {
    pub grad_tol: f64,
    /// Defaults to `10 N`.
    pub max_iter: Option<usize>,
    pub minimizer: String,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self {
            grad_tol: 1e-6,
            max_iter: None,
            minimizer: "cg".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub f_hat: Vec<f64>,
    pub iterations: usize,
    pub grad_norm: f64,
    pub j_value: f64,
    pub converged: bool,
    pub minimizer: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructionErrors {
    /// `L²(0,1)` distance from the truth to the piecewise-linear function
    /// through `(x_j, F̂_j)` with zero end values.
    pub l2_error: f64,
    /// `L²(0,1)` distance to the piecewise constant `Σ F̂_j ψ_j`.
    pub l2_error_psi: f64,
    /// `‖F̂ - F‖_M` against the discretized truth.
    pub m_error: f64,
}

/// Minimizes `J` from `F = 0`. Reaching the iteration cap is reported
/// through `converged`, not as an error.
pub fn reconstruct(
    setup: &InverseSetup,
    y: &ObservationSignal,
    options: &ReconstructOptions,
) -> Result<ReconstructionResult> {
    let minimizer = minimizers().build(&options.minimizer)?;
    let map = ForwardMap::new(setup)?;
    let objective = LeastSquares { map: &map, data: y };
    let n = setup.n();
    let stop = StopRule {
        grad_tol: options.grad_tol,
        max_iter: options.max_iter.unwrap_or(10 * n),
    };
    let mut warnings = Vec::new();
    if setup.time_grid().t_final() < 2.0 {
        warnings.push(format!(
            "T = {} is below 2; the observation may not determine the source stably",
            setup.time_grid().t_final()
        ));
    }
    let out = minimizer.minimize(&objective, vec![0.0; n], &stop)?;
    if !out.converged {
        warnings.push(format!(
            "gradient norm {:.3e} above {:.1e} after {} iterations",
            out.grad_norm, options.grad_tol, out.iterations
        ));
    }
    let j_value = map.value(&out.x, y)?;
    Ok(ReconstructionResult {
        f_hat: out.x,
        iterations: out.iterations,
        grad_norm: out.grad_norm,
        j_value,
        converged: out.converged,
        minimizer: minimizer.name(),
        warnings,
    })
}

/// Simpson subintervals per cell for a grid of about 10⁴ points.
fn error_subdivisions(grid: &Grid) -> usize {
    let per = 10_000_usize.div_ceil(grid.cells());
    (per.max(32) + 1) & !1
}

impl ReconstructionResult {
    pub fn errors(&self, truth: &dyn Profile, ops: &OperatorSet) -> Result<ReconstructionErrors> {
        let grid = ops.grid();
        let per = error_subdivisions(grid);
        let f_true = discretize_source(truth, ops)?;
        let diff: Vec<f64> = self.f_hat.iter().zip(&f_true).map(|(a, b)| a - b).collect();
        Ok(ReconstructionErrors {
            l2_error: hat_l2_distance(truth, &self.f_hat, grid, per),
            l2_error_psi: psi_l2_distance(truth, &self.f_hat, grid, per),
            m_error: ops.m_norm(&diff)?,
        })
    }

    pub fn write_profile_csv(&self, grid: &Grid, path: &Path) -> Result<()> {
        write_profile_csv(grid, &self.f_hat, path)
    }
}

/// Header `x,value`; `Σ F_j ψ_j` at the cell midpoints.
pub fn write_profile_csv(grid: &Grid, coeffs: &[f64], path: &Path) -> Result<()> {
    let rows = grid
        .cell_midpoints()
        .into_iter()
        .zip(psi_cell_values(coeffs))
        .map(|(x, v)| [fmt_f64(x), fmt_f64(v)]);
    write_csv(path, &["x", "value"], rows)
}
