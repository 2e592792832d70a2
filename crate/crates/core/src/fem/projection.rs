//! Projections of continuous functions onto the two discrete spaces.

use super::grid::Grid;
use super::operators::OperatorSet;
use super::profile::Profile;
use super::quadrature::{cell_integrals, half_patch_integrals};
use crate::error::{Error, Result};

/// Nodal values `w(x_j)`; `w` must vanish at both ends.
pub fn project_p1(w: &dyn Profile, grid: &Grid) -> Result<Vec<f64>> {
    let tol = 1e-12 * (1.0 + w.sup_bound());
    if w.eval(0.0).abs() > tol || w.eval(1.0).abs() > tol {
        return Err(Error::invalid(format!(
            "{} does not vanish at the boundary",
            w.label()
        )));
    }
    Ok(grid.interior().iter().map(|&x| w.eval(x)).collect())
}

/// Patch averages `(1/2h) ∫_{x_{j-1}}^{x_{j+1}} v`.
pub fn project_p3(v: &dyn Profile, grid: &Grid) -> Vec<f64> {
    let h = grid.h();
    half_patch_integrals(v, grid)
        .into_iter()
        .map(|s| s / h)
        .collect()
}

/// Coefficients of the L² projection onto `span{ψ_j}`:
/// `M V = [½ ∫_{x_{j-1}}^{x_{j+1}} v]_j`.
pub fn project_p2(v: &dyn Profile, ops: &OperatorSet) -> Result<Vec<f64>> {
    ops.solve_mass(&half_patch_integrals(v, ops.grid()))
}

/// Value on each cell `(x_j, x_{j+1})` of `Σ V_j ψ_j`, i.e.
/// `(V_j + V_{j+1}) / 2` with `V_0 = V_{N+1} = 0`.
pub fn psi_cell_values(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    (0..=n)
        .map(|j| {
            let left = if j == 0 { 0.0 } else { coeffs[j - 1] };
            let right = if j == n { 0.0 } else { coeffs[j] };
            0.5 * (left + right)
        })
        .collect()
}

/// `‖v - Σ V_j ψ_j‖_{L²}` with cell-wise quadrature.
pub fn psi_l2_distance(v: &dyn Profile, coeffs: &[f64], grid: &Grid, per_cell: usize) -> f64 {
    let vals = psi_cell_values(coeffs);
    (0..grid.cells())
        .map(|j| {
            let c = vals[j];
            super::quadrature::integrate_squared_difference(
                v,
                &|_| c,
                grid.node(j),
                grid.node(j + 1),
                per_cell,
            )
        })
        .sum::<f64>()
        .sqrt()
}

/// `‖v - Σ V_j φ_j‖_{L²}` where `Σ V_j φ_j` is the piecewise-linear
/// interpolant through `(x_j, V_j)` with zero end values.
pub fn hat_l2_distance(v: &dyn Profile, coeffs: &[f64], grid: &Grid, per_cell: usize) -> f64 {
    let n = coeffs.len();
    let at = |j: usize| {
        if j == 0 || j == n + 1 {
            0.0
        } else {
            coeffs[j - 1]
        }
    };
    (0..grid.cells())
        .map(|j| {
            let (x0, x1) = (grid.node(j), grid.node(j + 1));
            let (y0, y1) = (at(j), at(j + 1));
            let line = move |x: f64| y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            super::quadrature::integrate_squared_difference(v, &line, x0, x1, per_cell)
        })
        .sum::<f64>()
        .sqrt()
}

/// `‖w - P1 w‖_{H¹₀}` for profiles with a closed-form derivative.
pub fn p1_h1_error(w: &dyn Profile, grid: &Grid, per_cell: usize) -> Result<f64> {
    let nodal = project_p1(w, grid)?;
    let n = grid.n();
    let at = |j: usize| {
        if j == 0 || j == n + 1 {
            0.0
        } else {
            nodal[j - 1]
        }
    };
    let mut total = 0.0;
    for j in 0..grid.cells() {
        let (x0, x1) = (grid.node(j), grid.node(j + 1));
        let slope = (at(j + 1) - at(j)) / (x1 - x0);
        let d = |x: f64| w.derivative(x).unwrap_or(f64::NAN);
        let sq = super::quadrature::simpson(&|x| (d(x) - slope).powi(2), x0, x1, per_cell);
        total += sq;
    }
    if !total.is_finite() {
        return Err(Error::invalid(format!(
            "{} has no closed-form derivative",
            w.label()
        )));
    }
    Ok(total.sqrt())
}

/// Cell integrals re-exported for callers that need raw quadrature.
pub fn cell_integrals_of(v: &dyn Profile, grid: &Grid) -> Vec<f64> {
    cell_integrals(v, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::operators::assemble;
    use crate::fem::profile::{Constant, SineMode, SmoothBump, Tabulated};
    use std::sync::Arc;

    #[derive(Debug)]
    struct Poly(fn(f64) -> f64, f64);
    impl Profile for Poly {
        fn label(&self) -> String {
            "poly".into()
        }
        fn kind(&self) -> crate::fem::profile::ProfileKind {
            crate::fem::profile::ProfileKind::SmoothFormula
        }
        fn eval(&self, x: f64) -> f64 {
            (self.0)(x)
        }
        fn sup_bound(&self) -> f64 {
            self.1
        }
    }

    #[test]
    fn p1_nodal_values() {
        let g = Grid::new(3).unwrap();
        let w = Poly(|x| x * (1.0 - x), 0.25);
        assert_eq!(project_p1(&w, &g).unwrap(), vec![0.1875, 0.25, 0.1875]);
        assert!(project_p1(&Constant::new(1.0), &g).is_err());
    }

    #[test]
    fn p3_of_constant_is_one() {
        let g = Grid::new(7).unwrap();
        for v in project_p3(&Constant::new(1.0), &g) {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn p2_of_constant_satisfies_forward_multiply() {
        // Boundary rows of M·1 are 3h/4 while every half-patch integral of
        // 1 equals h, so the coefficients are not all ones; the represented
        // function Σ V_j ψ_j is still exactly 1.
        let o = assemble(Grid::new(3).unwrap(), Arc::new(Constant::new(0.0))).unwrap();
        let v = project_p2(&Constant::new(1.0), &o).unwrap();
        let mv = o.mass().apply(&v);
        for x in &mv {
            assert!((x - o.h()).abs() < 1e-15);
        }
        for (a, b) in v.iter().zip([2.0, 0.0, 2.0]) {
            assert!((a - b).abs() < 1e-14, "{v:?}");
        }
        for c in psi_cell_values(&v) {
            assert!((c - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn p1_converges_in_h1() {
        let w = SineMode::new(1);
        let errs: Vec<f64> = [9usize, 19, 39, 79, 159]
            .iter()
            .map(|&n| p1_h1_error(&w, &Grid::new(n).unwrap(), 32).unwrap())
            .collect();
        for e in errs.windows(2) {
            assert!(e[1] <= 0.51 * e[0], "{errs:?}");
        }
    }

    #[test]
    fn p2_and_p3_errors_decrease() {
        let v = Poly(|x| x * x, 1.0);
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for n in [9usize, 19, 39, 79, 159] {
            let o = assemble(Grid::new(n).unwrap(), Arc::new(Constant::new(0.0))).unwrap();
            let p2 = project_p2(&v, &o).unwrap();
            let p3 = project_p3(&v, o.grid());
            let e2 = psi_l2_distance(&v, &p2, o.grid(), 32);
            let e3 = psi_l2_distance(&v, &p3, o.grid(), 32);
            assert!(
                e2 < prev.0 && e3 < prev.1,
                "n={n}: {e2} {e3} after {prev:?}"
            );
            prev = (e2, e3);
        }
    }

    #[test]
    fn p2_is_orthogonal_projection() {
        // ‖P2 v‖ ≤ ‖v‖ and the residual is M-orthogonal to the ψ space.
        let o = assemble(Grid::new(11).unwrap(), Arc::new(Constant::new(0.0))).unwrap();
        let v = SmoothBump;
        let p2 = project_p2(&v, &o).unwrap();
        let rhs = half_patch_integrals(&v, o.grid());
        let mp = o.mass().apply(&p2);
        for (a, b) in mp.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn hat_distance_zero_for_hat_function() {
        let g = Grid::new(3).unwrap();
        let t = Tabulated::new("hat", vec![0.0, 0.25, 0.5, 1.0], vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(hat_l2_distance(&t, &[1.0, 0.0, 0.0], &g, 4) < 1e-14);
    }
}
