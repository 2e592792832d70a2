//! Mixed finite element matrices and the discrete inner products.

use std::sync::Arc;

use super::grid::Grid;
use super::profile::Profile;
use super::tridiag::{SymTriDiag, TriDiagLdl};
use crate::error::{check_len, Error, Result};

/// Mass, stiffness and lumped potential matrices on one grid.
///
/// `mass` has the `h/4 [1, 2, 1]` stencil, `stiffness` the
/// `1/h [-1, 2, -1]` stencil and the potential is lumped by the trapezoid
/// rule onto the diagonal (`h a(x_j)`). All solves use `system = K + L`.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    grid: Grid,
    potential: Arc<dyn Profile>,
    nodal_potential: Vec<f64>,
    potential_sup: f64,
    mass: SymTriDiag,
    stiffness: SymTriDiag,
    lumped_potential: Vec<f64>,
    system: SymTriDiag,
    mass_factor: TriDiagLdl,
}

pub fn assemble(grid: Grid, potential: Arc<dyn Profile>) -> Result<OperatorSet> {
    let n = grid.n();
    let h = grid.h();
    let nodal: Vec<f64> = grid.interior().iter().map(|&x| potential.eval(x)).collect();
    if let Some((j, a)) = nodal
        .iter()
        .enumerate()
        .find(|(_, a)| !(**a >= 0.0) || !a.is_finite())
    {
        return Err(Error::invalid(format!(
            "potential must be nonnegative and finite on the grid; a(x_{}) = {a}",
            j + 1
        )));
    }
    let nodal_max = nodal.iter().fold(0.0f64, |m, v| m.max(*v));
    let potential_sup = potential.sup_bound().max(nodal_max);

    let mass = SymTriDiag::from_stencil(n, h / 2.0, h / 4.0);
    let stiffness = SymTriDiag::from_stencil(n, 2.0 / h, -1.0 / h);
    let lumped_potential: Vec<f64> = nodal.iter().map(|a| h * a).collect();
    let system = stiffness.add_scaled(1.0, &SymTriDiag::diagonal(lumped_potential.clone()));
    let mass_factor = mass.factor()?;
    Ok(OperatorSet {
        grid,
        potential,
        nodal_potential: nodal,
        potential_sup,
        mass,
        stiffness,
        lumped_potential,
        system,
        mass_factor,
    })
}

impl OperatorSet {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn h(&self) -> f64 {
        self.grid.h()
    }

    pub fn potential(&self) -> &Arc<dyn Profile> {
        &self.potential
    }

    /// `a(x_j)` at the interior nodes.
    pub fn nodal_potential(&self) -> &[f64] {
        &self.nodal_potential
    }

    /// `a_M`, an upper bound for `‖a‖_∞`.
    pub fn potential_sup(&self) -> f64 {
        self.potential_sup
    }

    pub fn mass(&self) -> &SymTriDiag {
        &self.mass
    }

    pub fn stiffness(&self) -> &SymTriDiag {
        &self.stiffness
    }

    /// Diagonal of the lumped potential matrix, `h a(x_j)`.
    pub fn lumped_potential(&self) -> &[f64] {
        &self.lumped_potential
    }

    /// `K + L`.
    pub fn system(&self) -> &SymTriDiag {
        &self.system
    }

    pub fn mass_factor(&self) -> &TriDiagLdl {
        &self.mass_factor
    }

    /// `M⁻¹ rhs`.
    pub fn solve_mass(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        check_len("right-hand side", rhs.len(), self.n())?;
        let mut x = rhs.to_vec();
        self.mass_factor.solve_in_place(&mut x);
        Ok(x)
    }

    pub fn m_inner(&self, u: &[f64], w: &[f64]) -> f64 {
        self.mass.bilinear(u, w)
    }

    pub fn one_inner(&self, u: &[f64], w: &[f64]) -> f64 {
        self.system.bilinear(u, w)
    }

    /// `√⟨M W, W⟩`.
    pub fn m_norm(&self, w: &[f64]) -> Result<f64> {
        check_len("vector", w.len(), self.n())?;
        Ok(self.mass.quad_form(w).max(0.0).sqrt())
    }

    /// `√⟨(K + L) W, W⟩`.
    pub fn one_norm(&self, w: &[f64]) -> Result<f64> {
        check_len("vector", w.len(), self.n())?;
        Ok(self.system.quad_form(w).max(0.0).sqrt())
    }

    /// `√(‖W0‖₁² + ‖W1‖_M²)`.
    pub fn energy_norm_1m(&self, w0: &[f64], w1: &[f64]) -> Result<f64> {
        check_len("displacement", w0.len(), self.n())?;
        check_len("velocity", w1.len(), self.n())?;
        Ok((self.system.quad_form(w0) + self.mass.quad_form(w1))
            .max(0.0)
            .sqrt())
    }

    /// Lower bound `(4/h) sin²(πh/2)` for `⟨K W, W⟩ / ⟨W, W⟩`.
    pub fn poincare_constant(&self) -> f64 {
        let h = self.h();
        4.0 / h * (std::f64::consts::PI * h / 2.0).sin().powi(2)
    }
}
