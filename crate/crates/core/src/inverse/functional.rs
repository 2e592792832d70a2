//! Forward map `F ↦ Y_h(F)`, the misfit `J` and its discrete adjoint.

use super::minimize::QuadraticObjective;
use super::setup::InverseSetup;
use crate::error::{check_len, Error, Result};
use crate::fem::TriDiagLdl;
use crate::wave::{boundary_trace, integrate, integrate_with, Forcing, ObservationSignal};

/// Observation operator of one [`InverseSetup`]; `Y_h(F) = L F + Y_u` with
/// `L` linear and `Y_u` the trace of the free evolution of the initial data.
pub struct ForwardMap<'a> {
    setup: &'a InverseSetup,
    effective: TriDiagLdl,
    lambdas: Vec<f64>,
    free: ObservationSignal,
    weights: Vec<f64>,
}

impl<'a> ForwardMap<'a> {
    pub fn new(setup: &'a InverseSetup) -> Result<Self> {
        let ops = setup.ops();
        let tg = *setup.time_grid();
        let c = 0.25 * tg.dt() * tg.dt();
        let effective = ops.mass().add_scaled(c, ops.system()).factor()?;
        let lambdas = (0..tg.samples())
            .map(|k| setup.intensity().eval(tg.time(k)))
            .collect();
        let free = if setup.has_initial_data() {
            let (u0, u1) = setup.discrete_initial();
            boundary_trace(ops, &integrate(ops, u0, u1, None, tg)?)
        } else {
            ObservationSignal::zeros(tg.dt(), tg.samples())
        };
        Ok(Self {
            setup,
            effective,
            lambdas,
            free,
            weights: crate::wave::trapezoid_weights(tg.samples(), tg.dt()),
        })
    }

    pub fn setup(&self) -> &InverseSetup {
        self.setup
    }

    pub fn dim(&self) -> usize {
        self.setup.n()
    }

    /// `L F`: observation of the source response from rest.
    pub fn linear(&self, f: &[f64]) -> Result<ObservationSignal> {
        let ops = self.setup.ops();
        check_len("source vector", f.len(), ops.n())?;
        let tg = *self.setup.time_grid();
        let forcing = Forcing::new(f.to_vec(), self.setup.intensity().clone());
        let zeros = vec![0.0; ops.n()];
        let h = ops.h();
        let mut y1 = Vec::with_capacity(tg.samples());
        let mut y2 = Vec::with_capacity(tg.samples());
        integrate_with(ops, &zeros, &zeros, Some(&forcing), tg, |_, s| {
            y1.push(s.v[0] / h);
            y2.push(s.a[0] / 2.0);
        })?;
        ObservationSignal::new(tg.dt(), y1, y2)
    }

    /// `Y_h(F)`.
    pub fn observe(&self, f: &[f64]) -> Result<ObservationSignal> {
        let mut y = self.linear(f)?;
        for (a, b) in y.y1_mut().iter_mut().zip(self.free.y1()) {
            *a += b;
        }
        for (a, b) in y.y2_mut().iter_mut().zip(self.free.y2()) {
            *a += b;
        }
        Ok(y)
    }

    /// Trace of the free evolution alone.
    pub fn free_signal(&self) -> &ObservationSignal {
        &self.free
    }

    fn check_data(&self, y: &ObservationSignal) -> Result<()> {
        let tg = self.setup.time_grid();
        if y.len() != tg.samples() || (y.dt() - tg.dt()).abs() > 1e-12 * tg.dt() {
            return Err(Error::invalid(format!(
                "observation has {} samples at dt={}, expected {} at dt={}",
                y.len(),
                y.dt(),
                tg.samples(),
                tg.dt()
            )));
        }
        Ok(())
    }

    /// `½ ‖Y_h(F) - y‖²` (trapezoid rule in time).
    pub fn value(&self, f: &[f64], y: &ObservationSignal) -> Result<f64> {
        self.check_data(y)?;
        Ok(0.5 * self.observe(f)?.difference(y)?.norm_sq())
    }

    /// `Lᵀ` applied to a signal, with the quadrature weights of the misfit.
    pub fn adjoint(&self, signal: &ObservationSignal) -> Result<Vec<f64>> {
        self.check_data(signal)?;
        let ops = self.setup.ops();
        let n = ops.n();
        let h = ops.h();
        let tg = self.setup.time_grid();
        let dt = tg.dt();
        let c = 0.25 * dt * dt;
        let k_last = tg.steps();
        let r1 = |k: usize| self.weights[k] * signal.y1()[k] / h;
        let r2 = |k: usize| self.weights[k] * signal.y2()[k] / 2.0;

        // Cotangents of (W, V, A) at the current sample.
        let mut wb = vec![0.0; n];
        let mut vb = vec![0.0; n];
        let mut ab = vec![0.0; n];
        vb[0] = r1(k_last);
        ab[0] = r2(k_last);
        let mut z = vec![0.0; n];
        let mut sz = vec![0.0; n];
        let mut fbar_m = vec![0.0; n];
        for k in (0..k_last).rev() {
            // A_{k+1} = E⁻¹(λ_{k+1} M F - S P_k); W_{k+1} = P_k + c A_{k+1};
            // V_{k+1} = V_k + dt/2 (A_k + A_{k+1}).
            for i in 0..n {
                z[i] = ab[i] + c * wb[i] + 0.5 * dt * vb[i];
            }
            self.effective.solve_in_place(&mut z);
            let lam = self.lambdas[k + 1];
            for i in 0..n {
                fbar_m[i] += lam * z[i];
            }
            ops.system().apply_into(&z, &mut sz);
            for i in 0..n {
                let pb = wb[i] - sz[i];
                let v_next = vb[i];
                wb[i] = pb;
                vb[i] = dt * pb + v_next;
                ab[i] = c * pb + 0.5 * dt * v_next;
            }
            vb[0] += r1(k);
            ab[0] += r2(k);
        }
        // A_0 = λ_0 F when W_0 = 0.
        let mut grad = ops.mass().apply(&fbar_m);
        for i in 0..n {
            grad[i] += self.lambdas[0] * ab[i];
        }
        Ok(grad)
    }

    /// `∇J(F)`.
    pub fn gradient(&self, f: &[f64], y: &ObservationSignal) -> Result<Vec<f64>> {
        self.check_data(y)?;
        self.adjoint(&self.observe(f)?.difference(y)?)
    }
}

/// `J(F) = ½ ‖Y_h(F) - y‖²`.
pub fn functional_j(f: &[f64], y: &ObservationSignal, setup: &InverseSetup) -> Result<f64> {
    ForwardMap::new(setup)?.value(f, y)
}

/// Exact gradient of the discrete `J` by one backward sweep.
pub fn gradient_j(f: &[f64], y: &ObservationSignal, setup: &InverseSetup) -> Result<Vec<f64>> {
    ForwardMap::new(setup)?.gradient(f, y)
}

/// `J` for fixed data, as seen by the minimizers.
pub struct LeastSquares<'a, 'b> {
    pub map: &'b ForwardMap<'a>,
    pub data: &'b ObservationSignal,
}

impl QuadraticObjective for LeastSquares<'_, '_> {
    fn dim(&self) -> usize {
        self.map.dim()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.map.value(x, self.data)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.map.gradient(x, self.data)
    }

    fn hessian_apply(&self, d: &[f64]) -> Result<Vec<f64>> {
        self.map.adjoint(&self.map.linear(d)?)
    }

    fn precondition(&self, g: &[f64]) -> Result<Vec<f64>> {
        self.map.setup().ops().solve_mass(g)
    }
}
