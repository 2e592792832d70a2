//! Newmark average-acceleration scheme (β = 1/4, γ = 1/2).
//!
//! With `c = dt²/4` and `S = K + L` one step reads
//!
//! ```text
//! P       = W_k + dt V_k + c A_k
//! (M + cS) A_{k+1} = λ(t_{k+1}) M F - S P
//! W_{k+1} = P + c A_{k+1}
//! V_{k+1} = V_k + dt/2 (A_k + A_{k+1})
//! ```
//!
//! and `½(VᵀMV + WᵀSW)` is conserved exactly when `F = 0`.

use std::path::Path;
use std::sync::Arc;

use super::intensity::{constant_one, Intensity};
use super::time::TimeGrid;
use crate::error::{check_len, Result};
use crate::fem::{OperatorSet, TriDiagLdl};
use crate::output::{fmt_f64, write_csv};

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub w: Vec<f64>,
    pub v: Vec<f64>,
    pub a: Vec<f64>,
}

impl State {
    pub fn zeros(n: usize) -> Self {
        Self {
            w: vec![0.0; n],
            v: vec![0.0; n],
            a: vec![0.0; n],
        }
    }
}

/// Separable right-hand side `G(t) = λ(t) F`.
#[derive(Debug, Clone)]
pub struct Forcing {
    shape: Vec<f64>,
    intensity: Arc<dyn Intensity>,
}

impl Forcing {
    pub fn new(shape: Vec<f64>, intensity: Arc<dyn Intensity>) -> Self {
        Self { shape, intensity }
    }

    /// `λ ≡ 1`.
    pub fn steady(shape: Vec<f64>) -> Self {
        Self::new(shape, constant_one())
    }

    pub fn shape(&self) -> &[f64] {
        &self.shape
    }

    pub fn intensity(&self) -> &Arc<dyn Intensity> {
        &self.intensity
    }
}

/// `½(⟨M V, V⟩ + ⟨(K + L) W, W⟩)`.
pub fn energy(ops: &OperatorSet, state: &State) -> f64 {
    0.5 * (ops.mass().quad_form(&state.v) + ops.system().quad_form(&state.w))
}

/// Advances one state in place; nothing is stored.
pub struct NewmarkStepper<'a> {
    ops: &'a OperatorSet,
    grid: TimeGrid,
    c: f64,
    effective: TriDiagLdl,
    load: Option<(Vec<f64>, &'a dyn Intensity)>,
    state: State,
    k: usize,
    predictor: Vec<f64>,
    rhs: Vec<f64>,
}

impl<'a> NewmarkStepper<'a> {
    pub fn new(
        ops: &'a OperatorSet,
        w0: &[f64],
        w1: &[f64],
        forcing: Option<&'a Forcing>,
        grid: TimeGrid,
    ) -> Result<Self> {
        let n = ops.n();
        check_len("initial displacement", w0.len(), n)?;
        check_len("initial velocity", w1.len(), n)?;
        let dt = grid.dt();
        let c = 0.25 * dt * dt;
        let effective = ops.mass().add_scaled(c, ops.system()).factor()?;

        let load = match forcing {
            Some(f) => {
                check_len("forcing shape", f.shape().len(), n)?;
                Some((ops.mass().apply(f.shape()), f.intensity().as_ref()))
            }
            None => None,
        };

        let mut a = ops.solve_mass(&ops.system().apply(w0))?;
        for x in &mut a {
            *x = -*x;
        }
        if let Some(f) = forcing {
            let lam = f.intensity().eval(0.0);
            for (x, fj) in a.iter_mut().zip(f.shape()) {
                *x += lam * fj;
            }
        }
        Ok(Self {
            ops,
            grid,
            c,
            effective,
            load,
            state: State {
                w: w0.to_vec(),
                v: w1.to_vec(),
                a,
            },
            k: 0,
            predictor: vec![0.0; n],
            rhs: vec![0.0; n],
        })
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    /// Index of the current sample.
    pub fn index(&self) -> usize {
        self.k
    }

    pub fn time(&self) -> f64 {
        self.grid.time(self.k)
    }

    pub fn finished(&self) -> bool {
        self.k >= self.grid.steps()
    }

    pub fn step(&mut self) {
        let dt = self.grid.dt();
        let c = self.c;
        let State { w, v, a } = &mut self.state;
        for i in 0..w.len() {
            self.predictor[i] = w[i] + dt * v[i] + c * a[i];
        }
        self.ops.system().apply_into(&self.predictor, &mut self.rhs);
        for r in &mut self.rhs {
            *r = -*r;
        }
        if let Some((mf, lam)) = &self.load {
            let l = lam.eval(self.grid.time(self.k + 1));
            for (r, m) in self.rhs.iter_mut().zip(mf) {
                *r += l * m;
            }
        }
        self.effective.solve_in_place(&mut self.rhs);
        for i in 0..w.len() {
            let a_new = self.rhs[i];
            v[i] += 0.5 * dt * (a[i] + a_new);
            w[i] = self.predictor[i] + c * a_new;
            a[i] = a_new;
        }
        self.k += 1;
    }
}

/// Runs the scheme and hands every sample (including `t = 0`) to `visit`.
pub fn integrate_with<F>(
    ops: &OperatorSet,
    w0: &[f64],
    w1: &[f64],
    forcing: Option<&Forcing>,
    grid: TimeGrid,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(usize, &State),
{
    let mut stepper = NewmarkStepper::new(ops, w0, w1, forcing, grid)?;
    visit(0, stepper.state());
    while !stepper.finished() {
        stepper.step();
        visit(stepper.index(), stepper.state());
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    grid: TimeGrid,
    states: Vec<State>,
}

pub fn integrate(
    ops: &OperatorSet,
    w0: &[f64],
    w1: &[f64],
    forcing: Option<&Forcing>,
    grid: TimeGrid,
) -> Result<Trajectory> {
    let mut states = Vec::with_capacity(grid.samples());
    integrate_with(ops, w0, w1, forcing, grid, |_, s| states.push(s.clone()))?;
    Ok(Trajectory { grid, states })
}

impl Trajectory {
    pub fn time_grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn energies(&self, ops: &OperatorSet) -> Vec<f64> {
        self.states.iter().map(|s| energy(ops, s)).collect()
    }

    /// `max_k |E_k - E_0| / E_0` (zero when `E_0 = 0` and the run stays at rest).
    pub fn relative_energy_drift(&self, ops: &OperatorSet) -> f64 {
        let e = self.energies(ops);
        let e0 = e[0];
        let drift = e.iter().fold(0.0f64, |m, x| m.max((x - e0).abs()));
        if e0 == 0.0 {
            drift
        } else {
            drift / e0
        }
    }

    /// Header `t,energy`.
    pub fn write_energy_csv(&self, ops: &OperatorSet, path: &Path) -> Result<()> {
        let rows = self
            .energies(ops)
            .into_iter()
            .enumerate()
            .map(|(k, e)| [fmt_f64(self.grid.time(k)), fmt_f64(e)]);
        write_csv(path, &["t", "energy"], rows)
    }
}
