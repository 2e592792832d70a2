//! Observation Gramian in the energy-orthonormal modal basis.
//!
//! Basis datum `2(n-1)` is `(ψⁿ/√μₙ, 0)` and `2(n-1)+1` is `(0, ψⁿ)`; both
//! have unit `‖·‖_{1,M}` norm and the family is orthonormal, so for a
//! coefficient vector `d` the observability quotient is `dᵀ G d / |d|²`.
//! Newmark decouples in this basis, so the signals come from scalar
//! recursions that reproduce the full-system scheme exactly.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{check_len, Result};
use crate::spectral::Spectrum;
use crate::wave::{trapezoid_weights, TimeGrid};

#[derive(Debug, Clone)]
pub struct ModalGramian {
    full: DMatrix<f64>,
    first: DMatrix<f64>,
    mus: Vec<f64>,
    grid: TimeGrid,
}

impl ModalGramian {
    pub fn new(spectrum: &Spectrum, grid: TimeGrid) -> Self {
        let n = spectrum.len();
        let dim = 2 * n;
        let samples = grid.samples();
        let dt = grid.dt();
        let c = 0.25 * dt * dt;
        let h = spectrum.h();
        let sw: Vec<f64> = trapezoid_weights(samples, dt)
            .into_iter()
            .map(f64::sqrt)
            .collect();

        let mut b1 = DMatrix::<f64>::zeros(dim, samples);
        let mut b2 = DMatrix::<f64>::zeros(dim, samples);
        for (m, pair) in spectrum.pairs().iter().enumerate() {
            let mu = pair.mu;
            let phi = pair.phi1();
            for (row, (mut q, mut v)) in [(2 * m, (1.0 / mu.sqrt(), 0.0)), (2 * m + 1, (0.0, 1.0))]
            {
                let mut a = -mu * q;
                for k in 0..samples {
                    b1[(row, k)] = sw[k] * phi * q / h;
                    b2[(row, k)] = sw[k] * phi * v / 2.0;
                    let p = q + dt * v + c * a;
                    let a_new = -mu * p / (1.0 + c * mu);
                    q = p + c * a_new;
                    v += 0.5 * dt * (a + a_new);
                    a = a_new;
                }
            }
        }
        let first = &b1 * b1.transpose();
        let full = &first + &b2 * b2.transpose();
        Self {
            full: symmetrize(full),
            first: symmetrize(first),
            mus: spectrum.mus(),
            grid,
        }
    }

    pub fn dim(&self) -> usize {
        self.full.nrows()
    }

    pub fn modes(&self) -> usize {
        self.mus.len()
    }

    pub fn time_grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn full(&self) -> &DMatrix<f64> {
        &self.full
    }

    pub fn first_term(&self) -> &DMatrix<f64> {
        &self.first
    }

    pub fn quotient(&self, d: &[f64]) -> Result<f64> {
        check_len("modal datum", d.len(), self.dim())?;
        Ok(rayleigh(&self.full, d))
    }

    /// Smallest eigenvalue and eigenvector of the principal submatrix on
    /// `rows` of `g`.
    pub fn restricted_minimum(g: &DMatrix<f64>, rows: &[usize]) -> (f64, Vec<f64>) {
        let sub = DMatrix::from_fn(rows.len(), rows.len(), |i, j| g[(rows[i], rows[j])]);
        let (val, vec) = smallest_eigen(sub);
        (val, vec)
    }

    /// Smallest quotient among data in the two-dimensional subspace of mode
    /// `n` (1-based) using only the first observation term.
    pub fn first_term_mode_minimum(&self, n: usize) -> f64 {
        Self::restricted_minimum(&self.first, &[2 * (n - 1), 2 * (n - 1) + 1]).0
    }
}

pub(crate) fn rayleigh(g: &DMatrix<f64>, d: &[f64]) -> f64 {
    let dim = d.len();
    let mut num = 0.0;
    for i in 0..dim {
        let mut row = 0.0;
        for j in 0..dim {
            row += g[(i, j)] * d[j];
        }
        num += d[i] * row;
    }
    num / d.iter().map(|x| x * x).sum::<f64>()
}

pub(crate) fn smallest_eigen(m: DMatrix<f64>) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(m);
    let (i, val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, v)| (i, *v))
        .expect("non-empty matrix");
    (val, eig.eigenvectors.column(i).iter().copied().collect())
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

/// Physical data `(W0, W1)` of modal coefficients `d`.
pub fn modal_datum(spectrum: &Spectrum, d: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = spectrum.len();
    let mut w0 = vec![0.0; n];
    let mut w1 = vec![0.0; n];
    for (m, p) in spectrum.pairs().iter().enumerate() {
        let (c, s) = (d[2 * m] / p.mu.sqrt(), d[2 * m + 1]);
        for j in 0..n {
            w0[j] += c * p.psi[j];
            w1[j] += s * p.psi[j];
        }
    }
    (w0, w1)
}
