//! Dense Cholesky-reduced eigensolver with tridiagonal refinement.

use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};

use super::lemmas::mode_observability;
use crate::error::{Error, Result};
use crate::fem::tridiag::solve_pivoted;
use crate::fem::OperatorSet;
use crate::output::{fmt_f64, write_csv};

/// Largest order accepted by the dense solver.
pub const MAX_DENSE_N: usize = 2000;

const REFINE_STEPS: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    /// 1-based mode index.
    pub index: usize,
    pub mu: f64,
    /// Positive frequency `√μ`.
    pub lambda: f64,
    /// M-normalized, first component positive.
    pub psi: Vec<f64>,
}

impl EigenPair {
    pub fn phi1(&self) -> f64 {
        self.psi[0]
    }
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pairs: Vec<EigenPair>,
    h: f64,
    potential: String,
    potential_sup: f64,
}

/// Solves `(K + L) ψ = μ M ψ` for all `N` pairs, sorted by `μ`.
pub fn generalized_eigen(ops: &OperatorSet) -> Result<Spectrum> {
    let n = ops.n();
    if n > MAX_DENSE_N {
        return Err(Error::invalid(format!(
            "dense eigensolver is limited to N <= {MAX_DENSE_N}, got {n}"
        )));
    }
    let (bd, bs) = ops.mass_factor().cholesky_bidiagonal();
    let s = ops.system();

    // X = B⁻¹ S column by column, then C = B⁻¹ Xᵀ.
    let mut x = s.to_dense();
    for mut col in x.column_iter_mut() {
        lower_solve(&bd, &bs, col.as_mut_slice());
    }
    let mut c = x.transpose();
    for mut col in c.column_iter_mut() {
        lower_solve(&bd, &bs, col.as_mut_slice());
    }
    let c = symmetrize(c);
    let eig = SymmetricEigen::new(c);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let mut pairs = Vec::with_capacity(n);
    for (rank, &i) in order.iter().enumerate() {
        let mut psi: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
        upper_solve(&bd, &bs, &mut psi);
        let mut mu = eig.eigenvalues[i];
        refine(ops, &mut mu, &mut psi);
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::numerical(format!(
                "non-positive eigenvalue {mu} at mode {}",
                rank + 1
            )));
        }
        if psi[0] < 0.0 {
            psi.iter_mut().for_each(|v| *v = -*v);
        }
        pairs.push(EigenPair {
            index: rank + 1,
            mu,
            lambda: mu.sqrt(),
            psi,
        });
    }
    pairs.sort_by(|a, b| a.mu.total_cmp(&b.mu));
    for (k, p) in pairs.iter_mut().enumerate() {
        p.index = k + 1;
    }
    Ok(Spectrum {
        pairs,
        h: ops.h(),
        potential: ops.potential().label(),
        potential_sup: ops.potential_sup(),
    })
}

/// `B y = x` for lower bidiagonal `B`.
fn lower_solve(diag: &[f64], sub: &[f64], x: &mut [f64]) {
    x[0] /= diag[0];
    for i in 1..x.len() {
        x[i] = (x[i] - sub[i - 1] * x[i - 1]) / diag[i];
    }
}

/// `Bᵀ y = x`.
fn upper_solve(diag: &[f64], sub: &[f64], x: &mut [f64]) {
    let n = x.len();
    x[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (x[i] - sub[i] * x[i + 1]) / diag[i];
    }
}

fn symmetrize(c: DMatrix<f64>) -> DMatrix<f64> {
    let t = c.transpose();
    (c + t) * 0.5
}

fn m_normalize(ops: &OperatorSet, psi: &mut [f64]) {
    let norm = ops.mass().quad_form(psi).sqrt();
    psi.iter_mut().for_each(|v| *v /= norm);
}

/// Rayleigh quotient plus shifted inverse iteration on the tridiagonal
/// pencil; recovers the relative accuracy the dense reduction loses on
/// the low end of the spectrum.
fn refine(ops: &OperatorSet, mu: &mut f64, psi: &mut Vec<f64>) {
    let m = ops.mass();
    let s = ops.system();
    m_normalize(ops, psi);
    *mu = s.quad_form(psi);
    for _ in 0..REFINE_STEPS {
        let diag: Vec<f64> = s
            .diag()
            .iter()
            .zip(m.diag())
            .map(|(a, b)| a - *mu * b)
            .collect();
        let off: Vec<f64> = s
            .off()
            .iter()
            .zip(m.off())
            .map(|(a, b)| a - *mu * b)
            .collect();
        let rhs = m.apply(psi);
        let mut next = if psi.len() == 1 {
            vec![1.0]
        } else {
            solve_pivoted(&off, &diag, &off, &rhs)
        };
        if next.iter().any(|v| !v.is_finite()) {
            break;
        }
        m_normalize(ops, &mut next);
        *psi = next;
        *mu = s.quad_form(psi);
    }
}

impl Spectrum {
    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn potential(&self) -> &str {
        &self.potential
    }

    pub fn potential_sup(&self) -> f64 {
        self.potential_sup
    }

    pub fn mus(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.mu).collect()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }

    /// `λ_{n+1} - λ_n` for consecutive positive frequencies.
    pub fn gaps(&self) -> Vec<f64> {
        self.pairs
            .windows(2)
            .map(|w| w[1].lambda - w[0].lambda)
            .collect()
    }

    /// Minimum consecutive gap; `None` for a single mode.
    pub fn spectral_gap(&self) -> Option<f64> {
        self.gaps().into_iter().reduce(f64::min)
    }

    /// Gap of the signed family `{±λ_n}`, i.e. `min(gap, 2 λ_1)`.
    pub fn signed_gap(&self) -> f64 {
        let twice_lowest = 2.0 * self.pairs[0].lambda;
        self.spectral_gap()
            .map_or(twice_lowest, |g| g.min(twice_lowest))
    }

    /// All consecutive eigenvalues differ by more than `rel_tol` relative.
    pub fn is_simple(&self, rel_tol: f64) -> bool {
        self.pairs
            .windows(2)
            .all(|w| (w[1].mu - w[0].mu) > rel_tol * w[1].mu)
    }

    /// Header `n,mu,lambda,phi1,mode_observability,gap`; the last gap is empty.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let gaps = self.gaps();
        let rows = self.pairs.iter().enumerate().map(|(k, p)| {
            [
                p.index.to_string(),
                fmt_f64(p.mu),
                fmt_f64(p.lambda),
                fmt_f64(p.phi1()),
                fmt_f64(mode_observability(p, self.h)),
                gaps.get(k).map(|g| fmt_f64(*g)).unwrap_or_default(),
            ]
        });
        write_csv(
            path,
            &["n", "mu", "lambda", "phi1", "mode_observability", "gap"],
            rows,
        )
    }
}
