//! Symmetric tridiagonal storage and the linear solvers built on it.

use nalgebra::DMatrix;

use crate::error::{check_len, Error, Result};

/// Symmetric tridiagonal matrix stored as its main diagonal and first
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTriDiag {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTriDiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::invalid(
                "tridiagonal matrix must have at least one row",
            ));
        }
        check_len("off-diagonal", off.len(), diag.len() - 1)?;
        Ok(Self { diag, off })
    }

    /// Constant-stencil matrix `[o, d, o]` of order `n`.
    pub fn from_stencil(n: usize, d: f64, o: f64) -> Self {
        assert!(n > 0, "stencil matrix needs n >= 1");
        Self {
            diag: vec![d; n],
            off: vec![o; n - 1],
        }
    }

    pub fn diagonal(diag: Vec<f64>) -> Self {
        let n = diag.len();
        assert!(n > 0, "diagonal matrix needs n >= 1");
        Self {
            diag,
            off: vec![0.0; n - 1],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_stencil(n, 1.0, 0.0)
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: f64, other: &SymTriDiag) -> SymTriDiag {
        assert_eq!(self.len(), other.len());
        SymTriDiag {
            diag: self
                .diag
                .iter()
                .zip(&other.diag)
                .map(|(a, b)| a + alpha * b)
                .collect(),
            off: self
                .off
                .iter()
                .zip(&other.off)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        }
    }

    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        let n = self.len();
        debug_assert_eq!(x.len(), n);
        debug_assert_eq!(out.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * x[i + 1];
            }
            out[i] = acc;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.apply_into(x, &mut out);
        out
    }

    /// `<T x, y>` in O(N).
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.len();
        let mut acc = 0.0;
        for i in 0..n {
            acc += self.diag[i] * x[i] * y[i];
        }
        for i in 0..n.saturating_sub(1) {
            acc += self.off[i] * (x[i] * y[i + 1] + x[i + 1] * y[i]);
        }
        acc
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.bilinear(x, x)
    }

    /// LDLᵀ factorization; fails on a non-positive pivot.
    pub fn factor(&self) -> Result<TriDiagLdl> {
        let n = self.len();
        let mut d = vec![0.0; n];
        let mut l = vec![0.0; n.saturating_sub(1)];
        d[0] = self.diag[0];
        let scale = self.diag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            if i > 0 {
                l[i - 1] = self.off[i - 1] / d[i - 1];
                d[i] = self.diag[i] - l[i - 1] * self.off[i - 1];
            }
            if !(d[i] > f64::EPSILON * scale) {
                return Err(Error::numerical(format!(
                    "non-positive pivot {:.3e} at row {i}: matrix is not positive definite",
                    d[i]
                )));
            }
        }
        Ok(TriDiagLdl { d, l })
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        check_len("right-hand side", rhs.len(), self.len())?;
        let f = self.factor()?;
        let mut x = rhs.to_vec();
        f.solve_in_place(&mut x);
        Ok(x)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for i in 0..n - 1 {
            m[(i, i + 1)] = self.off[i];
            m[(i + 1, i)] = self.off[i];
        }
        m
    }
}

/// `T = L D Lᵀ` with unit lower-bidiagonal `L`.
#[derive(Debug, Clone)]
pub struct TriDiagLdl {
    d: Vec<f64>,
    l: Vec<f64>,
}

impl TriDiagLdl {
    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.d.len();
        debug_assert_eq!(x.len(), n);
        for i in 1..n {
            x[i] -= self.l[i - 1] * x[i - 1];
        }
        for (xi, di) in x.iter_mut().zip(&self.d) {
            *xi /= di;
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.l[i] * x[i + 1];
        }
    }

    /// Lower bidiagonal Cholesky factor `B = L √D`, returned as
    /// (diagonal, subdiagonal).
    pub fn cholesky_bidiagonal(&self) -> (Vec<f64>, Vec<f64>) {
        let sqrt_d: Vec<f64> = self.d.iter().map(|v| v.sqrt()).collect();
        let sub = self.l.iter().zip(&sqrt_d).map(|(l, s)| l * s).collect();
        (sqrt_d, sub)
    }
}

/// Solves a general tridiagonal system with partial pivoting.
///
/// `sub[i]` is entry (i+1, i), `sup[i]` is entry (i, i+1). Used for shifted,
/// possibly indefinite, operators where the LDLᵀ recurrence is unsafe.
/// An exactly singular pivot is replaced by a tiny multiple of the matrix
/// scale, which is the standard treatment in inverse iteration.
pub fn solve_pivoted(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(rhs.len(), n);
    assert_eq!(sub.len() + 1, n);
    assert_eq!(sup.len() + 1, n);
    let scale = diag
        .iter()
        .chain(sub)
        .chain(sup)
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * scale;
    let mut d = diag.to_vec();
    let dl = sub.to_vec();
    let mut du = sup.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut b = rhs.to_vec();
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            let bt = b[i];
            b[i] = b[i + 1];
            b[i + 1] = bt - fact * b[i + 1];
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        if i + 1 < n {
            acc -= du[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= du2[i] * x[i + 2];
        }
        x[i] = acc / d[i];
    }
    x
}
