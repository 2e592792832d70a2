//! Modal expansion of homogeneous solutions.

use num_complex::Complex64;

use super::eigen::Spectrum;
use crate::error::{check_len, Result};
use crate::fem::OperatorSet;

/// `W(t) = Σ (aₙ cos λₙt + bₙ sin λₙt / λₙ) ψⁿ`
/// with `aₙ = ⟨M W0, ψⁿ⟩`, `bₙ = ⟨M W1, ψⁿ⟩`.
#[derive(Debug, Clone)]
pub struct FourierExpansion<'a> {
    spectrum: &'a Spectrum,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl<'a> FourierExpansion<'a> {
    pub fn new(ops: &OperatorSet, spectrum: &'a Spectrum, w0: &[f64], w1: &[f64]) -> Result<Self> {
        check_len("initial displacement", w0.len(), ops.n())?;
        check_len("initial velocity", w1.len(), ops.n())?;
        let mw0 = ops.mass().apply(w0);
        let mw1 = ops.mass().apply(w1);
        let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
        let a = spectrum.pairs().iter().map(|p| dot(&mw0, &p.psi)).collect();
        let b = spectrum.pairs().iter().map(|p| dot(&mw1, &p.psi)).collect();
        Ok(Self { spectrum, a, b })
    }

    pub fn displacement_coefficients(&self) -> &[f64] {
        &self.a
    }

    pub fn velocity_coefficients(&self) -> &[f64] {
        &self.b
    }

    /// `cₙ = (μₙ aₙ + i λₙ bₙ) / √(2μₙ)`, normalized so that `Σ |cₙ|²` is
    /// the conserved energy.
    pub fn energy_coefficients(&self) -> Vec<Complex64> {
        self.spectrum
            .pairs()
            .iter()
            .zip(self.a.iter().zip(&self.b))
            .map(|(p, (a, b))| Complex64::new(p.mu * a, p.lambda * b) / (2.0 * p.mu).sqrt())
            .collect()
    }

    pub fn displacement(&self, t: f64) -> Vec<f64> {
        self.combine(|p, a, b| a * (p.lambda * t).cos() + b * (p.lambda * t).sin() / p.lambda)
    }

    pub fn velocity(&self, t: f64) -> Vec<f64> {
        self.combine(|p, a, b| -a * p.lambda * (p.lambda * t).sin() + b * (p.lambda * t).cos())
    }

    fn combine(&self, weight: impl Fn(&super::EigenPair, f64, f64) -> f64) -> Vec<f64> {
        let n = self.a.len();
        let mut out = vec![0.0; n];
        for (p, (a, b)) in self.spectrum.pairs().iter().zip(self.a.iter().zip(&self.b)) {
            let w = weight(p, *a, *b);
            for (o, v) in out.iter_mut().zip(&p.psi) {
                *o += w * v;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{assemble, potentials, Grid};
    use crate::spectral::generalized_eigen;
    use crate::wave::{energy, integrate, State, TimeGrid};

    #[test]
    fn energy_equals_coefficient_sum() {
        let ops = assemble(
            Grid::new(15).unwrap(),
            potentials().build("smooth-sine").unwrap(),
        )
        .unwrap();
        let s = generalized_eigen(&ops).unwrap();
        let w0: Vec<f64> = (0..15).map(|j| ((j * j) as f64).cos()).collect();
        let w1: Vec<f64> = (0..15).map(|j| (j as f64 * 0.3).sin()).collect();
        let fe = FourierExpansion::new(&ops, &s, &w0, &w1).unwrap();
        let e: f64 = fe.energy_coefficients().iter().map(|c| c.norm_sqr()).sum();
        let st = State {
            w: w0.clone(),
            v: w1.clone(),
            a: vec![0.0; 15],
        };
        assert!((e / energy(&ops, &st) - 1.0).abs() < 1e-10);
        for (x, y) in fe.displacement(0.0).iter().zip(&w0) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn newmark_converges_to_expansion() {
        let ops = assemble(
            Grid::new(19).unwrap(),
            potentials().build("discontinuous-step").unwrap(),
        )
        .unwrap();
        let s = generalized_eigen(&ops).unwrap();
        let w0: Vec<f64> = ops
            .grid()
            .interior()
            .iter()
            .map(|x| (std::f64::consts::PI * x).sin())
            .collect();
        let w1: Vec<f64> = ops
            .grid()
            .interior()
            .iter()
            .map(|x| x * (1.0 - x))
            .collect();
        let fe = FourierExpansion::new(&ops, &s, &w0, &w1).unwrap();
        let err = |steps: usize| {
            let tg = TimeGrid::new(1.0, steps).unwrap();
            let t = integrate(&ops, &w0, &w1, None, tg).unwrap();
            t.states()
                .iter()
                .enumerate()
                .map(|(k, st)| {
                    let exact = fe.displacement(tg.time(k));
                    let d: Vec<f64> = st.w.iter().zip(&exact).map(|(a, b)| a - b).collect();
                    ops.m_norm(&d).unwrap()
                })
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(4000), err(8000));
        assert!(e1 / e2 > 3.5, "{e1} {e2}");
    }
}
