//! `∫₀ᵀ |Σ bₙ e^{-iλₙt}|² dt` against `Σ |bₙ|²` over the signed frequencies.

use num_complex::Complex64;

use crate::error::{check_len, Error, Result};
use crate::spectral::Spectrum;
use crate::wave::trapezoid_weights;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegralRule {
    /// Closed-form Gram sum.
    Exact,
    /// Composite trapezoid with steps of at most `dt`.
    Trapezoid { dt: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InghamCheck {
    pub integral: f64,
    pub coefficient_sum: f64,
    /// `Σ |bₙ|² / ∫`, the constant that makes the inequality tight.
    pub constant: f64,
}

/// `b[..N]` multiply `e^{-iλₙt}` and `b[N..]` multiply `e^{+iλₙt}`.
pub fn ingham_sum_check(
    spectrum: &Spectrum,
    t_final: f64,
    b: &[Complex64],
    rule: IntegralRule,
) -> Result<InghamCheck> {
    if !(t_final > 0.0) {
        return Err(Error::invalid(format!("T must be positive, got {t_final}")));
    }
    let n = spectrum.len();
    check_len("coefficients", b.len(), 2 * n)?;
    let freqs: Vec<f64> = spectrum
        .lambdas()
        .iter()
        .copied()
        .chain(spectrum.lambdas().iter().map(|l| -l))
        .collect();
    let integral = match rule {
        IntegralRule::Exact => exact_integral(&freqs, b, t_final),
        IntegralRule::Trapezoid { dt } => {
            let steps = (t_final / dt - 1e-9).ceil().max(1.0) as usize;
            let step = t_final / steps as f64;
            trapezoid_weights(steps + 1, step)
                .iter()
                .enumerate()
                .map(|(k, w)| {
                    let t = k as f64 * step;
                    let s: Complex64 = freqs
                        .iter()
                        .zip(b)
                        .map(|(l, c)| c * Complex64::cis(-l * t))
                        .sum();
                    w * s.norm_sqr()
                })
                .sum()
        }
    };
    let coefficient_sum: f64 = b.iter().map(|c| c.norm_sqr()).sum();
    Ok(InghamCheck {
        integral,
        coefficient_sum,
        constant: coefficient_sum / integral,
    })
}

fn exact_integral(freqs: &[f64], b: &[Complex64], t: f64) -> f64 {
    let mut total = 0.0;
    for (i, (li, bi)) in freqs.iter().zip(b).enumerate() {
        total += bi.norm_sqr() * t;
        for (lj, bj) in freqs.iter().zip(b).skip(i + 1) {
            let d = li - lj;
            // ∫₀ᵀ e^{-iΔt} dt
            let kernel = if (d * t).abs() < 1e-8 {
                Complex64::new(t, -0.5 * d * t * t)
            } else {
                (Complex64::cis(-d * t) - 1.0) / Complex64::new(0.0, -d)
            };
            total += 2.0 * (bi * bj.conj() * kernel).re;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{assemble, potentials, Grid};
    use crate::spectral::generalized_eigen;

    fn spectrum(n: usize) -> Spectrum {
        let ops = assemble(
            Grid::new(n).unwrap(),
            potentials().build("smooth-sine").unwrap(),
        )
        .unwrap();
        generalized_eigen(&ops).unwrap()
    }

    #[test]
    fn single_coefficient() {
        let s = spectrum(5);
        let mut b = vec![Complex64::new(0.0, 0.0); 10];
        b[3] = Complex64::new(1.5, -2.0);
        let c = ingham_sum_check(&s, 3.0, &b, IntegralRule::Exact).unwrap();
        assert!((c.integral - 3.0 * 6.25).abs() < 1e-12);
        assert!((c.constant - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn two_coefficients_match_quadrature() {
        let s = spectrum(5);
        let mut b = vec![Complex64::new(0.0, 0.0); 10];
        b[0] = Complex64::new(0.7, 0.2);
        b[1] = Complex64::new(-0.4, 1.1);
        let exact = ingham_sum_check(&s, 3.0, &b, IntegralRule::Exact).unwrap();
        let (l1, l2) = (s.pairs()[0].lambda, s.pairs()[1].lambda);
        let d = l1 - l2;
        let kernel = (Complex64::cis(-d * 3.0) - 1.0) / Complex64::new(0.0, -d);
        let analytic =
            3.0 * (b[0].norm_sqr() + b[1].norm_sqr()) + 2.0 * (b[0] * b[1].conj() * kernel).re;
        assert!((exact.integral - analytic).abs() < 1e-12);
        let quad = ingham_sum_check(&s, 3.0, &b, IntegralRule::Trapezoid { dt: 1e-4 }).unwrap();
        assert!((quad.integral / exact.integral - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_input() {
        let s = spectrum(3);
        let b = vec![Complex64::new(1.0, 0.0); 6];
        assert!(ingham_sum_check(&s, 0.0, &b, IntegralRule::Exact).is_err());
        assert!(ingham_sum_check(&s, 1.0, &b[..5], IntegralRule::Exact).is_err());
    }
}
