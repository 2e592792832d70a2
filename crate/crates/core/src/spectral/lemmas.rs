//! Modal observability, the direct inequality for eigenvectors and the
//! trapezoid-rule inequality for two-frequency signals.

use num_complex::Complex64;

use super::eigen::EigenPair;
use crate::error::{Error, Result};

/// Constant in the direct inequality, calibrated on the potential-free
/// problem where the left side equals `2 + 6 sin²(nπh/2) < 8`.
pub const DIRECT_INEQUALITY_C0: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `|φ₁ / (h √μ)|² + |φ₁ / 2|²`.
pub fn mode_observability(pair: &EigenPair, h: f64) -> f64 {
    mode_observability_first_term(pair, h) + 0.25 * pair.phi1() * pair.phi1()
}

/// `|φ₁ / (h √μ)|²` alone.
pub fn mode_observability_first_term(pair: &EigenPair, h: f64) -> f64 {
    pair.phi1() * pair.phi1() / (h * h * pair.mu)
}

/// `(μ + 1/h²) |φ₁|²/μ ≤ C₀ (1 + a_M²/μ)`.
pub fn direct_inequality_check(pair: &EigenPair, h: f64, potential_sup: f64) -> InequalityCheck {
    let mu = pair.mu;
    let lhs = (mu + 1.0 / (h * h)) * pair.phi1() * pair.phi1() / mu;
    let rhs = DIRECT_INEQUALITY_C0 * (1.0 + potential_sup * potential_sup / mu);
    InequalityCheck {
        lhs,
        rhs,
        ok: lhs <= rhs,
    }
}

/// Compares the trapezoid average of `f(s) = |b1 e^{iν1 s} + b2 e^{iν2 s}|²`
/// over `[t, t + r]` with its exact mean.
///
/// The inequality `lhs ≤ rhs` is guaranteed when `|ν2 - ν1| (2t + r) ≤ π`
/// and `b1 b̄2` is real and nonnegative; for other phases it can fail and
/// `ok` reports that honestly.
pub fn trapezoid_lemma_check(
    nu1: f64,
    nu2: f64,
    b1: Complex64,
    b2: Complex64,
    t: f64,
    r: f64,
) -> Result<InequalityCheck> {
    if !(r > 0.0) || !(t >= 0.0) {
        return Err(Error::invalid(format!(
            "need r > 0 and t >= 0, got t={t}, r={r}"
        )));
    }
    let zeta = nu1 - nu2;
    let bound = std::f64::consts::PI / (2.0 * t + r);
    if zeta.abs() > bound * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "frequency separation {} exceeds π/(2t + r) = {bound}",
            zeta.abs()
        )));
    }
    let f = |s: f64| (b1 * Complex64::cis(nu1 * s) + b2 * Complex64::cis(nu2 * s)).norm_sqr();
    let lhs = 0.5 * (f(t) + f(t + r));

    // f(s) = |b1|² + |b2|² + 2 Re(b1 b̄2 e^{iζs}).
    let cross = b1 * b2.conj();
    let mean_phase = if (zeta * r).abs() < 1e-8 {
        Complex64::cis(zeta * (t + 0.5 * r))
    } else {
        (Complex64::cis(zeta * (t + r)) - Complex64::cis(zeta * t)) / (Complex64::i() * zeta * r)
    };
    let rhs = b1.norm_sqr() + b2.norm_sqr() + 2.0 * (cross * mean_phase).re;
    Ok(InequalityCheck {
        lhs,
        rhs,
        ok: lhs <= rhs + 1e-12,
    })
}
