//! Minimizers for quadratic objectives with exact line search.

use std::fmt::Debug;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::registry::Registry;

/// A convex quadratic `J`, accessed through values, gradients and
/// Hessian-vector products.
pub trait QuadraticObjective {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> Result<f64>;
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>>;
    fn hessian_apply(&self, d: &[f64]) -> Result<Vec<f64>>;
    /// Approximate inverse Hessian; identity unless overridden.
    fn precondition(&self, g: &[f64]) -> Result<Vec<f64>> {
        Ok(g.to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    /// Stop once the Euclidean gradient norm is at most this.
    pub grad_tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Norm of the recomputed (not recurred) gradient at `x`.
    pub grad_norm: f64,
    pub converged: bool,
}

pub trait Minimizer: Send + Sync + Debug {
    fn name(&self) -> String;
    fn minimize(
        &self,
        objective: &dyn QuadraticObjective,
        x0: Vec<f64>,
        stop: &StopRule,
    ) -> Result<MinimizeOutcome>;
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Exact step along `d` from gradient `g`; updates `x` and `g` in place.
fn line_step(
    objective: &dyn QuadraticObjective,
    x: &mut [f64],
    g: &mut [f64],
    d: &[f64],
) -> Result<()> {
    let hd = objective.hessian_apply(d)?;
    let curvature = dot(d, &hd);
    if !(curvature > 0.0) {
        return Err(Error::numerical(format!(
            "non-positive curvature {curvature} along search direction"
        )));
    }
    let alpha = -dot(g, d) / curvature;
    for i in 0..x.len() {
        x[i] += alpha * d[i];
        g[i] += alpha * hd[i];
    }
    Ok(())
}

/// Conjugate gradients, optionally preconditioned by the objective.
#[derive(Debug, Clone, Copy)]
pub struct ConjugateGradient {
    pub preconditioned: bool,
}

impl Minimizer for ConjugateGradient {
    fn name(&self) -> String {
        if self.preconditioned {
            "pcg-mass"
        } else {
            "cg"
        }
        .into()
    }

    fn minimize(
        &self,
        objective: &dyn QuadraticObjective,
        mut x: Vec<f64>,
        stop: &StopRule,
    ) -> Result<MinimizeOutcome> {
        let apply_p = |g: &[f64]| -> Result<Vec<f64>> {
            if self.preconditioned {
                objective.precondition(g)
            } else {
                Ok(g.to_vec())
            }
        };
        let mut g = objective.gradient(&x)?;
        let mut z = apply_p(&g)?;
        let mut d: Vec<f64> = z.iter().map(|v| -v).collect();
        let mut rz = dot(&g, &z);
        let mut iterations = 0;
        while iterations < stop.max_iter {
            if norm(&g) <= stop.grad_tol {
                // Recurred gradients drift; confirm before stopping.
                g = objective.gradient(&x)?;
                if norm(&g) <= stop.grad_tol {
                    break;
                }
                z = apply_p(&g)?;
                d = z.iter().map(|v| -v).collect();
                rz = dot(&g, &z);
            }
            line_step(objective, &mut x, &mut g, &d)?;
            iterations += 1;
            z = apply_p(&g)?;
            let rz_new = dot(&g, &z);
            let beta = rz_new / rz;
            for i in 0..d.len() {
                d[i] = -z[i] + beta * d[i];
            }
            rz = rz_new;
        }
        let grad_norm = norm(&objective.gradient(&x)?);
        Ok(MinimizeOutcome {
            x,
            iterations,
            grad_norm,
            converged: grad_norm <= stop.grad_tol,
        })
    }
}

/// Steepest descent with exact line search.
#[derive(Debug, Clone, Copy)]
pub struct SteepestDescent;

impl Minimizer for SteepestDescent {
    fn name(&self) -> String {
        "steepest-descent".into()
    }

    fn minimize(
        &self,
        objective: &dyn QuadraticObjective,
        mut x: Vec<f64>,
        stop: &StopRule,
    ) -> Result<MinimizeOutcome> {
        let mut g = objective.gradient(&x)?;
        let mut iterations = 0;
        while iterations < stop.max_iter {
            if norm(&g) <= stop.grad_tol {
                g = objective.gradient(&x)?;
                if norm(&g) <= stop.grad_tol {
                    break;
                }
            }
            let d: Vec<f64> = g.iter().map(|v| -v).collect();
            line_step(objective, &mut x, &mut g, &d)?;
            iterations += 1;
        }
        let grad_norm = norm(&objective.gradient(&x)?);
        Ok(MinimizeOutcome {
            x,
            iterations,
            grad_norm,
            converged: grad_norm <= stop.grad_tol,
        })
    }
}

pub fn minimizers() -> &'static Registry<dyn Minimizer> {
    static REG: OnceLock<Registry<dyn Minimizer>> = OnceLock::new();
    REG.get_or_init(|| {
        Registry::new("minimizer")
            .with("cg", "conjugate gradients in Euclidean coordinates", |_| {
                Ok(Arc::new(ConjugateGradient {
                    preconditioned: false,
                }) as Arc<dyn Minimizer>)
            })
            .with(
                "pcg-mass",
                "conjugate gradients preconditioned by the mass matrix",
                |_| {
                    Ok(Arc::new(ConjugateGradient {
                        preconditioned: true,
                    }) as Arc<dyn Minimizer>)
                },
            )
            .with(
                "steepest-descent",
                "gradient descent with exact line search",
                |_| Ok(Arc::new(SteepestDescent) as Arc<dyn Minimizer>),
            )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `½ xᵀ A x - bᵀ x` with a diagonal `A`.
    struct Diagonal {
        a: Vec<f64>,
        b: Vec<f64>,
    }

    impl QuadraticObjective for Diagonal {
        fn dim(&self) -> usize {
            self.a.len()
        }
        fn value(&self, x: &[f64]) -> Result<f64> {
            Ok((0..x.len())
                .map(|i| 0.5 * self.a[i] * x[i] * x[i] - self.b[i] * x[i])
                .sum())
        }
        fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
            Ok((0..x.len()).map(|i| self.a[i] * x[i] - self.b[i]).collect())
        }
        fn hessian_apply(&self, d: &[f64]) -> Result<Vec<f64>> {
            Ok((0..d.len()).map(|i| self.a[i] * d[i]).collect())
        }
        fn precondition(&self, g: &[f64]) -> Result<Vec<f64>> {
            Ok((0..g.len()).map(|i| g[i] / self.a[i]).collect())
        }
    }

    fn problem() -> Diagonal {
        Diagonal {
            a: (1..=20).map(|i| i as f64 * i as f64).collect(),
            b: (1..=20).map(|i| (i as f64).sin()).collect(),
        }
    }

    #[test]
    fn all_minimizers_reach_solution() {
        let p = problem();
        let stop = StopRule {
            grad_tol: 1e-10,
            max_iter: 100_000,
        };
        for name in ["cg", "pcg-mass", "steepest-descent"] {
            let out = minimizers()
                .build(name)
                .unwrap()
                .minimize(&p, vec![0.0; 20], &stop)
                .unwrap();
            assert!(out.converged, "{name}");
            for i in 0..20 {
                assert!((out.x[i] - p.b[i] / p.a[i]).abs() < 1e-10, "{name}");
            }
        }
    }

    #[test]
    fn cg_terminates_in_dim_steps() {
        let p = problem();
        let stop = StopRule {
            grad_tol: 1e-9,
            max_iter: 1000,
        };
        let out = minimizers()
            .build("cg")
            .unwrap()
            .minimize(&p, vec![0.0; 20], &stop)
            .unwrap();
        assert!(out.iterations <= 25, "{}", out.iterations);
        let out = minimizers()
            .build("pcg-mass")
            .unwrap()
            .minimize(&p, vec![0.0; 20], &stop)
            .unwrap();
        assert!(out.iterations <= 2);
    }

    #[test]
    fn iteration_cap_flags_non_convergence() {
        let p = problem();
        let stop = StopRule {
            grad_tol: 1e-12,
            max_iter: 3,
        };
        let out = minimizers()
            .build("steepest-descent")
            .unwrap()
            .minimize(&p, vec![0.0; 20], &stop)
            .unwrap();
        assert!(!out.converged);
        assert_eq!(out.iterations, 3);
    }
}
