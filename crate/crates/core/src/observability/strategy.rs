//! Worst-case datum searches over the modal Gramian.

use std::fmt::Debug;
use std::sync::{Arc, OnceLock};

use rand::seq::index::sample;

use super::gramian::{rayleigh, smallest_eigen, ModalGramian};
use crate::error::{Error, Result};
use crate::registry::Registry;
use crate::rng::{standard_normals, stream};

/// Minimizing datum in modal coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub quotient: f64,
    pub coeffs: Vec<f64>,
}

impl Witness {
    fn from_rows(quotient: f64, dim: usize, rows: &[usize], values: &[f64]) -> Self {
        let mut coeffs = vec![0.0; dim];
        for (r, v) in rows.iter().zip(values) {
            coeffs[*r] = *v;
        }
        Self { quotient, coeffs }
    }

    /// 1-based modes carrying at least `share` of the datum's energy.
    pub fn dominant_modes(&self, share: f64) -> Vec<usize> {
        let total: f64 = self.coeffs.iter().map(|c| c * c).sum();
        let mut out: Vec<usize> = self
            .coeffs
            .chunks(2)
            .enumerate()
            .filter(|(_, c)| (c[0] * c[0] + c[1] * c[1]) >= share * total)
            .map(|(m, _)| m + 1)
            .collect();
        out.sort_unstable();
        out
    }

    /// Dominant modes joined by `+`, e.g. `4+5`.
    pub fn mode_label(&self) -> String {
        self.dominant_modes(0.1)
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join("+")
    }
}

pub trait WorstCaseSearch: Send + Sync + Debug {
    fn name(&self) -> String;
    fn search(&self, gram: &ModalGramian, seed: u64) -> Witness;
}

/// Exact minimum: smallest eigenvalue of the Gramian.
#[derive(Debug, Clone, Copy)]
pub struct GramianMinimum;

impl WorstCaseSearch for GramianMinimum {
    fn name(&self) -> String {
        "gramian".into()
    }
    fn search(&self, gram: &ModalGramian, _seed: u64) -> Witness {
        let (q, v) = smallest_eigen(gram.full().clone());
        Witness {
            quotient: q,
            coeffs: v,
        }
    }
}

/// Single modes, adjacent pairs and `random_pairs` random pairs, each
/// minimized exactly over its modal subspace.
#[derive(Debug, Clone, Copy)]
pub struct EigenmodeSearch {
    pub random_pairs: usize,
}

impl EigenmodeSearch {
    fn rows(modes: &[usize]) -> Vec<usize> {
        modes.iter().flat_map(|m| [2 * m, 2 * m + 1]).collect()
    }
}

impl WorstCaseSearch for EigenmodeSearch {
    fn name(&self) -> String {
        format!("eigenmodes:{}", self.random_pairs)
    }
    fn search(&self, gram: &ModalGramian, seed: u64) -> Witness {
        let n = gram.modes();
        let dim = gram.dim();
        let mut candidates: Vec<Vec<usize>> = (0..n).map(|m| vec![m]).collect();
        candidates.extend((1..n).map(|m| vec![m - 1, m]));
        if n >= 2 {
            let mut rng = stream(seed, 0);
            for _ in 0..self.random_pairs {
                let picked = sample(&mut rng, n, 2);
                candidates.push(vec![picked.index(0), picked.index(1)]);
            }
        }
        let mut best: Option<Witness> = None;
        for modes in candidates {
            let rows = Self::rows(&modes);
            let (q, v) = ModalGramian::restricted_minimum(gram.full(), &rows);
            if best.as_ref().is_none_or(|b| q < b.quotient) {
                best = Some(Witness::from_rows(q, dim, &rows, &v));
            }
        }
        best.expect("at least one mode")
    }
}

/// Unit-energy random data with independent normal modal coefficients.
#[derive(Debug, Clone, Copy)]
pub struct RandomSearch {
    pub trials: usize,
}

impl WorstCaseSearch for RandomSearch {
    fn name(&self) -> String {
        format!("random:{}", self.trials)
    }
    fn search(&self, gram: &ModalGramian, seed: u64) -> Witness {
        let mut rng = stream(seed, 1);
        let mut best: Option<Witness> = None;
        for _ in 0..self.trials.max(1) {
            let mut d = standard_normals(&mut rng, gram.dim());
            let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            d.iter_mut().for_each(|x| *x /= norm);
            let q = rayleigh(gram.full(), &d);
            if best.as_ref().is_none_or(|b| q < b.quotient) {
                best = Some(Witness {
                    quotient: q,
                    coeffs: d,
                });
            }
        }
        best.expect("at least one trial")
    }
}

/// Projected gradient descent on the unit sphere with an exact
/// two-dimensional Rayleigh–Ritz line search, started from the eigenmode
/// search's witness.
#[derive(Debug, Clone, Copy)]
pub struct RayleighDescent {
    pub max_iter: usize,
}

impl WorstCaseSearch for RayleighDescent {
    fn name(&self) -> String {
        format!("rayleigh:{}", self.max_iter)
    }
    fn search(&self, gram: &ModalGramian, seed: u64) -> Witness {
        let g = gram.full();
        let dim = gram.dim();
        let start = EigenmodeSearch { random_pairs: dim }.search(gram, seed);
        let mut d = start.coeffs;
        let mut q = start.quotient;
        for _ in 0..self.max_iter {
            let gd: Vec<f64> = (0..dim)
                .map(|i| (0..dim).map(|j| g[(i, j)] * d[j]).sum())
                .collect();
            let mut r: Vec<f64> = gd.iter().zip(&d).map(|(a, b)| a - q * b).collect();
            let rn = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if rn <= 1e-13 * q.abs().max(1e-300) {
                break;
            }
            r.iter_mut().for_each(|x| *x /= rn);
            // Ritz pair on span{d, r} (orthonormal).
            let gr: Vec<f64> = (0..dim)
                .map(|i| (0..dim).map(|j| g[(i, j)] * r[j]).sum())
                .collect();
            let a11 = q;
            let a12 = r.iter().zip(&gd).map(|(a, b)| a * b).sum::<f64>();
            let a22 = r.iter().zip(&gr).map(|(a, b)| a * b).sum::<f64>();
            let m = nalgebra::DMatrix::from_row_slice(2, 2, &[a11, a12, a12, a22]);
            let (q_new, v) = smallest_eigen(m);
            if q_new >= q {
                break;
            }
            for i in 0..dim {
                d[i] = v[0] * d[i] + v[1] * r[i];
            }
            let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            d.iter_mut().for_each(|x| *x /= norm);
            q = rayleigh(g, &d);
        }
        Witness {
            quotient: q,
            coeffs: d,
        }
    }
}

fn count_arg(kind: &str, arg: Option<&str>, default: usize) -> Result<usize> {
    match arg {
        None => Ok(default),
        Some(raw) => raw
            .parse::<usize>()
            .map_err(|_| Error::invalid(format!("{kind}: '{raw}' is not a count"))),
    }
}

/// Worst-case searches selectable by name.
pub fn strategies() -> &'static Registry<dyn WorstCaseSearch> {
    static REG: OnceLock<Registry<dyn WorstCaseSearch>> = OnceLock::new();
    REG.get_or_init(|| {
        Registry::new("strategy")
            .with(
                "gramian",
                "exact minimum, smallest Gramian eigenvalue",
                |_| Ok(Arc::new(GramianMinimum) as Arc<dyn WorstCaseSearch>),
            )
            .with(
                "eigenmodes",
                "single modes, adjacent and random pairs  (eigenmodes[:pairs])",
                |arg| {
                    let random_pairs = count_arg("eigenmodes", arg, 64)?;
                    Ok(Arc::new(EigenmodeSearch { random_pairs }) as Arc<dyn WorstCaseSearch>)
                },
            )
            .with(
                "random",
                "random unit-energy data  (random[:trials])",
                |arg| {
                    let trials = count_arg("random", arg, 200)?;
                    Ok(Arc::new(RandomSearch { trials }) as Arc<dyn WorstCaseSearch>)
                },
            )
            .with(
                "rayleigh",
                "projected gradient descent on the quotient  (rayleigh[:iters])",
                |arg| {
                    let max_iter = count_arg("rayleigh", arg, 500)?;
                    Ok(Arc::new(RayleighDescent { max_iter }) as Arc<dyn WorstCaseSearch>)
                },
            )
    })
}
