//! Synthetic boundary data from a finer mesh, optionally with noise.

use super::functional::ForwardMap;
use super::setup::{discretize_source, InverseSetup};
use crate::error::{Error, Result};
use crate::fem::{assemble, Grid, Profile};
use crate::rng::{standard_normals, stream};
use crate::wave::ObservationSignal;

/// `factor (N + 1) - 1`: the mesh with `h / factor`.
pub fn fine_mesh_size(n: usize, factor: usize) -> usize {
    factor * (n + 1) - 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticObservation {
    pub signal: ObservationSignal,
    /// Mesh the data came from; equal to `N` only for same-mesh data.
    pub n_fine: usize,
    pub delta: f64,
    pub seed: u64,
}

impl SyntheticObservation {
    /// Both components of `Y_h(F)` on the inversion mesh itself. This is the
    /// inverse crime and is only meant for identifiability checks.
    pub fn same_mesh(setup: &InverseSetup, f: &[f64]) -> Result<Self> {
        Ok(Self {
            signal: ForwardMap::new(setup)?.observe(f)?,
            n_fine: setup.n(),
            delta: 0.0,
            seed: 0,
        })
    }
}

/// Solves the forward problem for `f_true` on a mesh with `n_fine` interior
/// nodes, keeps the first observation component (the second is zero for the
/// continuous observation), resamples it linearly onto the time grid of
/// `setup` and, for `delta > 0`, multiplies each sample by `1 + δζ_k` with
/// independent standard normal `ζ_k`.
pub fn synthesize_observation(
    setup: &InverseSetup,
    f_true: &dyn Profile,
    n_fine: usize,
    delta: f64,
    seed: u64,
) -> Result<SyntheticObservation> {
    let n = setup.n();
    let minimum = fine_mesh_size(n, 4);
    if n_fine < minimum {
        return Err(Error::invalid(format!(
            "synthesis mesh N={n_fine} is not at least four times finer than N={n} (need >= {minimum})"
        )));
    }
    if !(delta >= 0.0) {
        return Err(Error::invalid(format!(
            "noise level must be nonnegative, got {delta}"
        )));
    }
    let fine_ops = assemble(Grid::new(n_fine)?, setup.ops().potential().clone())?;
    let fine = setup.on_mesh(fine_ops)?;
    let f = discretize_source(f_true, fine.ops())?;
    let y_fine = ForwardMap::new(&fine)?.observe(&f)?;

    let tg = setup.time_grid();
    let mut y1: Vec<f64> = (0..tg.samples())
        .map(|k| interpolate(y_fine.y1(), y_fine.dt(), tg.time(k)))
        .collect();
    if delta > 0.0 {
        let zeta = standard_normals(&mut stream(seed, 0), y1.len());
        for (y, z) in y1.iter_mut().zip(zeta) {
            *y *= 1.0 + delta * z;
        }
    }
    Ok(SyntheticObservation {
        signal: ObservationSignal::new(tg.dt(), y1, vec![0.0; tg.samples()])?,
        n_fine,
        delta,
        seed,
    })
}

fn interpolate(samples: &[f64], dt: f64, t: f64) -> f64 {
    let last = samples.len() - 1;
    let pos = (t / dt).max(0.0);
    let i = (pos.floor() as usize).min(last);
    if i == last {
        return samples[last];
    }
    let frac = pos - i as f64;
    samples[i] + frac * (samples[i + 1] - samples[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{potentials, sources, OperatorSet};
    use crate::wave::intensities;

    fn setup(n: usize) -> InverseSetup {
        let ops: OperatorSet = assemble(
            Grid::new(n).unwrap(),
            potentials().build("smooth-sine").unwrap(),
        )
        .unwrap();
        let h = ops.h();
        InverseSetup::new(ops, intensities().build("constant").unwrap(), 3.0, h, None).unwrap()
    }

    #[test]
    fn zero_source_zero_data() {
        let s = setup(9);
        let y = synthesize_observation(&s, sources().build("zero").unwrap().as_ref(), 39, 0.1, 1)
            .unwrap();
        assert!(y.signal.y1().iter().chain(y.signal.y2()).all(|v| *v == 0.0));
    }

    #[test]
    fn inverse_crime_guard() {
        let s = setup(9);
        let f = sources().build("g-smooth").unwrap();
        assert!(synthesize_observation(&s, f.as_ref(), 38, 0.0, 1).is_err());
        assert!(synthesize_observation(&s, f.as_ref(), 9, 0.0, 1).is_err());
        assert!(synthesize_observation(&s, f.as_ref(), 39, -0.1, 1).is_err());
    }

    #[test]
    fn clean_data_ignores_seed() {
        let s = setup(9);
        let f = sources().build("f-discontinuous").unwrap();
        let a = synthesize_observation(&s, f.as_ref(), 39, 0.0, 1).unwrap();
        let b = synthesize_observation(&s, f.as_ref(), 39, 0.0, 2).unwrap();
        assert_eq!(a.signal, b.signal);
        assert!(a.signal.y2().iter().all(|v| *v == 0.0));
        assert_eq!(a.signal.len(), s.time_grid().samples());
    }

    #[test]
    fn noise_has_requested_level() {
        let s = setup(99);
        let f = sources().build("g-smooth").unwrap();
        let clean = synthesize_observation(&s, f.as_ref(), 399, 0.0, 4).unwrap();
        let noisy = synthesize_observation(&s, f.as_ref(), 399, 0.25, 4).unwrap();
        let ratios: Vec<f64> = clean
            .signal
            .y1()
            .iter()
            .zip(noisy.signal.y1())
            .filter(|(c, _)| c.abs() > 1e-3)
            .map(|(c, n)| n / c - 1.0)
            .collect();
        assert!(ratios.len() > 200);
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let std =
            (ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / ratios.len() as f64).sqrt();
        assert!((std / 0.25 - 1.0).abs() < 0.1, "{std}");
    }

    #[test]
    fn interpolation_is_linear() {
        let s = [0.0, 1.0, 4.0];
        assert_eq!(interpolate(&s, 0.5, 0.25), 0.5);
        assert_eq!(interpolate(&s, 0.5, 0.75), 2.5);
        assert_eq!(interpolate(&s, 0.5, 1.0), 4.0);
    }
}
