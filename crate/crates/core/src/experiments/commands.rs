//! The workflow behind each command: read a validated configuration, run,
//! write CSV files under `cfg.out`.

use std::path::{Path, PathBuf};

use super::config::RunConfig;
use super::preset::{presets, run_and_write};
use crate::error::{Error, Result};
use crate::fem::{assemble, potentials, sources, Grid, OperatorSet};
use crate::inverse::{
    discretize_initial_data, discretize_source, fine_mesh_size, reconstruct,
    synthesize_observation, InitialDataSpec, InverseSetup, ReconstructOptions,
};
use crate::observability::{observability_sweep, SweepOptions};
use crate::output::{fmt_f64, write_csv};
use crate::spectral::{generalized_eigen, MAX_DENSE_N};
use crate::wave::{boundary_trace, energy, integrate, intensities, Forcing, TimeGrid};

/// What a command produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    /// Human-readable result lines.
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
    /// False when some minimization stopped at its iteration cap.
    pub converged: bool,
}

impl RunSummary {
    fn new() -> Self {
        Self {
            converged: true,
            ..Self::default()
        }
    }
}

fn out_dir(cfg: &RunConfig) -> Result<&Path> {
    std::fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    Ok(&cfg.out)
}

fn operators(cfg: &RunConfig, n: usize) -> Result<OperatorSet> {
    assemble(Grid::new(n)?, potentials().build(&cfg.potential)?)
}

fn initial_data(cfg: &RunConfig) -> Result<Option<InitialDataSpec>> {
    if cfg.initial_displacement.is_none() && cfg.initial_velocity.is_none() {
        return Ok(None);
    }
    let pick = |s: &Option<String>| sources().build(s.as_deref().unwrap_or("zero"));
    Ok(Some(InitialDataSpec {
        w0: pick(&cfg.initial_displacement)?,
        w1: pick(&cfg.initial_velocity)?,
    }))
}

/// One Newmark run. Writes `energy.csv` (`t,energy,bound_ratio`, the ratio
/// being `E(t) / (E(0) + ∫₀ᵀ ‖λ F‖²_M)`) and `trace.csv` (`t,y1,y2`).
pub fn run_forward(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let ops = operators(cfg, cfg.n)?;
    let grid = TimeGrid::covering(cfg.t_final, cfg.time_step(ops.h()))?;
    let (w0, w1) = match initial_data(cfg)? {
        Some(spec) => discretize_initial_data(&spec, &ops)?,
        None => (vec![0.0; ops.n()], vec![0.0; ops.n()]),
    };
    let intensity = intensities().build(&cfg.intensity)?;
    let shape = discretize_source(sources().build(&cfg.source)?.as_ref(), &ops)?;
    let shape_norm_sq = ops.m_inner(&shape, &shape);
    let forcing = Forcing::new(shape, intensity.clone());
    let traj = integrate(&ops, &w0, &w1, Some(&forcing), grid)?;

    let lambda_sq: Vec<f64> = grid
        .times()
        .iter()
        .map(|&t| intensity.eval(t).powi(2))
        .collect();
    let forcing_integral = crate::wave::trapezoid_weights(grid.samples(), grid.dt())
        .iter()
        .zip(&lambda_sq)
        .map(|(w, l)| w * l)
        .sum::<f64>()
        * shape_norm_sq;
    let energies: Vec<f64> = traj.states().iter().map(|s| energy(&ops, s)).collect();
    let budget = energies[0] + forcing_integral;

    let out = out_dir(cfg)?;
    let energy_path = out.join("energy.csv");
    let rows = energies.iter().enumerate().map(|(k, &e)| {
        let ratio = if budget > 0.0 { e / budget } else { 0.0 };
        [fmt_f64(grid.time(k)), fmt_f64(e), fmt_f64(ratio)]
    });
    write_csv(&energy_path, &["t", "energy", "bound_ratio"], rows)?;
    let trace_path = out.join("trace.csv");
    boundary_trace(&ops, &traj).write_csv(&trace_path)?;

    let mut summary = RunSummary::new();
    let peak = energies.iter().cloned().fold(0.0, f64::max);
    summary.lines.push(format!(
        "N={} steps={} E(0)={:.6e} max E={:.6e} max bound ratio={:.6e}",
        ops.n(),
        grid.steps(),
        energies[0],
        peak,
        if budget > 0.0 { peak / budget } else { 0.0 },
    ));
    summary.files = vec![energy_path, trace_path];
    Ok(summary)
}

/// Generalized eigenpairs of `(S, M)`; writes `spectrum.csv`.
pub fn run_spectrum(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    if cfg.n > MAX_DENSE_N {
        return Err(Error::invalid(format!(
            "spectrum uses a dense solver and needs N <= {MAX_DENSE_N}, got {}",
            cfg.n
        )));
    }
    let ops = operators(cfg, cfg.n)?;
    let spectrum = generalized_eigen(&ops)?;
    let path = out_dir(cfg)?.join("spectrum.csv");
    spectrum.write_csv(&path)?;
    let mut summary = RunSummary::new();
    summary.lines.push(format!(
        "N={} mu_1={:.10e} mu_N={:.10e} gap={}",
        ops.n(),
        spectrum.pairs()[0].mu,
        spectrum.pairs()[spectrum.len() - 1].mu,
        spectrum
            .spectral_gap()
            .map_or("n/a".into(), |g| format!("{g:.6e}")),
    ));
    summary.files.push(path);
    Ok(summary)
}

/// Worst-case observability quotient over `n_list`; writes
/// `observability.csv`.
pub fn run_observability(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let ns = cfg
        .n_list
        .clone()
        .unwrap_or_else(|| vec![9, 19, 39, 79, 159, 319]);
    if let Some(&n) = ns.iter().find(|&&n| n > MAX_DENSE_N) {
        return Err(Error::invalid(format!(
            "observability uses a dense solver and needs N <= {MAX_DENSE_N}, got {n}"
        )));
    }
    let opts = SweepOptions {
        t_final: cfg.t_final,
        strategy: cfg.strategy.clone(),
        seed: cfg.seed,
        first_term: cfg.first_term,
        dt: cfg.dt,
    };
    let report = observability_sweep(potentials().build(&cfg.potential)?, &ns, &opts)?;
    let path = out_dir(cfg)?.join("observability.csv");
    report.write_csv(&path)?;
    let mut summary = RunSummary::new();
    summary.lines.push(format!(
        "T={} strategy={} min={:.6e} max={:.6e} ratio={:.4}",
        cfg.t_final,
        report.strategy,
        report.kappa_min(),
        report.kappa_max(),
        report.uniformity_ratio()
    ));
    summary.files.push(path);
    Ok(summary)
}

/// Single reconstruction from fine-mesh data; writes `invert.csv` (one
/// table row) and `reconstruction.csv` (`x,value`).
pub fn run_invert(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let ops = operators(cfg, cfg.n)?;
    let h = ops.h();
    let truth = sources().build(&cfg.source)?;
    let setup = InverseSetup::new(
        ops,
        intensities().build(&cfg.intensity)?,
        cfg.t_final,
        cfg.time_step(h),
        initial_data(cfg)?,
    )?;
    let seed = crate::rng::derive_seed(cfg.seed, "invert");
    let n_fine = fine_mesh_size(cfg.n, cfg.fine_factor);
    let data = synthesize_observation(&setup, truth.as_ref(), n_fine, cfg.delta, seed)?;
    let options = ReconstructOptions {
        grad_tol: cfg.grad_tol,
        max_iter: cfg.max_iter,
        minimizer: cfg.minimizer.clone(),
    };
    let rec = reconstruct(&setup, &data.signal, &options)?;
    let err = rec.errors(truth.as_ref(), setup.ops())?;

    let out = out_dir(cfg)?;
    let row = super::preset::TableRow {
        spec: super::preset::RowSpec {
            n: cfg.n,
            t_final: cfg.t_final,
            delta: cfg.delta,
            source: cfg.source.clone(),
            potential: cfg.potential.clone(),
            repeats: 1,
        },
        h,
        l2_error: err.l2_error,
        l2_error_psi: err.l2_error_psi,
        m_error: err.m_error,
        iters: rec.iterations as f64,
        grad_norm: rec.grad_norm,
        j_value: rec.j_value,
        converged: rec.converged,
        f_hat: rec.f_hat.clone(),
        warnings: rec.warnings.clone(),
    };
    let table = out.join("invert.csv");
    super::preset::write_table_csv(&table, std::slice::from_ref(&row))?;
    let profile = out.join("reconstruction.csv");
    rec.write_profile_csv(setup.ops().grid(), &profile)?;

    let mut summary = RunSummary::new();
    summary.converged = rec.converged;
    summary.warnings = rec.warnings;
    summary.lines.push(format!(
        "N={} T={} delta={} minimizer={} iters={} grad_norm={:.3e} l2_error={:.6e} m_error={:.6e}",
        cfg.n,
        cfg.t_final,
        cfg.delta,
        rec.minimizer,
        rec.iterations,
        rec.grad_norm,
        err.l2_error,
        err.m_error
    ));
    summary.files = vec![table, profile];
    Ok(summary)
}

/// Runs the preset registered as `name`; writes `<name>.csv`.
pub fn run_preset(name: &str, cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let preset = presets().build(name)?;
    let out = out_dir(cfg)?.to_path_buf();
    let (rows, files) = run_and_write(preset.as_ref(), cfg, &out)?;
    let mut summary = RunSummary::new();
    for row in &rows {
        summary.converged &= row.converged;
        summary.warnings.extend(row.warnings.iter().cloned());
        summary.lines.push(format!(
            "h={:.4e} T={} delta={} source={} potential={} l2_error={:.4e} iters={}",
            row.h,
            row.spec.t_final,
            row.spec.delta,
            row.spec.source,
            row.spec.potential,
            row.l2_error,
            row.iters
        ));
    }
    summary.files = files;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dir: &Path) -> RunConfig {
        RunConfig {
            n: 9,
            out: dir.to_path_buf(),
            ..RunConfig::default()
        }
    }

    #[test]
    fn forward_writes_energy_and_trace() {
        let dir = tempfile::tempdir().unwrap();
        let s = run_forward(&cfg(dir.path())).unwrap();
        assert_eq!(s.files.len(), 2);
        let energy = std::fs::read_to_string(&s.files[0]).unwrap();
        assert!(energy.starts_with("t,energy,bound_ratio\n"));
        // h = 0.1, dt = h, T = 3: 31 samples
        assert_eq!(energy.lines().count(), 32);
        let trace = std::fs::read_to_string(&s.files[1]).unwrap();
        assert!(trace.starts_with("t,y1,y2\n"));
    }

    #[test]
    fn homogeneous_forward_conserves_energy() {
        let dir = tempfile::tempdir().unwrap();
        let c = RunConfig {
            source: "zero".into(),
            initial_displacement: Some("sine:2".into()),
            ..cfg(dir.path())
        };
        let s = run_forward(&c).unwrap();
        let text = std::fs::read_to_string(&s.files[0]).unwrap();
        let e: Vec<f64> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert!(e[0] > 0.0);
        assert!(e.iter().all(|x| ((x - e[0]) / e[0]).abs() < 1e-12));
    }

    #[test]
    fn spectrum_rejects_large_n() {
        let dir = tempfile::tempdir().unwrap();
        let c = RunConfig {
            n: MAX_DENSE_N + 1,
            ..cfg(dir.path())
        };
        assert!(matches!(run_spectrum(&c), Err(Error::InvalidArgument(_))));
        let s = run_spectrum(&cfg(dir.path())).unwrap();
        let text = std::fs::read_to_string(&s.files[0]).unwrap();
        assert_eq!(text.lines().count(), 10);
    }

    #[test]
    fn invert_reports_convergence() {
        let dir = tempfile::tempdir().unwrap();
        let s = run_invert(&cfg(dir.path())).unwrap();
        assert!(s.converged);
        let capped = RunConfig {
            max_iter: Some(1),
            ..cfg(dir.path())
        };
        assert!(!run_invert(&capped).unwrap().converged);
    }

    #[test]
    fn observability_small_sweep() {
        let dir = tempfile::tempdir().unwrap();
        let c = RunConfig {
            n_list: Some(vec![9, 19]),
            first_term: true,
            ..cfg(dir.path())
        };
        let s = run_observability(&c).unwrap();
        let text = std::fs::read_to_string(&s.files[0]).unwrap();
        assert!(
            text.starts_with("N,h,T,strategy,quotient,witness_mode_indices,first_term_top_mode\n")
        );
    }
}
