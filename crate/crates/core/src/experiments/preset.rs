//! Reconstruction tables: named presets that expand a configuration into
//! independent rows, run them in parallel and write one CSV.

use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::config::RunConfig;
use crate::error::{Error, Result};
use crate::fem::{assemble, potentials, sources, Grid};
use crate::inverse::{
    fine_mesh_size, reconstruct, synthesize_observation, write_profile_csv, InverseSetup,
    ReconstructOptions,
};
use crate::output::{fmt_f64, write_csv};
use crate::registry::Registry;
use crate::rng::derive_seed;
use crate::wave::intensities;

/// One reconstruction row before it is run.
#[derive(Debug, Clone, PartialEq)]
pub struct RowSpec {
    pub n: usize,
    pub t_final: f64,
    pub delta: f64,
    pub source: String,
    pub potential: String,
    /// Noisy rows average the errors over this many seeds.
    pub repeats: usize,
}

impl RowSpec {
    /// Stable label; it also selects the row's random streams.
    pub fn label(&self, preset: &str) -> String {
        format!(
            "{preset}/N={}/T={}/delta={}/source={}/potential={}",
            self.n, self.t_final, self.delta, self.source, self.potential
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub spec: RowSpec,
    pub h: f64,
    pub l2_error: f64,
    pub l2_error_psi: f64,
    pub m_error: f64,
    /// Mean over repeats.
    pub iters: f64,
    /// Largest final gradient norm over repeats.
    pub grad_norm: f64,
    pub j_value: f64,
    pub converged: bool,
    /// Reconstruction of the first repeat.
    pub f_hat: Vec<f64>,
    pub warnings: Vec<String>,
}

pub const TABLE_HEADER: [&str; 12] = [
    "h",
    "T",
    "delta",
    "source",
    "potential",
    "l2_error",
    "m_error",
    "iters",
    "grad_norm",
    "J",
    "l2_error_psi",
    "converged",
];

impl TableRow {
    fn record(&self) -> Vec<String> {
        vec![
            fmt_f64(self.h),
            fmt_f64(self.spec.t_final),
            fmt_f64(self.spec.delta),
            self.spec.source.clone(),
            self.spec.potential.clone(),
            fmt_f64(self.l2_error),
            fmt_f64(self.m_error),
            format!("{}", self.iters),
            fmt_f64(self.grad_norm),
            fmt_f64(self.j_value),
            fmt_f64(self.l2_error_psi),
            self.converged.to_string(),
        ]
    }

    /// File name of this row's `x,value` profile.
    pub fn profile_file_name(&self) -> String {
        format!(
            "profile_{}_{}_N{}_T{}_delta{}.csv",
            self.spec.source, self.spec.potential, self.spec.n, self.spec.t_final, self.spec.delta
        )
        .replace(':', "-")
    }
}

pub fn write_table_csv(path: &Path, rows: &[TableRow]) -> Result<()> {
    write_csv(path, &TABLE_HEADER, rows.iter().map(TableRow::record))
}

/// A named experiment.
pub trait Preset: Send + Sync {
    fn name(&self) -> &'static str;
    fn rows(&self, cfg: &RunConfig) -> Vec<RowSpec>;
    /// Whether an `x,value` profile is written for every row.
    fn writes_profiles(&self) -> bool {
        false
    }
}

fn meshes(cfg: &RunConfig) -> Vec<usize> {
    cfg.n_list.clone().unwrap_or_else(|| {
        let mut ns = vec![9, 99];
        if cfg.include_finest {
            ns.push(999);
        }
        ns
    })
}

fn clean_rows(cfg: &RunConfig, potential: &str) -> Vec<RowSpec> {
    ["f-discontinuous", "g-smooth"]
        .iter()
        .flat_map(|source| {
            meshes(cfg).into_iter().map(move |n| RowSpec {
                n,
                t_final: cfg.t_final,
                delta: 0.0,
                source: source.to_string(),
                potential: potential.to_string(),
                repeats: 1,
            })
        })
        .collect()
}

struct CleanTable {
    name: &'static str,
    potential: &'static str,
}

impl Preset for CleanTable {
    fn name(&self) -> &'static str {
        self.name
    }

    fn rows(&self, cfg: &RunConfig) -> Vec<RowSpec> {
        clean_rows(cfg, self.potential)
    }
}

struct NoiseTable;

impl Preset for NoiseTable {
    fn name(&self) -> &'static str {
        "table2"
    }

    fn rows(&self, cfg: &RunConfig) -> Vec<RowSpec> {
        let deltas = cfg.deltas.clone().unwrap_or_else(|| vec![0.05, 0.10, 0.25]);
        meshes(cfg)
            .into_iter()
            .flat_map(|n| {
                deltas.iter().map(move |&delta| RowSpec {
                    n,
                    t_final: cfg.t_final,
                    delta,
                    source: "f-discontinuous".into(),
                    potential: "smooth-sine".into(),
                    repeats: cfg.repeats,
                })
            })
            .collect()
    }
}

struct TimeSweep;

impl Preset for TimeSweep {
    fn name(&self) -> &'static str {
        "time-sweep"
    }

    fn rows(&self, cfg: &RunConfig) -> Vec<RowSpec> {
        let times = cfg
            .t_list
            .clone()
            .unwrap_or_else(|| vec![2.0, 2.25, 2.5, 3.0]);
        let n = cfg
            .n_list
            .as_ref()
            .and_then(|ns| ns.first().copied())
            .unwrap_or(99);
        times
            .into_iter()
            .map(|t_final| RowSpec {
                n,
                t_final,
                delta: 0.0,
                source: "g-smooth".into(),
                potential: "smooth-sine".into(),
                repeats: 1,
            })
            .collect()
    }

    fn writes_profiles(&self) -> bool {
        true
    }
}

fn shared<P: Preset + 'static>(p: P) -> Result<Arc<dyn Preset>> {
    Ok(Arc::new(p))
}

/// Presets selectable by name.
pub fn presets() -> &'static Registry<dyn Preset> {
    static REG: OnceLock<Registry<dyn Preset>> = OnceLock::new();
    REG.get_or_init(|| {
        Registry::new("preset")
            .with(
                "table1",
                "smooth-sine potential, sources f and g, clean data",
                |_| {
                    shared(CleanTable {
                        name: "table1",
                        potential: "smooth-sine",
                    })
                },
            )
            .with(
                "table2",
                "smooth-sine potential, source f, noisy data",
                |_| shared(NoiseTable),
            )
            .with(
                "table3",
                "discontinuous-step potential, sources f and g",
                |_| {
                    shared(CleanTable {
                        name: "table3",
                        potential: "discontinuous-step",
                    })
                },
            )
            .with(
                "time-sweep",
                "source g, smooth-sine potential, T in {2, 2.25, 2.5, 3}",
                |_| shared(TimeSweep),
            )
    })
}

/// Synthesizes data on the finer mesh, reconstructs and measures the error,
/// averaging over `repeats` noise draws.
pub fn run_row(preset: &str, spec: &RowSpec, cfg: &RunConfig) -> Result<TableRow> {
    let ops = assemble(Grid::new(spec.n)?, potentials().build(&spec.potential)?)?;
    let h = ops.h();
    let truth = sources().build(&spec.source)?;
    let setup = InverseSetup::new(
        ops,
        intensities().build(&cfg.intensity)?,
        spec.t_final,
        cfg.time_step(h),
        None,
    )?;
    let options = ReconstructOptions {
        grad_tol: cfg.grad_tol,
        max_iter: cfg.max_iter,
        minimizer: cfg.minimizer.clone(),
    };
    let n_fine = fine_mesh_size(spec.n, cfg.fine_factor);
    let repeats = if spec.delta > 0.0 {
        spec.repeats.max(1)
    } else {
        1
    };
    let label = spec.label(preset);

    let mut row = TableRow {
        spec: spec.clone(),
        h,
        l2_error: 0.0,
        l2_error_psi: 0.0,
        m_error: 0.0,
        iters: 0.0,
        grad_norm: 0.0,
        j_value: 0.0,
        converged: true,
        f_hat: Vec::new(),
        warnings: Vec::new(),
    };
    for r in 0..repeats {
        let seed = derive_seed(cfg.seed, &format!("{label}/repeat={r}"));
        let data = synthesize_observation(&setup, truth.as_ref(), n_fine, spec.delta, seed)?;
        let rec = reconstruct(&setup, &data.signal, &options)?;
        let err = rec.errors(truth.as_ref(), setup.ops())?;
        row.l2_error += err.l2_error;
        row.l2_error_psi += err.l2_error_psi;
        row.m_error += err.m_error;
        row.iters += rec.iterations as f64;
        row.j_value += rec.j_value;
        row.grad_norm = row.grad_norm.max(rec.grad_norm);
        row.converged &= rec.converged;
        row.warnings.extend(rec.warnings);
        if r == 0 {
            row.f_hat = rec.f_hat;
        }
    }
    let k = repeats as f64;
    row.l2_error /= k;
    row.l2_error_psi /= k;
    row.m_error /= k;
    row.iters /= k;
    row.j_value /= k;
    row.warnings.dedup();
    Ok(row)
}

/// Rows of `preset` in parallel, in preset order.
pub fn run_rows(preset: &dyn Preset, cfg: &RunConfig) -> Result<Vec<TableRow>> {
    let specs = preset.rows(cfg);
    if specs.is_empty() {
        return Err(Error::invalid(format!(
            "preset {} produced no rows",
            preset.name()
        )));
    }
    specs
        .par_iter()
        .map(|s| run_row(preset.name(), s, cfg))
        .collect()
}

/// Runs `preset` and writes `<out>/<name>.csv` plus optional profiles.
/// Returns the rows and every file written.
pub fn run_and_write(
    preset: &dyn Preset,
    cfg: &RunConfig,
    out: &Path,
) -> Result<(Vec<TableRow>, Vec<PathBuf>)> {
    let rows = run_rows(preset, cfg)?;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let table = out.join(format!("{}.csv", preset.name()));
    write_table_csv(&table, &rows)?;
    let mut files = vec![table];
    if preset.writes_profiles() {
        for row in &rows {
            let path = out.join(row.profile_file_name());
            write_profile_csv(&Grid::new(row.spec.n)?, &row.f_hat, &path)?;
            files.push(path);
        }
    }
    Ok((rows, files))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RunConfig {
        RunConfig {
            n_list: Some(vec![9]),
            ..RunConfig::default()
        }
    }

    #[test]
    fn registry_lists_all_presets() {
        let names: Vec<_> = presets().names().collect();
        assert_eq!(names, ["table1", "table2", "table3", "time-sweep"]);
    }

    #[test]
    fn row_layouts() {
        let cfg = RunConfig::default();
        let t1 = presets().build("table1").unwrap().rows(&cfg);
        assert_eq!(t1.len(), 4);
        assert!(t1
            .iter()
            .all(|r| r.potential == "smooth-sine" && r.delta == 0.0));
        let finest = RunConfig {
            include_finest: true,
            ..cfg.clone()
        };
        assert_eq!(presets().build("table3").unwrap().rows(&finest).len(), 6);
        let t2 = presets().build("table2").unwrap().rows(&cfg);
        assert_eq!(t2.len(), 6);
        assert!(t2
            .iter()
            .all(|r| r.repeats == 5 && r.source == "f-discontinuous"));
        let ts = presets().build("time-sweep").unwrap().rows(&cfg);
        let times: Vec<f64> = ts.iter().map(|r| r.t_final).collect();
        assert_eq!(times, [2.0, 2.25, 2.5, 3.0]);
    }

    #[test]
    fn rows_are_deterministic() {
        let cfg = RunConfig {
            deltas: Some(vec![0.1]),
            repeats: 2,
            ..small()
        };
        let preset = presets().build("table2").unwrap();
        let a = run_rows(preset.as_ref(), &cfg).unwrap();
        let b = run_rows(preset.as_ref(), &cfg).unwrap();
        assert_eq!(a, b);
        let other = run_rows(preset.as_ref(), &RunConfig { seed: 1, ..cfg }).unwrap();
        assert_ne!(a[0].l2_error, other[0].l2_error);
    }

    #[test]
    fn table_csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            t_list: Some(vec![3.0]),
            ..small()
        };
        let preset = presets().build("time-sweep").unwrap();
        let (rows, files) = run_and_write(preset.as_ref(), &cfg, dir.path()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(files.len(), 2);
        let text = std::fs::read_to_string(&files[0]).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "h,T,delta,source,potential,l2_error,m_error,iters,grad_norm,J,l2_error_psi,converged"
        );
        assert_eq!(lines.count(), 1);
        let profile = std::fs::read_to_string(&files[1]).unwrap();
        assert!(profile.starts_with("x,value\n"));
        assert_eq!(profile.lines().count(), 11);
    }
}
