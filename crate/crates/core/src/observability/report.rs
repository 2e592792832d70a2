//! Worst-case quotients per mesh and their uniformity across a sweep.

use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;

use super::gramian::ModalGramian;
use super::quotient::default_quotient_dt;
use super::strategy::{strategies, Witness, WorstCaseSearch};
use crate::error::Result;
use crate::fem::{assemble, Grid, OperatorSet, Profile};
use crate::output::{fmt_f64, write_csv};
use crate::spectral::generalized_eigen;
use crate::wave::TimeGrid;

/// Minimizes the observability quotient over data of `ops` with `strategy`.
pub fn min_quotient(
    ops: &OperatorSet,
    t_final: f64,
    dt: f64,
    strategy: &dyn WorstCaseSearch,
    seed: u64,
) -> Result<Witness> {
    let gram = gramian(ops, t_final, dt)?;
    Ok(strategy.search(&gram, seed))
}

fn gramian(ops: &OperatorSet, t_final: f64, dt: f64) -> Result<ModalGramian> {
    let spectrum = generalized_eigen(ops)?;
    Ok(ModalGramian::new(
        &spectrum,
        TimeGrid::covering(t_final, dt)?,
    ))
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub t_final: f64,
    pub strategy: String,
    pub seed: u64,
    /// Also report the first-term-only quotient of the highest mode.
    pub first_term: bool,
    /// Overrides `min(h, T/3000)`.
    pub dt: Option<f64>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            t_final: 3.0,
            strategy: "gramian".into(),
            seed: 0,
            first_term: false,
            dt: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservabilityRecord {
    pub n: usize,
    pub h: f64,
    pub quotient: f64,
    pub witness_modes: String,
    pub first_term_top_mode: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ObservabilityReport {
    pub t_final: f64,
    pub strategy: String,
    pub potential: String,
    pub records: Vec<ObservabilityRecord>,
}

/// Runs `min_quotient` for every `N` in `ns` (in parallel).
pub fn observability_sweep(
    potential: Arc<dyn Profile>,
    ns: &[usize],
    opts: &SweepOptions,
) -> Result<ObservabilityReport> {
    let strategy = strategies().build(&opts.strategy)?;
    let mut records = ns
        .par_iter()
        .map(|&n| {
            let ops = assemble(Grid::new(n)?, potential.clone())?;
            let dt = opts
                .dt
                .unwrap_or_else(|| default_quotient_dt(ops.h(), opts.t_final));
            let gram = gramian(&ops, opts.t_final, dt)?;
            let w = strategy.search(&gram, opts.seed);
            Ok(ObservabilityRecord {
                n,
                h: ops.h(),
                quotient: w.quotient,
                witness_modes: w.mode_label(),
                first_term_top_mode: opts
                    .first_term
                    .then(|| gram.first_term_mode_minimum(gram.modes())),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| r.n);
    Ok(ObservabilityReport {
        t_final: opts.t_final,
        strategy: strategy.name(),
        potential: potential.label(),
        records,
    })
}

impl ObservabilityReport {
    pub fn kappa_min(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.quotient)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn kappa_max(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.quotient)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max κ̂₀ / min κ̂₀` across the sweep.
    pub fn uniformity_ratio(&self) -> f64 {
        self.kappa_max() / self.kappa_min()
    }

    /// Header `N,h,T,strategy,quotient,witness_mode_indices`, plus
    /// `first_term_top_mode` when that column was requested.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let with_first = self.records.iter().any(|r| r.first_term_top_mode.is_some());
        let mut header = vec![
            "N",
            "h",
            "T",
            "strategy",
            "quotient",
            "witness_mode_indices",
        ];
        if with_first {
            header.push("first_term_top_mode");
        }
        let rows = self.records.iter().map(|r| {
            let mut row = vec![
                r.n.to_string(),
                fmt_f64(r.h),
                fmt_f64(self.t_final),
                self.strategy.clone(),
                fmt_f64(r.quotient),
                r.witness_modes.clone(),
            ];
            if with_first {
                row.push(r.first_term_top_mode.map(fmt_f64).unwrap_or_default());
            }
            row
        });
        write_csv(path, &header, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::potentials;

    #[test]
    fn single_record_sweep() {
        let rep = observability_sweep(
            potentials().build("zero").unwrap(),
            &[9],
            &SweepOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.records.len(), 1);
        assert!(rep.kappa_min() > 0.0);
        assert_eq!(rep.uniformity_ratio(), 1.0);
    }

    #[test]
    fn first_term_decays_for_top_mode() {
        let opts = SweepOptions {
            first_term: true,
            ..SweepOptions::default()
        };
        let rep = observability_sweep(
            potentials().build("smooth-sine").unwrap(),
            &[9, 19, 39, 79],
            &opts,
        )
        .unwrap();
        let v: Vec<f64> = rep
            .records
            .iter()
            .map(|r| r.first_term_top_mode.unwrap())
            .collect();
        for w in v.windows(2) {
            assert!(w[1] < w[0], "{v:?}");
        }
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("obs.csv");
        rep.write_csv(&p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(
            text.starts_with("N,h,T,strategy,quotient,witness_mode_indices,first_term_top_mode\n")
        );
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn random_data_stay_above_minimum() {
        // 200 seeded random data at N=99 never fall below the exact minimum.
        let ops = assemble(
            Grid::new(99).unwrap(),
            potentials().build("smooth-sine").unwrap(),
        )
        .unwrap();
        let dt = default_quotient_dt(ops.h(), 3.0);
        let g = gramian(&ops, 3.0, dt).unwrap();
        let kappa = strategies()
            .build("gramian")
            .unwrap()
            .search(&g, 0)
            .quotient;
        assert!(kappa > 0.0);
        for seed in 0..200 {
            let w = strategies().build("random:1").unwrap().search(&g, seed);
            assert!(w.quotient >= kappa);
        }
    }
}
