//! Empirical boundary observability: quotients, modal Gramians, worst-case
//! searches, mesh sweeps and the nonharmonic Fourier sum.

pub mod gramian;
pub mod ingham;
pub mod quotient;
pub mod report;
pub mod strategy;

pub use gramian::ModalGramian;
pub use ingham::{ingham_sum_check, InghamCheck, IntegralRule};
pub use quotient::{default_quotient_dt, observability_quotient, QuotientTerms};
pub use report::{
    min_quotient, observability_sweep, ObservabilityRecord, ObservabilityReport, SweepOptions,
};
pub use strategy::{strategies, Witness, WorstCaseSearch};
