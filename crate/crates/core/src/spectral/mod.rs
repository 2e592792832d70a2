//! Generalized eigenproblem `(K + L) ψ = μ M ψ`, spectral gap, modal
//! observability and the auxiliary inequalities used in the uniform
//! observability argument.

pub mod eigen;
pub mod fourier;
pub mod lemmas;

pub use eigen::{generalized_eigen, EigenPair, Spectrum, MAX_DENSE_N};
pub use fourier::FourierExpansion;
pub use lemmas::{
    direct_inequality_check, mode_observability, mode_observability_first_term,
    trapezoid_lemma_check, InequalityCheck, DIRECT_INEQUALITY_C0,
};
