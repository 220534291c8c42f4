//! Numerical tolerances shared by every module.
//!
//! Majorization verdicts flip on tolerance choices, so all thresholds live in
//! one record. Library entry points use [`Tolerances::DEFAULT`] unless a caller
//! passes its own record.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Squared-norm deviation accepted for pure states.
    pub norm: f64,
    /// Entrywise Hermiticity tolerance for density matrices.
    pub hermitian: f64,
    /// Hermiticity tolerance accepted by the eigensolver.
    pub eig_hermitian: f64,
    /// Smallest eigenvalue accepted for a density matrix.
    pub psd: f64,
    /// Trace deviation accepted for density matrices.
    pub trace: f64,
    /// Slack on prefix-sum comparisons.
    pub majorization: f64,
    /// Slack on the Kraus sub-normalization check.
    pub kraus: f64,
    /// Eigenvalues below `-psd_reject` are an error before a square root.
    pub psd_reject: f64,
    /// Branch probabilities at or below this are degenerate.
    pub min_probability: f64,
    /// Largest joint Hilbert-space dimension a tensor product may produce.
    pub max_joint_dim: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        norm: 1e-10,
        hermitian: 1e-10,
        eig_hermitian: 1e-8,
        psd: 1e-10,
        trace: 1e-10,
        majorization: 1e-10,
        kraus: 1e-8,
        psd_reject: 1e-8,
        min_probability: 1e-12,
        max_joint_dim: 4096,
    };

    pub fn with_majorization(mut self, tol: f64) -> Self {
        self.majorization = tol;
        self
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
