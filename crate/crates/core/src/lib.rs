//! Decision procedures for bipartite entanglement transformations under local
//! operations and classical communication, with and without a catalyst.
//!
//! The crate is organized bottom-up:
//!
//! - [`qcore`]: dense complex matrices, states, partial traces, fidelities,
//!   separable maps.
//! - [`majorize`]: ordered spectra and the majorization relation.
//! - [`transform`]: pure-state convertibility verdicts and the optimal
//!   deterministic conversion fidelity.
//! - [`catalysis`]: catalyst-assisted verdicts, catalyst search, the
//!   catalysis-free neighborhood of a pure state, and a mixed-state pair that
//!   stays catalyzable arbitrarily close to identity.
//! - [`mixedcat`]: the rank-two mixed-state class, its necessary condition,
//!   the explicit catalytic protocol and the fidelity bounds.
//! - [`purify`]: PPT boundary search and randomized separable-map attacks on
//!   purification monotonicity.

pub mod catalysis;
pub mod config;
pub mod error;
pub mod majorize;
pub mod mixedcat;
pub mod presets;
pub mod purify;
pub mod qcore;
pub mod repro;
pub mod transform;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use majorize::{is_majorized, product_spectrum, Majorization, Spectrum};
pub use qcore::{ComplexMatrix, DensityMatrix, KrausPair, PureState};
pub use transform::{Certificate, Decision, Verdict};

pub use num_complex::Complex64 as C64;
