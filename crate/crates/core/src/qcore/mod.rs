//! Dense complex linear algebra and bipartite state primitives.
//!
//! Bipartite indices are always `i_A * dim_b + j_B`. Tensor products of two
//! bipartite objects regroup factors as `(A, Ã | B, B̃)` so partial traces over
//! the joint B side remain meaningful.

mod eig;
pub mod io;
mod matrix;
mod ops;
pub mod random;
mod state;

pub use eig::{hermitian_eig, hermitian_eig_with, psd_sqrt, squared_singular_values_by_columns, HermitianEigen};
pub use matrix::ComplexMatrix;
pub use ops::{
    apply_separable_map, apply_separable_map_with, kraus_norm, local_kraus_norms, partial_trace_a,
    partial_trace_a_raw, partial_trace_b, partial_trace_b_raw, reduced_a, schmidt_spectrum, trace_distance,
    trace_distance_raw, uhlmann_fidelity, uhlmann_fidelity_with, MapOutput,
};
pub use state::{DensityMatrix, KrausPair, PureState};
