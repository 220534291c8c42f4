//! Random matrices and states drawn from complex Gaussian ensembles.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;
use super::state::PureState;

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Modified Gram–Schmidt on the columns; near-dependent columns are zeroed.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let mut q = m.clone();
    for j in 0..cols {
        for _ in 0..2 {
            for p in 0..j {
                let proj: C64 = (0..rows).map(|k| q[(k, p)].conj() * q[(k, j)]).sum();
                for k in 0..rows {
                    let v = q[(k, p)];
                    q[(k, j)] -= proj * v;
                }
            }
        }
        let norm: f64 = (0..rows).map(|k| q[(k, j)].norm_sqr()).sum::<f64>().sqrt();
        let inv = if norm > 1e-12 { 1.0 / norm } else { 0.0 };
        for k in 0..rows {
            q[(k, j)] *= inv;
        }
    }
    q
}

/// Haar-distributed unitary (Gram–Schmidt of a Gaussian matrix).
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    orthonormalize_columns(&gaussian_matrix(n, n, rng))
}

/// Uniformly distributed pure state on `C^dim_a ⊗ C^dim_b`.
pub fn random_pure_state(dim_a: usize, dim_b: usize, rng: &mut impl Rng) -> PureState {
    let amps = (0..dim_a * dim_b).map(|_| gaussian(rng)).collect();
    PureState::normalized(dim_a, dim_b, amps).expect("gaussian vector is nonzero")
}
