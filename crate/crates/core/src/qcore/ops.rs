use super::eig::{hermitian_eig, hermitian_eig_with, psd_sqrt, squared_singular_values_by_columns};
use super::matrix::ComplexMatrix;
use super::state::{DensityMatrix, KrausPair, PureState};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::majorize::Spectrum;

/// `tr_B ρ`, a `dim_a × dim_a` matrix.
pub fn partial_trace_b(rho: &DensityMatrix) -> ComplexMatrix {
    partial_trace_b_raw(rho.matrix(), rho.dim_a(), rho.dim_b())
}

/// `tr_A ρ`, a `dim_b × dim_b` matrix.
pub fn partial_trace_a(rho: &DensityMatrix) -> ComplexMatrix {
    partial_trace_a_raw(rho.matrix(), rho.dim_a(), rho.dim_b())
}

pub fn partial_trace_b_raw(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(da, da, |i, k| (0..db).map(|j| m[(i * db + j, k * db + j)]).sum())
}

pub fn partial_trace_a_raw(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(db, db, |j, l| (0..da).map(|i| m[(i * db + j, i * db + l)]).sum())
}

/// Reduced state of a pure state on side A, `M M†`.
pub fn reduced_a(psi: &PureState) -> ComplexMatrix {
    let m = psi.coefficient_matrix();
    m.matmul(&m.adjoint())
}

/// Squared Schmidt coefficients, length `dim_a`, in nonincreasing order.
///
/// Computed as squared singular values of the coefficient matrix by one-sided
/// Jacobi, which never forms the reduced density matrix.
pub fn schmidt_spectrum(psi: &PureState) -> Spectrum {
    // columns indexed by A: the Gram matrix of Mᵀ is conj(M M†)
    let values = squared_singular_values_by_columns(&psi.coefficient_matrix().transpose());
    Spectrum::new(values).expect("squared singular values of a unit vector form a spectrum")
}

/// `(tr √(√σ ρ √σ))²`
pub fn uhlmann_fidelity(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    uhlmann_fidelity_with(sigma, rho, &Tolerances::DEFAULT)
}

pub fn uhlmann_fidelity_with(sigma: &DensityMatrix, rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    same_dims(sigma, rho)?;
    let root = psd_sqrt(sigma.matrix(), tol)?;
    let inner = root.matmul(rho.matrix()).matmul(&root).hermitian_part();
    let eig = hermitian_eig_with(&inner, tol)?;
    if eig.min_value() < -tol.psd_reject {
        return Err(Error::NotPsd(eig.min_value()));
    }
    // eigenvalues at rounding level would enter as their square roots
    let top = eig.values.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    let floor = (inner.rows() as f64) * f64::EPSILON * top;
    let tr: f64 = eig.values.iter().filter(|&&l| l > floor).map(|&l| l.sqrt()).sum();
    Ok((tr * tr).clamp(0.0, 1.0))
}

/// `½ Σ |eig(σ − ρ)|`
pub fn trace_distance(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    same_dims(sigma, rho)?;
    trace_distance_raw(sigma.matrix(), rho.matrix())
}

/// Trace distance between two Hermitian matrices of equal size.
pub fn trace_distance_raw(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(Error::DimensionMismatch("trace distance of different sizes".into()));
    }
    let eig = hermitian_eig(&a.sub(b))?;
    Ok(0.5 * eig.values.iter().map(|l| l.abs()).sum::<f64>())
}

/// Result of a separable map.
#[derive(Debug, Clone)]
pub struct MapOutput {
    pub dim_a: usize,
    pub dim_b: usize,
    /// Normalized output when requested, otherwise `Σ K ρ K†`.
    pub matrix: ComplexMatrix,
    /// `tr Σ K ρ K†`
    pub probability: f64,
    pub normalized: bool,
}

impl MapOutput {
    pub fn state(&self) -> Result<DensityMatrix> {
        if !self.normalized {
            return Err(Error::Precondition("output was not normalized".into()));
        }
        Ok(DensityMatrix::from_parts_unchecked(self.dim_a, self.dim_b, self.matrix.hermitian_part()))
    }
}

/// Largest eigenvalue of `Σ_i (A_i⊗B_i)†(A_i⊗B_i)`.
pub fn kraus_norm(kraus: &[KrausPair]) -> Result<f64> {
    let first = kraus.first().ok_or_else(|| Error::InvalidArgument("empty Kraus set".into()))?;
    let n = first.a_op.cols() * first.b_op.cols();
    let mut acc = ComplexMatrix::zeros(n, n);
    for k in kraus {
        let aa = k.a_op.adjoint().matmul(&k.a_op);
        let bb = k.b_op.adjoint().matmul(&k.b_op);
        acc = acc.add(&aa.kron(&bb));
    }
    Ok(hermitian_eig(&acc.hermitian_part())?.values[0])
}

/// Largest eigenvalues of `Σ_i A_i†A_i` and `Σ_i B_i†B_i` taken separately.
pub fn local_kraus_norms(kraus: &[KrausPair]) -> Result<(f64, f64)> {
    let first = kraus.first().ok_or_else(|| Error::InvalidArgument("empty Kraus set".into()))?;
    let mut sa = ComplexMatrix::zeros(first.a_op.cols(), first.a_op.cols());
    let mut sb = ComplexMatrix::zeros(first.b_op.cols(), first.b_op.cols());
    for k in kraus {
        sa = sa.add(&k.a_op.adjoint().matmul(&k.a_op));
        sb = sb.add(&k.b_op.adjoint().matmul(&k.b_op));
    }
    Ok((hermitian_eig(&sa.hermitian_part())?.values[0], hermitian_eig(&sb.hermitian_part())?.values[0]))
}

/// `Σ_i (A_i⊗B_i) ρ (A_i⊗B_i)†`, optionally divided by its trace.
///
/// Terms are summed in the order given.
pub fn apply_separable_map(state: &DensityMatrix, kraus: &[KrausPair], normalize: bool) -> Result<MapOutput> {
    apply_separable_map_with(state, kraus, normalize, &Tolerances::DEFAULT)
}

pub fn apply_separable_map_with(
    state: &DensityMatrix,
    kraus: &[KrausPair],
    normalize: bool,
    tol: &Tolerances,
) -> Result<MapOutput> {
    let first = kraus.first().ok_or_else(|| Error::InvalidArgument("empty Kraus set".into()))?;
    let (out_a, out_b) = (first.a_op.rows(), first.b_op.rows());
    for k in kraus {
        if k.a_op.cols() != state.dim_a() || k.b_op.cols() != state.dim_b() {
            return Err(Error::DimensionMismatch("Kraus operator does not act on the state".into()));
        }
        if k.a_op.rows() != out_a || k.b_op.rows() != out_b {
            return Err(Error::DimensionMismatch("Kraus operators disagree on output dims".into()));
        }
    }
    let norm = kraus_norm(kraus)?;
    if norm > 1.0 + tol.kraus {
        return Err(Error::KrausNotSubnormalized(norm));
    }
    let mut out = ComplexMatrix::zeros(out_a * out_b, out_a * out_b);
    for k in kraus {
        out = out.add(&k.joint().conjugate_by(state.matrix()));
    }
    let probability = out.trace().re;
    if normalize {
        if probability <= tol.min_probability {
            return Err(Error::DegenerateBranch(probability));
        }
        out = out.scale(1.0 / probability);
    }
    Ok(MapOutput { dim_a: out_a, dim_b: out_b, matrix: out, probability, normalized: normalize })
}

fn same_dims(x: &DensityMatrix, y: &DensityMatrix) -> Result<()> {
    if x.dims() != y.dims() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", x.dims(), y.dims())));
    }
    Ok(())
}
