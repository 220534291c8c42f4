use num_complex::Complex64 as C64;

use super::eig::hermitian_eig;
use super::matrix::ComplexMatrix;
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Pure state on `C^dim_a ⊗ C^dim_b`, amplitudes indexed `i * dim_b + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dim_a: usize,
    dim_b: usize,
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(dim_a: usize, dim_b: usize, amps: Vec<C64>) -> Result<Self> {
        check_dims(dim_a, dim_b, amps.len())?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > Tolerances::DEFAULT.norm {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { dim_a, dim_b, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(dim_a: usize, dim_b: usize, amps: Vec<C64>) -> Result<Self> {
        check_dims(dim_a, dim_b, amps.len())?;
        let n2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if !n2.is_finite() {
            return Err(Error::NonFinite);
        }
        if n2 <= f64::MIN_POSITIVE {
            return Err(Error::NotNormalized(n2));
        }
        let inv = 1.0 / n2.sqrt();
        Ok(Self { dim_a, dim_b, amps: amps.into_iter().map(|z| z * inv).collect() })
    }

    pub fn from_real(dim_a: usize, dim_b: usize, amps: &[f64]) -> Result<Self> {
        Self::new(dim_a, dim_b, amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// `|i⟩|j⟩` (zero-based).
    pub fn basis(dim_a: usize, dim_b: usize, i: usize, j: usize) -> Result<Self> {
        if i >= dim_a || j >= dim_b {
            return Err(Error::InvalidArgument(format!("basis index ({i},{j}) out of range")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim_a * dim_b];
        amps[i * dim_b + j] = C64::new(1.0, 0.0);
        Ok(Self { dim_a, dim_b, amps })
    }

    /// `Σ_i √p_i |ii⟩` on `C^n ⊗ C^n`.
    pub fn from_schmidt(probabilities: &[f64]) -> Result<Self> {
        let n = probabilities.len();
        let mut amps = vec![C64::new(0.0, 0.0); n * n];
        for (i, &p) in probabilities.iter().enumerate() {
            if p < 0.0 {
                return Err(Error::InvalidSpectrum(format!("negative weight {p}")));
            }
            amps[i * n + i] = C64::new(p.sqrt(), 0.0);
        }
        Self::new(n, n, amps)
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// The `dim_a × dim_b` matrix `M_ij = ⟨ij|ψ⟩`.
    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim_a, self.dim_b, |i, j| self.amps[i * self.dim_b + j])
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|²`
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            matrix: ComplexMatrix::outer(&self.amps, &self.amps),
        }
    }

    /// Tensor product with `(A, Ã | B, B̃)` regrouping: the result's A side is
    /// `A ⊗ Ã` and its B side is `B ⊗ B̃`.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        self.tensor_with(other, &Tolerances::DEFAULT)
    }

    pub fn tensor_with(&self, other: &PureState, tol: &Tolerances) -> Result<PureState> {
        let dim = self.dim() * other.dim();
        if dim > tol.max_joint_dim {
            return Err(Error::DimensionOverflow { dim, cap: tol.max_joint_dim });
        }
        let (da, db) = (self.dim_a, self.dim_b);
        let (ea, eb) = (other.dim_a, other.dim_b);
        let out_b = db * eb;
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        for i in 0..da {
            for j in 0..db {
                let x = self.amps[i * db + j];
                if x.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..ea {
                    for l in 0..eb {
                        amps[(i * ea + k) * out_b + (j * eb + l)] = x * other.amps[k * eb + l];
                    }
                }
            }
        }
        Ok(PureState { dim_a: da * ea, dim_b: out_b, amps })
    }
}

/// Density operator on `C^dim_a ⊗ C^dim_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim_a: usize,
    dim_b: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(dim_a: usize, dim_b: usize, matrix: ComplexMatrix) -> Result<Self> {
        Self::new_with(dim_a, dim_b, matrix, &Tolerances::DEFAULT)
    }

    pub fn new_with(dim_a: usize, dim_b: usize, matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let n = dim_a * dim_b;
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for dims ({dim_a},{dim_b})",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if n == 0 {
            return Err(Error::DimensionMismatch("empty state".into()));
        }
        if matrix.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let defect = matrix.hermitian_defect();
        if defect > tol.hermitian {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = hermitian_eig(&matrix)?.min_value();
        if min < -tol.psd {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { dim_a, dim_b, matrix })
    }

    pub(crate) fn from_parts_unchecked(dim_a: usize, dim_b: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), dim_a * dim_b);
        Self { dim_a, dim_b, matrix }
    }

    /// `Σ_k w_k |ψ_k⟩⟨ψ_k|`; weights must be nonnegative and sum to one.
    pub fn mixture(terms: &[(f64, &PureState)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?.1;
        let (da, db) = (first.dim_a(), first.dim_b());
        let mut m = ComplexMatrix::zeros(da * db, da * db);
        let mut total = 0.0;
        for &(w, psi) in terms {
            if psi.dim_a() != da || psi.dim_b() != db {
                return Err(Error::DimensionMismatch("mixture components differ in dimension".into()));
            }
            if w < 0.0 {
                return Err(Error::InvalidArgument(format!("negative weight {w}")));
            }
            total += w;
            m.add_assign_scaled(&ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()), w);
        }
        if (total - 1.0).abs() > Tolerances::DEFAULT.trace {
            return Err(Error::InvalidTrace(total));
        }
        Ok(Self { dim_a: da, dim_b: db, matrix: m })
    }

    /// `λ x + (1-λ) y`
    pub fn convex(lambda: f64, x: &DensityMatrix, y: &DensityMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument(format!("mixing weight {lambda} outside [0,1]")));
        }
        if x.dims() != y.dims() {
            return Err(Error::DimensionMismatch("convex combination of different dims".into()));
        }
        let mut m = x.matrix.scale(lambda);
        m.add_assign_scaled(&y.matrix, 1.0 - lambda);
        Ok(Self { dim_a: x.dim_a, dim_b: x.dim_b, matrix: m })
    }

    pub fn maximally_mixed(dim_a: usize, dim_b: usize) -> Self {
        let n = dim_a * dim_b;
        Self { dim_a, dim_b, matrix: ComplexMatrix::identity(n).scale(1.0 / n as f64) }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn expectation(&self, psi: &PureState) -> f64 {
        let v = self.matrix.matvec(psi.amplitudes());
        psi.amplitudes().iter().zip(&v).map(|(a, b)| a.conj() * b).sum::<C64>().re
    }

    /// Tensor product with `(A, Ã | B, B̃)` regrouping.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        self.tensor_with(other, &Tolerances::DEFAULT)
    }

    pub fn tensor_with(&self, other: &DensityMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
        let dim = self.dim() * other.dim();
        if dim > tol.max_joint_dim {
            return Err(Error::DimensionOverflow { dim, cap: tol.max_joint_dim });
        }
        let perm = regroup_permutation(self.dims(), other.dims());
        let plain = self.matrix.kron(&other.matrix);
        let m = ComplexMatrix::from_fn(dim, dim, |r, c| plain[(perm[r], perm[c])]);
        Ok(DensityMatrix { dim_a: self.dim_a * other.dim_a, dim_b: self.dim_b * other.dim_b, matrix: m })
    }
}

/// For each regrouped index `((i,k),(j,l))` the plain Kronecker index `((i,j),(k,l))`.
pub(crate) fn regroup_permutation((da, db): (usize, usize), (ea, eb): (usize, usize)) -> Vec<usize> {
    let out_b = db * eb;
    let mut perm = vec![0; da * db * ea * eb];
    for i in 0..da {
        for k in 0..ea {
            for j in 0..db {
                for l in 0..eb {
                    let regrouped = (i * ea + k) * out_b + (j * eb + l);
                    let plain = (i * db + j) * (ea * eb) + (k * eb + l);
                    perm[regrouped] = plain;
                }
            }
        }
    }
    perm
}

/// A product Kraus term `A ⊗ B`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausPair {
    pub a_op: ComplexMatrix,
    pub b_op: ComplexMatrix,
}

impl KrausPair {
    pub fn new(a_op: ComplexMatrix, b_op: ComplexMatrix) -> Self {
        Self { a_op, b_op }
    }

    pub fn identity(dim_a: usize, dim_b: usize) -> Self {
        Self { a_op: ComplexMatrix::identity(dim_a), b_op: ComplexMatrix::identity(dim_b) }
    }

    /// The joint operator in the state's `(A | B)` index order.
    pub fn joint(&self) -> ComplexMatrix {
        self.a_op.kron(&self.b_op)
    }
}

fn check_dims(dim_a: usize, dim_b: usize, len: usize) -> Result<()> {
    if dim_a == 0 || dim_b == 0 || dim_a * dim_b != len {
        return Err(Error::DimensionMismatch(format!("{len} amplitudes for dims ({dim_a},{dim_b})")));
    }
    Ok(())
}
