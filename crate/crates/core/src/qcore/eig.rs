//! Cyclic Jacobi eigensolver for dense Hermitian matrices, and the one-sided
//! (Hestenes) variant used for singular values.
//!
//! Each rotation first removes the phase of the pivot `a_pq`, then applies the
//! classical real Jacobi rotation. The combined unitary on the `(p, q)` plane is
//!
//! ```text
//!     V = [ c          s          ]
//!         [ -s e^{-iφ}  c e^{-iφ} ]      with a_pq = |a_pq| e^{iφ}.
//! ```

use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use crate::config::Tolerances;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Eigen-decomposition `m = V diag(values) V†` with values in descending order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `V f(Λ) V†`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.rows();
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for (k, &w) in fl.iter().enumerate() {
                if w != 0.0 {
                    acc += self.vectors[(i, k)] * self.vectors[(j, k)].conj() * w;
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    pub fn min_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy)]
struct Rotation {
    c: f64,
    s: f64,
    /// `e^{-iφ}`
    phase: C64,
}

impl Rotation {
    /// Rotation that annihilates the off-diagonal entry of
    /// `[[app, apq], [conj(apq), aqq]]`.
    fn annihilating(app: f64, aqq: f64, apq: C64) -> Rotation {
        let mag = apq.norm();
        let phase = (apq / mag).conj();
        let theta = (aqq - app) / (2.0 * mag);
        let t = if theta.abs() > 1e150 {
            0.5 / theta
        } else {
            theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
        };
        let t = if theta == 0.0 { 1.0 } else { t };
        let c = 1.0 / (t * t + 1.0).sqrt();
        Rotation { c, s: t * c, phase }
    }

    /// Column update `(x_p, x_q) <- (x_p, x_q) V` on a row-major matrix.
    fn apply_columns(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        let (c, s, ph) = (self.c, self.s, self.phase);
        for k in 0..m.rows() {
            let xp = m[(k, p)];
            let xq = m[(k, q)];
            m[(k, p)] = xp * c - xq * ph * s;
            m[(k, q)] = xp * s + xq * ph * c;
        }
    }

    /// Row update `(r_p; r_q) <- V† (r_p; r_q)`.
    fn apply_rows(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        let (c, s, ph) = (self.c, self.s, self.phase.conj());
        for k in 0..m.cols() {
            let rp = m[(p, k)];
            let rq = m[(q, k)];
            m[(p, k)] = rp * c - rq * ph * s;
            m[(q, k)] = rp * s + rq * ph * c;
        }
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi sweeps.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    hermitian_eig_with(m, &Tolerances::DEFAULT)
}

pub fn hermitian_eig_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let defect = m.hermitian_defect();
    if defect > tol.eig_hermitian {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let target = f64::EPSILON * scale * (n.max(1) as f64);

    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= target {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    if apq.norm() == 0.0 {
                        continue;
                    }
                    let rot = Rotation::annihilating(app, aqq, apq);
                    rot.apply_columns(&mut a, p, q);
                    rot.apply_rows(&mut a, p, q);
                    rot.apply_columns(&mut v, p, q);
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

/// Squared singular values of `x` restricted to its columns, descending.
///
/// One-sided Jacobi: columns are rotated pairwise until mutually orthogonal;
/// the squared column norms are then the eigenvalues of `x† x`.
pub fn squared_singular_values_by_columns(x: &ComplexMatrix) -> Vec<f64> {
    if x.cols() > x.rows() {
        // wide input: at most `rows` nonzero values, taken from the tall adjoint
        let mut out = squared_singular_values_by_columns(&x.adjoint());
        out.resize(x.cols(), 0.0);
        return out;
    }
    let (rows, cols) = (x.rows(), x.cols());
    let mut w = x.clone();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for k in 0..rows {
                    let xp = w[(k, p)];
                    let xq = w[(k, q)];
                    alpha += xp.norm_sqr();
                    beta += xq.norm_sqr();
                    gamma += xp.conj() * xq;
                }
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                Rotation::annihilating(alpha, beta, gamma).apply_columns(&mut w, p, q);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut out: Vec<f64> =
        (0..cols).map(|j| (0..rows).map(|k| w[(k, j)].norm_sqr()).sum()).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// PSD square root, clamping eigenvalues in `[-psd_reject, 0)` to zero.
pub fn psd_sqrt(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = hermitian_eig_with(m, tol)?;
    if eig.min_value() < -tol.psd_reject {
        return Err(Error::NotPsd(eig.min_value()));
    }
    Ok(eig.reconstruct_with(|l| l.max(0.0).sqrt()))
}
