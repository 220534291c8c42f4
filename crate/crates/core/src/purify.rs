//! Falsification harness for purification monotonicity.
//!
//! States `σ(λ) = λ|ψ⟩⟨ψ| + (1−λ)ζ` with `⟨ψ|ζ|ψ⟩ = 0` become entangled above a
//! threshold `λ₀`. For `λ ≥ λ₀` no separable operation, with or without a
//! catalyst and even with postselection, may raise the weight of `|ψ⟩⟨ψ|`.
//! This module samples random separable maps looking for a counterexample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::qcore::random::{gaussian_matrix, orthonormalize_columns};
use crate::qcore::{hermitian_eig, kraus_norm, ComplexMatrix, DensityMatrix, KrausPair, PureState};

/// Partial-transpose eigenvalues below this certify entanglement.
pub const PPT_TOL: f64 = 1e-10;
/// Allowed excess of output over input `ψ`-fidelity.
pub const FIDELITY_SLACK: f64 = 1e-9;
/// Second differences at or below this magnitude count as zero.
pub const CURVATURE_ZERO: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Separability {
    Separable,
    Entangled,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptReport {
    pub verdict: Separability,
    pub min_eigenvalue: f64,
}

/// `ρ^{T_B}`.
pub fn partial_transpose_b(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim_a * dim_b, dim_a * dim_b, |r, c| {
        let (i, j) = (r / dim_b, r % dim_b);
        let (k, l) = (c / dim_b, c % dim_b);
        m[(i * dim_b + l, k * dim_b + j)]
    })
}

pub fn min_pt_eigenvalue(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<f64> {
    Ok(hermitian_eig(&partial_transpose_b(m, dim_a, dim_b))?.min_value())
}

/// PPT criterion; conclusive for `2⊗2` and `2⊗3` only.
pub fn ppt_separability(rho: &DensityMatrix) -> Result<PptReport> {
    let (da, db) = rho.dims();
    let min_eigenvalue = min_pt_eigenvalue(rho.matrix(), da, db)?;
    let verdict = if min_eigenvalue < -PPT_TOL {
        Separability::Entangled
    } else if da * db <= 6 {
        Separability::Separable
    } else {
        Separability::Inconclusive
    };
    Ok(PptReport { verdict, min_eigenvalue })
}

#[derive(Debug, Clone, Serialize)]
pub struct Lambda0 {
    pub lambda0: f64,
    /// The certifier is exact in this dimension; otherwise `lambda0` only
    /// bounds the separable region from above.
    pub exact: bool,
    /// Verdicts along the evaluated points switch at most once.
    pub monotone: bool,
    /// `(λ, min PT eigenvalue)` for every evaluation.
    pub trace: Vec<(f64, f64)>,
}

/// Smallest `λ` at which `λ|ψ⟩⟨ψ| + (1−λ)ζ` has a negative partial transpose.
pub fn lambda0_bisect(psi: &PureState, zeta: &DensityMatrix) -> Result<Lambda0> {
    let (da, db) = zeta.dims();
    if (psi.dim_a(), psi.dim_b()) != (da, db) {
        return Err(Error::DimensionMismatch("psi and zeta differ in dimension".into()));
    }
    let proj = psi.projector();
    let mut trace = Vec::new();
    let mut eval = |lambda: f64| -> Result<f64> {
        let m = DensityMatrix::convex(lambda, &proj, zeta)?;
        let v = min_pt_eigenvalue(m.matrix(), da, db)?;
        trace.push((lambda, v));
        Ok(v)
    };
    if eval(0.0)? < 0.0 {
        return Err(Error::Hypothesis("zeta itself has a negative partial transpose".into()));
    }
    if eval(1.0)? >= 0.0 {
        return Err(Error::Hypothesis("psi has a positive partial transpose".into()));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if eval(mid)? < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut sorted = trace.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let monotone = sorted.windows(2).all(|w| !(w[0].1 < -PPT_TOL && w[1].1 >= -PPT_TOL));
    Ok(Lambda0 { lambda0: 0.5 * (lo + hi), exact: da * db <= 6, monotone, trace })
}

#[derive(Debug, Clone)]
pub struct KentClassState {
    pub lambda: f64,
    pub psi: PureState,
    pub zeta: DensityMatrix,
    pub lambda0: f64,
    pub lambda0_exact: bool,
}

impl KentClassState {
    pub fn new(lambda: f64, psi: PureState, zeta: DensityMatrix) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidArgument(format!("lambda {lambda} outside (0,1)")));
        }
        let leak = zeta.expectation(&psi);
        if leak.abs() > 1e-10 {
            return Err(Error::Hypothesis(format!("<psi|zeta|psi> = {leak:e}")));
        }
        let l0 = lambda0_bisect(&psi, &zeta)?;
        Ok(Self { lambda, psi, zeta, lambda0: l0.lambda0, lambda0_exact: l0.exact })
    }

    /// Bell state mixed with the normalized projector onto its orthocomplement.
    pub fn werner(lambda: f64) -> Result<Self> {
        let psi = crate::presets::bell();
        let zeta = orthocomplement_state(&psi)?;
        Self::new(lambda, psi, zeta)
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidArgument(format!("lambda {lambda} outside (0,1)")));
        }
        Ok(Self { lambda, ..self.clone() })
    }

    pub fn state(&self) -> Result<DensityMatrix> {
        DensityMatrix::convex(self.lambda, &self.psi.projector(), &self.zeta)
    }
}

/// `(1 − |ψ⟩⟨ψ|)/(d − 1)`.
pub fn orthocomplement_state(psi: &PureState) -> Result<DensityMatrix> {
    let d = psi.dim();
    let m = ComplexMatrix::identity(d).sub(psi.projector().matrix()).scale(1.0 / (d - 1) as f64);
    DensityMatrix::new(psi.dim_a(), psi.dim_b(), m)
}

/// Deterministic per-trial generator keyed by `(seed, trial)`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Random separable Kraus set of 1–4 product terms on `C^da ⊗ C^db`.
///
/// Even trials draw a trace-preserving one-way LOCC instrument: Alice's
/// operators are blocks of a random isometry, and Bob applies a random channel
/// conditioned on her outcome. Odd trials draw Gaussian product terms and
/// rescale them so that `λ_max(Σ A†A ⊗ B†B) = 1`.
pub fn random_kraus_set(da: usize, db: usize, trial: u64, rng: &mut impl Rng) -> Result<Vec<KrausPair>> {
    if trial.is_multiple_of(2) {
        let outcomes = rng.random_range(1..=2);
        let alice = isometry_blocks(da, outcomes, rng);
        let mut set = Vec::new();
        for a in alice {
            let bob_terms = rng.random_range(1..=2);
            for b in isometry_blocks(db, bob_terms, rng) {
                set.push(KrausPair::new(a.clone(), b));
            }
        }
        Ok(set)
    } else {
        let terms = rng.random_range(1..=4);
        let set: Vec<KrausPair> =
            (0..terms).map(|_| KrausPair::new(gaussian_matrix(da, da, rng), gaussian_matrix(db, db, rng))).collect();
        let norm = kraus_norm(&set)?;
        let s = 1.0 / norm.sqrt();
        Ok(set.into_iter().map(|k| KrausPair::new(k.a_op.scale(s), k.b_op)).collect())
    }
}

/// Splits a random `(m·d) × d` isometry into `m` square blocks with
/// `Σ K_i† K_i = 1`.
fn isometry_blocks(d: usize, m: usize, rng: &mut impl Rng) -> Vec<ComplexMatrix> {
    let v = orthonormalize_columns(&gaussian_matrix(m * d, d, rng));
    (0..m).map(|i| ComplexMatrix::from_fn(d, d, |r, c| v[(i * d + r, c)])).collect()
}

/// One JSON-lines record of an attack run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackRecord {
    pub trial: u64,
    pub branch_count: usize,
    pub prob: f64,
    pub fidelity_out: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AttackReport {
    pub input_fidelity: f64,
    pub max_fidelity: f64,
    pub argmax: Option<AttackRecord>,
    pub trials: u64,
    pub outputs_checked: usize,
    pub degenerate_skipped: usize,
    /// Outputs exceeding the input fidelity by more than [`FIDELITY_SLACK`].
    pub violations: usize,
    /// Unnormalized outputs with a partial-transpose eigenvalue below
    /// `-PPT_TOL`; only counted when `check_ppt` was requested.
    pub ppt_violations: usize,
    #[serde(skip)]
    pub records: Vec<AttackRecord>,
}

/// Applies `trials` random separable maps to `σ ⊗ ω` and records the overlap of
/// every postselected branch and of the full mixture with `|ψ⟩⟨ψ| ⊗ ω`.
///
/// With a catalyst the figure of merit is the joint overlap; it coincides with
/// `⟨ψ|ρ|ψ⟩` for every map that returns the catalyst. The traced-out overlap
/// is not monotone for maps that do not (a local swap with a maximally
/// entangled catalyst reaches 1). With `check_ppt`, every unnormalized output
/// is also tested for a negative partial transpose.
pub fn random_separable_attack(
    state: &KentClassState,
    omega: Option<&DensityMatrix>,
    trials: u64,
    seed: u64,
    check_ppt: bool,
) -> Result<AttackReport> {
    let sigma = state.state()?;
    let target_psi = state.psi.projector();
    let (joint, target) = match omega {
        Some(w) => (sigma.tensor(w)?, target_psi.tensor(w)?),
        None => (sigma.clone(), target_psi),
    };
    let (ja, jb) = joint.dims();
    let input_fidelity = overlap(target.matrix(), joint.matrix());
    let min_p = Tolerances::DEFAULT.min_probability;

    let mut report = AttackReport {
        input_fidelity,
        max_fidelity: f64::NEG_INFINITY,
        argmax: None,
        trials,
        outputs_checked: 0,
        degenerate_skipped: 0,
        violations: 0,
        ppt_violations: 0,
        records: Vec::new(),
    };
    let note = |report: &mut AttackReport, rec: AttackRecord| {
        report.outputs_checked += 1;
        if rec.fidelity_out > report.max_fidelity {
            report.max_fidelity = rec.fidelity_out;
            report.argmax = Some(rec);
        }
        if rec.fidelity_out > input_fidelity + FIDELITY_SLACK {
            report.violations += 1;
        }
        report.records.push(rec);
    };

    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let kraus = random_kraus_set(ja, jb, trial, &mut rng)?;
        let branch_count = kraus.len();
        let mut total = ComplexMatrix::zeros(ja * jb, ja * jb);
        let mut total_p = 0.0;
        for k in &kraus {
            let out = k.joint().conjugate_by(joint.matrix());
            let p = out.trace().re;
            total.add_assign_scaled(&out, 1.0);
            total_p += p;
            if p <= min_p {
                report.degenerate_skipped += 1;
                continue;
            }
            if check_ppt && min_pt_eigenvalue(&out.hermitian_part(), ja, jb)? < -PPT_TOL {
                report.ppt_violations += 1;
            }
            note(&mut report, AttackRecord { trial, branch_count, prob: p, fidelity_out: overlap(target.matrix(), &out) / p });
        }
        if branch_count > 1 && total_p > min_p {
            if check_ppt && min_pt_eigenvalue(&total.hermitian_part(), ja, jb)? < -PPT_TOL {
                report.ppt_violations += 1;
            }
            let fid = overlap(target.matrix(), &total) / total_p;
            note(&mut report, AttackRecord { trial, branch_count, prob: total_p, fidelity_out: fid });
        }
    }
    Ok(report)
}

/// `tr[T X]` for Hermitian `T`, `X`.
fn overlap(t: &ComplexMatrix, x: &ComplexMatrix) -> f64 {
    let n = t.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (t[(i, j)] * x[(j, i)]).re;
        }
    }
    acc
}

#[derive(Debug, Clone, Serialize)]
pub struct FidelityCurve {
    pub lambdas: Vec<f64>,
    /// `F(λ)`
    pub fidelities: Vec<f64>,
    /// `f(λ) = F(λ) − λ`
    pub excess: Vec<f64>,
    /// Second divided differences of `f` at interior grid points.
    pub second_differences: Vec<f64>,
    pub sign_constant: bool,
    /// `f(0)` and `f(1)`.
    pub endpoints: (f64, f64),
}

/// `F(λ) = tr_ω Σ_i ⟨ψ|(A_i⊗B_i)(σ(λ)⊗ω)(A_i⊗B_i)†|ψ⟩ / 𝒩(λ)` on `grid`.
///
/// `F` is a ratio of two affine functions of `λ`, so its second derivative
/// has constant sign; the report checks this on the grid.
pub fn fidelity_lambda_curve(
    kraus: &[KrausPair],
    psi: &PureState,
    zeta: &DensityMatrix,
    omega: Option<&DensityMatrix>,
    grid: &[f64],
) -> Result<FidelityCurve> {
    let inner: Vec<f64> = grid.iter().copied().filter(|&l| l > 0.0 && l < 1.0).collect();
    if inner.len() < 9 {
        return Err(Error::InvalidArgument(format!("grid has {} points in (0,1), need 9", inner.len())));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("grid must be strictly increasing".into()));
    }
    let (da, db) = (psi.dim_a(), psi.dim_b());
    let embed = |x: &DensityMatrix| -> Result<DensityMatrix> {
        match omega {
            Some(w) => x.tensor(w),
            None => Ok(x.clone()),
        }
    };
    let psi_joint = embed(&psi.projector())?;
    let zeta_joint = embed(zeta)?;
    let (ea, eb) = omega.map(|w| w.dims()).unwrap_or((1, 1));
    // ⟨ψ| tr_ω[X] |ψ⟩ = tr[(|ψ⟩⟨ψ| ⊗ 1) X]
    let probe = psi.projector().tensor(&DensityMatrix::maximally_mixed(ea, eb))?.matrix().scale((ea * eb) as f64);

    let (mut num_psi, mut num_zeta, mut den_psi, mut den_zeta) = (0.0, 0.0, 0.0, 0.0);
    for k in kraus {
        let kj = k.joint();
        if kj.rows() != da * ea * db * eb {
            return Err(Error::DimensionMismatch("Kraus operators do not match the joint space".into()));
        }
        let op = kj.conjugate_by(psi_joint.matrix());
        let oz = kj.conjugate_by(zeta_joint.matrix());
        num_psi += overlap(&probe, &op);
        num_zeta += overlap(&probe, &oz);
        den_psi += op.trace().re;
        den_zeta += oz.trace().re;
    }
    let f = |l: f64| -> Result<f64> {
        let n = l * den_psi + (1.0 - l) * den_zeta;
        if n <= Tolerances::DEFAULT.min_probability {
            return Err(Error::DegenerateBranch(n));
        }
        Ok((l * num_psi + (1.0 - l) * num_zeta) / n)
    };
    let fidelities: Vec<f64> = grid.iter().map(|&l| f(l)).collect::<Result<_>>()?;
    let excess: Vec<f64> = grid.iter().zip(&fidelities).map(|(l, v)| v - l).collect();
    let second_differences: Vec<f64> = (1..grid.len().saturating_sub(1))
        .map(|i| {
            let (x0, x1, x2) = (grid[i - 1], grid[i], grid[i + 1]);
            let d1 = (excess[i] - excess[i - 1]) / (x1 - x0);
            let d2 = (excess[i + 1] - excess[i]) / (x2 - x1);
            2.0 * (d2 - d1) / (x2 - x0)
        })
        .collect();
    let pos = second_differences.iter().any(|&d| d > CURVATURE_ZERO);
    let neg = second_differences.iter().any(|&d| d < -CURVATURE_ZERO);
    let endpoint = |l: f64| f(l).map(|v| v - l).unwrap_or(f64::NAN);
    Ok(FidelityCurve {
        lambdas: grid.to_vec(),
        fidelities,
        excess,
        second_differences,
        sign_constant: !(pos && neg),
        endpoints: (endpoint(0.0), endpoint(1.0)),
    })
}

/// `λ_k = k/(n+1)` for `k = 1..n`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / (n + 1) as f64).collect()
}
