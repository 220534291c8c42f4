//! Rank-two mixed states `σ = λ|ψ⟩⟨ψ| + (1−λ)|η⟩⟨η|`,
//! `ρ = μ|φ⟩⟨φ| + (1−μ)|η⟩⟨η|` with a product state `η` orthogonal to `φ`.
//!
//! With `Π = 1 − |η⟩⟨η|` and `χ = Π|ψ⟩⟨ψ|Π`, LOCC convertibility `σ → ρ`
//! requires `tr_A[χ]/tr[χ] ≺ tr_A[|φ⟩⟨φ|]` whenever `η` is the only product
//! vector in the range of `ρ`. When that fails but the same pair is
//! convertible with a catalyst, a local measurement followed by a catalytic
//! pure-state conversion realizes `σ ⊗ ω → ρ ⊗ ω`.

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalysis::elocc_with_catalyst;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::majorize::{is_majorized, Spectrum};
use crate::presets;
use crate::qcore::random::{gaussian_matrix, orthonormalize_columns, random_pure_state, random_unitary};
use crate::qcore::{
    apply_separable_map, hermitian_eig, partial_trace_b, schmidt_spectrum, ComplexMatrix, DensityMatrix, KrausPair,
    PureState,
};
use crate::transform::{optimal_conversion_fidelity, Certificate, Decision, Verdict};

/// Largest squared second Schmidt coefficient of a product vector.
const PRODUCT_TOL: f64 = 1e-10;
/// Same, for candidates recovered from polynomial roots.
const ROOT_PRODUCT_TOL: f64 = 1e-9;
const ORTHO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTwoSpec {
    pub lambda: f64,
    pub psi: PureState,
    pub eta: PureState,
    pub phi: PureState,
    pub mu: f64,
}

impl RankTwoSpec {
    /// Checks every hypothesis of the class, including `μ = λ tr[χ]`.
    pub fn validate(&self) -> Result<()> {
        let dims = (self.psi.dim_a(), self.psi.dim_b());
        for (name, s) in [("eta", &self.eta), ("phi", &self.phi)] {
            if (s.dim_a(), s.dim_b()) != dims {
                return Err(Error::DimensionMismatch(format!("{name} has dims ({},{})", s.dim_a(), s.dim_b())));
            }
        }
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(Error::Hypothesis(format!("lambda {} outside (0,1]", self.lambda)));
        }
        if second_schmidt(&self.eta) > PRODUCT_TOL {
            return Err(Error::Hypothesis("eta is entangled".into()));
        }
        let o = self.eta.overlap(&self.phi);
        if o > ORTHO_TOL {
            return Err(Error::Hypothesis(format!("|<eta|phi>|^2 = {o:e} is not zero")));
        }
        if second_schmidt(&self.phi) <= PRODUCT_TOL {
            return Err(Error::Hypothesis("phi is not entangled".into()));
        }
        if second_schmidt(&self.psi) <= PRODUCT_TOL {
            return Err(Error::Hypothesis("psi is not entangled".into()));
        }
        let chi = chi_of(&self.psi, &self.eta)?;
        if (self.mu - self.lambda * chi.trace).abs() > 1e-10 {
            return Err(Error::Hypothesis(format!("mu {} differs from lambda tr[chi] {}", self.mu, self.lambda * chi.trace)));
        }
        Ok(())
    }
}

fn second_schmidt(s: &PureState) -> f64 {
    schmidt_spectrum(s).values().get(1).copied().unwrap_or(0.0)
}

/// `χ = Π|ψ⟩⟨ψ|Π`, stored together with its normalized generating vector.
#[derive(Debug, Clone)]
pub struct ChiOperator {
    pub matrix: ComplexMatrix,
    pub trace: f64,
    /// `Π|ψ⟩ / ‖Π|ψ⟩‖`
    pub vector: PureState,
}

impl ChiOperator {
    /// Marginal spectrum of `χ / tr[χ]`.
    pub fn normalized_spectrum(&self) -> Result<Spectrum> {
        Ok(schmidt_spectrum(&self.vector))
    }
}

pub fn chi_of(psi: &PureState, eta: &PureState) -> Result<ChiOperator> {
    if (psi.dim_a(), psi.dim_b()) != (eta.dim_a(), eta.dim_b()) {
        return Err(Error::DimensionMismatch("psi and eta differ in dimension".into()));
    }
    let c = eta.inner(psi);
    let v: Vec<C64> = psi.amplitudes().iter().zip(eta.amplitudes()).map(|(p, e)| p - c * e).collect();
    let trace: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if trace <= Tolerances::DEFAULT.min_probability {
        return Err(Error::Hypothesis("psi is parallel to eta".into()));
    }
    let matrix = ComplexMatrix::outer(&v, &v);
    let vector = PureState::normalized(psi.dim_a(), psi.dim_b(), v)?;
    Ok(ChiOperator { matrix, trace, vector })
}

#[derive(Debug, Clone)]
pub struct RankTwoClass {
    pub spec: RankTwoSpec,
    pub chi: ChiOperator,
    pub sigma: DensityMatrix,
    pub rho: DensityMatrix,
}

pub fn build_class(lambda: f64, psi: &PureState, phi: &PureState, eta: &PureState) -> Result<RankTwoClass> {
    let chi = chi_of(psi, eta)?;
    let spec = RankTwoSpec { lambda, psi: psi.clone(), eta: eta.clone(), phi: phi.clone(), mu: lambda * chi.trace };
    spec.validate()?;
    class_of_valid(spec, chi)
}

/// Rebuilds the class from a (deserialized) spec.
pub fn class_from_spec(spec: &RankTwoSpec) -> Result<RankTwoClass> {
    spec.validate()?;
    class_of_valid(spec.clone(), chi_of(&spec.psi, &spec.eta)?)
}

fn class_of_valid(spec: RankTwoSpec, chi: ChiOperator) -> Result<RankTwoClass> {
    let sigma = DensityMatrix::mixture(&[(spec.lambda, &spec.psi), (1.0 - spec.lambda, &spec.eta)])?;
    let rho = DensityMatrix::mixture(&[(spec.mu, &spec.phi), (1.0 - spec.mu, &spec.eta)])?;
    Ok(RankTwoClass { spec, chi, sigma, rho })
}

/// The `C^5 ⊗ C^5` example: `ψ` with Schmidt weights
/// `(0.38, 0.38, 0.095, 0.095, 0.05)`, `φ` with `(0.5, 0.25, 0.25)`, `η = |55⟩`.
pub fn example_class(lambda: f64) -> Result<RankTwoClass> {
    build_class(lambda, &presets::psi_source(), &presets::phi_target(), &presets::eta_55())
}

pub fn example_spec(lambda: f64) -> Result<RankTwoSpec> {
    example_class(lambda).map(|c| c.spec)
}

/// Necessary condition for `σ → ρ` under LOCC.
///
/// `Impossible` when `tr_A[χ]/tr[χ] ⊀ tr_A[|φ⟩⟨φ|]`, otherwise `Unknown`. Only
/// applies when `η` is the single product vector in `span{φ, η}`.
pub fn lemma1_check(spec: &RankTwoSpec) -> Result<Verdict> {
    spec.validate()?;
    let pv = product_vectors_in_span(&spec.phi, &spec.eta)?;
    if pv.count != ProductCount::Finite(1) {
        return Err(Error::Precondition(format!("range contains {:?} product vectors, not exactly one", pv.count)));
    }
    let chi = chi_of(&spec.psi, &spec.eta)?;
    let chi_spectrum = chi.normalized_spectrum()?;
    let phi_spectrum = schmidt_spectrum(&spec.phi);
    let table = is_majorized(&chi_spectrum, &phi_spectrum, Tolerances::DEFAULT.majorization);
    let decision = if table.holds { Decision::Unknown } else { Decision::Impossible };
    Ok(Verdict {
        decision,
        certificate: Certificate::MarginalCondition { chi_spectrum, phi_spectrum, chi_trace: chi.trace, table },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductCount {
    Finite(usize),
    /// Every vector of the span is a product vector.
    Infinite,
}

#[derive(Debug, Clone)]
pub struct ProductVectors {
    pub count: ProductCount,
    /// One normalized representative per projective solution.
    pub witnesses: Vec<PureState>,
}

/// Product vectors (up to scale) in the range of a rank-two state.
pub fn product_vectors_in_range(rho: &DensityMatrix) -> Result<ProductVectors> {
    let eig = hermitian_eig(rho.matrix())?;
    let rank = eig.values.iter().filter(|&&l| l > 1e-10).count();
    if rank != 2 {
        return Err(Error::DegenerateSpan(format!("state has rank {rank}, expected 2")));
    }
    let (da, db) = rho.dims();
    let u = PureState::new(da, db, eig.vector(0))?;
    let v = PureState::new(da, db, eig.vector(1))?;
    product_vectors_in_span(&u, &v)
}

/// Product vectors among `u + t v` (and `v` itself, the point `t = ∞`).
///
/// Every 2×2 minor of the coefficient matrix of `u + t v` is a polynomial of
/// degree at most two in `t`. Roots of the best-conditioned nonzero minor are
/// the candidates; each is confirmed by its Schmidt spectrum.
pub fn product_vectors_in_span(u: &PureState, v: &PureState) -> Result<ProductVectors> {
    if (u.dim_a(), u.dim_b()) != (v.dim_a(), v.dim_b()) {
        return Err(Error::DimensionMismatch("span vectors differ in dimension".into()));
    }
    let o = u.overlap(v);
    if o > 1.0 - 1e-10 {
        return Err(Error::DegenerateSpan("vectors are parallel".into()));
    }
    let (da, db) = (u.dim_a(), u.dim_b());
    let (mu, mv) = (u.coefficient_matrix(), v.coefficient_matrix());

    let mut best: Option<[C64; 3]> = None;
    let mut best_norm = 0.0;
    for i in 0..da {
        for k in i + 1..da {
            for j in 0..db {
                for l in j + 1..db {
                    let (a, b, c, d) = ((i, j), (k, l), (i, l), (k, j));
                    // (u_a + t v_a)(u_b + t v_b) − (u_c + t v_c)(u_d + t v_d)
                    let p0 = mu[a] * mu[b] - mu[c] * mu[d];
                    let p1 = mu[a] * mv[b] + mv[a] * mu[b] - mu[c] * mv[d] - mv[c] * mu[d];
                    let p2 = mv[a] * mv[b] - mv[c] * mv[d];
                    let n = p0.norm_sqr() + p1.norm_sqr() + p2.norm_sqr();
                    if n > best_norm {
                        best_norm = n;
                        best = Some([p0, p1, p2]);
                    }
                }
            }
        }
    }
    if best_norm <= 1e-24 {
        return Ok(ProductVectors { count: ProductCount::Infinite, witnesses: vec![u.clone(), v.clone()] });
    }
    let [p0, p1, p2] = best.expect("nonzero minor");
    let scale = best_norm.sqrt();
    let mut roots = Vec::new();
    if p2.norm() > 1e-12 * scale {
        let disc = (p1 * p1 - p2 * p0 * 4.0).sqrt();
        // numerically stable pair
        let q = if (p1.conj() * disc).re >= 0.0 { -(p1 + disc) * 0.5 } else { -(p1 - disc) * 0.5 };
        if q.norm() > 0.0 {
            roots.push(q / p2);
            roots.push(p0 / q);
        } else {
            roots.push(C64::new(0.0, 0.0));
        }
    } else if p1.norm() > 1e-12 * scale {
        roots.push(-p0 / p1);
    }

    let mut candidates: Vec<PureState> = Vec::new();
    for t in roots {
        let t = newton_polish(p0, p1, p2, t);
        let amps = u.amplitudes().iter().zip(v.amplitudes()).map(|(a, b)| a + t * b).collect();
        if let Ok(w) = PureState::normalized(da, db, amps) {
            candidates.push(w);
        }
    }
    candidates.push(v.clone());

    let mut witnesses: Vec<PureState> = Vec::new();
    for w in candidates {
        if second_schmidt(&w) <= ROOT_PRODUCT_TOL && witnesses.iter().all(|x| x.overlap(&w) < 1.0 - 1e-8) {
            witnesses.push(w);
        }
    }
    Ok(ProductVectors { count: ProductCount::Finite(witnesses.len()), witnesses })
}

fn newton_polish(p0: C64, p1: C64, p2: C64, mut t: C64) -> C64 {
    for _ in 0..3 {
        let f = p0 + t * (p1 + t * p2);
        let df = p1 + t * p2 * 2.0;
        if df.norm() == 0.0 {
            break;
        }
        t -= f / df;
    }
    t
}

/// Whether the A-side supports of the two spectral components of `ρ` overlap.
///
/// A heuristic for components that cannot be locally distinguished; not used
/// by any verdict.
pub fn genuinely_mixed_heuristic(rho: &DensityMatrix) -> Result<bool> {
    let eig = hermitian_eig(rho.matrix())?;
    let (da, db) = rho.dims();
    let supports: Vec<ComplexMatrix> = (0..2)
        .map(|k| -> Result<ComplexMatrix> { support_projector_a(&PureState::new(da, db, eig.vector(k))?) })
        .collect::<Result<_>>()?;
    Ok(supports[0].matmul(&supports[1]).trace().re > 1e-8)
}

/// Projector onto the A-side support of `s`.
fn support_projector_a(s: &PureState) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(&partial_trace_b(&s.projector()))?;
    let n = s.dim_a();
    let mut p = ComplexMatrix::zeros(n, n);
    for (k, &l) in eig.values.iter().enumerate() {
        if l > 1e-12 {
            let e = eig.vector(k);
            p.add_assign_scaled(&ComplexMatrix::outer(&e, &e), 1.0);
        }
    }
    Ok(p)
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolTranscript {
    /// Probabilities of the two measurement outcomes.
    pub probabilities: [f64; 2],
    /// Rank of the first measurement projector.
    pub projector_rank: usize,
    /// Catalytic conversion verdict that licenses replacing branch one by `φ`.
    pub conversion: Verdict,
}

#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub rho_out: DensityMatrix,
    pub transcript: ProtocolTranscript,
}

/// Measure A with `{A₁, A₂}`, convert the first branch to `φ` catalytically,
/// keep the second branch, and forget the outcome.
///
/// `A₁` projects onto the A-side support of `χ`'s generating vector and must
/// annihilate `η`.
pub fn elocc_protocol_execute(spec: &RankTwoSpec, omega: &Spectrum) -> Result<ProtocolRun> {
    spec.validate()?;
    let chi = chi_of(&spec.psi, &spec.eta)?;
    let conversion = elocc_with_catalyst(&chi.normalized_spectrum()?, &schmidt_spectrum(&spec.phi), omega);
    if !conversion.is_possible() {
        return Err(Error::Precondition("catalytic conversion of the measured branch is not certified".into()));
    }
    let (da, db) = (spec.psi.dim_a(), spec.psi.dim_b());
    let a1 = support_projector_a(&chi.vector)?;
    let a2 = ComplexMatrix::identity(da).sub(&a1);
    let leak = a1.kron(&ComplexMatrix::identity(db)).matvec(spec.eta.amplitudes());
    if leak.iter().map(|z| z.norm_sqr()).sum::<f64>() > ORTHO_TOL {
        return Err(Error::Hypothesis("eta is not annihilated by the measurement projector".into()));
    }
    let projector_rank = a1.trace().re.round() as usize;
    let sigma = DensityMatrix::mixture(&[(spec.lambda, &spec.psi), (1.0 - spec.lambda, &spec.eta)])?;
    let id_b = ComplexMatrix::identity(db);

    let first = apply_separable_map(&sigma, &[KrausPair::new(a1, id_b.clone())], false)?;
    let p1 = first.probability;
    let mut out = ComplexMatrix::zeros(da * db, da * db);
    if p1 > Tolerances::DEFAULT.min_probability {
        let post = first.matrix.scale(1.0 / p1);
        let fid = DensityMatrix::from_parts_unchecked(da, db, post).expectation(&chi.vector);
        if fid < 1.0 - 1e-10 {
            return Err(Error::Hypothesis(format!("measured branch has fidelity {fid} with chi")));
        }
        out.add_assign_scaled(spec.phi.projector().matrix(), p1);
    }
    let second = apply_separable_map(&sigma, &[KrausPair::new(a2, id_b)], false)?;
    let p2 = second.probability;
    if p2 > Tolerances::DEFAULT.min_probability {
        out.add_assign_scaled(&second.matrix, 1.0);
    }
    let rho_out = DensityMatrix::new(da, db, out)?;
    Ok(ProtocolRun { rho_out, transcript: ProtocolTranscript { probabilities: [p1, p2], projector_rank, conversion } })
}

/// Random spec on `C^n ⊗ C^n` (`n ≥ 5`) satisfying every protocol hypothesis.
///
/// `η = a ⊗ b` is a random product vector, `ψ = c η + s ψ⊥` with `ψ⊥`
/// supported on `a^⊥ ⊗ C^n`, and `φ` lives on the same subspace. With
/// `example_spectra` the marginals of `ψ⊥` and `φ` are the catalytic example
/// pair `(0.4, 0.4, 0.1, 0.1)`, `(0.5, 0.25, 0.25)`; otherwise `φ`'s marginal
/// majorizes a random marginal of `ψ⊥`.
pub fn random_spec(n: usize, example_spectra: bool, rng: &mut impl Rng) -> Result<RankTwoSpec> {
    if n < 5 {
        return Err(Error::InvalidArgument(format!("dimension {n} < 5")));
    }
    let a = random_pure_state(n, 1, rng);
    let b = random_pure_state(1, n, rng);
    let eta = a.tensor(&b)?;
    // orthonormal basis of a^⊥: first column of the completed basis is a
    let mut g = gaussian_matrix(n, n, rng);
    for i in 0..n {
        g[(i, 0)] = a.amplitudes()[i];
    }
    let basis_a = orthonormalize_columns(&g);
    let (alpha, beta): (Vec<f64>, Vec<f64>) = if example_spectra {
        (vec![0.4, 0.4, 0.1, 0.1], vec![0.5, 0.25, 0.25])
    } else {
        let r = rng.random_range(2..n);
        let mut al: Vec<f64> = (0..r).map(|_| rng.random::<f64>() + 0.05).collect();
        let s: f64 = al.iter().sum();
        al.iter_mut().for_each(|x| *x /= s);
        al.sort_by(|x, y| y.total_cmp(x));
        let w = rng.random::<f64>() * 0.8;
        let mut be: Vec<f64> = al.iter().map(|x| (1.0 - w) * x).collect();
        be[0] += w;
        (al, be)
    };
    let schmidt_state = |weights: &[f64], ea: &ComplexMatrix, fb: &ComplexMatrix| -> Result<PureState> {
        let mut amps = vec![C64::new(0.0, 0.0); n * n];
        for (k, &p) in weights.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    amps[i * n + j] += ea[(i, k)] * fb[(j, k)] * p.sqrt();
                }
            }
        }
        PureState::normalized(n, n, amps)
    };
    let psi_perp = schmidt_state(&alpha, &perp_frame(&basis_a, rng), &random_unitary(n, rng))?;
    let phi = schmidt_state(&beta, &perp_frame(&basis_a, rng), &random_unitary(n, rng))?;

    let weight = rng.random::<f64>() * 0.5;
    let phase = C64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
    let amps = eta
        .amplitudes()
        .iter()
        .zip(psi_perp.amplitudes())
        .map(|(e, p)| e * phase * weight.sqrt() + p * (1.0 - weight).sqrt())
        .collect();
    let psi = PureState::normalized(n, n, amps)?;
    let lambda = rng.random_range(0.05..1.0);
    Ok(build_class(lambda, &psi, &phi, &eta)?.spec)
}

/// Random orthonormal frame of the span of columns `1..n` of `basis`.
fn perp_frame(basis: &ComplexMatrix, rng: &mut impl Rng) -> ComplexMatrix {
    let n = basis.rows();
    let u = random_unitary(n - 1, rng);
    ComplexMatrix::from_fn(n, n - 1, |i, k| (0..n - 1).map(|m| basis[(i, m + 1)] * u[(m, k)]).sum())
}

/// `(1−λ) max_i β_i + λ F(ψ → φ)`: upper bound on the LOCC fidelity from
/// `σ = λ|ψ⟩⟨ψ| + (1−λ)|η⟩⟨η|` to `φ`.
pub fn f_locc_upper_bound(lambda: f64, psi: &Spectrum, phi: &Spectrum) -> Result<f64> {
    Ok((1.0 - lambda) * separable_fidelity(phi) + lambda * optimal_conversion_fidelity(psi, phi)?)
}

/// Best fidelity of a product state with a pure target: its largest Schmidt weight.
pub fn separable_fidelity(phi: &Spectrum) -> f64 {
    phi.largest()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElOccBound {
    pub value: f64,
    pub protocol: &'static str,
}

/// `λε² + (1 − λε²)/2`.
pub fn f_elocc_lower_bound(lambda: f64, epsilon: f64) -> Result<ElOccBound> {
    if !(0.0..=1.0).contains(&lambda) || !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("lambda {lambda} or epsilon {epsilon} outside [0,1]")));
    }
    let good = lambda * epsilon * epsilon;
    Ok(ElOccBound {
        value: good + 0.5 * (1.0 - good),
        protocol: "measure the support of the core state; convert that branch with the catalyst; \
                   map the remainder to the best product state",
    })
}

/// Marginal spectrum of `ε ψ_core + √(1−ε²)|55⟩` with core weights
/// `(0.4, 0.4, 0.1, 0.1)`.
pub fn family_spectrum(epsilon: f64) -> Result<Spectrum> {
    let e2 = epsilon * epsilon;
    Spectrum::new(vec![0.4 * e2, 0.4 * e2, 0.1 * e2, 0.1 * e2, (1.0 - e2).max(0.0)])
}

/// `√(2F − 1)` with `F` the optimal conversion fidelity from `psi_core` to `phi`.
pub fn epsilon_threshold(psi_core: &Spectrum, phi: &Spectrum) -> Result<f64> {
    threshold_from_fidelity(optimal_conversion_fidelity(psi_core, phi)?)
}

pub fn threshold_from_fidelity(f: f64) -> Result<f64> {
    if f < 0.5 {
        return Err(Error::InvalidArgument(format!("fidelity {f} below 1/2")));
    }
    Ok((2.0 * f - 1.0).sqrt().clamp(0.0, 1.0))
}

/// Smallest `ε` in `[lo, 1]` above which `ε² > 2 F(ψ_ε → φ) − 1`, located by
/// bisection. This is exactly where the two bounds separate for every `λ`.
pub fn separation_crossover(phi: &Spectrum, lo: f64) -> Result<f64> {
    let gap = |e: f64| -> Result<f64> {
        let f = optimal_conversion_fidelity(&family_spectrum(e)?, phi)?;
        Ok(e * e - (2.0 * f - 1.0))
    };
    if gap(1.0)? <= 0.0 {
        return Ok(1.0);
    }
    let (mut a, mut b) = (lo, 1.0);
    if gap(a)? > 0.0 {
        return Ok(a);
    }
    for _ in 0..50 {
        let m = 0.5 * (a + b);
        if gap(m)? > 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalysis;
    use crate::qcore::{partial_trace_a, trace_distance};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sp(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn example_class_values() {
        for lambda in [0.01, 0.1, 0.5, 0.99] {
            let c = example_class(lambda).unwrap();
            assert!((c.chi.trace - 0.95).abs() < 1e-12);
            assert!((c.spec.mu - 0.95 * lambda).abs() < 1e-12);
            let s = c.chi.normalized_spectrum().unwrap();
            for (x, y) in s.values().iter().zip([0.4, 0.4, 0.1, 0.1]) {
                assert!((x - y).abs() < 1e-12);
            }
            let v = lemma1_check(&c.spec).unwrap();
            assert!(v.is_impossible() && v.recheck());
            let Certificate::MarginalCondition { table, .. } = &v.certificate else { panic!() };
            let w = table.violation.unwrap();
            assert_eq!(w.k, 2);
            assert!((w.lhs - 0.8).abs() < 1e-12 && (w.rhs - 0.75).abs() < 1e-12);
        }
    }

    #[test]
    fn chi_trace_identity_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let psi = random_pure_state(3, 3, &mut rng);
            let eta = random_pure_state(3, 1, &mut rng).tensor(&random_pure_state(1, 3, &mut rng)).unwrap();
            let chi = chi_of(&psi, &eta).unwrap();
            assert!((chi.trace - (1.0 - eta.overlap(&psi))).abs() < 1e-12);
            let e = hermitian_eig(&chi.matrix).unwrap();
            assert!(e.values[1].abs() < 1e-10 && e.min_value() > -1e-10);
            assert!((e.values[0] - chi.trace).abs() < 1e-10);
        }
    }

    #[test]
    fn orthogonal_eta_gives_pure_chi() {
        let psi = presets::phi_tilde();
        let chi = chi_of(&psi, &presets::eta_55()).unwrap();
        assert!((chi.trace - 1.0).abs() < 1e-15);
        assert!(chi.matrix.max_abs_diff(psi.projector().matrix()) < 1e-15);
        let c = build_class(1.0, &psi, &presets::phi_target(), &presets::eta_55()).unwrap();
        assert!((c.spec.mu - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hypothesis_violations_rejected() {
        let psi = presets::psi_source();
        let phi = presets::phi_target();
        assert!(matches!(build_class(0.5, &psi, &phi, &presets::phi_tilde()), Err(Error::Hypothesis(_))));
        let eta11 = PureState::basis(5, 5, 0, 0).unwrap();
        assert!(matches!(build_class(0.5, &psi, &phi, &eta11), Err(Error::Hypothesis(_))));
        let eta = presets::eta_55();
        assert!(matches!(build_class(0.5, &eta, &phi, &eta), Err(Error::Hypothesis(_))));
        assert!(matches!(build_class(0.0, &psi, &phi, &eta), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn unknown_when_condition_holds() {
        let c = build_class(0.5, &presets::psi_source(), &presets::phi_tilde(), &presets::eta_55()).unwrap();
        let v = lemma1_check(&c.spec).unwrap();
        assert_eq!(v.decision, Decision::Unknown);
        assert!(v.recheck());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = example_spec(0.5).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let back: RankTwoSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn single_product_vector_in_example_range() {
        let c = example_class(0.5).unwrap();
        let pv = product_vectors_in_range(&c.rho).unwrap();
        assert_eq!(pv.count, ProductCount::Finite(1));
        assert!(pv.witnesses[0].overlap(&presets::eta_55()) > 1.0 - 1e-12);
        let pv = product_vectors_in_span(&presets::phi_target(), &presets::eta_55()).unwrap();
        assert_eq!(pv.count, ProductCount::Finite(1));
    }

    #[test]
    fn two_basis_vectors_span_two_products() {
        let x = PureState::basis(5, 5, 0, 0).unwrap();
        let y = PureState::basis(5, 5, 1, 1).unwrap();
        assert_eq!(product_vectors_in_span(&x, &y).unwrap().count, ProductCount::Finite(2));
    }

    #[test]
    fn bell_pair_span_has_two_products() {
        let s = 0.5f64.sqrt();
        let plus = PureState::from_real(2, 2, &[s, 0.0, 0.0, s]).unwrap();
        let minus = PureState::from_real(2, 2, &[s, 0.0, 0.0, -s]).unwrap();
        let pv = product_vectors_in_span(&plus, &minus).unwrap();
        assert_eq!(pv.count, ProductCount::Finite(2));
        // span{|00⟩+|11⟩, |01⟩+|10⟩} contains |++⟩ and |−−⟩
        let a = PureState::from_real(2, 2, &[s, 0.0, 0.0, s]).unwrap();
        let b = PureState::from_real(2, 2, &[0.0, s, s, 0.0]).unwrap();
        assert_eq!(product_vectors_in_span(&a, &b).unwrap().count, ProductCount::Finite(2));
    }

    #[test]
    fn product_span_is_infinite() {
        let x = PureState::basis(2, 2, 0, 0).unwrap();
        let y = PureState::basis(2, 2, 0, 1).unwrap();
        assert_eq!(product_vectors_in_span(&x, &y).unwrap().count, ProductCount::Infinite);
    }

    /// Dense projective scan oracle: the minimum second Schmidt weight along
    /// the pencil dips to zero exactly at the reported witnesses.
    #[test]
    fn scan_agrees_with_minor_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..5 {
            let u = random_pure_state(2, 2, &mut rng);
            let v = random_pure_state(2, 2, &mut rng);
            let pv = product_vectors_in_span(&u, &v).unwrap();
            assert_eq!(pv.count, ProductCount::Finite(2));
            for w in &pv.witnesses {
                assert!(second_schmidt(w) < 1e-9);
                // witness lies in the span
                let r = w.overlap(&u) + {
                    let uo = PureState::normalized(
                        2,
                        2,
                        v.amplitudes().iter().zip(u.amplitudes()).map(|(b, a)| b - u.inner(&v) * a).collect(),
                    )
                    .unwrap();
                    w.overlap(&uo)
                };
                assert!((r - 1.0).abs() < 1e-9);
            }
        }
        // generic 3x3 span: the minors have no common root
        let u = random_pure_state(3, 3, &mut rng);
        let v = random_pure_state(3, 3, &mut rng);
        assert_eq!(product_vectors_in_span(&u, &v).unwrap().count, ProductCount::Finite(0));
        let mut min_seen = f64::INFINITY;
        for s in 0..100 {
            for r in 0..100 {
                let t = C64::from_polar(10f64.powf(-3.0 + 6.0 * s as f64 / 99.0), std::f64::consts::TAU * r as f64 / 100.0);
                let amps = u.amplitudes().iter().zip(v.amplitudes()).map(|(a, b)| a + t * b).collect();
                min_seen = min_seen.min(second_schmidt(&PureState::normalized(3, 3, amps).unwrap()));
            }
        }
        assert!(min_seen > 1e-6);
    }

    #[test]
    fn example_protocol_reproduces_rho() {
        let c = example_class(0.5).unwrap();
        let run = elocc_protocol_execute(&c.spec, &presets::omega_spectrum()).unwrap();
        assert!((run.transcript.probabilities[0] - 0.475).abs() < 1e-12);
        assert!((run.transcript.probabilities[1] - 0.525).abs() < 1e-12);
        assert_eq!(run.transcript.projector_rank, 4);
        assert!(trace_distance(&run.rho_out, &c.rho).unwrap() <= 1e-10);
    }

    #[test]
    fn protocol_without_catalysis_is_rejected() {
        let c = example_class(0.5).unwrap();
        assert!(matches!(elocc_protocol_execute(&c.spec, &Spectrum::trivial()), Err(Error::Precondition(_))));
    }

    #[test]
    fn pure_limit_outputs_phi() {
        let c = build_class(1.0, &presets::phi_tilde(), &presets::phi_target(), &presets::eta_55()).unwrap();
        let run = elocc_protocol_execute(&c.spec, &presets::omega_spectrum()).unwrap();
        assert!(trace_distance(&run.rho_out, &presets::phi_target().projector()).unwrap() < 1e-12);
    }

    #[test]
    fn random_specs_reproduce_rho() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for k in 0..30 {
            let spec = random_spec(5, k % 2 == 0, &mut rng).unwrap();
            let c = class_from_spec(&spec).unwrap();
            let run = elocc_protocol_execute(&spec, &presets::omega_spectrum()).unwrap();
            assert!(trace_distance(&run.rho_out, &c.rho).unwrap() <= 1e-10);
            assert!((run.transcript.probabilities[0] / spec.lambda - c.chi.trace).abs() < 1e-10);
        }
    }

    #[test]
    fn verdict_is_lambda_free() {
        let decisions: Vec<_> =
            [0.01, 0.1, 0.5, 0.99].iter().map(|&l| lemma1_check(&example_spec(l).unwrap()).unwrap().decision).collect();
        assert!(decisions.iter().all(|&d| d == Decision::Impossible));
    }

    #[test]
    fn bounds_at_endpoints() {
        let beta = sp(&[0.5, 0.25, 0.25]);
        assert_eq!(separable_fidelity(&beta), 0.5);
        assert_eq!(f_locc_upper_bound(0.0, &family_spectrum(0.7).unwrap(), &beta).unwrap(), 0.5);
        let f1 = f_locc_upper_bound(1.0, &family_spectrum(1.0).unwrap(), &beta).unwrap();
        assert!(f1 < 1.0 && f1 > 0.75);
        assert_eq!(f_elocc_lower_bound(1.0, 1.0).unwrap().value, 1.0);
        assert_eq!(f_elocc_lower_bound(0.0, 0.3).unwrap().value, 0.5);
        assert!((f_elocc_lower_bound(0.5, 0.9).unwrap().value - 0.7025).abs() < 1e-15);
    }

    #[test]
    fn threshold_endpoints() {
        assert_eq!(threshold_from_fidelity(1.0).unwrap(), 1.0);
        assert_eq!(threshold_from_fidelity(0.5).unwrap(), 0.0);
        assert!(threshold_from_fidelity(0.4).is_err());
        let e = epsilon_threshold(&sp(&[0.4, 0.4, 0.1, 0.1]), &sp(&[0.5, 0.25, 0.25])).unwrap();
        assert!(e > 0.0 && e < 1.0);
    }

    #[test]
    fn separation_holds_above_crossover() {
        let beta = sp(&[0.5, 0.25, 0.25]);
        let eps_t = epsilon_threshold(&sp(&[0.4, 0.4, 0.1, 0.1]), &beta).unwrap();
        let cross = separation_crossover(&beta, eps_t).unwrap();
        assert!(cross >= eps_t && cross < 1.0);
        for i in 1..=20 {
            let e = cross + (1.0 - cross) * i as f64 / 20.0;
            for l in 1..10 {
                let lambda = l as f64 / 10.0;
                let up = f_locc_upper_bound(lambda, &family_spectrum(e).unwrap(), &beta).unwrap();
                assert!(f_elocc_lower_bound(lambda, e).unwrap().value > up, "e={e} l={lambda}");
            }
        }
    }

    #[test]
    fn example_marginals_are_separated() {
        let c = example_class(0.5).unwrap();
        assert!(!genuinely_mixed_heuristic(&c.rho).unwrap());
        let a = partial_trace_a(&c.sigma);
        assert!((a.trace().re - 1.0).abs() < 1e-12);
        assert!(catalysis::elocc_with_catalyst(
            &c.chi.normalized_spectrum().unwrap(),
            &schmidt_spectrum(&c.spec.phi),
            &presets::omega_spectrum()
        )
        .is_possible());
    }
}
