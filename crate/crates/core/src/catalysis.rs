//! Catalyst-assisted conversion of pure states, catalyst search, the
//! catalysis-free neighborhood of a pure state, and a mixed-state pair that
//! remains catalyzable arbitrarily close to the identity.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::majorize::{epsilon_order_radius, is_majorized, product_spectrum, Spectrum};
use crate::mixedcat::{self, RankTwoClass};
use crate::qcore::{schmidt_spectrum, uhlmann_fidelity, DensityMatrix, PureState};
use crate::transform::{locc_spectra, Certificate, Decision, SearchBudget, Verdict};

/// Smallest mixing weight the close-pair constructor will return.
pub const LAMBDA_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatalystSearchConfig {
    /// Largest catalyst Schmidt rank tried.
    pub max_dim: usize,
    /// Grid resolution per free coordinate of the ordered simplex.
    pub grid_steps: usize,
    /// Bisection steps per coordinate when refining a hit.
    pub refine_iters: usize,
    pub seed: u64,
}

impl Default for CatalystSearchConfig {
    fn default() -> Self {
        Self { max_dim: 3, grid_steps: 40, refine_iters: 40, seed: 0 }
    }
}

impl CatalystSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_dim < 2 {
            return Err(Error::InvalidArgument(format!("max_dim {} < 2", self.max_dim)));
        }
        if self.grid_steps < 10 {
            return Err(Error::InvalidArgument(format!("grid_steps {} < 10", self.grid_steps)));
        }
        Ok(())
    }
}

/// `α ⊗ ω ≺ β ⊗ ω`, the catalytic convertibility condition.
pub fn elocc_with_catalyst(alpha: &Spectrum, beta: &Spectrum, omega: &Spectrum) -> Verdict {
    elocc_with_catalyst_tol(alpha, beta, omega, Tolerances::DEFAULT.majorization)
}

pub fn elocc_with_catalyst_tol(alpha: &Spectrum, beta: &Spectrum, omega: &Spectrum, tol: f64) -> Verdict {
    let source = product_spectrum(alpha, omega);
    let target = product_spectrum(beta, omega);
    let table = is_majorized(&source, &target, tol);
    let decision = if table.holds { Decision::Possible } else { Decision::Impossible };
    Verdict {
        decision,
        certificate: Certificate::Catalyst { source, target, catalyst: omega.clone(), table },
    }
}

pub fn elocc_pure_with_catalyst(psi: &PureState, phi: &PureState, omega: &Spectrum) -> Verdict {
    elocc_with_catalyst(&schmidt_spectrum(psi), &schmidt_spectrum(phi), omega)
}

/// Closed sub-intervals of `c ∈ [1/2, 1)` for which the catalyst `(c, 1-c)`
/// enables `α → β`.
///
/// Between consecutive breakpoints `c = max(x, y) / (x + y)` of either list the
/// sorted order of `α ⊗ ω` and `β ⊗ ω` is fixed, so every prefix-sum gap is
/// linear in `c` and the feasible set of each piece follows from its endpoints.
pub fn exact_two_dim_intervals(alpha: &Spectrum, beta: &Spectrum, tol: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![0.5, 1.0];
    for list in [alpha.values(), beta.values()] {
        for (i, &x) in list.iter().enumerate() {
            for &y in &list[i..] {
                if x + y > 0.0 {
                    let c = x.max(y) / (x + y);
                    if c > 0.5 && c < 1.0 {
                        cuts.push(c);
                    }
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let gaps = |c: f64| -> Vec<f64> {
        let omega = two_level(c);
        let table = is_majorized(&product_spectrum(alpha, &omega), &product_spectrum(beta, &omega), 0.0);
        table.prefix_beta.iter().zip(&table.prefix_alpha).map(|(b, a)| b - a).collect()
    };

    let mut out: Vec<(f64, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (g0, g1) = (gaps(lo), gaps(hi));
        // feasible t ∈ [0,1] with (1-t) g0 + t g1 ≥ -tol for every prefix
        let (mut t_lo, mut t_hi) = (0.0f64, 1.0f64);
        for (&a, &b) in g0.iter().zip(&g1) {
            let (a, b) = (a + tol, b + tol);
            if a < 0.0 && b < 0.0 {
                t_lo = 1.0;
                t_hi = 0.0;
                break;
            }
            if a < 0.0 {
                t_lo = t_lo.max(a / (a - b));
            } else if b < 0.0 {
                t_hi = t_hi.min(a / (a - b));
            }
        }
        if t_lo <= t_hi {
            let seg = (lo + t_lo * (hi - lo), lo + t_hi * (hi - lo));
            match out.last_mut() {
                Some(last) if seg.0 <= last.1 + 1e-15 => last.1 = last.1.max(seg.1),
                _ => out.push(seg),
            }
        }
    }
    // c = 1 is the trivial catalyst
    out.retain_mut(|seg| {
        if seg.1 >= 1.0 {
            seg.1 = 1.0 - f64::EPSILON;
        }
        seg.1 >= seg.0
    });
    out
}

fn two_level(c: f64) -> Spectrum {
    Spectrum::new(vec![c, 1.0 - c]).expect("c in [0,1]")
}

/// Searches for a catalyst of Schmidt rank `2..=cfg.max_dim` enabling `α → β`.
///
/// Never returns `Impossible`: an unsuccessful search is reported as
/// `Unknown` together with the budget spent.
pub fn catalyst_search(alpha: &Spectrum, beta: &Spectrum, cfg: &CatalystSearchConfig) -> Result<Verdict> {
    cfg.validate()?;
    let tol = Tolerances::DEFAULT.majorization;
    if locc_spectra(alpha, beta, tol).is_possible() {
        return Ok(elocc_with_catalyst(alpha, beta, &Spectrum::trivial()));
    }
    let mut budget =
        SearchBudget { max_dim: cfg.max_dim, grid_steps: cfg.grid_steps, candidates_checked: 0, exact_scan_empty: vec![] };

    let intervals = exact_two_dim_intervals(alpha, beta, tol);
    if let Some(&(lo, hi)) = intervals.iter().max_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0))) {
        let v = elocc_with_catalyst(alpha, beta, &two_level(0.5 * (lo + hi)));
        budget.candidates_checked += 1;
        if v.is_possible() {
            return Ok(v);
        }
    } else {
        budget.exact_scan_empty.push(2);
    }

    for k in 3..=cfg.max_dim {
        let mut hit = None;
        for_each_ordered_partition(cfg.grid_steps, k, |parts| {
            budget.candidates_checked += 1;
            let c: Vec<f64> = parts.iter().map(|&n| n as f64 / cfg.grid_steps as f64).collect();
            let omega = Spectrum::new(c.clone()).expect("grid point on simplex");
            if elocc_with_catalyst(alpha, beta, &omega).is_possible() {
                hit = Some(c);
                return false;
            }
            true
        });
        if let Some(c) = hit {
            let refined = refine(alpha, beta, c, cfg.refine_iters);
            let v = elocc_with_catalyst(alpha, beta, &Spectrum::new(refined).expect("simplex point"));
            if v.is_possible() {
                return Ok(v);
            }
        }
    }
    Ok(Verdict { decision: Decision::Unknown, certificate: Certificate::SearchExhausted { budget } })
}

/// Visits nonincreasing positive integer vectors of length `k` summing to `n`
/// in ascending lexicographic order until `f` returns false.
fn for_each_ordered_partition(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    fn rec(rest: usize, slots: usize, cap: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if slots == 0 {
            return rest != 0 || f(cur);
        }
        // first entry is at least ceil(rest / slots), remaining entries at least 1
        let lo = rest.div_ceil(slots);
        let hi = cap.min(rest + 1 - slots);
        for v in lo..=hi {
            cur.push(v);
            let go_on = rec(rest - v, slots - 1, v, cur, f);
            cur.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    if k == 0 || n < k {
        return;
    }
    rec(n, k, n, &mut Vec::with_capacity(k), &mut f);
}

/// Moves a feasible catalyst towards the middle of its feasible segment along
/// each direction `e_i − e_1`.
fn refine(alpha: &Spectrum, beta: &Spectrum, mut c: Vec<f64>, iters: usize) -> Vec<f64> {
    let ok = |v: &[f64]| -> bool {
        v.iter().all(|&x| x > 0.0)
            && Spectrum::new(v.to_vec()).map(|s| elocc_with_catalyst(alpha, beta, &s).is_possible()).unwrap_or(false)
    };
    let shifted = |c: &[f64], i: usize, t: f64| -> Vec<f64> {
        let mut v = c.to_vec();
        v[i] += t;
        v[0] -= t;
        v
    };
    for i in 1..c.len() {
        let reach = |sign: f64| -> f64 {
            let limit = if sign > 0.0 { c[0] } else { c[i] };
            let (mut good, mut bad) = (0.0, limit);
            if ok(&shifted(&c, i, sign * bad)) {
                return bad;
            }
            for _ in 0..iters {
                let mid = 0.5 * (good + bad);
                if ok(&shifted(&c, i, sign * mid)) {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            good
        };
        let up = reach(1.0);
        let down = reach(-1.0);
        let cand = shifted(&c, i, 0.5 * (up - down));
        if ok(&cand) {
            c = cand;
        }
    }
    c
}

/// `δ = ε̃²` with `ε̃` the product-order radius of `(α, γ)`, capped at one.
///
/// Any pure `φ` with `|⟨ψ|φ⟩|² > 1 − δ` has a marginal spectrum within `ε̃` of
/// `α` in every entry.
pub fn catalysis_free_radius(alpha: &Spectrum, gamma: &Spectrum) -> f64 {
    let eps = epsilon_order_radius(alpha, gamma);
    (eps * eps).min(1.0)
}

/// Output of [`close_mixed_catalysis_pair`].
#[derive(Debug, Clone)]
pub struct ClosePair {
    pub sigma: DensityMatrix,
    pub rho: DensityMatrix,
    pub omega: PureState,
    pub lambda: f64,
    pub fidelity: f64,
    /// `(λ, F(σ(λ), ρ(λ)))` for every evaluation, in evaluation order.
    pub trace: Vec<(f64, f64)>,
    /// Fidelity is nonincreasing in `λ` along the evaluated points.
    pub monotone: bool,
    pub locc: Verdict,
    pub elocc: Verdict,
}

/// Mixed pair from the rank-two example class with `F(σ, ρ) > 1 − δ` that is
/// not LOCC-convertible but is convertible with the two-qubit catalyst.
pub fn close_mixed_catalysis_pair(delta: f64) -> Result<ClosePair> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta {delta} outside (0,1)")));
    }
    let target = 1.0 - delta;
    let mut trace = Vec::new();
    let mut fid = |lambda: f64| -> Result<(f64, RankTwoClass)> {
        let class = mixedcat::example_class(lambda)?;
        let f = uhlmann_fidelity(&class.sigma, &class.rho)?;
        trace.push((lambda, f));
        Ok((f, class))
    };

    let (f1, class1) = fid(1.0)?;
    let (lambda, fidelity, class) = if f1 > target {
        (1.0, f1, class1)
    } else {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut best = None;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let (f, class) = fid(mid)?;
            if f > target {
                lo = mid;
                best = Some((mid, f, class));
            } else {
                hi = mid;
            }
            if hi - lo < 1e-12 * hi.max(LAMBDA_FLOOR) {
                break;
            }
        }
        match best {
            Some(b) if b.0 >= LAMBDA_FLOOR => b,
            _ => return Err(Error::Precondition(format!("no mixing weight above {LAMBDA_FLOOR:e} reaches F > {target}"))),
        }
    };

    let mut sorted = trace.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let monotone = sorted.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-9);

    let locc = mixedcat::lemma1_check(&class.spec)?;
    let omega = crate::presets::omega_catalyst();
    let elocc = elocc_with_catalyst(&class.chi.normalized_spectrum()?, &schmidt_spectrum(&class.spec.phi), &schmidt_spectrum(&omega));
    if !locc.is_impossible() || !elocc.is_possible() {
        return Err(Error::Precondition("example class lost its catalysis property".into()));
    }
    Ok(ClosePair { sigma: class.sigma, rho: class.rho, omega, lambda, fidelity, trace, monotone, locc, elocc })
}
