//! Ordered spectra and the majorization relation.
//!
//! `α ≺ β` holds when every prefix sum of the nonincreasing list `α` is at most
//! the matching prefix sum of `β`. Lists of different length are zero-padded.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};

const CLAMP_SLACK: f64 = 1e-12;
const SUM_SLACK: f64 = 1e-9;

/// Nonincreasing probability vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts `values` in nonincreasing order after clamping roundoff into `[0, 1]`.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("empty".into()));
        }
        for v in values.iter_mut() {
            if !v.is_finite() {
                return Err(Error::InvalidSpectrum("non-finite entry".into()));
            }
            if *v < -CLAMP_SLACK || *v > 1.0 + CLAMP_SLACK {
                return Err(Error::InvalidSpectrum(format!("entry {v} outside [0,1]")));
            }
            *v = v.clamp(0.0, 1.0);
        }
        let total = compensated_sum(&values);
        if (total - 1.0).abs() > SUM_SLACK {
            return Err(Error::InvalidSpectrum(format!("entries sum to {total}")));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(values))
    }

    /// `(1)`, the spectrum of a product state.
    pub fn trivial() -> Self {
        Self(vec![1.0])
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> f64 {
        self.0[0]
    }

    /// Copy of the values zero-padded to length `n`.
    pub fn padded(&self, n: usize) -> Vec<f64> {
        let mut v = self.0.clone();
        v.resize(n.max(v.len()), 0.0);
        v
    }

    /// Number of entries above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.0.iter().filter(|&&v| v > tol).count()
    }

    /// Drops trailing entries at or below `tol`, keeping at least one.
    pub fn trimmed(&self, tol: f64) -> Spectrum {
        let r = self.rank(tol).max(1);
        Spectrum(self.0[..r].to_vec())
    }
}

impl<'de> Deserialize<'de> for Spectrum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Spectrum::new(v).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<Vec<f64>> for Spectrum {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Spectrum::new(v)
    }
}

/// Neumaier-compensated sum.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Compensated running prefix sums.
pub fn prefix_sums(xs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(xs.len());
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
        out.push(sum + comp);
    }
    out
}

/// First prefix where `α` exceeds `β`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
}

/// Prefix-sum table of a majorization check, re-checkable on its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Majorization {
    pub holds: bool,
    pub prefix_alpha: Vec<f64>,
    pub prefix_beta: Vec<f64>,
    pub violation: Option<Violation>,
    pub tol: f64,
}

impl Majorization {
    /// Re-derives the verdict from the stored table.
    pub fn recheck(&self) -> bool {
        let n = self.prefix_alpha.len();
        let ok = (0..n.saturating_sub(1)).all(|k| self.prefix_alpha[k] <= self.prefix_beta[k] + self.tol);
        ok == self.holds
    }
}

/// `α ≺ β` with prefix sums compared for `k = 1, …, N-1`.
pub fn is_majorized(alpha: &Spectrum, beta: &Spectrum, tol: f64) -> Majorization {
    let n = alpha.len().max(beta.len());
    let pa = prefix_sums(&alpha.padded(n));
    let pb = prefix_sums(&beta.padded(n));
    let violation = (0..n.saturating_sub(1))
        .find(|&k| pa[k] > pb[k] + tol)
        .map(|k| Violation { k: k + 1, lhs: pa[k], rhs: pb[k] });
    Majorization { holds: violation.is_none(), prefix_alpha: pa, prefix_beta: pb, violation, tol }
}

pub fn is_majorized_default(alpha: &Spectrum, beta: &Spectrum) -> Majorization {
    is_majorized(alpha, beta, Tolerances::DEFAULT.majorization)
}

/// All pairwise products `α_i γ_j`, nonincreasing.
pub fn product_spectrum(alpha: &Spectrum, gamma: &Spectrum) -> Spectrum {
    let mut v = Vec::with_capacity(alpha.len() * gamma.len());
    for &a in alpha.values() {
        for &g in gamma.values() {
            v.push(a * g);
        }
    }
    v.sort_by(|a, b| b.total_cmp(a));
    Spectrum(v)
}

/// Largest `ε` such that every list within `ε` of `α` entrywise keeps every
/// strict product ordering `α_i γ_j > α_k γ_l`.
///
/// Each strict pair contributes `(α_i γ_j − α_k γ_l) / (γ_j + γ_l)`. Products
/// equal up to `tie_tol` are ties and impose nothing; a perturbation may break
/// a tie either way. Returns `+∞` when no strict pair exists.
pub fn epsilon_order_radius(alpha: &Spectrum, gamma: &Spectrum) -> f64 {
    epsilon_order_radius_with(alpha, gamma, 1e-14)
}

pub fn epsilon_order_radius_with(alpha: &Spectrum, gamma: &Spectrum, tie_tol: f64) -> f64 {
    let a = alpha.values();
    let g = gamma.values();
    let mut best = f64::INFINITY;
    for &ai in a {
        for &gj in g {
            let p = ai * gj;
            for &ak in a {
                for &gl in g {
                    let q = ak * gl;
                    if p - q > tie_tol {
                        best = best.min((p - q) / (gj + gl));
                    }
                }
            }
        }
    }
    best
}

/// `max_i |β_i − α_i| < eps` after zero-padding.
pub fn is_epsilon_list(beta: &Spectrum, alpha: &Spectrum, eps: f64) -> bool {
    max_deviation(beta, alpha) < eps
}

pub fn max_deviation(beta: &Spectrum, alpha: &Spectrum) -> f64 {
    let n = alpha.len().max(beta.len());
    beta.padded(n).iter().zip(alpha.padded(n)).map(|(b, a)| (b - a).abs()).fold(0.0, f64::max)
}
