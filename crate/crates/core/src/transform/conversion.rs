//! Best deterministic-conversion fidelity between pure states given by their
//! Schmidt spectra.
//!
//! The reachable intermediate spectra are `{μ : α ≺ μ}`. With aligned Schmidt
//! bases the fidelity to the target is `(Σ_i √(μ_i β_i))²`, so we maximize the
//! concave function `h(μ) = Σ_i √(μ_i β_i)` over
//!
//! ```text
//!     Q = { μ ≥ 0, Σ μ = 1, μ_1 + … + μ_k ≥ α_1 + … + α_k  (k < N) }.
//! ```
//!
//! `Q` drops the ordering constraint on `μ`; since `β` is sorted, sorting any
//! point of `Q` keeps it feasible and does not decrease `h`, so the optimum is
//! the same. `Q` is solved with a log-barrier Newton method.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majorize::{is_majorized, prefix_sums, Spectrum};

const SATURATED: f64 = 1e-13;
const MAX_NEWTON: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConversionOptimum {
    /// `(Σ √(μ_i β_i))²` at the optimum.
    pub fidelity: f64,
    /// Optimal intermediate spectrum, nonincreasing.
    pub intermediate: Vec<f64>,
    /// Upper bound on the remaining gap in `h`.
    pub gap_bound: f64,
    pub newton_steps: usize,
}

/// Largest fidelity reachable from `α` towards `β` by deterministic LOCC.
pub fn optimal_conversion_fidelity(alpha: &Spectrum, beta: &Spectrum) -> Result<f64> {
    optimal_conversion(alpha, beta).map(|o| o.fidelity)
}

pub fn optimal_conversion(alpha: &Spectrum, beta: &Spectrum) -> Result<ConversionOptimum> {
    let n = alpha.len().max(beta.len());
    let a = alpha.padded(n);
    let b = beta.padded(n);

    if is_majorized(alpha, beta, 0.0).holds {
        return Ok(ConversionOptimum { fidelity: 1.0, intermediate: b, gap_bound: 0.0, newton_steps: 0 });
    }

    let pa = prefix_sums(&a);
    let k_end = pa.iter().position(|&s| s >= 1.0 - SATURATED).unwrap_or(n - 1) + 1;
    if k_end == 1 {
        let mut mu = vec![0.0; n];
        mu[0] = 1.0;
        return Ok(ConversionOptimum { fidelity: b[0], intermediate: mu, gap_bound: 0.0, newton_steps: 0 });
    }
    // tails[k] = α_{k+1} + … + α_N, summed from the small end
    let mut tails = vec![0.0; k_end - 1];
    let mut acc = 0.0;
    for i in (1..n).rev() {
        acc += a[i];
        if i - 1 < k_end - 1 {
            tails[i - 1] = acc;
        }
    }
    let weights: Vec<f64> = b[..k_end].iter().map(|x| x.sqrt()).collect();
    let mut solver = Barrier::new(weights, tails);

    let mut mu: Vec<f64> = (0..k_end).map(|i| 0.5 * a[i] + if i == 0 { 0.5 } else { 0.0 }).collect();
    let total: f64 = mu.iter().sum();
    mu.iter_mut().for_each(|x| *x /= total);

    let m = (2 * k_end - 1) as f64;
    let mut t = 1.0;
    loop {
        mu = solver.center(mu, t).map_err(|best| Error::NonConvergence { best: best * best })?;
        if m / t < 1e-12 {
            break;
        }
        t *= 8.0;
    }
    let h = solver.objective(&mu);
    mu.resize(n, 0.0);
    mu.sort_by(|p, q| q.total_cmp(p));
    Ok(ConversionOptimum {
        fidelity: (h * h).min(1.0),
        intermediate: mu,
        gap_bound: m / t,
        newton_steps: solver.steps,
    })
}

/// Log-barrier maximizer of `t·h(μ) + Σ ln μ_i + Σ ln s_k` on `Σ μ = 1`, with
/// tail slacks `s_k = T_k − (μ_{k+1} + … + μ_K)`.
struct Barrier {
    /// `√β_i`
    weights: Vec<f64>,
    /// `T_k` for `k < K`
    tails: Vec<f64>,
    steps: usize,
}

impl Barrier {
    fn new(weights: Vec<f64>, tails: Vec<f64>) -> Self {
        Self { weights, tails, steps: 0 }
    }

    fn objective(&self, mu: &[f64]) -> f64 {
        mu.iter().zip(&self.weights).map(|(m, w)| w * m.max(0.0).sqrt()).sum()
    }

    fn slacks(&self, mu: &[f64]) -> Option<Vec<f64>> {
        if mu.iter().any(|&m| m <= 0.0) {
            return None;
        }
        let k = self.tails.len();
        let mut s = vec![0.0; k];
        let mut tail = 0.0;
        for j in (0..k).rev() {
            tail += mu[j + 1];
            s[j] = self.tails[j] - tail;
            if s[j] <= 0.0 {
                return None;
            }
        }
        Some(s)
    }

    fn value(&self, mu: &[f64], t: f64) -> Option<f64> {
        let s = self.slacks(mu)?;
        Some(t * self.objective(mu) + mu.iter().map(|m| m.ln()).sum::<f64>() + s.iter().map(|v| v.ln()).sum::<f64>())
    }

    /// Equality-constrained Newton iterations to the central point at barrier
    /// weight `t`. On failure returns the best objective `h` seen.
    fn center(&mut self, mut mu: Vec<f64>, t: f64) -> std::result::Result<Vec<f64>, f64> {
        let n = mu.len();
        for _ in 0..MAX_NEWTON {
            self.steps += 1;
            let s = self.slacks(&mu).ok_or_else(|| self.objective(&mu))?;
            // prefix sums over k < i of 1/s_k and 1/s_k²
            let mut inv_s = vec![0.0; n];
            let mut inv_s2 = vec![0.0; n];
            for i in 1..n {
                inv_s[i] = inv_s[i - 1] + 1.0 / s[i - 1];
                inv_s2[i] = inv_s2[i - 1] + 1.0 / (s[i - 1] * s[i - 1]);
            }
            let grad: Vec<f64> = (0..n)
                .map(|i| {
                    let (m, w) = (mu[i], self.weights[i]);
                    t * 0.5 * w / m.sqrt() + 1.0 / m - inv_s[i]
                })
                .collect();
            // negated Hessian, positive definite
            let mut neg_h = vec![vec![0.0; n]; n];
            for (i, row) in neg_h.iter_mut().enumerate() {
                for (j, e) in row.iter_mut().enumerate() {
                    *e = inv_s2[i.min(j)];
                }
                let (m, w) = (mu[i], self.weights[i]);
                row[i] += t * 0.25 * w / (m * m.sqrt()) + 1.0 / (m * m);
            }
            let pg = solve(neg_h.clone(), grad.clone()).ok_or_else(|| self.objective(&mu))?;
            let p1 = solve(neg_h, vec![1.0; n]).ok_or_else(|| self.objective(&mu))?;
            let nu = pg.iter().sum::<f64>() / p1.iter().sum::<f64>();
            let step: Vec<f64> = pg.iter().zip(&p1).map(|(g, o)| g - nu * o).collect();
            let decrement: f64 = grad.iter().zip(&step).map(|(g, d)| g * d).sum();
            // decrement / 2t bounds the centering error in h
            if decrement < 1e-13 * t.max(1.0) {
                return Ok(mu);
            }
            let f0 = self.value(&mu, t).expect("feasible");
            let mut alpha = 1.0;
            loop {
                let cand: Vec<f64> = mu.iter().zip(&step).map(|(m, d)| m + alpha * d).collect();
                if let Some(f1) = self.value(&cand, t) {
                    if f1 >= f0 + 0.25 * alpha * decrement {
                        mu = cand;
                        break;
                    }
                }
                alpha *= 0.5;
                if alpha < 1e-20 {
                    // no ascent possible at working precision
                    return Ok(mu);
                }
            }
        }
        Err(self.objective(&mu))
    }
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() == 0.0 || !a[piv][col].is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                let (top, bottom) = a.split_at_mut(row);
                for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                    *x -= f * y;
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
