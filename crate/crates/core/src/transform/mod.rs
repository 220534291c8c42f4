//! Pure-state LOCC decisions and the three-valued verdict type.

mod conversion;

use serde::{Deserialize, Serialize};

pub use conversion::{optimal_conversion, optimal_conversion_fidelity, ConversionOptimum};

use crate::config::Tolerances;
use crate::majorize::{is_majorized, Majorization, Spectrum};
use crate::qcore::{schmidt_spectrum, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Possible,
    Impossible,
    Unknown,
}

impl Decision {
    /// Exit-code contract of the command-line front end.
    pub fn exit_code(self) -> i32 {
        match self {
            Decision::Possible => 0,
            Decision::Impossible => 1,
            Decision::Unknown => 2,
        }
    }
}

/// Budget spent by an incomplete search that found nothing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_dim: usize,
    pub grid_steps: usize,
    pub candidates_checked: usize,
    /// Catalyst dimensions whose exact interval scan found no feasible point.
    pub exact_scan_empty: Vec<usize>,
}

/// Witness attached to a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    /// Plain prefix-sum comparison of the two marginal spectra.
    Majorization { source: Spectrum, target: Spectrum, table: Majorization },
    /// Comparison of the catalyst-extended spectra.
    Catalyst { source: Spectrum, target: Spectrum, catalyst: Spectrum, table: Majorization },
    /// Necessary condition for rank-two mixed-state conversion.
    MarginalCondition { chi_spectrum: Spectrum, phi_spectrum: Spectrum, chi_trace: f64, table: Majorization },
    SearchExhausted { budget: SearchBudget },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    pub certificate: Certificate,
}

impl Verdict {
    pub fn is_possible(&self) -> bool {
        self.decision == Decision::Possible
    }

    pub fn is_impossible(&self) -> bool {
        self.decision == Decision::Impossible
    }

    /// Re-derives the decision from the certificate alone.
    pub fn recheck(&self) -> bool {
        match &self.certificate {
            Certificate::Majorization { table, .. } | Certificate::Catalyst { table, .. } => {
                table.recheck()
                    && (table.holds == (self.decision == Decision::Possible))
                    && self.decision != Decision::Unknown
            }
            Certificate::MarginalCondition { table, .. } => {
                table.recheck()
                    && match self.decision {
                        Decision::Impossible => !table.holds,
                        Decision::Unknown => table.holds,
                        Decision::Possible => false,
                    }
            }
            Certificate::SearchExhausted { .. } => self.decision == Decision::Unknown,
        }
    }
}

/// LOCC convertibility of pure spectra: possible iff `α ≺ β`.
pub fn locc_spectra(alpha: &Spectrum, beta: &Spectrum, tol: f64) -> Verdict {
    let table = is_majorized(alpha, beta, tol);
    let decision = if table.holds { Decision::Possible } else { Decision::Impossible };
    Verdict {
        decision,
        certificate: Certificate::Majorization { source: alpha.clone(), target: beta.clone(), table },
    }
}

/// LOCC convertibility `ψ → φ` for pure states.
pub fn locc_pure(psi: &PureState, phi: &PureState) -> Verdict {
    locc_spectra(&schmidt_spectrum(psi), &schmidt_spectrum(phi), Tolerances::DEFAULT.majorization)
}

/// Neither direction is possible under LOCC.
pub fn incommensurate(psi: &PureState, phi: &PureState) -> bool {
    locc_pure(psi, phi).is_impossible() && locc_pure(phi, psi).is_impossible()
}

pub fn incommensurate_spectra(alpha: &Spectrum, beta: &Spectrum, tol: f64) -> bool {
    locc_spectra(alpha, beta, tol).is_impossible() && locc_spectra(beta, alpha, tol).is_impossible()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use num_complex::Complex64 as C64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn phi_tilde_to_phi_is_impossible_at_two() {
        let v = locc_pure(&presets::phi_tilde(), &presets::phi_target());
        assert_eq!(v.decision, Decision::Impossible);
        let Certificate::Majorization { table, .. } = &v.certificate else { panic!() };
        assert_eq!(table.violation.unwrap().k, 2);
        assert!(v.recheck());
    }

    #[test]
    fn reflexive_possible() {
        let psi = presets::psi_source();
        assert!(locc_pure(&psi, &psi).is_possible());
        assert!(!incommensurate(&psi, &psi));
    }

    #[test]
    fn example_pair_is_incommensurate() {
        assert!(incommensurate(&presets::phi_tilde(), &presets::phi_target()));
    }

    #[test]
    fn bell_and_product_are_comparable() {
        let bell = presets::bell();
        let prod = PureState::basis(2, 2, 0, 0).unwrap();
        assert!(locc_pure(&bell, &prod).is_possible());
        assert!(locc_pure(&prod, &bell).is_impossible());
        assert!(!incommensurate(&bell, &prod));
    }

    #[test]
    fn random_pairs_agree_with_majorization() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let rand_state = |rng: &mut ChaCha8Rng| {
            let amps = (0..9).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
            PureState::normalized(3, 3, amps).unwrap()
        };
        for _ in 0..200 {
            let (a, b) = (rand_state(&mut rng), rand_state(&mut rng));
            let direct = is_majorized(&schmidt_spectrum(&a), &schmidt_spectrum(&b), 1e-10).holds;
            assert_eq!(locc_pure(&a, &b).is_possible(), direct);
        }
    }

    #[test]
    fn locc_is_transitively_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let rand_spec = |rng: &mut ChaCha8Rng| {
            let v: Vec<f64> = (0..4).map(|_| rng.random::<f64>().powi(3)).collect();
            let s: f64 = v.iter().sum();
            Spectrum::new(v.into_iter().map(|x| x / s).collect()).unwrap()
        };
        let mut chains = 0;
        for _ in 0..3000 {
            let (a, b, c) = (rand_spec(&mut rng), rand_spec(&mut rng), rand_spec(&mut rng));
            if locc_spectra(&a, &b, 1e-10).is_possible() && locc_spectra(&b, &c, 1e-10).is_possible() {
                chains += 1;
                assert!(locc_spectra(&a, &c, 2e-10).is_possible());
            }
        }
        assert!(chains > 10);
    }
}
