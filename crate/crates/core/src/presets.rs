//! Fixed states of the rank-two catalysis example on `C^5 ⊗ C^5`.
//!
//! Basis labels 1..5 map to indices 0..4, and the catalyst labels 6, 7 map to
//! a separate `C^2 ⊗ C^2` factor with indices 0, 1.

use num_complex::Complex64 as C64;

use crate::majorize::Spectrum;
use crate::qcore::PureState;

const DIM: usize = 5;

/// `Σ_i √p_i |ii⟩` embedded in `C^n ⊗ C^n`.
pub fn diagonal_state(n: usize, weights: &[f64]) -> PureState {
    let mut amps = vec![C64::new(0.0, 0.0); n * n];
    for (i, &w) in weights.iter().enumerate() {
        amps[i * n + i] = C64::new(w.sqrt(), 0.0);
    }
    PureState::normalized(n, n, amps).expect("nonzero weights")
}

/// √0.38|11⟩ + √0.38|22⟩ + √0.095|33⟩ + √0.095|44⟩ + √0.05|55⟩
pub fn psi_source() -> PureState {
    diagonal_state(DIM, &[0.38, 0.38, 0.095, 0.095, 0.05])
}

/// √0.5|11⟩ + √0.25|22⟩ + √0.25|33⟩
pub fn phi_target() -> PureState {
    diagonal_state(DIM, &[0.5, 0.25, 0.25])
}

/// √0.4|11⟩ + √0.4|22⟩ + √0.1|33⟩ + √0.1|44⟩ on `C^5 ⊗ C^5`.
pub fn phi_tilde() -> PureState {
    phi_tilde_in(DIM)
}

pub fn phi_tilde_in(n: usize) -> PureState {
    diagonal_state(n, &[0.4, 0.4, 0.1, 0.1])
}

/// |55⟩
pub fn eta_55() -> PureState {
    PureState::basis(DIM, DIM, DIM - 1, DIM - 1).expect("in range")
}

/// √0.4|66⟩ + √0.6|77⟩ on its own `C^2 ⊗ C^2`.
pub fn omega_catalyst() -> PureState {
    diagonal_state(2, &[0.4, 0.6])
}

/// Marginal spectrum of [`phi_tilde`], exact.
pub fn core_spectrum() -> Spectrum {
    Spectrum::new(vec![0.4, 0.4, 0.1, 0.1]).expect("valid")
}

/// Marginal spectrum of [`phi_target`], exact.
pub fn target_spectrum() -> Spectrum {
    Spectrum::new(vec![0.5, 0.25, 0.25]).expect("valid")
}

pub fn omega_spectrum() -> Spectrum {
    Spectrum::new(vec![0.6, 0.4]).expect("valid")
}

/// ε(√0.4|11⟩ + √0.4|22⟩ + √0.1|33⟩ + √0.1|44⟩) + √(1−ε²)|55⟩
pub fn psi_family(epsilon: f64) -> PureState {
    let e2 = epsilon * epsilon;
    diagonal_state(DIM, &[0.4 * e2, 0.4 * e2, 0.1 * e2, 0.1 * e2, (1.0 - e2).max(0.0)])
}

/// (|00⟩ + |11⟩)/√2
pub fn bell() -> PureState {
    diagonal_state(2, &[0.5, 0.5])
}

pub const PRESET_NAMES: &[&str] =
    &["psi-eq8a", "phi-eq8b", "phitilde-eq10", "omega-catalyst", "eta-55", "psi-eq14:<eps>", "bell"];

/// Looks up a preset by its command-line name.
pub fn by_name(name: &str) -> Option<PureState> {
    if let Some(eps) = name.strip_prefix("psi-eq14:") {
        let e: f64 = eps.parse().ok()?;
        return (0.0..=1.0).contains(&e).then(|| psi_family(e));
    }
    Some(match name {
        "psi-eq8a" => psi_source(),
        "phi-eq8b" => phi_target(),
        "phitilde-eq10" => phi_tilde(),
        "omega-catalyst" => omega_catalyst(),
        "eta-55" => eta_55(),
        "bell" => bell(),
        _ => return None,
    })
}
