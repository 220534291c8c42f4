//! Deterministic inputs shared by the benchmarks.

use elocc_core::purify::{orthocomplement_state, random_kraus_set, trial_rng, KentClassState};
use elocc_core::qcore::random::random_pure_state;
use elocc_core::{DensityMatrix, KrausPair, PureState, Spectrum};

pub fn core_pair() -> (Spectrum, Spectrum) {
    (elocc_core::presets::core_spectrum(), elocc_core::presets::target_spectrum())
}

/// Random `n ⊗ n` pure state, fixed by `seed`.
pub fn state(n: usize, seed: u64) -> PureState {
    random_pure_state(n, n, &mut trial_rng(seed, 0))
}

pub fn kraus(d: usize, trial: u64) -> Vec<KrausPair> {
    random_kraus_set(d, d, trial, &mut trial_rng(7, trial)).expect("valid dimensions")
}

pub fn werner(lambda: f64) -> KentClassState {
    KentClassState::werner(lambda).expect("lambda in (0,1)")
}

pub fn mixed(n: usize, seed: u64) -> DensityMatrix {
    let psi = state(n, seed);
    DensityMatrix::convex(0.6, &psi.projector(), &orthocomplement_state(&psi).expect("dimension above one"))
        .expect("convex weight in range")
}
