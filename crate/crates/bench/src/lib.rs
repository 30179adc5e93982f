//! Fixtures shared by the benchmarks in `benches/`.

use dyad_core::coupling::rates_for;
use dyad_core::units::{lithium_70c, to_internal};
use dyad_core::{CouplingRates, PairParams};

/// ⁷Li 70C pair at separation `x`.
pub fn li70_params(x: f64) -> PairParams {
    let (_, p) = to_internal(&lithium_70c().with_k0r(x).expect("positive x")).expect("valid pair");
    p
}

pub fn li70_rates(x: f64) -> CouplingRates {
    rates_for(&li70_params(x)).expect("finite rates")
}

/// Log-spaced k₀R values on [0.1, 30].
pub fn separations(n: usize) -> Vec<f64> {
    (0..n).map(|k| 0.1 * 300f64.powf(k as f64 / (n - 1).max(1) as f64)).collect()
}
