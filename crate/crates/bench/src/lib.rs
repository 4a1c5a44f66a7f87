//! Shared fixtures for the solver benchmarks.

use cqed_core::SystemSpec;

/// Detuning spectrum of the strongly coupled Fabry-Perot used in the
/// benchmarks (`beta = 1`, `nu_fsr = 50`, emitter at half intensity).
pub fn strong_coupling_spec() -> SystemSpec {
    let mut spec = SystemSpec::fabry_perot(1.0, 1e-4, 50.0, std::f64::consts::FRAC_PI_2)
        .expect("valid benchmark spec");
    spec.cavity.xa_frac = 0.0;
    spec
}

/// Evenly spaced detunings in `[-span, span]`.
pub fn detunings(span: f64, points: usize) -> Vec<f64> {
    cqed_core::analysis::linear_grid(-span, span, points).expect("valid grid")
}
