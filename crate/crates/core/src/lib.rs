//! Steady-state solvers for a single two-level emitter in a Fabry-Perot or
//! ring resonator: the single-mode (Jaynes-Cummings) description, the
//! cascaded running-wave model in closed form, and a scattering-network
//! reference solver.
//!
//! Rates are in units of the emitter decay rate with `c = 1`; the resonator
//! length is `1 / nu_fsr`. Detunings are `delta0 = w0 - wp` (emitter) and
//! `delta_a = wa - wp` (cavity).

pub mod analysis;
pub mod cascaded;
pub mod error;
pub mod jc;
pub mod oracle;
pub mod overlap;
pub mod params;
pub mod quadrature;

pub use analysis::{Engine, Field, Model, SweepVariable};
pub use cascaded::{
    cascaded_steady_state, flux_residual, fp_resonance_simplified, fp_steady_state, rabi_shift,
    ring_steady_state, FpSteadyState, RabiShift,
};
pub use error::{Error, Result};
pub use jc::{jc_emitter_probe, jc_mirror_probe, jc_mirror_probe_beta, JcSteadyState};
pub use oracle::{
    build_network, emitter_scatter, oracle_solve, EmitterScatterCoeffs, NetworkSystem,
};
pub use overlap::{beta_analytic, beta_numeric, OverlapConfig};
pub use params::{
    CavitySpec, ComplexAmp, DerivedParams, EmitterSpec, Geometry, MirrorSpec, ProbeSpec, SystemSpec,
};
