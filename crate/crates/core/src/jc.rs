//! Steady states of the single-mode (Jaynes-Cummings) description in the
//! weak-driving limit.
//!
//! The global cavity amplitude `phi_a` is photon-number normalised. To compare
//! it with the per-length running-wave amplitudes of the cascaded model it is
//! rescaled by `1/sqrt(L) = sqrt(nu_fsr)` into `phi_a_local`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::params::{ComplexAmp, Geometry, SystemSpec};

/// Denominators below this magnitude are treated as exact lossless poles.
pub const SINGULAR_THRESHOLD: f64 = 1e-30;

/// Largest emitter-port coupling accepted by [`jc_emitter_probe`].
pub const MAX_PROBE_BETA: f64 = 0.1;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JcSteadyState {
    pub phi_a: ComplexAmp,
    pub phi_a_local: ComplexAmp,
    pub phi0: ComplexAmp,
    pub phi_ref: ComplexAmp,
    pub phi_trans: ComplexAmp,
}

fn check_denominator(d: ComplexAmp, what: &'static str) -> Result<()> {
    let m = d.norm();
    if !m.is_finite() || m < SINGULAR_THRESHOLD {
        return Err(Error::Singular { what, magnitude: m });
    }
    Ok(())
}

/// Common denominator `g^2 + (gamma_l + i delta0)(kappa_l + i delta_a)`.
fn rate_denominator(spec: &SystemSpec, g: f64) -> Result<ComplexAmp> {
    let emitter = ComplexAmp::new(spec.emitter.gamma_l(), spec.probe.delta0);
    let cavity = ComplexAmp::new(spec.kappa_l(), spec.probe.delta_a);
    let d = g * g + emitter * cavity;
    check_denominator(d, "Jaynes-Cummings denominator")?;
    Ok(d)
}

/// Output fields from the cavity amplitude via the mirror couplings
/// `sqrt(2 kappa_k)`.
fn outputs(spec: &SystemSpec, phi_a: ComplexAmp, direct: ComplexAmp) -> (ComplexAmp, ComplexAmp) {
    let v1 = (2.0 * spec.kappa1()).sqrt();
    let v2 = (2.0 * spec.kappa2()).sqrt();
    (direct - I * v1 * phi_a, -I * v2 * phi_a)
}

/// Cavity driven through mirror 1, in the rate parametrisation `(g, kappa)`.
pub fn jc_mirror_probe(spec: &SystemSpec) -> Result<JcSteadyState> {
    spec.validate()?;
    let g = spec.coupling_g()?;
    let d = rate_denominator(spec, g)?;
    let amp = spec.probe.amp_in;
    let v1 = (2.0 * spec.kappa1()).sqrt();
    let emitter = ComplexAmp::new(spec.emitter.gamma_l(), spec.probe.delta0);

    let phi_a = -I * v1 * emitter / d * amp;
    let phi0 = -v1 * g / d * amp;
    let (phi_ref, phi_trans) = outputs(spec, phi_a, ComplexAmp::new(amp, 0.0));
    Ok(JcSteadyState {
        phi_a,
        phi_a_local: phi_a * spec.cavity.nu_fsr.sqrt(),
        phi0,
        phi_ref,
        phi_trans,
    })
}

/// The same steady state written in the channelling efficiency and mirror
/// transmissions. `phi_a_local` carries the primary result.
pub fn jc_mirror_probe_beta(spec: &SystemSpec) -> Result<JcSteadyState> {
    spec.validate()?;
    let bt = spec.tilde_beta()?;
    let one = ComplexAmp::new(1.0, 0.0);
    let nu = spec.cavity.nu_fsr;
    let t1 = spec.mirror1.t;
    let loss = ComplexAmp::new(spec.total_loss_sq() / 2.0, spec.probe.delta_a / nu);
    let sin_half = (spec.cavity.alpha0 / 2.0).sin();

    let (coupling, phi0_prefactor) = match spec.geometry {
        Geometry::FabryPerot => (4.0 * bt * sin_half * sin_half, 2.0 * sin_half.abs()),
        Geometry::ChiralRing => (2.0 * bt, std::f64::consts::SQRT_2),
    };
    let n_jc = (one - bt) * loss + coupling;
    check_denominator(n_jc, "Jaynes-Cummings denominator N_JC")?;

    let amp = spec.probe.amp_in;
    let local = -I * t1 * (one - bt) / n_jc * amp;
    let lorentz = (bt / ComplexAmp::new(spec.emitter.gamma, spec.probe.delta0)).sqrt();
    let phi0 = -phi0_prefactor * t1 / n_jc * lorentz * amp;
    let phi_ref = ComplexAmp::new(amp, 0.0) - I * t1 * local;
    let phi_trans = -I * spec.mirror2.t * local;
    Ok(JcSteadyState {
        phi_a: local / nu.sqrt(),
        phi_a_local: local,
        phi0,
        phi_ref,
        phi_trans,
    })
}

/// Emitter driven through a weakly coupled external mode with efficiency `beta_b`.
pub fn jc_emitter_probe(spec: &SystemSpec, beta_b: f64) -> Result<JcSteadyState> {
    spec.validate()?;
    if !(0.0..=MAX_PROBE_BETA).contains(&beta_b) {
        return Err(domain(format!(
            "emitter-port efficiency beta_b = {beta_b} outside [0, {MAX_PROBE_BETA}]"
        )));
    }
    let g = spec.coupling_g()?;
    let d = rate_denominator(spec, g)?;
    let amp = spec.probe.amp_in;
    let vb = (2.0 * beta_b * spec.emitter.gamma).sqrt();
    let cavity = ComplexAmp::new(spec.kappa_l(), spec.probe.delta_a);

    let phi_a = -vb * g / d * amp;
    let phi0 = -I * vb * cavity / d * amp;
    let (phi_ref, phi_trans) = outputs(spec, phi_a, ComplexAmp::new(0.0, 0.0));
    Ok(JcSteadyState {
        phi_a,
        phi_a_local: phi_a * spec.cavity.nu_fsr.sqrt(),
        phi0,
        phi_ref,
        phi_trans,
    })
}

/// Warning for emitter-port couplings large enough to matter for `gamma_l`.
pub fn emitter_probe_warning(beta_b: f64) -> Option<String> {
    (beta_b > 0.01).then(|| {
        format!("beta_b = {beta_b} is not small; its contribution to gamma_l is neglected")
    })
}
