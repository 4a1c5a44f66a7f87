//! Closed-form steady states of the cascaded model, in which the resonator
//! field is a running wave that meets the emitter once per pass.
//!
//! Region amplitudes follow the circulation coordinate `x` in `[0, L]`:
//! `phi1` runs from mirror 1 to the emitter, `phi2` from the emitter to
//! mirror 2, `phi3` from mirror 2 back to the emitter and `phi4` from the
//! emitter to mirror 1. Each is the coefficient of `exp(ikx)`, so the
//! reflected output picks up the roundtrip phase `exp(ikL)` and the
//! transmitted output `exp(ikL/2)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::jc::SINGULAR_THRESHOLD;
use crate::params::{ComplexAmp, Geometry, SystemSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// High-finesse threshold on `r1 r2` for the simplified resonance forms.
pub const HIGH_FINESSE_R1R2: f64 = 0.999;

/// Steady-state amplitudes of the cascaded model (also produced by the
/// scattering-network oracle).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FpSteadyState {
    pub phi1: ComplexAmp,
    pub phi2: ComplexAmp,
    pub phi3: ComplexAmp,
    pub phi4: ComplexAmp,
    pub phi0: ComplexAmp,
    pub phi_ref: ComplexAmp,
    pub phi_trans: ComplexAmp,
    /// Common denominator of the closed forms; zero for oracle results.
    pub denom_n: ComplexAmp,
}

impl FpSteadyState {
    /// Amplitudes in the fixed order `phi1..phi4, phi0, phi_ref, phi_trans`.
    pub fn amplitudes(&self) -> [ComplexAmp; 7] {
        [
            self.phi1,
            self.phi2,
            self.phi3,
            self.phi4,
            self.phi0,
            self.phi_ref,
            self.phi_trans,
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.amplitudes()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// `1 - r1 r2 exp(i theta)` without cancellation when `r1 r2 -> 1` and
/// `theta -> 0`.
pub(crate) fn empty_roundtrip_factor(r1: f64, r2: f64, theta: f64) -> ComplexAmp {
    let one_minus_rr = (-r1).mul_add(r2, 1.0);
    let half = (theta / 2.0).sin();
    let one_minus_phase = ComplexAmp::new(2.0 * half * half, -theta.sin());
    one_minus_rr + r1 * r2 * one_minus_phase
}

fn check_n(n: ComplexAmp) -> Result<()> {
    let m = n.norm();
    if !m.is_finite() || m < SINGULAR_THRESHOLD {
        return Err(Error::Singular {
            what: "cascaded denominator N",
            magnitude: m,
        });
    }
    Ok(())
}

/// Emitter Lorentzian factor `sqrt(beta_t / (gamma + i delta0))` on the
/// principal branch.
fn lorentz_root(bt: ComplexAmp, spec: &SystemSpec) -> ComplexAmp {
    (bt / ComplexAmp::new(spec.emitter.gamma, spec.probe.delta0)).sqrt()
}

/// Fabry-Perot resonator with a standing-wave (symmetric) emitter coupling.
pub fn fp_steady_state(spec: &SystemSpec) -> Result<FpSteadyState> {
    spec.validate()?;
    if spec.geometry != Geometry::FabryPerot {
        return Err(domain("fp_steady_state requires the Fabry-Perot geometry"));
    }
    let (b1, b2) = (spec.emitter.beta1, spec.emitter.beta2);
    if (b1 - b2).abs() > 1e-14 * b1.max(b2) {
        return Err(domain(format!(
            "closed form requires symmetric coupling beta1 = beta2 (got {b1}, {b2}); use the oracle"
        )));
    }

    let one = ComplexAmp::new(1.0, 0.0);
    let (r1, t1) = (spec.mirror1.r, spec.mirror1.t);
    let (r2, t2) = (spec.mirror2.r, spec.mirror2.t);
    let bt = spec.tilde_beta()?;
    let alpha = spec.alpha()?;
    let theta = spec.roundtrip_phase();
    let e_theta = ComplexAmp::from_polar(1.0, theta);
    let e_alpha = ComplexAmp::from_polar(1.0, alpha);
    let e_alpha_inv = e_alpha.conj();

    let n = empty_roundtrip_factor(r1, r2, theta)
        + bt * (2.0 * e_theta * r1 * r2 - e_alpha * r2 - e_theta * e_alpha_inv * r1);
    check_n(n)?;

    let amp = spec.probe.amp_in;
    let scale = t1 * amp / n;
    let phi1 = -I * scale * (e_alpha * r2 * bt - one);
    let phi2 = -I * scale * (bt - one);
    let phi3 = I * scale * r2 * (bt - one);
    let phi4 = I * scale * (r2 * (2.0 * bt - one) - e_alpha_inv * bt);

    let half_alpha = ComplexAmp::from_polar(1.0, alpha / 2.0);
    let phi0 = -scale
        * ComplexAmp::from_polar(1.0, theta / 2.0)
        * lorentz_root(bt, spec)
        * (half_alpha * r2 - half_alpha.conj());

    Ok(FpSteadyState {
        phi1,
        phi2,
        phi3,
        phi4,
        phi0,
        phi_ref: I * r1 * amp + t1 * e_theta * phi4,
        phi_trans: t2 * ComplexAmp::from_polar(1.0, theta / 2.0) * phi2,
        denom_n: n,
    })
}

/// Ring resonator with an emitter coupled only to the forward mode.
pub fn ring_steady_state(spec: &SystemSpec) -> Result<FpSteadyState> {
    spec.validate()?;
    if spec.geometry != Geometry::ChiralRing {
        return Err(domain(
            "ring_steady_state requires the chiral ring geometry",
        ));
    }
    let one = ComplexAmp::new(1.0, 0.0);
    let (r1, t1) = (spec.mirror1.r, spec.mirror1.t);
    let (r2, t2) = (spec.mirror2.r, spec.mirror2.t);
    let bt = spec.tilde_beta()?;
    let alpha = spec.alpha()?;
    let theta = spec.roundtrip_phase();
    let e_theta = ComplexAmp::from_polar(1.0, theta);

    // 1 + e^{i theta} r1 r2 (2 bt - 1)
    let n = empty_roundtrip_factor(r1, r2, theta) + 2.0 * bt * e_theta * r1 * r2;
    check_n(n)?;

    let amp = spec.probe.amp_in;
    let scale = t1 * amp / n;
    let through = one - 2.0 * bt;
    let phi1 = -I * scale;
    let phi2 = -I * scale * through;
    let phi3 = -I * scale * r2 * through;
    let phi0 = -scale
        * ComplexAmp::from_polar(1.0, theta / 2.0)
        * lorentz_root(2.0 * bt, spec)
        * ComplexAmp::from_polar(1.0, -alpha / 2.0);

    Ok(FpSteadyState {
        phi1,
        phi2,
        phi3,
        phi4: phi3,
        phi0,
        phi_ref: I * r1 * amp + t1 * e_theta * phi3,
        phi_trans: t2 * ComplexAmp::from_polar(1.0, theta / 2.0) * phi2,
        denom_n: n,
    })
}

/// Closed-form cascaded solution for whichever geometry `spec` describes.
pub fn cascaded_steady_state(spec: &SystemSpec) -> Result<FpSteadyState> {
    match spec.geometry {
        Geometry::FabryPerot => fp_steady_state(spec),
        Geometry::ChiralRing => ring_steady_state(spec),
    }
}

/// On-resonance, high-finesse limit of [`fp_steady_state`].
pub fn fp_resonance_simplified(spec: &SystemSpec) -> Result<FpSteadyState> {
    spec.validate()?;
    if spec.geometry != Geometry::FabryPerot {
        return Err(domain(
            "simplified resonance forms exist only for the Fabry-Perot geometry",
        ));
    }
    if spec.probe.delta0 != 0.0 || spec.probe.delta_a != 0.0 {
        return Err(domain("simplified forms require delta0 = delta_a = 0"));
    }
    let (r1, t1) = (spec.mirror1.r, spec.mirror1.t);
    let (r2, t2) = (spec.mirror2.r, spec.mirror2.t);
    if r1 * r2 < HIGH_FINESSE_R1R2 {
        return Err(domain(format!(
            "simplified forms require high finesse r1 r2 >= {HIGH_FINESSE_R1R2} (r1 r2 = {})",
            r1 * r2
        )));
    }
    let alpha0 = spec.cavity.alpha0;
    let s = (alpha0 / 2.0).sin();
    if s.abs() < 1e-12 {
        return Err(domain(
            "simplified forms require sin(alpha0/2) != 0 (emitter at a node)",
        ));
    }
    let beta = spec.emitter.beta();
    let coupling = beta * s * s;
    if !(coupling > t1 && coupling > t2) {
        return Err(domain(format!(
            "simplified forms require beta sin^2(alpha0/2) > t1, t2 ({coupling} vs t1 = {t1}, t2 = {t2})"
        )));
    }

    let amp = spec.probe.amp_in;
    let one = ComplexAmp::new(1.0, 0.0);
    let e_alpha = ComplexAmp::from_polar(1.0, alpha0);
    let pre = -I * t1 * amp / (4.0 * coupling);
    let phi1 = pre * (beta * e_alpha - one);
    let phi2 = pre * (beta - 1.0);
    let phi3 = pre * (1.0 - beta);
    let phi4 = pre * (beta * (e_alpha.conj() - 2.0) + one);
    let phi0 = -I * t1 / (2.0 * s) * (1.0 / (beta * spec.emitter.gamma)).sqrt() * amp;

    Ok(FpSteadyState {
        phi1,
        phi2,
        phi3,
        phi4,
        phi0,
        phi_ref: I * r1 * amp + t1 * phi4,
        phi_trans: t2 * phi2,
        denom_n: ComplexAmp::new(4.0 * coupling, 0.0),
    })
}

/// Predicted displacement of the vacuum-Rabi doublet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RabiShift {
    /// `(beta gamma / 2) sin(alpha0) (4 x_a / L - 1)`, in the detuning
    /// `delta = w0 - wp`.
    pub shift: f64,
    pub magnitude: f64,
    /// Predicted peak detunings `-g + shift` and `g + shift`.
    pub peaks: (f64, f64),
    pub warnings: Vec<String>,
}

/// Common shift of both vacuum-Rabi peaks caused by the detuning dependence
/// of the standing-wave phase at the emitter.
pub fn rabi_shift(spec: &SystemSpec) -> Result<RabiShift> {
    spec.validate()?;
    if spec.geometry != Geometry::FabryPerot {
        return Err(domain(
            "the Rabi-peak shift applies to the Fabry-Perot geometry",
        ));
    }
    let beta = spec.emitter.beta();
    let gamma = spec.emitter.gamma;
    let g = spec.coupling_g()?;
    // 4 x_a / L - 1 with x_a / L = xa_frac / 2
    let position = 2.0 * spec.cavity.xa_frac - 1.0;
    let shift = beta * gamma / 2.0 * spec.cavity.alpha0.sin() * position;

    let mut warnings = Vec::new();
    if g < 5.0 * gamma {
        warnings.push(format!(
            "g = {g:.4} < 5 gamma: not in the strong-coupling regime"
        ));
    }
    if spec.kappa_l() > 0.2 * g {
        warnings.push("kappa_l is not small against g".to_string());
    }
    if spec.cavity.nu_fsr < 10.0 * gamma {
        warnings.push("nu_fsr is not large against gamma".to_string());
    }
    if spec.probe.delta0 != spec.probe.delta_a {
        warnings.push("emitter and cavity are not mutually resonant".to_string());
    }
    Ok(RabiShift {
        shift,
        magnitude: shift.abs(),
        peaks: (-g + shift, g + shift),
        warnings,
    })
}

/// `|phi_in|^2 - |phi_ref|^2 - |phi_trans|^2 - 2 gamma_l |phi0|^2`, which
/// vanishes when the mirrors are lossless.
pub fn flux_residual(state: &FpSteadyState, spec: &SystemSpec) -> Result<f64> {
    if !(spec.mirror1.is_lossless() && spec.mirror2.is_lossless()) {
        return Err(domain("flux residual is only defined for lossless mirrors"));
    }
    let amp = spec.probe.amp_in;
    Ok(amp * amp
        - state.phi_ref.norm_sqr()
        - state.phi_trans.norm_sqr()
        - 2.0 * spec.emitter.gamma_l() * state.phi0.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jc::jc_mirror_probe_beta;
    use crate::params::{MirrorSpec, ProbeSpec};
    use std::f64::consts::PI;

    fn rel(a: ComplexAmp, b: ComplexAmp) -> f64 {
        (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
    }

    #[test]
    fn critical_coupling_at_one_third() {
        let spec = SystemSpec::fabry_perot(1.0 / 3.0, 1e-4, 250.0, PI).unwrap();
        let s = fp_steady_state(&spec).unwrap();
        assert!(s.phi4.norm() < 1e-6);
        assert!((s.phi_ref.norm() - spec.mirror1.r).abs() < 1e-4);
        assert!(rel(s.phi_ref, I * spec.mirror1.r) < 1e-6);
    }

    #[test]
    fn empty_cavity_airy() {
        let mut spec = SystemSpec::fabry_perot(0.0, 1e-4, 250.0, PI).unwrap();
        spec.mirror2 = MirrorSpec::lossless(4e-4).unwrap();
        let s = fp_steady_state(&spec).unwrap();
        let (r1, r2, t1) = (spec.mirror1.r, spec.mirror2.r, spec.mirror1.t);
        let airy = t1 / (1.0 - r1 * r2);
        assert!((s.phi1.norm() - airy).abs() / airy < 1e-10);
        assert!((s.phi2.norm() - airy).abs() / airy < 1e-10);
        assert!((s.phi3.norm() - airy * r2).abs() / airy < 1e-10);
        assert!((s.phi4.norm() - airy * r2).abs() / airy < 1e-10);
        assert_eq!(s.phi0.norm(), 0.0);
    }

    #[test]
    fn beta_one_limit_is_half_t1() {
        let spec = SystemSpec::fabry_perot(1.0, 1e-4, 250.0, PI).unwrap();
        let s = fp_steady_state(&spec).unwrap();
        let t1 = spec.mirror1.t;
        // N = (1 + r1)(1 + r2)
        let n = (1.0 + spec.mirror1.r) * (1.0 + spec.mirror2.r);
        assert!(rel(s.denom_n, ComplexAmp::new(n, 0.0)) < 1e-14);
        assert!((s.phi1.norm() - t1 / 2.0).abs() / (t1 / 2.0) < 1e-4);
        assert!((s.phi4.norm() - t1 / 2.0).abs() / (t1 / 2.0) < 1e-4);
        assert!(s.phi2.norm() < 1e-3 * t1 && s.phi3.norm() < 1e-3 * t1);
    }

    #[test]
    fn ring_examples() {
        let spec = SystemSpec::chiral_ring(0.5, 1e-4, 250.0).unwrap();
        let s = ring_steady_state(&spec).unwrap();
        assert_eq!(s.denom_n, ComplexAmp::new(1.0, 0.0));
        assert!(s.phi2.norm() <= 1e-10 && s.phi3.norm() <= 1e-10 && s.phi4.norm() <= 1e-10);
        assert!((s.phi1.norm() - spec.mirror1.t).abs() < 1e-15);
        assert_eq!(s.phi3, s.phi4);

        let empty = ring_steady_state(&SystemSpec::chiral_ring(0.0, 1e-4, 250.0).unwrap()).unwrap();
        let airy = spec.mirror1.t / (1.0 - spec.mirror1.r * spec.mirror2.r);
        assert!((empty.phi1.norm() - airy).abs() / airy < 1e-10);
        assert!((empty.phi2.norm() - airy).abs() / airy < 1e-10);

        let full = ring_steady_state(&SystemSpec::chiral_ring(1.0, 1e-4, 250.0).unwrap()).unwrap();
        let t1 = spec.mirror1.t;
        let expected = t1 / (1.0 + spec.mirror1.r * spec.mirror2.r);
        assert!((full.phi2.norm() - expected).abs() / expected < 1e-12);
        assert!((full.phi2.norm() - t1 / 2.0).abs() / (t1 / 2.0) < 1e-4);
        // transmitted light flips sign relative to the empty ring
        let ratio = full.phi_trans / empty.phi_trans;
        assert!(ratio.re < 0.0 && ratio.im.abs() < 1e-12 * ratio.norm());
    }

    #[test]
    fn simplified_one_third() {
        let spec = SystemSpec::fabry_perot(1.0 / 3.0, 1e-4, 250.0, PI).unwrap();
        let s = fp_resonance_simplified(&spec).unwrap();
        let t1 = spec.mirror1.t;
        let expected = [1.0, 0.5, -0.5, 0.0].map(|v| I * t1 * v);
        for (got, want) in [s.phi1, s.phi2, s.phi3, s.phi4].iter().zip(expected) {
            assert!((got - want).norm() < 1e-15, "{got} vs {want}");
        }
    }

    #[test]
    fn simplified_half_intensity_point() {
        let spec = SystemSpec::fabry_perot(1.0, 1e-4, 250.0, PI / 2.0).unwrap();
        let s = fp_resonance_simplified(&spec).unwrap();
        let t1 = spec.mirror1.t;
        let pre = -I * t1 / 2.0;
        assert!(rel(s.phi1, pre * ComplexAmp::new(-1.0, 1.0)) < 1e-14);
        assert_eq!(s.phi2.norm(), 0.0);
        assert_eq!(s.phi3.norm(), 0.0);
        assert!(rel(s.phi4, pre * ComplexAmp::new(-1.0, -1.0)) < 1e-14);
    }

    #[test]
    fn simplified_rejects_invalid_regimes() {
        let node = SystemSpec::fabry_perot(0.5, 1e-4, 250.0, 0.0).unwrap();
        assert!(fp_resonance_simplified(&node).is_err());
        let weak = SystemSpec::fabry_perot(1e-3, 1e-4, 250.0, PI).unwrap();
        let err = fp_resonance_simplified(&weak).unwrap_err();
        assert!(err.to_string().contains("beta sin^2(alpha0/2) > t1"));
        let low_finesse = SystemSpec::fabry_perot(0.5, 1e-2, 250.0, PI).unwrap();
        assert!(fp_resonance_simplified(&low_finesse).is_err());
        let detuned = SystemSpec::fabry_perot(0.5, 1e-4, 250.0, PI)
            .unwrap()
            .with_detuning(0.1);
        assert!(fp_resonance_simplified(&detuned).is_err());
    }

    #[test]
    fn simplified_agrees_with_full_forms() {
        let t_sq = 1e-6;
        for beta in [0.05, 0.2, 1.0 / 3.0, 0.6, 1.0] {
            for alpha0 in [PI, 2.0 * PI / 3.0, PI / 2.0, -PI / 2.0] {
                let spec = SystemSpec::fabry_perot(beta, t_sq, 250.0, alpha0).unwrap();
                let full = fp_steady_state(&spec).unwrap();
                let simple = fp_resonance_simplified(&spec).unwrap();
                let t1 = spec.mirror1.t;
                let bound = 10.0 * (t1 + spec.mirror2.t);
                let scale = full.phi1.norm().max(full.phi2.norm());
                for (a, b) in full.amplitudes()[..4].iter().zip(&simple.amplitudes()[..4]) {
                    assert!(
                        (a - b).norm() / scale < bound,
                        "beta {beta} alpha0 {alpha0}: {a} vs {b}"
                    );
                }
                assert!((full.phi0.norm() - simple.phi0.norm()).abs() / full.phi0.norm() < bound);
            }
        }
    }

    #[test]
    fn node_gives_empty_cavity() {
        // residual coupling at a node is of order 1 - r
        let empty =
            fp_steady_state(&SystemSpec::fabry_perot(0.0, 1e-8, 100.0, 0.0).unwrap()).unwrap();
        let node =
            fp_steady_state(&SystemSpec::fabry_perot(0.8, 1e-8, 100.0, 0.0).unwrap()).unwrap();
        assert!(rel(node.phi_trans, empty.phi_trans) < 1e-6);
        assert!((node.phi_ref.norm() - empty.phi_ref.norm()).abs() < 1e-6);
        assert!(node.phi0.norm() < 1e-6 * node.phi1.norm());
    }

    #[test]
    fn emitter_excitation_matches_single_mode_on_resonance() {
        let t_sq = 1e-8;
        for beta in [0.1, 0.3333, 0.7, 1.0] {
            let spec = SystemSpec::fabry_perot(beta, t_sq, 250.0, PI).unwrap();
            let simple = fp_resonance_simplified(&spec).unwrap().phi0.norm();
            let jc = jc_mirror_probe_beta(&spec).unwrap().phi0.norm();
            assert!(
                (simple - jc).abs() / jc <= 1e-6,
                "beta {beta}: {simple} vs {jc}"
            );
        }
    }

    #[test]
    fn rabi_shift_examples() {
        let mut spec = SystemSpec::fabry_perot(1.0, 1e-4, 50.0, PI / 2.0).unwrap();
        spec.cavity.xa_frac = 0.5;
        assert_eq!(rabi_shift(&spec).unwrap().shift, 0.0);
        spec.cavity.xa_frac = 0.0;
        let r = rabi_shift(&spec).unwrap();
        assert!((r.magnitude - 0.5).abs() < 1e-15);
        let g = spec.coupling_g().unwrap();
        assert!((r.peaks.1 - r.peaks.0 - 2.0 * g).abs() < 1e-12);
        spec.cavity.alpha0 = PI;
        assert!(rabi_shift(&spec).unwrap().magnitude < 1e-15);
        let weak = SystemSpec::fabry_perot(1e-3, 1e-4, 50.0, PI).unwrap();
        assert!(!rabi_shift(&weak).unwrap().warnings.is_empty());
    }

    #[test]
    fn flux_residual_vanishes_for_lossless() {
        for beta in [0.0, 0.25, 1.0] {
            for delta in [-3.0, 0.0, 0.4, 2.5] {
                let spec = SystemSpec::fabry_perot(beta, 1e-3, 80.0, 2.1)
                    .unwrap()
                    .with_probe(ProbeSpec {
                        delta0: delta,
                        delta_a: 0.6 * delta,
                        amp_in: 1.0,
                    });
                let s = fp_steady_state(&spec).unwrap();
                assert!(
                    flux_residual(&s, &spec).unwrap().abs() < 1e-12,
                    "beta {beta} delta {delta}"
                );
                let ring = SystemSpec {
                    geometry: Geometry::ChiralRing,
                    ..spec
                };
                let mut ring = ring;
                ring.emitter.beta1 = beta;
                ring.emitter.beta2 = 0.0;
                let s = ring_steady_state(&ring).unwrap();
                assert!(flux_residual(&s, &ring).unwrap().abs() < 1e-12);
            }
        }
        let mut lossy = SystemSpec::fabry_perot(0.3, 1e-3, 80.0, PI).unwrap();
        lossy.mirror1.r *= 0.999;
        let s = fp_steady_state(&lossy).unwrap();
        assert!(flux_residual(&s, &lossy).is_err());
    }

    #[test]
    fn asymmetric_coupling_is_rejected() {
        let mut spec = SystemSpec::fabry_perot(0.4, 1e-3, 80.0, PI).unwrap();
        spec.emitter.beta1 = 0.3;
        assert!(fp_steady_state(&spec).is_err());
    }

    #[test]
    fn input_amplitude_scales_linearly() {
        let spec = SystemSpec::fabry_perot(0.4, 1e-3, 80.0, 1.0)
            .unwrap()
            .with_detuning(0.3);
        let mut doubled = spec;
        doubled.probe.amp_in = -2.0;
        let a = fp_steady_state(&spec).unwrap().amplitudes();
        let b = fp_steady_state(&doubled).unwrap().amplitudes();
        for (x, y) in a.iter().zip(b) {
            assert!((x * -2.0 - y).norm() < 1e-12 * x.norm().max(1e-12));
        }
    }
}
