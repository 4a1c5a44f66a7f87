//! Physical configuration of the emitter-resonator system and the algebraic
//! relations between the parameters of the two models.
//!
//! Units: the speed of light is 1 and every rate (decay rates, free spectral
//! range, detunings) is expressed in one common unit, conventionally the
//! emitter dipole decay rate. The roundtrip length is `L = 1 / nu_fsr` and is
//! never stored. Absolute frequencies never appear; only the detunings
//! `delta0 = w0 - wp` (emitter - probe) and `delta_a = wa - wp`
//! (cavity - probe) do.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Complex field or excitation amplitude.
pub type ComplexAmp = Complex64;

/// Slack allowed on `r^2 + t^2 <= 1` and `beta1 + beta2 <= 1` so that
/// values computed as `sqrt(1 - t^2)` are accepted.
const UNIT_SLACK: f64 = 1e-12;

/// Amplitude reflection and transmission of one mirror.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorSpec {
    pub r: f64,
    pub t: f64,
}

impl MirrorSpec {
    /// Lossless mirror with power transmission `t_sq`.
    pub fn lossless(t_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t_sq) {
            return Err(domain(format!(
                "mirror power transmission {t_sq} outside [0, 1]"
            )));
        }
        Ok(Self {
            r: (1.0 - t_sq).sqrt(),
            t: t_sq.sqrt(),
        })
    }

    pub fn new(r: f64, t: f64) -> Result<Self> {
        let m = Self { r, t };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r.is_finite() && self.t.is_finite()) || self.r < 0.0 || self.t < 0.0 {
            return Err(domain(format!(
                "mirror coefficients must be finite and non-negative (r = {}, t = {})",
                self.r, self.t
            )));
        }
        if self.r * self.r + self.t * self.t > 1.0 + UNIT_SLACK {
            return Err(domain(format!(
                "mirror violates r^2 + t^2 <= 1 (r = {}, t = {})",
                self.r, self.t
            )));
        }
        Ok(())
    }

    /// Power lost on reflection, `1 - r^2 - t^2`, clamped at zero.
    pub fn excess_loss(&self) -> f64 {
        (1.0 - self.r * self.r - self.t * self.t).max(0.0)
    }

    pub fn is_lossless(&self) -> bool {
        (1.0 - self.r * self.r - self.t * self.t).abs() <= 1e-12
    }
}

/// Two-level emitter: total free-space dipole decay rate and the fractions of
/// its emission channelled into the forward (`beta1`) and backward (`beta2`)
/// circulating resonator modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmitterSpec {
    pub gamma: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl EmitterSpec {
    pub fn new(gamma: f64, beta1: f64, beta2: f64) -> Result<Self> {
        let e = Self {
            gamma,
            beta1,
            beta2,
        };
        e.validate()?;
        Ok(e)
    }

    /// Standing-wave coupling: `beta` split evenly between both directions.
    pub fn symmetric(gamma: f64, beta: f64) -> Result<Self> {
        Self::new(gamma, beta / 2.0, beta / 2.0)
    }

    /// Fully chiral coupling to the forward mode only.
    pub fn chiral(gamma: f64, beta: f64) -> Result<Self> {
        Self::new(gamma, beta, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(domain(format!(
                "emitter decay rate must be positive (gamma = {})",
                self.gamma
            )));
        }
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(0.0..=1.0).contains(&b) {
                return Err(domain(format!("{name} = {b} outside [0, 1]")));
            }
        }
        if self.beta1 + self.beta2 > 1.0 + UNIT_SLACK {
            return Err(domain(format!(
                "beta1 + beta2 = {} exceeds 1",
                self.beta1 + self.beta2
            )));
        }
        Ok(())
    }

    /// Total channelling efficiency into the resonator mode.
    pub fn beta(&self) -> f64 {
        self.beta1 + self.beta2
    }

    /// Decay rate into all modes other than the resonator mode.
    pub fn gamma_l(&self) -> f64 {
        ((1.0 - self.beta1 - self.beta2) * self.gamma).max(0.0)
    }
}

/// Resonator geometry and the emitter's place in it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavitySpec {
    pub nu_fsr: f64,
    /// Emitter axial position `x_a / (L/2)`: 0 at mirror 1, 1 at mirror 2.
    pub xa_frac: f64,
    /// Standing-wave phase at the emitter on resonance (0 node, pi anti-node).
    pub alpha0: f64,
}

impl CavitySpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu_fsr.is_finite() && self.nu_fsr > 0.0) {
            return Err(domain(format!(
                "free spectral range must be positive (nu_fsr = {})",
                self.nu_fsr
            )));
        }
        if !(0.0..=1.0).contains(&self.xa_frac) {
            return Err(domain(format!("xa_frac = {} outside [0, 1]", self.xa_frac)));
        }
        if !self.alpha0.is_finite() {
            return Err(domain("alpha0 must be finite"));
        }
        Ok(())
    }

    /// Roundtrip optical path length (c = 1).
    pub fn length(&self) -> f64 {
        1.0 / self.nu_fsr
    }
}

/// Probe detunings and input amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeSpec {
    /// `w0 - wp`
    pub delta0: f64,
    /// `wa - wp`
    pub delta_a: f64,
    pub amp_in: f64,
}

impl ProbeSpec {
    pub fn resonant() -> Self {
        Self {
            delta0: 0.0,
            delta_a: 0.0,
            amp_in: 1.0,
        }
    }

    /// Emitter and cavity mutually resonant, probe detuned by `delta`.
    pub fn common(delta: f64) -> Self {
        Self {
            delta0: delta,
            delta_a: delta,
            amp_in: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta0.is_finite() && self.delta_a.is_finite()) {
            return Err(domain("detunings must be finite"));
        }
        if !self.amp_in.is_finite() || self.amp_in == 0.0 {
            return Err(domain("input amplitude must be finite and non-zero"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    FabryPerot,
    ChiralRing,
}

/// Full physical configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub mirror1: MirrorSpec,
    pub mirror2: MirrorSpec,
    pub emitter: EmitterSpec,
    pub cavity: CavitySpec,
    pub probe: ProbeSpec,
    pub geometry: Geometry,
}

impl SystemSpec {
    /// Symmetric-mirror lossless Fabry-Perot with a standing-wave-coupled
    /// emitter, probed on resonance.
    pub fn fabry_perot(beta: f64, t_sq: f64, nu_fsr: f64, alpha0: f64) -> Result<Self> {
        let spec = Self {
            mirror1: MirrorSpec::lossless(t_sq)?,
            mirror2: MirrorSpec::lossless(t_sq)?,
            emitter: EmitterSpec::symmetric(1.0, beta)?,
            cavity: CavitySpec {
                nu_fsr,
                xa_frac: 0.5,
                alpha0,
            },
            probe: ProbeSpec::resonant(),
            geometry: Geometry::FabryPerot,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Symmetric-mirror lossless ring with a chirally coupled emitter.
    pub fn chiral_ring(beta: f64, t_sq: f64, nu_fsr: f64) -> Result<Self> {
        let spec = Self {
            mirror1: MirrorSpec::lossless(t_sq)?,
            mirror2: MirrorSpec::lossless(t_sq)?,
            emitter: EmitterSpec::chiral(1.0, beta)?,
            cavity: CavitySpec {
                nu_fsr,
                xa_frac: 0.5,
                alpha0: PI,
            },
            probe: ProbeSpec::resonant(),
            geometry: Geometry::ChiralRing,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.mirror1.validate()?;
        self.mirror2.validate()?;
        self.emitter.validate()?;
        self.cavity.validate()?;
        self.probe.validate()?;
        if self.geometry == Geometry::ChiralRing && self.emitter.beta2 != 0.0 {
            return Err(domain("chiral ring geometry requires beta2 = 0"));
        }
        Ok(())
    }

    pub fn with_probe(mut self, probe: ProbeSpec) -> Self {
        self.probe = probe;
        self
    }

    pub fn with_detuning(self, delta: f64) -> Self {
        let amp_in = self.probe.amp_in;
        self.with_probe(ProbeSpec {
            amp_in,
            ..ProbeSpec::common(delta)
        })
    }

    /// The same resonator probed through mirror 2: mirrors exchanged and the
    /// emitter position measured from the other end.
    pub fn probed_from_mirror2(&self) -> Self {
        let mut s = *self;
        std::mem::swap(&mut s.mirror1, &mut s.mirror2);
        s.cavity.xa_frac = 1.0 - self.cavity.xa_frac;
        s
    }

    pub fn kappa1(&self) -> f64 {
        kappa_from_transmission(self.mirror1.t, self.cavity.nu_fsr).unwrap_or(0.0)
    }

    pub fn kappa2(&self) -> f64 {
        kappa_from_transmission(self.mirror2.t, self.cavity.nu_fsr).unwrap_or(0.0)
    }

    /// Squared intrinsic roundtrip loss `l0^2`, taken from the mirrors'
    /// excess reflection loss.
    pub fn intrinsic_loss_sq(&self) -> f64 {
        self.mirror1.excess_loss() + self.mirror2.excess_loss()
    }

    /// Intrinsic resonator decay rate `kappa0`.
    pub fn kappa0(&self) -> f64 {
        self.intrinsic_loss_sq() * self.cavity.nu_fsr / 2.0
    }

    /// Total resonator field decay rate.
    pub fn kappa_l(&self) -> f64 {
        self.kappa0() + self.kappa1() + self.kappa2()
    }

    /// Total squared roundtrip loss `l0^2 + t1^2 + t2^2`.
    pub fn total_loss_sq(&self) -> f64 {
        self.intrinsic_loss_sq() + self.mirror1.t.powi(2) + self.mirror2.t.powi(2)
    }

    pub fn coupling_g(&self) -> Result<f64> {
        coupling_g(
            self.emitter.beta(),
            self.emitter.gamma,
            self.cavity.nu_fsr,
            self.cavity.alpha0,
            self.geometry,
        )
    }

    pub fn tilde_beta(&self) -> Result<ComplexAmp> {
        tilde_beta(self.emitter.beta(), self.probe.delta0, self.emitter.gamma)
    }

    /// Standing-wave phase at the probe detuning.
    pub fn alpha(&self) -> Result<f64> {
        alpha_of_detuning(
            self.cavity.alpha0,
            self.probe.delta_a,
            self.cavity.nu_fsr,
            self.cavity.xa_frac,
        )
    }

    /// Roundtrip propagation phase `kL = -delta_a / nu_fsr` (modulo 2 pi).
    pub fn roundtrip_phase(&self) -> f64 {
        -self.probe.delta_a / self.cavity.nu_fsr
    }

    pub fn derived(&self) -> Result<DerivedParams> {
        self.validate()?;
        let beta = self.emitter.beta();
        let kappa_l = self.kappa_l();
        let gamma_l = self.emitter.gamma_l();
        let g = self.coupling_g()?;
        let cooperativity = if beta < 1.0 && kappa_l > 0.0 {
            Some(cooperativity(
                beta,
                finesse_from(kappa_l, self.cavity.nu_fsr)?,
            )?)
        } else {
            None
        };
        let jc_margin = if beta < 1.0 {
            Some(match self.geometry {
                Geometry::FabryPerot => jc_breakdown_margin(beta, self.cavity.alpha0)?,
                // g^2 = 2 beta gamma nu_fsr for the ring
                Geometry::ChiralRing => 2.0 * beta / (1.0 - beta),
            })
        } else {
            None
        };
        Ok(DerivedParams {
            g,
            kappa0: self.kappa0(),
            kappa1: self.kappa1(),
            kappa2: self.kappa2(),
            kappa_l,
            gamma_l,
            cooperativity,
            jc_margin,
        })
    }
}

/// Parameters derived from a [`SystemSpec`]. `None` marks a quantity that
/// diverges for the given configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    pub g: f64,
    pub kappa0: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa_l: f64,
    pub gamma_l: f64,
    pub cooperativity: Option<f64>,
    /// `Gamma / nu_fsr`; 1 or above means the single-field picture fails.
    pub jc_margin: Option<f64>,
}

/// Field decay rate through a mirror of amplitude transmission `t`:
/// `kappa = t^2 nu_fsr / 2`. With the roundtrip loss `l0` in place of `t`
/// this gives the intrinsic rate `kappa0`.
pub fn kappa_from_transmission(t: f64, nu_fsr: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("transmission {t} outside [0, 1]")));
    }
    if !(nu_fsr > 0.0 && nu_fsr.is_finite()) {
        return Err(domain(format!(
            "free spectral range must be positive (nu_fsr = {nu_fsr})"
        )));
    }
    Ok(t * t * nu_fsr / 2.0)
}

/// Inverse of [`kappa_from_transmission`].
pub fn transmission_from_kappa(kappa: f64, nu_fsr: f64) -> Result<f64> {
    if kappa < 0.0 || !(nu_fsr > 0.0) {
        return Err(domain("kappa must be non-negative and nu_fsr positive"));
    }
    let t = (2.0 * kappa / nu_fsr).sqrt();
    if t > 1.0 {
        return Err(domain(format!(
            "kappa = {kappa} implies t > 1 at nu_fsr = {nu_fsr}"
        )));
    }
    Ok(t)
}

/// Jaynes-Cummings coupling strength equivalent to channelling efficiency `beta`.
pub fn coupling_g(
    beta: f64,
    gamma: f64,
    nu_fsr: f64,
    alpha0: f64,
    geometry: Geometry,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(domain(format!("beta = {beta} outside [0, 1]")));
    }
    if gamma < 0.0 || nu_fsr <= 0.0 {
        return Err(domain("gamma must be non-negative and nu_fsr positive"));
    }
    Ok(match geometry {
        Geometry::FabryPerot => 2.0 * (alpha0 / 2.0).sin().abs() * (beta * gamma * nu_fsr).sqrt(),
        Geometry::ChiralRing => (2.0 * beta * gamma * nu_fsr).sqrt(),
    })
}

/// Effective rates of the single-field model: the emitter-induced cavity
/// decay `Gamma = g^2 / gamma_l` and the cavity-induced emitter decay
/// `K = g^2 / kappa_l`.
pub fn effective_rates(g: f64, gamma_l: f64, kappa_l: f64) -> Result<(f64, f64)> {
    if gamma_l < 0.0 || kappa_l < 0.0 {
        return Err(domain("loss rates must be non-negative"));
    }
    if gamma_l == 0.0 {
        return Err(Error::Divergence(
            "Gamma = g^2/gamma_l diverges as the emitter's free-space decay gamma_l -> 0; \
             the single global cavity field assumption breaks down"
                .into(),
        ));
    }
    if kappa_l == 0.0 {
        return Err(Error::Divergence(
            "K = g^2/kappa_l diverges as the resonator loss kappa_l -> 0; \
             the single global cavity field assumption breaks down"
                .into(),
        ));
    }
    let g2 = g * g;
    Ok((g2 / gamma_l, g2 / kappa_l))
}

/// `Gamma / nu_fsr` for a Fabry-Perot resonator.
pub fn jc_breakdown_margin(beta: f64, alpha0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(domain(format!("beta = {beta} outside [0, 1)")));
    }
    if beta == 1.0 {
        return Err(Error::Divergence(
            "Gamma/nu_fsr diverges at beta = 1 (no free-space decay channel left)".into(),
        ));
    }
    let s = (alpha0 / 2.0).sin();
    Ok(4.0 * beta * s * s / (1.0 - beta))
}

/// `C = g^2 / (2 kappa_l gamma_l)` written in terms of `beta` and the finesse.
pub fn cooperativity(beta: f64, finesse: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&beta) {
        return Err(domain(format!(
            "cooperativity requires 0 <= beta < 1 (beta = {beta})"
        )));
    }
    if !(finesse > 0.0) {
        return Err(domain("finesse must be positive"));
    }
    Ok(2.0 * beta / (1.0 - beta) * finesse / PI)
}

pub fn finesse_from(kappa_l: f64, nu_fsr: f64) -> Result<f64> {
    if !(kappa_l > 0.0) {
        return Err(Error::Divergence("finesse diverges for kappa_l = 0".into()));
    }
    Ok(PI * nu_fsr / kappa_l)
}

/// Detuning-dependent channelling efficiency `beta / (1 + i delta0/gamma)`.
pub fn tilde_beta(beta: f64, delta0: f64, gamma: f64) -> Result<ComplexAmp> {
    if !(gamma > 0.0) {
        return Err(domain("gamma must be positive"));
    }
    Ok(ComplexAmp::new(beta, 0.0) / ComplexAmp::new(1.0, delta0 / gamma))
}

/// Phase difference of the two running waves at the emitter,
/// `alpha0 - (delta_a / nu_fsr) (1 - 2 x_a / L)` with `x_a / L = xa_frac / 2`.
pub fn alpha_of_detuning(alpha0: f64, delta_a: f64, nu_fsr: f64, xa_frac: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&xa_frac) {
        return Err(domain(format!("xa_frac = {xa_frac} outside [0, 1]")));
    }
    if !(nu_fsr > 0.0) {
        return Err(domain("nu_fsr must be positive"));
    }
    Ok(alpha0 - (delta_a / nu_fsr) * (1.0 - xa_frac))
}

/// Human-readable validity warnings for a configuration.
pub fn warnings(spec: &SystemSpec) -> Vec<String> {
    let mut out = Vec::new();
    if let Ok(d) = spec.derived() {
        match d.jc_margin {
            Some(m) if m >= 1.0 => out.push(format!(
                "Jaynes-Cummings validity margin Gamma/nu_fsr = {m:.4} >= 1: single-field model unreliable"
            )),
            None => out.push("beta = 1: Gamma/nu_fsr diverges, single-field model invalid".to_string()),
            _ => {}
        }
    }
    out
}
