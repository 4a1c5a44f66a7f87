//! Construction of the scattering-network equations.

use num_complex::Complex64;

use crate::params::{ComplexAmp, Geometry, SystemSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Linear system `matrix * x = rhs` over the port amplitudes named in
/// `unknowns` (row-major matrix).
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSystem {
    pub unknowns: Vec<&'static str>,
    pub matrix: Vec<ComplexAmp>,
    pub rhs: Vec<ComplexAmp>,
}

impl NetworkSystem {
    pub fn dim(&self) -> usize {
        self.unknowns.len()
    }

    fn new(unknowns: Vec<&'static str>) -> Self {
        let n = unknowns.len();
        NetworkSystem {
            unknowns,
            matrix: vec![ZERO; n * n],
            rhs: vec![ZERO; n],
        }
    }

    fn set(&mut self, row: usize, col: usize, v: ComplexAmp) {
        let n = self.dim();
        self.matrix[row * n + col] += v;
    }
}

/// Redistribution of propagation phase between the two passes over each
/// side of the emitter. Observables must not depend on it.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseSplit {
    /// Added to the forward pass on the mirror-1 side, removed from the
    /// backward pass.
    pub skew1: f64,
    /// Same for the mirror-2 side.
    pub skew2: f64,
}

/// Mirror scattering matrix `[[i r, t], [i t, -r]]` acting on
/// `(outside_in, inside_in)`.
pub fn mirror_matrix(r: f64, t: f64) -> [[ComplexAmp; 2]; 2] {
    [[I * r, ONE * t], [I * t, -ONE * r]]
}

fn emitter_couplings(spec: &SystemSpec) -> (f64, f64, ComplexAmp) {
    let e = &spec.emitter;
    let v1 = (2.0 * e.beta1 * e.gamma).sqrt();
    let v2 = (2.0 * e.beta2 * e.gamma).sqrt();
    (v1, v2, ComplexAmp::new(spec.probe.delta0, -e.gamma_l()))
}

/// Builds the port equations for the spec's geometry with the default
/// phase distribution.
pub fn build_network(spec: &SystemSpec, alpha: f64) -> NetworkSystem {
    build_network_split(spec, alpha, PhaseSplit::default())
}

pub fn build_network_split(spec: &SystemSpec, alpha: f64, split: PhaseSplit) -> NetworkSystem {
    match spec.geometry {
        Geometry::FabryPerot => fabry_perot(spec, alpha, split),
        Geometry::ChiralRing => ring(spec, alpha, split),
    }
}

// Unknowns: phi1 leaves mirror 1, phi2 leaves the emitter towards mirror 2,
// phi3 leaves mirror 2, phi4 leaves the emitter towards mirror 1.
fn fabry_perot(spec: &SystemSpec, alpha: f64, split: PhaseSplit) -> NetworkSystem {
    let mut sys = NetworkSystem::new(vec![
        "phi1",
        "phi2",
        "phi3",
        "phi4",
        "phi0",
        "phi_ref",
        "phi_trans",
    ]);
    let theta = spec.roundtrip_phase();
    let theta1 = (theta - alpha) / 2.0;
    let theta2 = alpha / 2.0;
    let leg1f = ComplexAmp::from_polar(1.0, theta1 + split.skew1);
    let leg1b = ComplexAmp::from_polar(1.0, theta1 - split.skew1);
    let leg2f = ComplexAmp::from_polar(1.0, theta2 + split.skew2);
    let leg2b = ComplexAmp::from_polar(1.0, theta2 - split.skew2);
    let m1 = mirror_matrix(spec.mirror1.r, spec.mirror1.t);
    let m2 = mirror_matrix(spec.mirror2.r, spec.mirror2.t);
    let (v1, v2, detuning) = emitter_couplings(spec);
    let amp = ONE * spec.probe.amp_in;
    let (p1, p2, p3, p4, p0, pr, pt) = (0, 1, 2, 3, 4, 5, 6);

    // mirror 1, inside output
    sys.set(0, p1, ONE);
    sys.set(0, p4, -m1[1][1] * leg1b);
    sys.rhs[0] = m1[1][0] * amp;
    // emitter, forward pass
    sys.set(1, p2, ONE);
    sys.set(1, p1, -leg1f);
    sys.set(1, p0, I * v1);
    // mirror 2, inside output (no drive from outside)
    sys.set(2, p3, ONE);
    sys.set(2, p2, -m2[1][1] * leg2f);
    // emitter, backward pass
    sys.set(3, p4, ONE);
    sys.set(3, p3, -leg2b);
    sys.set(3, p0, I * v2);
    // emitter amplitude, driven by the midpoint field of both passes
    sys.set(4, p0, detuning);
    sys.set(4, p1, 0.5 * v1 * leg1f);
    sys.set(4, p2, ONE * 0.5 * v1);
    sys.set(4, p3, 0.5 * v2 * leg2b);
    sys.set(4, p4, ONE * 0.5 * v2);
    // outside outputs
    sys.set(5, pr, ONE);
    sys.set(5, p4, -m1[0][1] * leg1b);
    sys.rhs[5] = m1[0][0] * amp;
    sys.set(6, pt, ONE);
    sys.set(6, p2, -m2[0][1] * leg2f);
    sys
}

// Unknowns: phi1 leaves coupler 1, phi2 leaves the emitter, phi3 leaves
// coupler 2.
fn ring(spec: &SystemSpec, alpha: f64, split: PhaseSplit) -> NetworkSystem {
    let mut sys = NetworkSystem::new(vec!["phi1", "phi2", "phi3", "phi0", "phi_ref", "phi_trans"]);
    let theta = spec.roundtrip_phase();
    let leg1 = ComplexAmp::from_polar(1.0, (theta - alpha) / 2.0 + split.skew1);
    let leg2 = ComplexAmp::from_polar(1.0, alpha / 2.0 - split.skew2);
    let leg3 = ComplexAmp::from_polar(1.0, theta / 2.0 - split.skew1 + split.skew2);
    let m1 = mirror_matrix(spec.mirror1.r, spec.mirror1.t);
    let m2 = mirror_matrix(spec.mirror2.r, spec.mirror2.t);
    let (v1, _, detuning) = emitter_couplings(spec);
    let amp = ONE * spec.probe.amp_in;
    let (p1, p2, p3, p0, pr, pt) = (0, 1, 2, 3, 4, 5);

    sys.set(0, p1, ONE);
    sys.set(0, p3, -m1[1][1] * leg3);
    sys.rhs[0] = m1[1][0] * amp;
    sys.set(1, p2, ONE);
    sys.set(1, p1, -leg1);
    sys.set(1, p0, I * v1);
    sys.set(2, p3, ONE);
    sys.set(2, p2, -m2[1][1] * leg2);
    sys.set(3, p0, detuning);
    sys.set(3, p1, 0.5 * v1 * leg1);
    sys.set(3, p2, ONE * 0.5 * v1);
    sys.set(4, pr, ONE);
    sys.set(4, p3, -m1[0][1] * leg3);
    sys.rhs[4] = m1[0][0] * amp;
    sys.set(5, pt, ONE);
    sys.set(5, p2, -m2[0][1] * leg2);
    sys
}

/// A lone emitter in a waveguide driven from the forward direction.
/// Unknowns: forward output, backward output, emitter amplitude.
pub fn free_emitter(beta1: f64, beta2: f64, gamma: f64, delta0: f64, amp_in: f64) -> NetworkSystem {
    let mut sys = NetworkSystem::new(vec!["forward_out", "backward_out", "phi0"]);
    let v1 = (2.0 * beta1 * gamma).sqrt();
    let v2 = (2.0 * beta2 * gamma).sqrt();
    let gamma_l = (1.0 - beta1 - beta2).max(0.0) * gamma;
    let amp = ONE * amp_in;
    sys.set(0, 0, ONE);
    sys.set(0, 2, I * v1);
    sys.rhs[0] = amp;
    sys.set(1, 1, ONE);
    sys.set(1, 2, I * v2);
    sys.set(2, 2, ComplexAmp::new(delta0, -gamma_l));
    sys.set(2, 0, ONE * 0.5 * v1);
    sys.set(2, 1, ONE * 0.5 * v2);
    sys.rhs[2] = -0.5 * v1 * amp;
    sys
}
