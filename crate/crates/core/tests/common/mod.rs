#![allow(dead_code)]

use std::f64::consts::PI;

use cqed_core::{EmitterSpec, Geometry, MirrorSpec, ProbeSpec, SystemSpec};
use rand::Rng;

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Random valid spec: beta in [0, 1], t^2 in [1e-6, 1e-2], alpha0 in
/// [0, 2 pi), xa_frac in [0, 1], detunings in [-5, 5], nu_fsr in [10, 1000].
pub fn random_spec<R: Rng>(rng: &mut R, geometry: Geometry, allow_lossy: bool) -> SystemSpec {
    let beta = rng.gen_range(0.0..=1.0);
    let mirror = |rng: &mut R| {
        let t_sq = log_uniform(rng, 1e-6, 1e-2);
        let m = MirrorSpec::lossless(t_sq).unwrap();
        if allow_lossy && rng.gen_bool(0.3) {
            let excess = rng.gen_range(0.0..2.0) * t_sq;
            MirrorSpec::new((m.r * m.r - excess).sqrt(), m.t).unwrap()
        } else {
            m
        }
    };
    let mirror1 = mirror(rng);
    let mirror2 = mirror(rng);
    let emitter = match geometry {
        Geometry::FabryPerot => EmitterSpec::symmetric(1.0, beta).unwrap(),
        Geometry::ChiralRing => EmitterSpec::chiral(1.0, beta).unwrap(),
    };
    let mut spec = match geometry {
        Geometry::FabryPerot => SystemSpec::fabry_perot(beta, 1e-4, 100.0, 0.0).unwrap(),
        Geometry::ChiralRing => SystemSpec::chiral_ring(beta, 1e-4, 100.0).unwrap(),
    };
    spec.mirror1 = mirror1;
    spec.mirror2 = mirror2;
    spec.emitter = emitter;
    spec.cavity.nu_fsr = log_uniform(rng, 10.0, 1000.0);
    spec.cavity.alpha0 = rng.gen_range(0.0..2.0 * PI);
    spec.cavity.xa_frac = rng.gen_range(0.0..=1.0);
    spec.probe = ProbeSpec {
        delta0: rng.gen_range(-5.0..=5.0),
        delta_a: rng.gen_range(-5.0..=5.0),
        amp_in: 1.0,
    };
    spec.validate().unwrap();
    spec
}

pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + abs
}
