//! Reference solver: the resonator as a small scattering network
//! of mirrors, propagation legs and a delta-coupled emitter, solved as a
//! dense linear system.

mod linalg;
mod network;

pub use linalg::{solve_dense, MAX_CONDITION};
pub use network::{build_network_split, free_emitter, mirror_matrix, NetworkSystem, PhaseSplit};

use serde::Serialize;

use crate::cascaded::FpSteadyState;
use crate::error::{domain, Result};
use crate::params::{ComplexAmp, Geometry, SystemSpec};

/// Transmission, reflection and excitation of a lone emitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmitterScatterCoeffs {
    pub t_at: ComplexAmp,
    pub r_at: ComplexAmp,
    pub phi0_per_in: ComplexAmp,
}

pub fn emitter_scatter(
    beta1: f64,
    beta2: f64,
    gamma: f64,
    delta0: f64,
) -> Result<EmitterScatterCoeffs> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(domain(format!("gamma must be positive (gamma = {gamma})")));
    }
    if !(0.0..=1.0).contains(&beta1) || !(0.0..=1.0).contains(&beta2) || beta1 + beta2 > 1.0 + 1e-12
    {
        return Err(domain(format!(
            "invalid channel efficiencies beta1 = {beta1}, beta2 = {beta2}"
        )));
    }
    if !delta0.is_finite() {
        return Err(domain("detuning must be finite"));
    }
    let lorentz = ComplexAmp::new(gamma, delta0);
    Ok(EmitterScatterCoeffs {
        t_at: 1.0 - 2.0 * beta1 * gamma / lorentz,
        r_at: -2.0 * (beta1 * beta2).sqrt() * gamma / lorentz,
        phi0_per_in: ComplexAmp::new(0.0, -(2.0 * beta1 * gamma).sqrt()) / lorentz,
    })
}

/// Same coefficients obtained by solving the lone-emitter network.
pub fn emitter_scatter_network(
    beta1: f64,
    beta2: f64,
    gamma: f64,
    delta0: f64,
) -> Result<EmitterScatterCoeffs> {
    emitter_scatter(beta1, beta2, gamma, delta0)?;
    let sys = free_emitter(beta1, beta2, gamma, delta0, 1.0);
    let (x, _) = solve_dense(&sys.matrix, &sys.rhs)?;
    Ok(EmitterScatterCoeffs {
        t_at: x[0],
        r_at: x[1],
        phi0_per_in: x[2],
    })
}

/// Network equations for `spec` with the default phase distribution.
pub fn build_network(spec: &SystemSpec) -> Result<NetworkSystem> {
    spec.validate()?;
    Ok(network::build_network(spec, spec.alpha()?))
}

/// Oracle solution together with the condition estimate of its matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSolution {
    pub state: FpSteadyState,
    pub condition: f64,
}

pub fn oracle_solve(spec: &SystemSpec) -> Result<FpSteadyState> {
    oracle_solve_split(spec, PhaseSplit::default()).map(|s| s.state)
}

pub fn oracle_solve_split(spec: &SystemSpec, split: PhaseSplit) -> Result<OracleSolution> {
    spec.validate()?;
    let sys = build_network_split(spec, spec.alpha()?, split);
    let (x, condition) = solve_dense(&sys.matrix, &sys.rhs)?;
    let zero = ComplexAmp::new(0.0, 0.0);
    let state = match spec.geometry {
        Geometry::FabryPerot => FpSteadyState {
            phi1: x[0],
            phi2: x[1],
            phi3: x[2],
            phi4: x[3],
            phi0: x[4],
            phi_ref: x[5],
            phi_trans: x[6],
            denom_n: zero,
        },
        Geometry::ChiralRing => FpSteadyState {
            phi1: x[0],
            phi2: x[1],
            phi3: x[2],
            phi4: x[2],
            phi0: x[3],
            phi_ref: x[4],
            phi_trans: x[5],
            denom_n: zero,
        },
    };
    Ok(OracleSolution { state, condition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascaded::{cascaded_steady_state, flux_residual};
    use crate::params::{MirrorSpec, ProbeSpec};
    use std::f64::consts::PI;

    #[test]
    fn emitter_examples() {
        let mirror = emitter_scatter(0.5, 0.5, 1.0, 0.0).unwrap();
        assert!(mirror.t_at.norm() < 1e-15);
        assert!((mirror.r_at + 1.0).norm() < 1e-15);
        let absorber = emitter_scatter(0.5, 0.0, 1.0, 0.0).unwrap();
        assert!(absorber.t_at.norm() < 1e-15 && absorber.r_at.norm() == 0.0);
        let far = emitter_scatter(0.3, 0.2, 1.0, 1e9).unwrap();
        assert!(
            (far.t_at - 1.0).norm() < 1e-8
                && far.r_at.norm() < 1e-8
                && far.phi0_per_in.norm() < 1e-8
        );
        let real = emitter_scatter(0.3, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(real.t_at, ComplexAmp::new(1.0 - 0.6, 0.0));
        assert!(emitter_scatter(0.7, 0.7, 1.0, 0.0).is_err());
        assert!(emitter_scatter(0.3, 0.3, 0.0, 0.0).is_err());
    }

    #[test]
    fn emitter_flux_deficit_is_free_space_emission() {
        for (b1, b2) in [(0.5, 0.5), (0.3, 0.1), (1.0, 0.0), (0.05, 0.6)] {
            for d in [-4.0, -0.3, 0.0, 1.7] {
                let c = emitter_scatter(b1, b2, 1.0, d).unwrap();
                let gamma_l = 1.0 - b1 - b2;
                let deficit = 1.0 - c.t_at.norm_sqr() - c.r_at.norm_sqr();
                assert!(deficit >= -1e-15);
                assert!((deficit - 2.0 * gamma_l * c.phi0_per_in.norm_sqr()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn midpoint_network_reproduces_lone_emitter() {
        for (b1, b2) in [(0.5, 0.5), (0.2, 0.8), (1.0, 0.0), (0.3, 0.1)] {
            for k in 0..=40 {
                let d = -10.0 + 0.5 * k as f64;
                let exact = emitter_scatter(b1, b2, 1.0, d).unwrap();
                let net = emitter_scatter_network(b1, b2, 1.0, d).unwrap();
                assert!((exact.t_at - net.t_at).norm() < 1e-12);
                assert!((exact.r_at - net.r_at).norm() < 1e-12);
                assert!((exact.phi0_per_in - net.phi0_per_in).norm() < 1e-12);
                if (b1 + b2 - 1.0).abs() < 1e-15 {
                    // -2i V / n with n = sum V^2 + 2 i delta
                    let v1 = (2.0 * b1).sqrt();
                    let n = ComplexAmp::new(2.0 * b1 + 2.0 * b2, 2.0 * d);
                    let lorentz = ComplexAmp::new(0.0, -2.0 * v1) / n;
                    assert!((net.phi0_per_in - lorentz).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn mirror_matrix_is_unitary() {
        for t_sq in [0.0, 1e-8, 1e-3, 0.25, 0.5, 0.9, 1.0] {
            let m = MirrorSpec::lossless(t_sq).unwrap();
            let u = mirror_matrix(m.r, m.t);
            for i in 0..2 {
                for j in 0..2 {
                    let p: ComplexAmp = (0..2).map(|k| u[i][k] * u[j][k].conj()).sum();
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((p - e).norm() <= 1e-15, "t^2 = {t_sq}");
                }
            }
        }
    }

    #[test]
    fn bare_emitter_between_transparent_mirrors() {
        let mut spec = SystemSpec::fabry_perot(0.6, 1e-3, 50.0, 1.3)
            .unwrap()
            .with_detuning(0.7);
        spec.mirror1 = MirrorSpec::new(0.0, 1.0).unwrap();
        spec.mirror2 = MirrorSpec::new(0.0, 1.0).unwrap();
        spec.emitter.beta1 = 0.45;
        spec.emitter.beta2 = 0.15;
        let s = oracle_solve(&spec).unwrap();
        let c = emitter_scatter(0.45, 0.15, 1.0, 0.7).unwrap();
        assert!((s.phi_trans.norm() - c.t_at.norm()).abs() < 1e-14);
        assert!((s.phi_ref.norm() - c.r_at.norm()).abs() < 1e-14);
        assert!((s.phi0.norm() - c.phi0_per_in.norm()).abs() < 1e-14);
    }

    #[test]
    fn oracle_examples() {
        let critical = SystemSpec::fabry_perot(1.0 / 3.0, 1e-8, 250.0, PI).unwrap();
        assert!(oracle_solve(&critical).unwrap().phi4.norm() <= 1e-8);
        let full = SystemSpec::fabry_perot(1.0, 1e-8, 250.0, PI).unwrap();
        let s = oracle_solve(&full).unwrap();
        let t1 = full.mirror1.t;
        assert!((s.phi1.norm() - t1 / 2.0).abs() <= 1e-6);
        assert!((s.phi4.norm() - t1 / 2.0).abs() <= 1e-6);
        let ring = SystemSpec::chiral_ring(0.5, 1e-4, 250.0).unwrap();
        assert!(oracle_solve(&ring).unwrap().phi2.norm() <= 1e-10);
        let empty = SystemSpec::fabry_perot(0.0, 1e-4, 250.0, PI).unwrap();
        let s = oracle_solve(&empty).unwrap();
        let airy = empty.mirror1.t / (1.0 - empty.mirror1.r * empty.mirror2.r);
        assert!((s.phi1.norm() - airy).abs() / airy < 1e-10);
    }

    #[test]
    fn phase_distribution_does_not_change_observables() {
        let probe = ProbeSpec {
            delta0: 0.8,
            delta_a: -1.1,
            amp_in: 1.0,
        };
        let mut specs = vec![SystemSpec::fabry_perot(0.4, 1e-3, 40.0, 2.0)
            .unwrap()
            .with_probe(probe)];
        let mut asym = specs[0];
        asym.emitter.beta1 = 0.5;
        asym.emitter.beta2 = 0.1;
        specs.push(asym);
        specs.push(
            SystemSpec::chiral_ring(0.7, 1e-3, 40.0)
                .unwrap()
                .with_probe(probe),
        );
        for spec in specs {
            let base = oracle_solve(&spec).unwrap();
            for split in [
                PhaseSplit {
                    skew1: 0.9,
                    skew2: 0.0,
                },
                PhaseSplit {
                    skew1: 0.0,
                    skew2: -2.3,
                },
                PhaseSplit {
                    skew1: 1.4,
                    skew2: 0.6,
                },
            ] {
                let other = oracle_solve_split(&spec, split).unwrap().state;
                for (a, b) in base.amplitudes().iter().zip(other.amplitudes()) {
                    assert!((a.norm() - b.norm()).abs() <= 1e-12 * a.norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn asymmetric_coupling_conserves_flux_and_is_continuous() {
        let base = SystemSpec::fabry_perot(0.6, 1e-3, 60.0, 2.4)
            .unwrap()
            .with_detuning(0.5);
        let mut prev: Option<FpSteadyState> = None;
        for k in 0..=300 {
            let mut spec = base;
            spec.emitter.beta1 = 0.3;
            spec.emitter.beta2 = 0.3 * (1.0 - k as f64 / 300.0);
            let s = oracle_solve(&spec).unwrap();
            assert!(flux_residual(&s, &spec).unwrap().abs() < 1e-12);
            if let Some(p) = prev {
                assert!((p.phi_trans - s.phi_trans).norm() < 0.05);
            }
            prev = Some(s);
            if k == 0 {
                let closed = cascaded_steady_state(&spec).unwrap();
                assert!((closed.phi_trans.norm() - s.phi_trans.norm()).abs() < 1e-10);
            }
        }
        // beta2 -> 0 is the chiral limit of the standing-wave network
        let mut chiral = base;
        chiral.emitter.beta1 = 0.3;
        chiral.emitter.beta2 = 0.0;
        let mut almost = chiral;
        almost.emitter.beta2 = 1e-12;
        let a = oracle_solve(&chiral).unwrap();
        let b = oracle_solve(&almost).unwrap();
        assert!((a.phi_trans - b.phi_trans).norm() < 1e-5 * a.phi_trans.norm());
    }
}
