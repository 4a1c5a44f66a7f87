//! Channeling efficiency of a transverse dipole into a Gaussian cavity mode.
//!
//! Far-field model on the unit sphere (wavelength 1): the Gaussian mode has
//! two lobes, forward around `theta = 0` and backward around `theta = pi`,
//! with amplitude `exp(-d^2 / theta0^2)` where `d` is the angle to the lobe
//! axis and `theta0 = 1 / (pi w0)`. An x-polarised paraxial beam is carried
//! over the sphere as
//!
//! ```text
//! forward:  e_G = cos(phi) e_theta - sin(phi) e_phi
//! backward: e_G = -cos(phi) e_theta - sin(phi) e_phi
//! ```
//!
//! and the x-oriented dipole radiates `E_D = (e_r x x) x e_r`, i.e.
//! `cos(theta) cos(phi) e_theta - sin(phi) e_phi`. Each lobe's overlap is
//! normalised by the self-integrals of both fields and the two lobes add.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quadrature::composite;

pub const MIN_ORDER: usize = 16;

/// Doubling the quadrature orders must change beta by less than this.
pub const CONVERGENCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapConfig {
    /// Beam waist in wavelengths.
    pub w0_over_lambda: f64,
    /// Gauss-Legendre order per theta panel.
    pub theta_points: usize,
    /// Trapezoid points in phi.
    pub phi_points: usize,
}

impl OverlapConfig {
    pub fn new(w0_over_lambda: f64) -> Self {
        OverlapConfig {
            w0_over_lambda,
            theta_points: 32,
            phi_points: 32,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w0_over_lambda.is_finite() && self.w0_over_lambda > 0.0) {
            return Err(domain(format!(
                "waist must be positive (w0 = {})",
                self.w0_over_lambda
            )));
        }
        if self.theta_points < MIN_ORDER || self.phi_points < MIN_ORDER {
            return Err(domain(format!(
                "quadrature orders must be at least {MIN_ORDER} (theta {}, phi {})",
                self.theta_points, self.phi_points
            )));
        }
        Ok(())
    }

    pub fn theta0(&self) -> f64 {
        1.0 / (PI * self.w0_over_lambda)
    }
}

/// `3 / (2 pi^2) (lambda / w0)^2`, valid for waists of a wavelength or more.
pub fn beta_analytic(w0_over_lambda: f64) -> Result<f64> {
    if !(w0_over_lambda.is_finite() && w0_over_lambda > 0.0) {
        return Err(domain(format!(
            "waist must be positive (w0 = {w0_over_lambda})"
        )));
    }
    Ok(3.0 / (2.0 * PI * PI * w0_over_lambda * w0_over_lambda))
}

pub fn analytic_warning(w0_over_lambda: f64) -> Option<String> {
    (w0_over_lambda < 1.0).then(|| {
        format!(
            "w0 = {w0_over_lambda} lambda: small-angle formula is unreliable below one wavelength"
        )
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapResult {
    pub beta: f64,
    pub forward: f64,
    pub backward: f64,
    /// Numerical self-integral of the dipole pattern divided by its exact
    /// value `8 pi / 3`.
    pub dipole_self_overlap: f64,
    /// Change of beta when both orders are doubled.
    pub convergence_delta: f64,
    pub theta_points: usize,
    pub phi_points: usize,
}

/// Raw integrals at fixed orders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapIntegrals {
    pub forward_overlap: f64,
    pub backward_overlap: f64,
    pub gaussian_norm: f64,
    pub dipole_norm: f64,
}

impl OverlapIntegrals {
    pub fn beta_forward(&self) -> f64 {
        self.forward_overlap.powi(2) / (self.gaussian_norm * self.dipole_norm)
    }

    pub fn beta_backward(&self) -> f64 {
        self.backward_overlap.powi(2) / (self.gaussian_norm * self.dipole_norm)
    }
}

fn theta_breakpoints(theta0: f64) -> Vec<f64> {
    let half = PI / 2.0;
    let mut bps = vec![0.0];
    bps.extend(
        [2.0, 4.0, 8.0]
            .iter()
            .map(|k| k * theta0)
            .filter(|&x| x < half * 0.95),
    );
    bps.push(half);
    let back: Vec<f64> = bps.iter().rev().skip(1).map(|x| PI - x).collect();
    bps.extend(back);
    bps
}

/// Evaluates the overlap and normalisation integrals.
pub fn overlap_integrals(cfg: &OverlapConfig) -> Result<OverlapIntegrals> {
    cfg.validate()?;
    let theta0 = cfg.theta0();
    let (thetas, weights) = composite(&theta_breakpoints(theta0), cfg.theta_points);
    let dphi = 2.0 * PI / cfg.phi_points as f64;
    // phi averages of cos^2 and sin^2 by the periodic trapezoid rule
    let (mut c2, mut s2) = (0.0, 0.0);
    for k in 0..cfg.phi_points {
        let phi = k as f64 * dphi;
        c2 += phi.cos().powi(2) * dphi;
        s2 += phi.sin().powi(2) * dphi;
    }

    let mut out = OverlapIntegrals {
        forward_overlap: 0.0,
        backward_overlap: 0.0,
        gaussian_norm: 0.0,
        dipole_norm: 0.0,
    };
    for (&th, &w) in thetas.iter().zip(&weights) {
        let (s, c) = th.sin_cos();
        let jw = w * s;
        let fwd = (-(th / theta0).powi(2)).exp();
        let bwd = (-((PI - th) / theta0).powi(2)).exp();
        out.forward_overlap += jw * fwd * (c * c2 + s2);
        out.backward_overlap += jw * bwd * (-c * c2 + s2);
        // |e_G|^2 = 1 in both lobes
        out.gaussian_norm += jw * fwd * fwd * (c2 + s2);
        out.dipole_norm += jw * (c * c * c2 + s2);
    }
    Ok(out)
}

fn evaluate(cfg: &OverlapConfig) -> Result<(f64, OverlapIntegrals)> {
    let ints = overlap_integrals(cfg)?;
    Ok((ints.beta_forward() + ints.beta_backward(), ints))
}

/// Channeling efficiency by far-field overlap quadrature, checked by
/// doubling both quadrature orders.
pub fn beta_numeric(cfg: &OverlapConfig) -> Result<OverlapResult> {
    let (beta, ints) = evaluate(cfg)?;
    let doubled = OverlapConfig {
        theta_points: 2 * cfg.theta_points,
        phi_points: 2 * cfg.phi_points,
        ..*cfg
    };
    let (beta2, _) = evaluate(&doubled)?;
    let delta = (beta2 - beta).abs();
    if !(delta <= CONVERGENCE_TOL) {
        return Err(Error::Accuracy(format!(
            "doubling the orders changed beta by {delta:e} (w0 = {}, theta {}, phi {})",
            cfg.w0_over_lambda, cfg.theta_points, cfg.phi_points
        )));
    }
    Ok(OverlapResult {
        beta,
        forward: ints.beta_forward(),
        backward: ints.beta_backward(),
        dipole_self_overlap: ints.dipole_norm / (8.0 * PI / 3.0),
        convergence_delta: delta,
        theta_points: cfg.theta_points,
        phi_points: cfg.phi_points,
    })
}
