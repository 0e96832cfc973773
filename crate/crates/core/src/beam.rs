//! Laguerre-Gaussian transverse profiles at the beam waist.
//!
//! The Rabi frequency follows the field amplitude of an LG_{l,p} mode,
//!
//! ```text
//! Ω(r) = Ω0 · (√2 r/w0)^|l| · L_p^|l|(2r²/w0²) · exp(−r²/w0²)
//! ```
//!
//! with every power-normalization constant folded into Ω0, so an l = 0 mode
//! has Ω(0) = Ω0. The amplitude is kept signed: L_p changes sign between
//! rings and the force depends on Ω·dΩ/dr, which must flip there.
//! Radii are always in units of w0.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamProfile {
    /// Azimuthal index.
    pub l: i32,
    /// Radial index.
    pub p: u32,
    /// Waist w0 (m in physical units, 1 internally).
    pub waist: f64,
    /// Ω0 (rad/s in physical units, Γ internally).
    pub rabi_peak: f64,
}

impl BeamProfile {
    pub fn new(l: i32, p: u32, waist: f64, rabi_peak: f64) -> Result<Self> {
        if !(waist.is_finite() && waist > 0.0) {
            return Err(Error::InvalidParameter {
                field: "waist",
                value: waist,
                reason: "must be finite and > 0",
            });
        }
        if !(rabi_peak.is_finite() && rabi_peak >= 0.0) {
            return Err(Error::InvalidParameter {
                field: "rabi_peak",
                value: rabi_peak,
                reason: "must be finite and ≥ 0",
            });
        }
        Ok(Self { l, p, waist, rabi_peak })
    }

    fn order(&self) -> u32 {
        self.l.unsigned_abs()
    }
}

/// Generalized Laguerre polynomial L_p^alpha(x) with range-checked indices.
pub fn assoc_laguerre(p: i64, alpha: i64, x: f64) -> Result<f64> {
    if p < 0 || alpha < 0 {
        return Err(Error::LaguerreDomain { p, alpha });
    }
    Ok(laguerre(p as u32, alpha as f64, x))
}

/// Three-term recurrence in the degree:
/// (k+1) L_{k+1} = (2k + 1 + α − x) L_k − (k + α) L_{k−1}.
pub(crate) fn laguerre(p: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if p == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..p {
        let k = f64::from(k);
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Ω(r) in the units of `beam.rabi_peak`; `r` in units of w0.
pub fn rabi_profile(r: f64, beam: &BeamProfile) -> f64 {
    let m = beam.order();
    let xi = std::f64::consts::SQRT_2 * r;
    let x = 2.0 * r * r;
    beam.rabi_peak * xi.powi(m as i32) * laguerre(beam.p, f64::from(m), x) * (-r * r).exp()
}

/// dΩ/dr, using d/dx L_p^α(x) = −L_{p−1}^{α+1}(x).
pub fn rabi_gradient(r: f64, beam: &BeamProfile) -> f64 {
    let m = beam.order();
    let alpha = f64::from(m);
    let xi = std::f64::consts::SQRT_2 * r;
    let x = 2.0 * r * r;
    let lag = laguerre(beam.p, alpha, x);
    let dlag_dx = if beam.p == 0 {
        0.0
    } else {
        -laguerre(beam.p - 1, alpha + 1.0, x)
    };
    let xi_m = xi.powi(m as i32);
    // d/dr of ξ^m, with ξ = √2 r
    let dxi_m = if m == 0 {
        0.0
    } else {
        alpha * std::f64::consts::SQRT_2 * xi.powi(m as i32 - 1)
    };
    let envelope = (-r * r).exp();
    beam.rabi_peak * envelope * (dxi_m * lag + xi_m * (4.0 * r * dlag_dx - 2.0 * r * lag))
}

/// Ω(r) and dΩ/dr together.
pub fn rabi_and_gradient(r: f64, beam: &BeamProfile) -> (f64, f64) {
    (rabi_profile(r, beam), rabi_gradient(r, beam))
}
