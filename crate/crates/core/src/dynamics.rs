//! Time-domain coefficients of the momentum and dipole force.
//!
//! Both observables share the prefactor −ħ·Ω(r)·dΩ/dr along r̂; what varies in
//! time is the dimensionless brace multiplying it, returned here as a
//! [`TimeCoefficient`]. With w = Δ − Z and the phase factor c = e^{i2φ}e^{i2Θ0},
//!
//! ```text
//! C_P(t) = −2 sin(Δt)/Δ² + 2t/Δ + 2 sin(Zt)/Z² − 2t/Z
//!          + 4 Re[c (i cos(wt)/(Zw) + sin(wt)/(Zw) + t/Z)]
//! C_F(t) = 4 sin²(Δt/2)/Δ − 4 sin²(Zt/2)/Z
//!          + 4 Re[c (−i sin(wt)/Z + cos(wt)/Z + 1/Z)]
//! ```
//!
//! and C_F = dC_P/dt. The survival-weighted time average
//! ∫ Γ' e^{−Γ't} C_F(t) dt, with Γ'² = Γ² + 2Ω², is evaluated here by brute
//! force quadrature; its closed form lives in [`crate::potentials`].
//!
//! Each brace splits into three addends: the Δ (co-rotating) part, the Z part,
//! and the phase-bearing part. [`TermToggles`] selects among them.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::units::InternalParams;

/// Largest max(|Δ|, Z)/Γ' the quadrature oracle accepts.
pub const ORACLE_FEASIBILITY_LIMIT: f64 = 1e4;
/// Truncation horizon of the time average in units of 1/Γ'.
pub const HORIZON_DECAY_TIMES: f64 = 40.0;
const PANELS_PER_RADIAN: f64 = 8.0;
const GAUSS_ORDER: usize = 16;
const MAX_DOUBLINGS: u32 = 6;

/// Absolute phases φ and Θ(R(0)).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseConfig {
    pub phi: f64,
    pub theta0: f64,
}

impl PhaseConfig {
    pub fn new(phi: f64, theta0: f64) -> Self {
        Self { phi, theta0 }
    }

    /// e^{i2φ}·e^{i2Θ0}; exactly 1 + 0i for the default phases.
    pub fn factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * self.phi) * Complex64::from_polar(1.0, 2.0 * self.theta0)
    }

    pub fn is_real(&self) -> bool {
        self.factor().im == 0.0
    }
}

/// Which of the three addends (Δ, Z, phase-bearing) are switched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermToggles {
    pub term1: bool,
    pub term2: bool,
    pub term3: bool,
}

impl Default for TermToggles {
    fn default() -> Self {
        Self::ALL
    }
}

impl TermToggles {
    pub const ALL: Self = Self {
        term1: true,
        term2: true,
        term3: true,
    };
    pub const RWA_ONLY: Self = Self {
        term1: true,
        term2: false,
        term3: false,
    };

    pub fn as_array(&self) -> [bool; 3] {
        [self.term1, self.term2, self.term3]
    }

    pub fn only(index: usize) -> Self {
        Self {
            term1: index == 0,
            term2: index == 1,
            term3: index == 2,
        }
    }

    pub fn any(&self) -> bool {
        self.term1 || self.term2 || self.term3
    }

    /// Zeroes disabled entries.
    pub fn mask(&self, values: [f64; 3]) -> [f64; 3] {
        let on = self.as_array();
        [0, 1, 2].map(|i| if on[i] { values[i] } else { 0.0 })
    }

    /// Sum of enabled entries, in term order.
    pub fn sum(&self, values: [f64; 3]) -> f64 {
        let on = self.as_array();
        let mut acc = 0.0;
        for i in 0..3 {
            if on[i] {
                acc += values[i];
            }
        }
        acc
    }
}

impl FromStr for TermToggles {
    type Err = Error;

    /// Accepts digit lists such as `1,2,3`, `13`, or `2 3`.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Self {
            term1: false,
            term2: false,
            term3: false,
        };
        for c in s.chars() {
            match c {
                '1' => out.term1 = true,
                '2' => out.term2 = true,
                '3' => out.term3 = true,
                ',' | ' ' => {}
                _ => return Err(Error::InvalidTerms(s.to_string())),
            }
        }
        if !out.any() {
            return Err(Error::InvalidTerms(s.to_string()));
        }
        Ok(out)
    }
}

impl fmt::Display for TermToggles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = [(self.term1, "1"), (self.term2, "2"), (self.term3, "3")]
            .into_iter()
            .filter_map(|(on, s)| on.then_some(s))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Dimensionless brace C(t). The observable is −ħ·Ω·(dΩ/dr)·C(t) along r̂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeCoefficient {
    pub value: f64,
}

impl TimeCoefficient {
    /// −Ω·(dΩ/dr)·C, in units of ħ·Γ²/w0 (force) or ħΓ/w0 (momentum).
    pub fn observable(&self, rabi: f64, rabi_gradient: f64) -> f64 {
        -rabi * rabi_gradient * self.value
    }
}

/// Γ' = 2·sqrt(Γ²/4 + Ω²/2).
pub fn modified_linewidth(gamma: f64, rabi: f64) -> f64 {
    2.0 * (0.25 * gamma * gamma + 0.5 * rabi * rabi).sqrt()
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter {
            field: "t",
            value: t,
            reason: "must be finite and ≥ 0",
        });
    }
    Ok(())
}

pub fn momentum_coefficient(t: f64, params: &InternalParams, phase: &PhaseConfig) -> Result<TimeCoefficient> {
    let terms = momentum_coefficient_terms(t, params, phase)?;
    Ok(TimeCoefficient {
        value: TermToggles::ALL.sum(terms),
    })
}

/// Per-addend split of C_P(t).
pub fn momentum_coefficient_terms(t: f64, params: &InternalParams, phase: &PhaseConfig) -> Result<[f64; 3]> {
    params.check_evaluable()?;
    check_time(t)?;
    let d = params.detuning;
    let z = params.zsum;
    let w = d - z;
    let c = phase.factor();
    let term1 = -2.0 * (d * t).sin() / (d * d) + 2.0 * t / d;
    let term2 = 2.0 * (z * t).sin() / (z * z) - 2.0 * t / z;
    let inner = Complex64::new((w * t).sin() / (z * w) + t / z, (w * t).cos() / (z * w));
    let term3 = 4.0 * (c * inner).re;
    Ok([term1, term2, term3])
}

pub fn force_coefficient(t: f64, params: &InternalParams, phase: &PhaseConfig) -> Result<TimeCoefficient> {
    let terms = force_coefficient_terms(t, params, phase)?;
    Ok(TimeCoefficient {
        value: TermToggles::ALL.sum(terms),
    })
}

/// Per-addend split of C_F(t).
pub fn force_coefficient_terms(t: f64, params: &InternalParams, phase: &PhaseConfig) -> Result<[f64; 3]> {
    params.check_evaluable()?;
    check_time(t)?;
    Ok(force_terms_unchecked(t, params.detuning, params.zsum, phase.factor()))
}

fn force_terms_unchecked(t: f64, d: f64, z: f64, c: Complex64) -> [f64; 3] {
    let w = d - z;
    let sd = (0.5 * d * t).sin();
    let sz = (0.5 * z * t).sin();
    let term1 = 4.0 * sd * sd / d;
    let term2 = -4.0 * sz * sz / z;
    let inner = Complex64::new(((w * t).cos() + 1.0) / z, -(w * t).sin() / z);
    let term3 = 4.0 * (c * inner).re;
    [term1, term2, term3]
}

/// Triangle-inequality bound on |C_F(t)| for the enabled addends.
pub fn force_coefficient_bound(params: &InternalParams, phase: &PhaseConfig, toggles: TermToggles) -> f64 {
    let z = params.zsum;
    let c = phase.factor().norm();
    toggles.sum([4.0 / params.detuning.abs(), 4.0 / z, 12.0 * c / z])
}

/// Result of the brute-force time average.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AveragedEstimate {
    pub value: f64,
    /// Panel-doubling difference plus the truncation bound.
    pub error_estimate: f64,
    /// Upper bound on the neglected tail beyond the horizon.
    pub truncation_bound: f64,
    pub horizon: f64,
    pub panels: usize,
}

/// ∫₀^∞ Γ' e^{−Γ't} C_F(t) dt by composite Gauss-Legendre quadrature.
///
/// `rabi` is the local Ω (it sets Γ'). Panels resolve every enabled oscillation
/// frequency with at most 1/8 rad of phase each; the integral is truncated at
/// 40/Γ' and accepted once a panel doubling changes it by less than `rel_tol`.
pub fn averaged_coefficient_numeric(
    params: &InternalParams,
    rabi: f64,
    phase: &PhaseConfig,
    toggles: TermToggles,
    rel_tol: f64,
) -> Result<AveragedEstimate> {
    params.check_evaluable()?;
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(Error::InvalidParameter {
            field: "rel_tol",
            value: rel_tol,
            reason: "must be finite and > 0",
        });
    }
    let gp = modified_linewidth(params.gamma, rabi);
    let d = params.detuning;
    let z = params.zsum;
    let freqs = toggles.mask([d.abs(), z, (d - z).abs()]);
    let omega_max = freqs.into_iter().fold(0.0, f64::max);
    let horizon = HORIZON_DECAY_TIMES / gp;
    if !toggles.any() {
        return Ok(AveragedEstimate {
            value: 0.0,
            error_estimate: 0.0,
            truncation_bound: 0.0,
            horizon,
            panels: 0,
        });
    }
    let ratio = omega_max / gp;
    if ratio > ORACLE_FEASIBILITY_LIMIT {
        return Err(Error::OracleInfeasible {
            ratio,
            limit: ORACLE_FEASIBILITY_LIMIT,
        });
    }

    let c = phase.factor();
    let integrand = |t: f64| {
        let terms = force_terms_unchecked(t, d, z, c);
        gp * (-gp * t).exp() * toggles.sum(terms)
    };
    let truncation_bound = force_coefficient_bound(params, phase, toggles) * (-gp * horizon).exp();

    let rule = GaussLegendre::new(GAUSS_ORDER);
    let mut panels = ((horizon * PANELS_PER_RADIAN * omega_max).ceil() as usize).max(16);
    let mut coarse = rule.integrate_panels(&integrand, 0.0, horizon, panels);
    let mut achieved = f64::INFINITY;
    let mut fine = coarse;
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        fine = rule.integrate_panels(&integrand, 0.0, horizon, panels);
        let error_estimate = (fine - coarse).abs() + truncation_bound;
        achieved = error_estimate / fine.abs().max(f64::MIN_POSITIVE);
        if achieved <= rel_tol {
            return Ok(AveragedEstimate {
                value: fine,
                error_estimate,
                truncation_bound,
                horizon,
                panels,
            });
        }
        coarse = fine;
    }
    Err(Error::NoConvergence {
        estimate: fine,
        achieved,
        rel_tol,
    })
}
