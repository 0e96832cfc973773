//! Closed-form averaged force and trapping potentials.
//!
//! In internal units (Γ = 1, energies in ħΓ, radii in w0), with the local Rabi
//! frequency Ω = Ω(r), w = Δ − Z and the phase factor c:
//!
//! ```text
//! term1 =  (Δ/2) ln(1 + 2Ω²/(Δ² + Γ²))
//! term2 = −(Z/2) ln(1 + 2Ω²/(Z² + Γ²))
//! term3 = −2 Re[c ( ln(1 + 2Ω²/(w² + Γ²)) (iΓw/(2Z) + w²/(2Z)) − 2Ω²/Z )]
//! ```
//!
//! term1 alone is the rotating-wave potential. The averaged force is
//! −2Ω(dΩ/dr)·{bracket}, where the bracket addends are
//!
//! ```text
//!  Δ/(Δ² + Γ² + 2Ω²),   −Z/(Z² + Γ² + 2Ω²),
//!  2 Re[c (−iΓw/(ZX) + (Γ² + 2Ω²)/(ZX) + 1/Z)],   X = Γ² + 2Ω² + w².
//! ```
//!
//! The denominators Γ² + 2Ω² equal Γ'², the damping rate used for the time
//! average. The imaginary numerator is Γw as printed; the exact average of
//! the time-domain force gives Γ'w instead. The two agree whenever c is real.

use num_complex::Complex64;
use serde::Serialize;

use crate::beam::{rabi_and_gradient, rabi_profile};
use crate::dynamics::{PhaseConfig, TermToggles};
use crate::error::Result;
use crate::units::InternalParams;

/// Potential at one radius, in ħΓ.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PotentialBreakdown {
    pub term1: f64,
    pub term2: f64,
    pub term3: f64,
    pub u_rwa: f64,
    pub u_nonrwa: f64,
}

/// Radial averaged force at one radius, in ħΓ²/w0 (ħΓ/w0 per unit time 1/Γ).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ForceBreakdown {
    pub term1: f64,
    pub term2: f64,
    pub term3: f64,
    pub f_rwa: f64,
    pub f_nonrwa: f64,
}

/// Rotating-wave potential (Δ/2)·ln(1 + 2Ω²/(Δ² + Γ²)) at radius `r`.
pub fn potential_rwa(r: f64, params: &InternalParams) -> Result<f64> {
    params.check_evaluable()?;
    let rabi = rabi_profile(r, &params.beam);
    Ok(rwa_potential_for_rabi(params, rabi))
}

fn rwa_potential_for_rabi(params: &InternalParams, rabi: f64) -> f64 {
    let d = params.detuning;
    let g2 = params.gamma * params.gamma;
    0.5 * d * (2.0 * rabi * rabi / (d * d + g2)).ln_1p()
}

/// The three potential addends for a given local Ω.
pub fn potential_terms(params: &InternalParams, rabi: f64, phase: &PhaseConfig) -> [f64; 3] {
    let d = params.detuning;
    let z = params.zsum;
    let g = params.gamma;
    let w = d - z;
    let om2 = rabi * rabi;
    let term1 = rwa_potential_for_rabi(params, rabi);
    let term2 = -0.5 * z * (2.0 * om2 / (z * z + g * g)).ln_1p();
    let log_w = (2.0 * om2 / (w * w + g * g)).ln_1p();
    let inner = Complex64::new(log_w * w * w / (2.0 * z) - 2.0 * om2 / z, log_w * g * w / (2.0 * z));
    let term3 = -2.0 * (phase.factor() * inner).re;
    [term1, term2, term3]
}

fn breakdown_from_terms(terms: [f64; 3], u_rwa: f64, toggles: TermToggles) -> PotentialBreakdown {
    let [term1, term2, term3] = toggles.mask(terms);
    PotentialBreakdown {
        term1,
        term2,
        term3,
        u_rwa,
        u_nonrwa: toggles.sum(terms),
    }
}

/// Potential with counter-rotating corrections; disabled terms read 0.
///
/// `u_rwa` always holds the rotating-wave value, so it equals `term1`
/// whenever term1 is enabled.
pub fn potential_nonrwa(
    r: f64,
    params: &InternalParams,
    phase: &PhaseConfig,
    toggles: TermToggles,
) -> Result<PotentialBreakdown> {
    params.check_evaluable()?;
    let rabi = rabi_profile(r, &params.beam);
    Ok(potential_for_rabi(params, rabi, phase, toggles))
}

pub(crate) fn potential_for_rabi(
    params: &InternalParams,
    rabi: f64,
    phase: &PhaseConfig,
    toggles: TermToggles,
) -> PotentialBreakdown {
    let terms = potential_terms(params, rabi, phase);
    breakdown_from_terms(terms, terms[0], toggles)
}

/// Survival-weighted time average of the force brace, per addend.
///
/// Equals twice the bracket of the averaged force; the force itself is
/// −Ω·(dΩ/dr) times the enabled sum.
pub fn averaged_coefficient_closed(params: &InternalParams, rabi: f64, phase: &PhaseConfig) -> [f64; 3] {
    let d = params.detuning;
    let z = params.zsum;
    let g = params.gamma;
    let w = d - z;
    // Γ² + 2Ω² = Γ'²
    let damp = g * g + 2.0 * rabi * rabi;
    let x = damp + w * w;
    let b1 = d / (d * d + damp);
    let b2 = -z / (z * z + damp);
    let inner = Complex64::new(damp / (z * x) + 1.0 / z, -g * w / (z * x));
    let b3 = 2.0 * (phase.factor() * inner).re;
    [2.0 * b1, 2.0 * b2, 2.0 * b3]
}

/// Averaged radial force at radius `r`.
pub fn force_closed(
    r: f64,
    params: &InternalParams,
    phase: &PhaseConfig,
    toggles: TermToggles,
) -> Result<ForceBreakdown> {
    params.check_evaluable()?;
    let (rabi, grad) = rabi_and_gradient(r, &params.beam);
    Ok(force_for_rabi(params, rabi, grad, phase, toggles))
}

pub(crate) fn force_for_rabi(
    params: &InternalParams,
    rabi: f64,
    grad: f64,
    phase: &PhaseConfig,
    toggles: TermToggles,
) -> ForceBreakdown {
    let prefactor = -rabi * grad;
    let coeff = averaged_coefficient_closed(params, rabi, phase);
    let terms = coeff.map(|c| prefactor * c);
    let [term1, term2, term3] = toggles.mask(terms);
    ForceBreakdown {
        term1,
        term2,
        term3,
        f_rwa: terms[0],
        f_nonrwa: toggles.sum(terms),
    }
}

/// Analytic force against −dU/dr from central differences of the potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientReport {
    pub analytic_force: f64,
    pub minus_du_dr: f64,
    pub rel_err: f64,
    pub abs_err: f64,
    /// Per-addend (analytic, finite-difference) pairs; disabled terms are (0, 0).
    pub terms: [(f64, f64); 3],
}

pub(crate) fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

pub fn gradient_consistency(
    r: f64,
    params: &InternalParams,
    phase: &PhaseConfig,
    toggles: TermToggles,
    h: f64,
) -> Result<GradientReport> {
    params.check_evaluable()?;
    let force = force_closed(r, params, phase, toggles)?;
    // U depends on r only through Ω², which is even in r; r − h < 0 is fine.
    let up = potential_terms(params, rabi_profile(r + h, &params.beam), phase);
    let down = potential_terms(params, rabi_profile(r - h, &params.beam), phase);
    let fd = [0, 1, 2].map(|i| -(up[i] - down[i]) / (2.0 * h));
    let fd = toggles.mask(fd);
    let minus_du_dr = toggles.sum(fd);
    let analytic = [force.term1, force.term2, force.term3];
    Ok(GradientReport {
        analytic_force: force.f_nonrwa,
        minus_du_dr,
        rel_err: relative_error(force.f_nonrwa, minus_du_dr),
        abs_err: (force.f_nonrwa - minus_du_dr).abs(),
        terms: [0, 1, 2].map(|i| (analytic[i], fd[i])),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::{rabi_gradient, BeamProfile};
    use crate::units::{load_preset, to_internal, STAMPER_KURN_1998};

    fn desk(d: f64, z: f64, rabi_peak: f64) -> InternalParams {
        InternalParams::desk(d, z, BeamProfile::new(0, 2, 1.0, rabi_peak).unwrap()).unwrap()
    }

    fn stamper_kurn() -> InternalParams {
        let (p, beam, _) = load_preset(STAMPER_KURN_1998).unwrap();
        to_internal(&p, &beam)
    }

    #[test]
    fn rwa_examples() {
        let p = desk(3.0, 10.0, 2.0);
        let r0 = ((2.0 - std::f64::consts::SQRT_2) / 2.0).sqrt();
        assert!(potential_rwa(r0, &p).unwrap().abs() < 1e-28);

        // Δ = Γ = Ω = 1 on axis: ln 2 / 2
        let p = InternalParams::desk(1.0, 10.0, BeamProfile::new(0, 0, 1.0, 1.0).unwrap()).unwrap();
        let u = potential_rwa(0.0, &p).unwrap();
        assert!((u - 0.346_573_590_279_972_6).abs() < 1e-15);

        for d in [-4.0, -1.5, 2.0, 5.0] {
            let p = desk(d, 10.0, 2.0);
            for r in [0.0, 0.2, 0.9, 1.7] {
                assert_eq!(potential_rwa(r, &p).unwrap().signum(), d.signum());
            }
        }
    }

    #[test]
    fn nonrwa_reduces_to_rwa_with_term1_only() {
        let p = desk(3.0, 10.0, 2.0);
        for r in [0.0, 0.3, 1.1] {
            let b = potential_nonrwa(r, &p, &PhaseConfig::default(), TermToggles::RWA_ONLY).unwrap();
            assert_eq!(b.u_nonrwa, potential_rwa(r, &p).unwrap());
            assert_eq!(b.u_rwa, b.term1);
            assert_eq!((b.term2, b.term3), (0.0, 0.0));
        }
    }

    #[test]
    fn zero_rabi_gives_zero_terms() {
        let p = desk(3.0, 10.0, 0.0);
        let b = potential_nonrwa(0.5, &p, &PhaseConfig::new(0.2, 0.3), TermToggles::ALL).unwrap();
        assert_eq!([b.term1, b.term2, b.term3, b.u_nonrwa], [0.0; 4]);
        let f = force_closed(0.5, &p, &PhaseConfig::default(), TermToggles::ALL).unwrap();
        assert_eq!(f.f_nonrwa, 0.0);
    }

    #[test]
    fn small_saturation_corrections_at_stamper_kurn() {
        let p = stamper_kurn();
        for r in [0.0, 0.2, 0.9, 1.6, 2.5] {
            let rabi = rabi_profile(r, &p.beam);
            let b = potential_nonrwa(r, &p, &PhaseConfig::default(), TermToggles::ALL).unwrap();
            let want = rabi * rabi / p.zsum;
            assert!(((b.term2 + b.term3) - want).abs() <= 1e-3 * want, "r={r}");
            assert!(b.term2 <= 0.0 && b.term3 >= 0.0);
        }
    }

    #[test]
    fn stamper_kurn_terms_match_high_precision_reference() {
        // mpmath, 40 digits, Γ = 2π·10^7 rad/s, r = 0
        let p = stamper_kurn();
        let b = potential_nonrwa(0.0, &p, &PhaseConfig::default(), TermToggles::ALL).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        assert!(rel(b.term1, 0.006_509_814_965_941_87) < 1e-9, "{}", b.term1);
        assert!(rel(b.term2, -0.001_659_364_599_649_82) < 1e-9, "{}", b.term2);
        assert!(rel(b.term3, 0.003_318_729_199_489_7) < 1e-9, "{}", b.term3);
    }

    #[test]
    fn force_vanishes_where_prefactor_does() {
        let p = desk(3.0, 10.0, 2.0);
        let f = force_closed(0.0, &p, &PhaseConfig::default(), TermToggles::ALL).unwrap();
        assert_eq!([f.term1, f.term2, f.term3], [0.0; 3]);
    }

    #[test]
    fn term1_bracket_hand_value() {
        let p = InternalParams::desk(3.0, 10.0, BeamProfile::new(0, 0, 1.0, 1.0).unwrap()).unwrap();
        let c = averaged_coefficient_closed(&p, 1.0, &PhaseConfig::default());
        assert!((c[0] / 2.0 - 0.25).abs() < 1e-16);
    }

    #[test]
    fn gradient_consistency_examples() {
        let p = desk(3.0, 10.0, 2.0);
        let ph = PhaseConfig::default();
        let rep = gradient_consistency(0.3, &p, &ph, TermToggles::ALL, 1e-4).unwrap();
        assert!(rep.rel_err <= 1e-5, "{rep:?}");

        let rep = gradient_consistency(0.0, &p, &ph, TermToggles::ALL, 1e-4).unwrap();
        assert!(rep.analytic_force.abs() < 1e-10 && rep.minus_du_dr.abs() < 1e-10);

        let errs: Vec<f64> = [1e-2, 1e-3]
            .iter()
            .map(|&h| gradient_consistency(0.3, &p, &ph, TermToggles::ALL, h).unwrap().rel_err)
            .collect();
        // second order: a 10× smaller step gives ~100× smaller error
        assert!(errs[1] < errs[0] / 50.0, "{errs:?}");
        let e5 = gradient_consistency(0.3, &p, &ph, TermToggles::ALL, 1e-5)
            .unwrap()
            .rel_err;
        assert!(e5 <= 1e-5);
    }

    #[test]
    fn real_phase_ignores_imaginary_pieces() {
        // term3 evaluated with purely real arithmetic
        let p = desk(-2.0, 12.0, 1.5);
        for r in [0.1, 0.6, 1.4] {
            let rabi = rabi_profile(r, &p.beam);
            let grad = rabi_gradient(r, &p.beam);
            let (d, z, g) = (p.detuning, p.zsum, p.gamma);
            let w = d - z;
            let om2 = rabi * rabi;
            let l = (2.0 * om2 / (w * w + g * g)).ln_1p();
            let real_u3 = -2.0 * (l * w * w / (2.0 * z) - 2.0 * om2 / z);
            let damp = g * g + 2.0 * om2;
            let x = damp + w * w;
            let real_f3 = -rabi * grad * 2.0 * 2.0 * (damp / (z * x) + 1.0 / z);

            let ph = PhaseConfig::default();
            let u3 = potential_terms(&p, rabi, &ph)[2];
            let f3 = force_closed(r, &p, &ph, TermToggles::ALL).unwrap().term3;
            assert_eq!(u3.to_bits(), real_u3.to_bits());
            assert_eq!(f3.to_bits(), real_f3.to_bits());
        }
    }

    #[test]
    fn small_saturation_ratio_is_detuning_over_sum() {
        // Δ/Z needs Γ ≪ |Δ| as well as low saturation
        for (d, z) in [(300.0, 1000.0), (-300.0, 1000.0), (150.0, 1700.0)] {
            let p = desk(d, z, 1e-2);
            let b = potential_nonrwa(0.2, &p, &PhaseConfig::default(), TermToggles::ALL).unwrap();
            let ratio = (b.u_nonrwa - b.u_rwa) / b.u_rwa;
            assert!((ratio - d / z).abs() <= 1e-3 * (d / z).abs(), "{ratio}");
        }
    }

    #[test]
    fn small_saturation_ratio_keeps_linewidth_terms_at_desk_scale() {
        // ln(1+x) ≈ x with Γ = 1 retained
        let (d, z) = (3.0, 10.0);
        let w: f64 = d - z;
        let series = (-z / (z * z + 1.0) + (2.0 / z) * (2.0 - w * w / (w * w + 1.0))) / (d / (d * d + 1.0));
        let p = desk(d, z, 1e-4);
        let b = potential_nonrwa(0.2, &p, &PhaseConfig::default(), TermToggles::ALL).unwrap();
        let ratio = (b.u_nonrwa - b.u_rwa) / b.u_rwa;
        assert!((ratio - series).abs() <= 1e-6 * series, "{ratio} vs {series}");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn term2_is_never_positive(
                d in prop_oneof![-5.0f64..-1.0, 1.0f64..5.0],
                z in 8.0f64..20.0,
                om in 0.0f64..3.0,
                r in 0.0f64..3.0,
            ) {
                let p = desk(d, z, om);
                let b = potential_nonrwa(r, &p, &PhaseConfig::default(), TermToggles::ALL).unwrap();
                prop_assert!(b.term2 <= 0.0);
                prop_assert!(b.term2 + b.term3 >= 0.0);
                prop_assert_eq!(b.u_nonrwa, b.term1 + b.term2 + b.term3);
            }

            #[test]
            fn term_by_term_gradient_identity(
                d in prop_oneof![-5.0f64..-1.0, 1.0f64..5.0],
                z in 8.0f64..20.0,
                om in 0.5f64..3.0,
                r in 0.05f64..2.5,
            ) {
                let p = desk(d, z, om);
                let (rabi, grad) = rabi_and_gradient(r, &p.beam);
                // stay away from zeros of Ω·dΩ/dr where the relative error is undefined
                prop_assume!((rabi * grad).abs() > 1e-2 * om * om);
                let rep = gradient_consistency(r, &p, &PhaseConfig::default(), TermToggles::ALL, 1e-4).unwrap();
                for (a, fd) in rep.terms {
                    prop_assert!(relative_error(a, fd) <= 1e-5, "{} vs {}", a, fd);
                }
            }
        }
    }
}
