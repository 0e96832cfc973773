//! Physical parameters, the Γ = 1 internal unit system, and compiled-in presets.
//!
//! Every evaluation downstream of this module works in internal units:
//! frequencies in units of Γ, energies in ħΓ, radii in units of the beam waist
//! w0. At far-off-resonance magnitudes Δ/Γ is of order 1e7 while the saturation
//! parameter is of order 1e-10, so carrying Γ = 1 keeps both ends representable
//! without mixing 1e15 rad/s values into the logarithms.

use std::f64::consts::PI;

use serde::Serialize;

use crate::beam::BeamProfile;
use crate::dynamics::PhaseConfig;
use crate::error::{Error, Result};

/// Smallest |Δ|/Γ accepted at evaluation time.
pub const RESONANCE_GUARD: f64 = 1e-9;
/// Smallest |Δ − Z|/Γ accepted at evaluation time.
pub const DEGENERACY_GUARD: f64 = 1e-9;

/// Atomic and laser angular frequencies with the derived detuning and sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams {
    gamma: f64,
    omega0: f64,
    omega_l: f64,
    detuning: f64,
    zsum: f64,
}

fn positive_finite(field: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::InvalidParameter {
            field,
            value,
            reason: "must be finite",
        });
    }
    if value <= 0.0 {
        return Err(Error::InvalidParameter {
            field,
            value,
            reason: "must be > 0",
        });
    }
    Ok(value)
}

/// Builds [`PhysicalParams`] from ω0, ωL and Γ, all in rad/s.
pub fn derive_params(omega0: f64, omega_l: f64, gamma: f64) -> Result<PhysicalParams> {
    PhysicalParams::new(omega0, omega_l, gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetuningSign {
    Positive,
    Negative,
}

impl PhysicalParams {
    pub fn new(omega0: f64, omega_l: f64, gamma: f64) -> Result<Self> {
        let omega0 = positive_finite("omega0", omega0)?;
        let omega_l = positive_finite("omegaL", omega_l)?;
        let gamma = positive_finite("gamma", gamma)?;
        Ok(Self {
            gamma,
            omega0,
            omega_l,
            detuning: omega0 - omega_l,
            zsum: omega0 + omega_l,
        })
    }

    /// Inverts Δ = ω0 − ωL, Z = ω0 + ωL. Requires Z > |Δ|.
    pub fn from_detuning_and_sum(detuning: f64, zsum: f64, gamma: f64) -> Result<Self> {
        if !detuning.is_finite() {
            return Err(Error::InvalidParameter {
                field: "detuning",
                value: detuning,
                reason: "must be finite",
            });
        }
        let zsum = positive_finite("zsum", zsum)?;
        if zsum <= detuning.abs() {
            return Err(Error::InvalidParameter {
                field: "zsum",
                value: zsum,
                reason: "must exceed |detuning| so that both frequencies are positive",
            });
        }
        Self::new(0.5 * (zsum + detuning), 0.5 * (zsum - detuning), gamma)
    }

    /// Returns parameters with the requested detuning sign and the same Z.
    ///
    /// Flipping the sign exchanges ω0 and ωL, which keeps |Δ| and Z fixed.
    pub fn with_detuning_sign(&self, sign: DetuningSign) -> Self {
        let want_negative = sign == DetuningSign::Negative;
        if (self.detuning < 0.0) == want_negative {
            *self
        } else {
            Self {
                gamma: self.gamma,
                omega0: self.omega_l,
                omega_l: self.omega0,
                detuning: self.omega_l - self.omega0,
                zsum: self.omega_l + self.omega0,
            }
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega_l(&self) -> f64 {
        self.omega_l
    }

    /// Δ = ω0 − ωL.
    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    /// Z = ω0 + ωL.
    pub fn zsum(&self) -> f64 {
        self.zsum
    }
}

/// Dimensionless parameters: frequencies over Γ, radii over w0.
///
/// The normalized beam lives here as well, with `rabi_peak` in units of Γ and
/// `waist` equal to 1. `gamma_rad_s` and `waist_m` remember the scales so the
/// conversion can be undone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InternalParams {
    pub gamma: f64,
    pub omega0: f64,
    pub omega_l: f64,
    pub detuning: f64,
    pub zsum: f64,
    pub beam: BeamProfile,
    pub gamma_rad_s: f64,
    pub waist_m: f64,
}

/// Rescales frequencies by 1/Γ and lengths by 1/w0.
pub fn to_internal(params: &PhysicalParams, beam: &BeamProfile) -> InternalParams {
    let g = params.gamma;
    InternalParams {
        gamma: 1.0,
        omega0: params.omega0 / g,
        omega_l: params.omega_l / g,
        detuning: params.detuning / g,
        zsum: params.zsum / g,
        beam: BeamProfile {
            rabi_peak: beam.rabi_peak / g,
            waist: 1.0,
            ..*beam
        },
        gamma_rad_s: g,
        waist_m: beam.waist,
    }
}

impl InternalParams {
    /// Desk-scale constructor: Γ = 1 and the given Δ, Z (in Γ units).
    pub fn desk(detuning: f64, zsum: f64, beam: BeamProfile) -> Result<Self> {
        let physical = PhysicalParams::from_detuning_and_sum(detuning, zsum, 1.0)?;
        let beam = BeamProfile::new(beam.l, beam.p, 1.0, beam.rabi_peak)?;
        Ok(to_internal(&physical, &beam))
    }

    /// Undoes [`to_internal`].
    pub fn to_physical(&self) -> (PhysicalParams, BeamProfile) {
        let g = self.gamma_rad_s;
        let physical = PhysicalParams {
            gamma: self.gamma * g,
            omega0: self.omega0 * g,
            omega_l: self.omega_l * g,
            detuning: self.detuning * g,
            zsum: self.zsum * g,
        };
        let beam = BeamProfile {
            rabi_peak: self.beam.rabi_peak * g,
            waist: self.beam.waist * self.waist_m,
            ..self.beam
        };
        (physical, beam)
    }

    /// Reinterprets the already-normalized values as physical ones (Γ = 1, w0 = 1).
    pub fn as_physical(&self) -> (PhysicalParams, BeamProfile) {
        let physical = PhysicalParams {
            gamma: self.gamma,
            omega0: self.omega0,
            omega_l: self.omega_l,
            detuning: self.detuning,
            zsum: self.zsum,
        };
        (physical, self.beam)
    }

    pub fn with_rabi_peak(&self, rabi_peak: f64) -> Self {
        let mut out = *self;
        out.beam.rabi_peak = rabi_peak;
        out
    }

    /// Saturation parameter 2Ω²/(Δ² + Γ²) for a given local Rabi frequency.
    pub fn saturation(&self, rabi: f64) -> f64 {
        2.0 * rabi * rabi / (self.detuning * self.detuning + self.gamma * self.gamma)
    }

    /// Rejects parameter sets on which the closed forms divide by ~0.
    pub fn check_evaluable(&self) -> Result<()> {
        let d = self.detuning / self.gamma;
        if d.is_nan() || d.abs() < RESONANCE_GUARD {
            return Err(Error::Resonance {
                detuning_over_gamma: d.abs(),
                guard: RESONANCE_GUARD,
            });
        }
        let gap = (self.detuning - self.zsum) / self.gamma;
        if gap.is_nan() || gap.abs() < DEGENERACY_GUARD {
            return Err(Error::DegenerateFrequency {
                value: gap.abs(),
                guard: DEGENERACY_GUARD,
            });
        }
        Ok(())
    }
}

/// How a quoted "Γ = N MHz" linewidth is turned into rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaConvention {
    /// Γ = 2π × N × 10^6 rad/s.
    OrdinaryFrequency,
    /// Γ = N × 10^6 rad/s.
    Literal,
}

impl GammaConvention {
    pub fn rad_per_s(self, megahertz: f64) -> f64 {
        match self {
            GammaConvention::OrdinaryFrequency => 2.0 * PI * megahertz * 1e6,
            GammaConvention::Literal => megahertz * 1e6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub params: PhysicalParams,
    pub beam: BeamProfile,
    pub phase: PhaseConfig,
    pub gamma_convention: GammaConvention,
}

pub const STAMPER_KURN_1998: &str = "stamper_kurn_1998";
pub const DESK_SYNTHETIC: &str = "desk_synthetic";
pub const CHU_1985: &str = "chu_1985";

pub fn preset_names() -> Vec<&'static str> {
    vec![STAMPER_KURN_1998, DESK_SYNTHETIC]
}

/// Looks up a compiled-in preset. Γ for `stamper_kurn_1998` is read as an
/// ordinary frequency (2π × 10 MHz).
pub fn load_preset(name: &str) -> Result<(PhysicalParams, BeamProfile, PhaseConfig)> {
    let preset = preset(name, GammaConvention::OrdinaryFrequency)?;
    Ok((preset.params, preset.beam, preset.phase))
}

pub fn preset(name: &str, convention: GammaConvention) -> Result<Preset> {
    match name {
        STAMPER_KURN_1998 => {
            // 1.3e15 rad/s detuning of an infrared FORT on the sodium D line.
            let gamma = convention.rad_per_s(10.0);
            Ok(Preset {
                name: STAMPER_KURN_1998,
                description: "IR optical trap: w0 = 6 µm, Γ = 10 MHz, Ω0 = 367 Γ, \
                              ω0 = 3.2e15 rad/s, ωL = 1.9e15 rad/s, LG l=0 p=2",
                params: PhysicalParams::new(3.2e15, 1.9e15, gamma)?,
                beam: BeamProfile::new(0, 2, 6e-6, 3.67e2 * gamma)?,
                phase: PhaseConfig::default(),
                gamma_convention: convention,
            })
        }
        DESK_SYNTHETIC => Ok(Preset {
            name: DESK_SYNTHETIC,
            description: "oracle-feasible test scale: Γ = 1, Δ = 3, Z = 10, Ω0 = 2, w0 = 1, LG l=0 p=2",
            params: PhysicalParams::new(6.5, 3.5, 1.0)?,
            beam: BeamProfile::new(0, 2, 1.0, 2.0)?,
            phase: PhaseConfig::default(),
            gamma_convention: convention,
        }),
        CHU_1985 => Err(Error::PresetUnavailable {
            name: name.to_string(),
            reason: "no parameter values were published for chu_1985",
        }),
        _ => Err(Error::UnknownPreset {
            name: name.to_string(),
            available: preset_names(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn derive_params_examples() {
        let p = derive_params(3.2e15, 1.9e15, 6.2832e7).unwrap();
        assert!(rel(p.detuning(), 1.3e15) < 1e-12);
        assert!(rel(p.zsum(), 5.1e15) < 1e-12);

        let p = derive_params(2.0, 2.0, 0.3).unwrap();
        assert_eq!(p.detuning(), 0.0);
        assert_eq!(p.zsum(), 4.0);

        let p = derive_params(1.0, 0.5, 0.1).unwrap();
        assert_eq!(p.detuning(), 0.5);
        assert_eq!(p.zsum(), 1.5);
    }

    #[test]
    fn derive_params_rejects_bad_fields() {
        for (args, field) in [
            ((0.0, 1.0, 1.0), "omega0"),
            ((1.0, -1.0, 1.0), "omegaL"),
            ((1.0, 1.0, f64::NAN), "gamma"),
            ((f64::INFINITY, 1.0, 1.0), "omega0"),
        ] {
            match derive_params(args.0, args.1, args.2) {
                Err(Error::InvalidParameter { field: f, .. }) => assert_eq!(f, field),
                other => panic!("expected validation error for {field}, got {other:?}"),
            }
        }
    }

    #[test]
    fn resonance_is_rejected_at_evaluation() {
        let p = derive_params(2.0, 2.0, 1.0).unwrap();
        let beam = BeamProfile::new(0, 0, 1.0, 1.0).unwrap();
        let internal = to_internal(&p, &beam);
        assert!(matches!(internal.check_evaluable(), Err(Error::Resonance { .. })));
    }

    #[test]
    fn to_internal_divides_by_gamma() {
        let p = PhysicalParams::from_detuning_and_sum(6.0, 20.0, 2.0).unwrap();
        let beam = BeamProfile::new(0, 2, 1e-6, 4.0).unwrap();
        let i = to_internal(&p, &beam);
        assert_eq!(i.gamma, 1.0);
        assert_eq!(i.detuning, 3.0);
        assert_eq!(i.zsum, 10.0);
        assert_eq!(i.beam.rabi_peak, 2.0);
        assert_eq!(i.beam.waist, 1.0);
    }

    #[test]
    fn stamper_kurn_internal_detuning() {
        let p = derive_params(3.2e15, 1.9e15, 6.2832e7).unwrap();
        let beam = BeamProfile::new(0, 2, 6e-6, 1.0).unwrap();
        let i = to_internal(&p, &beam);
        // 1.3e15 / 6.2832e7 by hand: 2.0690094e7
        assert!(rel(i.detuning, 2.069_009_4e7) < 1e-7);
    }

    #[test]
    fn round_trip_and_idempotence() {
        let (p, beam, _) = load_preset(STAMPER_KURN_1998).unwrap();
        let i = to_internal(&p, &beam);
        let (p2, beam2) = i.to_physical();
        for (a, b) in [
            (p.gamma(), p2.gamma()),
            (p.omega0(), p2.omega0()),
            (p.omega_l(), p2.omega_l()),
            (p.detuning(), p2.detuning()),
            (p.zsum(), p2.zsum()),
            (beam.rabi_peak, beam2.rabi_peak),
            (beam.waist, beam2.waist),
        ] {
            assert!(rel(b, a) <= 1e-12, "{a} vs {b}");
        }

        let (ap, ab) = i.as_physical();
        let again = to_internal(&ap, &ab);
        for (a, b) in [
            (i.detuning, again.detuning),
            (i.zsum, again.zsum),
            (i.omega0, again.omega0),
            (i.beam.rabi_peak, again.beam.rabi_peak),
        ] {
            assert!(rel(b, a) <= 1e-12);
        }
    }

    #[test]
    fn presets() {
        let (p, beam, phase) = load_preset(STAMPER_KURN_1998).unwrap();
        assert_eq!(p.detuning(), 1.3e15);
        assert!(rel(p.gamma(), 2.0 * PI * 1e7) < 1e-15);
        assert_eq!(beam.waist, 6e-6);
        assert_eq!((beam.l, beam.p), (0, 2));
        assert!(rel(beam.rabi_peak / p.gamma(), 367.0) < 1e-14);
        assert_eq!(phase, PhaseConfig::default());

        let literal = preset(STAMPER_KURN_1998, GammaConvention::Literal).unwrap();
        assert_eq!(literal.params.gamma(), 1e7);

        let (p, beam, _) = load_preset(DESK_SYNTHETIC).unwrap();
        let i = to_internal(&p, &beam);
        assert_eq!((i.detuning, i.zsum, i.beam.rabi_peak), (3.0, 10.0, 2.0));

        match load_preset(CHU_1985) {
            Err(e @ Error::PresetUnavailable { .. }) => {
                assert!(e.to_string().starts_with("preset not available"))
            }
            other => panic!("{other:?}"),
        }
        match load_preset("nope") {
            Err(e @ Error::UnknownPreset { .. }) => {
                let msg = e.to_string();
                assert!(msg.contains(STAMPER_KURN_1998) && msg.contains(DESK_SYNTHETIC));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detuning_sign_flip_keeps_sum() {
        let (p, _, _) = load_preset(STAMPER_KURN_1998).unwrap();
        let n = p.with_detuning_sign(DetuningSign::Negative);
        assert_eq!(n.detuning(), -1.3e15);
        assert_eq!(n.zsum(), p.zsum());
        assert_eq!(n.with_detuning_sign(DetuningSign::Negative), n);
        assert_eq!(n.with_detuning_sign(DetuningSign::Positive), p);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn zsum_minus_detuning_is_twice_laser(
                w0 in 1e-3f64..1e16, wl in 1e-3f64..1e16, g in 1e-3f64..1e9,
            ) {
                let p = derive_params(w0, wl, g).unwrap();
                let lhs = p.zsum() - p.detuning();
                let rhs = 2.0 * wl;
                let ulp = p.zsum() * f64::EPSILON;
                prop_assert!((lhs - rhs).abs() <= 4.0 * ulp);
                prop_assert!(p.zsum() > 0.0);
                prop_assert!(p.zsum() > p.detuning().abs());
            }
        }
    }
}
