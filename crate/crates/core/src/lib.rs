//! Optical dipole trap potentials and forces for a two-level atom in a
//! far-detuned Laguerre-Gaussian beam, in the rotating-wave approximation and
//! with the counter-rotating corrections that matter once |Δ| becomes a
//! sizeable fraction of ω0 + ωL.
//!
//! All evaluation happens in internal units: frequencies over Γ, energies in
//! ħΓ, radii in units of the beam waist. See [`units`] for the conversion.
//!
//! ```
//! use fortcalc_core::{correction_ratio, load_preset, to_internal, PhaseConfig};
//!
//! let (params, beam, phase) = load_preset("stamper_kurn_1998").unwrap();
//! let internal = to_internal(&params, &beam);
//! let ratio = correction_ratio(&internal, &phase, 0.0).unwrap();
//! assert!((ratio - 1.3 / 5.1).abs() < 1e-3);
//! # let _ = PhaseConfig::default();
//! ```

pub mod analysis;
pub mod beam;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod potentials;
pub mod quadrature;
pub mod units;
pub mod verify;

pub use analysis::{
    compare_depths, correction_ratio, golden_section_min, locate_extrema, radial_scan, term_magnitude_report,
    trap_extrema, DepthComparison, Extremum, ExtremumKind, GridSpec, ScanCurve, ScanMeta, ScanRow, Series,
    TermMagnitudes, TrapExtrema,
};
pub use beam::{assoc_laguerre, rabi_and_gradient, rabi_gradient, rabi_profile, BeamProfile};
pub use dynamics::{
    averaged_coefficient_numeric, force_coefficient, force_coefficient_terms, modified_linewidth, momentum_coefficient,
    momentum_coefficient_terms, AveragedEstimate, PhaseConfig, TermToggles, TimeCoefficient,
};
pub use error::{Error, Result};
pub use io::{emit_csv, emit_svg, Overlay, RunConfig, Scenario};
pub use potentials::{
    averaged_coefficient_closed, force_closed, gradient_consistency, potential_nonrwa, potential_rwa, ForceBreakdown,
    GradientReport, PotentialBreakdown,
};
pub use units::{
    derive_params, load_preset, preset, preset_names, to_internal, DetuningSign, GammaConvention, InternalParams,
    PhysicalParams, Preset,
};
pub use verify::{run_verification, CheckStatus, Profile, VerificationReport};
