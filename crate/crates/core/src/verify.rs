//! Self-verification harness.
//!
//! Every check pairs a closed form with something that does not share its
//! derivation: Gauss-Legendre quadrature of the time-domain force, central
//! differences, hand-expanded polynomials, or a small-saturation series limit.
//! Randomized draws come from ChaCha8 seeded per check, so a report depends
//! only on (profile, seed) and is reproducible bit for bit.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    compare_depths, correction_ratio, radial_scan, term_magnitude_report, trap_extrema, GridSpec, Series,
};
use crate::beam::{laguerre, rabi_and_gradient, rabi_gradient, rabi_profile, BeamProfile};
use crate::dynamics::{
    averaged_coefficient_numeric, force_coefficient, force_coefficient_bound, modified_linewidth, momentum_coefficient,
    PhaseConfig, TermToggles,
};
use crate::error::Result;
use crate::potentials::{
    averaged_coefficient_closed, force_closed, gradient_consistency, potential_terms, relative_error,
};
use crate::units::{load_preset, to_internal, DetuningSign, InternalParams, PhysicalParams, STAMPER_KURN_1998};

const QUAD_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(format!("unknown profile `{s}` (expected quick or full)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckStatus {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped")]
    Skipped,
    /// A bounded, explained deviation between a printed closed form and its oracle.
    #[serde(rename = "known-paper-discrepancy")]
    KnownDiscrepancy,
}

impl CheckStatus {
    fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
            CheckStatus::KnownDiscrepancy => "KNOWN",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub oracle: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Not serialized: JSON reports must be byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub profile: Profile,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{:<5}] {:<48} measured={:<12.5e} expected={:<12.5e} tol={:<9.2e} {:>9.3}ms  ({})",
                c.status.label(),
                c.name,
                c.measured,
                c.expected,
                c.tolerance,
                c.wall_time.as_secs_f64() * 1e3,
                c.oracle,
            );
            if let Some(note) = &c.note {
                let _ = writeln!(out, "        note: {note}");
            }
        }
        let _ = writeln!(
            out,
            "{} checks: {} pass, {} fail, {} skipped, {} known discrepancy (profile {:?}, seed {})",
            self.checks.len(),
            self.count(CheckStatus::Pass),
            self.count(CheckStatus::Fail),
            self.count(CheckStatus::Skipped),
            self.count(CheckStatus::KnownDiscrepancy),
            self.profile,
            self.seed,
        );
        out
    }
}

struct Outcome {
    measured: f64,
    expected: f64,
    tolerance: f64,
    status: CheckStatus,
    note: Option<String>,
}

impl Outcome {
    /// Pass when `measured` ≤ `tolerance` (an error metric against zero).
    fn error(measured: f64, tolerance: f64) -> Self {
        Self::within(measured, 0.0, tolerance)
    }

    /// Pass when |measured − expected| ≤ tolerance.
    fn within(measured: f64, expected: f64, tolerance: f64) -> Self {
        let ok = (measured - expected).abs() <= tolerance;
        Self {
            measured,
            expected,
            tolerance,
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            note: None,
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn failed(err: crate::error::Error) -> Self {
        Self {
            measured: f64::INFINITY,
            expected: 0.0,
            tolerance: 0.0,
            status: CheckStatus::Fail,
            note: Some(err.to_string()),
        }
    }
}

type CheckFn = fn(&mut ChaCha8Rng) -> Result<Outcome>;

struct CheckDef {
    name: &'static str,
    oracle: &'static str,
    full_only: bool,
    run: CheckFn,
}

/// FNV-1a, used to derive a per-check stream from the report seed.
fn name_hash(name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn run_verification(profile: Profile, seed: u64) -> VerificationReport {
    let mut checks: Vec<Check> = Vec::new();
    for def in CHECKS {
        if def.full_only && profile == Profile::Quick {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ name_hash(def.name));
        let start = Instant::now();
        let outcome = (def.run)(&mut rng).unwrap_or_else(Outcome::failed);
        let wall_time = start.elapsed();
        checks.push(Check {
            name: def.name.to_string(),
            status: outcome.status,
            measured: outcome.measured,
            expected: outcome.expected,
            tolerance: outcome.tolerance,
            oracle: def.oracle.to_string(),
            note: outcome.note,
            wall_time,
        });
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    VerificationReport { profile, seed, checks }
}

const CHECKS: &[CheckDef] = &[
    CheckDef {
        name: "beam.laguerre_recurrence_vs_explicit",
        oracle: "hand-expanded polynomials p ≤ 4",
        full_only: false,
        run: laguerre_vs_explicit,
    },
    CheckDef {
        name: "beam.laguerre_p2_zeros",
        oracle: "roots 2 ± √2 of 1 − 2x + x²/2",
        full_only: false,
        run: laguerre_zeros,
    },
    CheckDef {
        name: "beam.rabi_ring_zeros",
        oracle: "r/w0 = √((2 ∓ √2)/2)",
        full_only: false,
        run: rabi_ring_zeros,
    },
    CheckDef {
        name: "beam.gradient_vs_central_difference",
        oracle: "central difference, h = 1e-6 w0, 100 draws",
        full_only: false,
        run: beam_gradient,
    },
    CheckDef {
        name: "linewidth.identities",
        oracle: "Γ'² = Γ² + 2Ω² in ulps, 1000 draws",
        full_only: false,
        run: linewidth_identities,
    },
    CheckDef {
        name: "dynamics.force_is_time_derivative",
        oracle: "central difference in t of C_P, 50 draws",
        full_only: false,
        run: force_is_time_derivative,
    },
    CheckDef {
        name: "dynamics.rwa_limit",
        oracle: "Z = 1e12 against 4 sin²(Δt/2)/Δ",
        full_only: false,
        run: rwa_limit,
    },
    CheckDef {
        name: "dynamics.momentum_secular_slope",
        oracle: "least-squares slope over t ∈ [100, 200]/Δ",
        full_only: false,
        run: secular_slope,
    },
    CheckDef {
        name: "dynamics.force_bound",
        oracle: "triangle inequality on sampled grids",
        full_only: false,
        run: force_bound,
    },
    CheckDef {
        name: "dynamics.averaged_rwa_reduction",
        oracle: "quadrature vs hand antiderivative 2Δ/(Δ² + Γ'²)",
        full_only: false,
        run: averaged_rwa_reduction,
    },
    CheckDef {
        name: "potentials.closed_vs_quadrature",
        oracle: "Gauss-Legendre time average, Ω ∈ {0.5, 2}, Δ = ±3, Z = 10",
        full_only: false,
        run: closed_vs_quadrature,
    },
    CheckDef {
        name: "potentials.closed_vs_quadrature_random",
        oracle: "Gauss-Legendre time average, 10 random desk draws",
        full_only: true,
        run: closed_vs_quadrature_random,
    },
    CheckDef {
        name: "potentials.closed_vs_quadrature_true_scale",
        oracle: "Gauss-Legendre time average at the IR trap preset",
        full_only: false,
        run: closed_vs_quadrature_true_scale,
    },
    CheckDef {
        name: "potentials.gradient_identity",
        oracle: "central difference of U, h = 1e-4 w0, term by term, 20 draws",
        full_only: false,
        run: gradient_identity,
    },
    CheckDef {
        name: "potentials.gradient_h_sweep",
        oracle: "central-difference error ratio over h = 1e-3 → 1e-4",
        full_only: true,
        run: gradient_h_sweep,
    },
    CheckDef {
        name: "potentials.theta0_pi_symmetry",
        oracle: "quadrature at Θ0 and Θ0 + π",
        full_only: false,
        run: theta0_symmetry,
    },
    CheckDef {
        name: "potentials.real_phase_exactness",
        oracle: "real-only re-implementation of term 3, bitwise",
        full_only: false,
        run: real_phase_exactness,
    },
    CheckDef {
        name: "potentials.small_saturation_law",
        oracle: "Δ/Z for |Δ| ≫ Γ; first-order series with Γ² kept at Δ ~ Γ",
        full_only: false,
        run: small_saturation_law,
    },
    CheckDef {
        name: "potentials.complex_phase_imag_numerator",
        oracle: "quadrature with c = e^{iπ/4}",
        full_only: true,
        run: complex_phase_numerator,
    },
    CheckDef {
        name: "analysis.correction_ratio_band",
        oracle: "reported ~25% correction, band 0.255 ± 0.02",
        full_only: false,
        run: correction_band,
    },
    CheckDef {
        name: "analysis.correction_ratio_law",
        oracle: "series limit Δ/Z at the IR trap preset",
        full_only: false,
        run: correction_law,
    },
    CheckDef {
        name: "analysis.pointwise_ordering",
        oracle: "sign structure over 600-point scans, Δ = ±1.3e15",
        full_only: false,
        run: pointwise_ordering,
    },
    CheckDef {
        name: "analysis.depth_ratio_positive",
        oracle: "band [1.23, 1.28]",
        full_only: false,
        run: depth_ratio_positive,
    },
    CheckDef {
        name: "analysis.depth_ratio_negative",
        oracle: "band [0.72, 0.77]",
        full_only: false,
        run: depth_ratio_negative,
    },
    CheckDef {
        name: "analysis.chu_like_term_ratio",
        oracle: "band [0.9e4, 1.1e4] at Δ = 5e11 rad/s",
        full_only: false,
        run: chu_like_ratio,
    },
    CheckDef {
        name: "analysis.extrema_grid_refinement",
        oracle: "extremum locations on n = 600 vs 1200 grids",
        full_only: true,
        run: extrema_refinement,
    },
    CheckDef {
        name: "analysis.depth_grid_convergence",
        oracle: "depth on n = 600 vs 1200 grids",
        full_only: true,
        run: depth_convergence,
    },
];

fn desk(detuning: f64, zsum: f64, beam: BeamProfile) -> Result<InternalParams> {
    InternalParams::desk(detuning, zsum, beam)
}

fn random_detuning(rng: &mut ChaCha8Rng) -> f64 {
    let magnitude = rng.gen_range(1.0..5.0);
    if rng.gen_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

fn stamper_kurn(sign: DetuningSign) -> Result<InternalParams> {
    let (p, beam, _) = load_preset(STAMPER_KURN_1998)?;
    Ok(to_internal(&p.with_detuning_sign(sign), &beam))
}

fn laguerre_vs_explicit(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for p in 0..=4u32 {
        for alpha in 0..=3u32 {
            let a = f64::from(alpha);
            for i in 0..=200 {
                let x = 0.05 * f64::from(i);
                let terms: Vec<f64> = match p {
                    0 => vec![1.0],
                    1 => vec![-x, a + 1.0],
                    2 => vec![x * x / 2.0, -(a + 2.0) * x, (a + 1.0) * (a + 2.0) / 2.0],
                    3 => vec![
                        -x.powi(3) / 6.0,
                        (a + 3.0) * x * x / 2.0,
                        -(a + 2.0) * (a + 3.0) * x / 2.0,
                        (a + 1.0) * (a + 2.0) * (a + 3.0) / 6.0,
                    ],
                    _ => vec![
                        x.powi(4) / 24.0,
                        -(a + 4.0) * x.powi(3) / 6.0,
                        (a + 3.0) * (a + 4.0) * x * x / 4.0,
                        -(a + 2.0) * (a + 3.0) * (a + 4.0) * x / 6.0,
                        (a + 1.0) * (a + 2.0) * (a + 3.0) * (a + 4.0) / 24.0,
                    ],
                };
                let want: f64 = terms.iter().sum();
                let scale: f64 = terms.iter().map(|t| t.abs()).sum();
                worst = worst.max((laguerre(p, a, x) - want).abs() / scale);
            }
        }
    }
    Ok(Outcome::error(worst, 1e-13).note("error relative to the sum of |terms|"))
}

fn laguerre_zeros(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let worst = [2.0 - SQRT_2, 2.0 + SQRT_2]
        .iter()
        .map(|&x| laguerre(2, 0.0, x).abs())
        .fold(0.0, f64::max);
    Ok(Outcome::error(worst, 1e-12))
}

fn rabi_ring_zeros(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let beam = BeamProfile::new(0, 2, 1.0, 1.0)?;
    let radii = [((2.0 - SQRT_2) / 2.0).sqrt(), ((2.0 + SQRT_2) / 2.0).sqrt()];
    let quoted = [0.5412, 1.3066];
    let mut worst: f64 = 0.0;
    for (r, q) in radii.iter().zip(quoted) {
        worst = worst.max(rabi_profile(*r, &beam).abs());
        if (r - q).abs() > 1e-4 {
            return Ok(Outcome::within(*r, q, 1e-4).note("ring-zero radius off the quoted value"));
        }
    }
    Ok(Outcome::error(worst, 1e-12))
}

fn beam_gradient(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let l = rng.gen_range(0..=2);
        let p = rng.gen_range(0..=4);
        let r = rng.gen_range(1e-3..3.0);
        let beam = BeamProfile::new(l, p, 1.0, 1.0)?;
        let g = rabi_gradient(r, &beam);
        let fd = (rabi_profile(r + h, &beam) - rabi_profile(r - h, &beam)) / (2.0 * h);
        worst = worst.max((g - fd).abs() / g.abs().max(1e-12));
    }
    Ok(Outcome::error(worst, 1e-6))
}

fn ulp_distance(a: f64, b: f64) -> f64 {
    (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs() as f64
}

fn linewidth_identities(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let g = rng.gen_range(1e-3..1e3);
        let om = rng.gen_range(0.0..1e3);
        let gp = modified_linewidth(g, om);
        worst = worst.max(ulp_distance(gp * gp, g * g + 2.0 * om * om));
        worst = worst.max(ulp_distance(modified_linewidth(g, 0.0), g));
    }
    Ok(Outcome::error(worst, 4.0).note("measured in ulps"))
}

fn force_is_time_derivative(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let beam = BeamProfile::new(0, 2, 1.0, 1.0)?;
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let d = random_detuning(rng);
        let z = rng.gen_range(8.0..20.0);
        let t = rng.gen_range(0.05..20.0) / d.abs();
        let phase = if i % 2 == 0 {
            PhaseConfig::default()
        } else {
            PhaseConfig::new(PI / 6.0, 0.0)
        };
        let params = desk(d, z, beam)?;
        let h = 1e-6 / d.abs();
        let fd = (momentum_coefficient(t + h, &params, &phase)?.value
            - momentum_coefficient(t - h, &params, &phase)?.value)
            / (2.0 * h);
        let f = force_coefficient(t, &params, &phase)?.value;
        worst = worst.max(relative_error(f, fd));
    }
    Ok(Outcome::error(worst, 1e-6))
}

fn rwa_limit(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let d = 3.0;
    let params = desk(d, 1e12, BeamProfile::new(0, 2, 1.0, 1.0)?)?;
    let mut worst: f64 = 0.0;
    for i in 0..=400 {
        let t = 0.05 * f64::from(i);
        let c = force_coefficient(t, &params, &PhaseConfig::default())?.value;
        let s = (0.5 * d * t).sin();
        worst = worst.max((c - 4.0 * s * s / d).abs());
    }
    Ok(Outcome::error(worst, 1e-10))
}

fn secular_slope(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let (d, z) = (3.0, 10.0);
    let params = desk(d, z, BeamProfile::new(0, 2, 1.0, 1.0)?)?;
    let n = 2001;
    let (mut st, mut sc, mut stt, mut stc) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        let t = (100.0 + 100.0 * i as f64 / (n - 1) as f64) / d;
        let c = momentum_coefficient(t, &params, &PhaseConfig::default())?.value;
        st += t;
        sc += c;
        stt += t * t;
        stc += t * c;
    }
    let nf = n as f64;
    let slope = (nf * stc - st * sc) / (nf * stt - st * st);
    let want = 2.0 / d - 2.0 / z + 4.0 / z;
    Ok(Outcome::error(relative_error(slope, want), 1e-3))
}

fn force_bound(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let beam = BeamProfile::new(0, 2, 1.0, 1.0)?;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let params = desk(random_detuning(rng), rng.gen_range(8.0..20.0), beam)?;
        let phase = PhaseConfig::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..PI));
        let bound = force_coefficient_bound(&params, &phase, TermToggles::ALL);
        for i in 0..=500 {
            let t = 0.04 * f64::from(i);
            let c = force_coefficient(t, &params, &phase)?.value;
            worst = worst.max(c.abs() / bound);
        }
    }
    // pass when max |C_F|/bound ≤ 1
    Ok(Outcome::within(worst, 0.5, 0.5).note("max |C_F(t)| / bound"))
}

fn averaged_rwa_reduction(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let (d, om) = (3.0, 2.0);
    let params = desk(d, 10.0, BeamProfile::new(0, 2, 1.0, om)?)?;
    let est = averaged_coefficient_numeric(
        &params,
        om,
        &PhaseConfig::default(),
        TermToggles::RWA_ONLY,
        QUAD_REL_TOL,
    )?;
    let want = 2.0 * d / (d * d + 1.0 + 2.0 * om * om);
    Ok(Outcome::error(relative_error(est.value, want), 1e-6))
}

/// Gaussian beam whose Rabi frequency at r = 1/2 equals `rabi`.
fn beam_hitting(rabi: f64) -> Result<BeamProfile> {
    BeamProfile::new(0, 0, 1.0, rabi * 0.25f64.exp())
}

fn closed_vs_numeric_at(params: &InternalParams, r: f64, phase: &PhaseConfig) -> Result<f64> {
    let (rabi, grad) = rabi_and_gradient(r, &params.beam);
    let force = force_closed(r, params, phase, TermToggles::ALL)?;
    let closed = force.f_nonrwa / (-rabi * grad);
    let numeric = averaged_coefficient_numeric(params, rabi, phase, TermToggles::ALL, QUAD_REL_TOL)?;
    Ok(relative_error(closed, numeric.value))
}

fn closed_vs_quadrature(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for om in [0.5, 2.0] {
        for d in [3.0, -3.0] {
            let params = desk(d, 10.0, beam_hitting(om)?)?;
            worst = worst.max(closed_vs_numeric_at(&params, 0.5, &PhaseConfig::default())?);
        }
    }
    Ok(Outcome::error(worst, 1e-6))
}

fn closed_vs_quadrature_random(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let beam = beam_hitting(rng.gen_range(0.05..3.0))?;
        let params = desk(random_detuning(rng), rng.gen_range(8.0..20.0), beam)?;
        worst = worst.max(closed_vs_numeric_at(&params, 0.5, &PhaseConfig::default())?);
    }
    Ok(Outcome::error(worst, 1e-6))
}

fn closed_vs_quadrature_true_scale(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let params = stamper_kurn(DetuningSign::Positive)?;
    match closed_vs_numeric_at(&params, 0.5, &PhaseConfig::default()) {
        Ok(err) => Ok(Outcome::error(err, 1e-6)),
        Err(e @ crate::error::Error::OracleInfeasible { .. }) => Ok(Outcome {
            measured: 0.0,
            expected: 0.0,
            tolerance: 0.0,
            status: CheckStatus::Skipped,
            note: Some(e.to_string()),
        }),
        Err(e) => Err(e),
    }
}

fn gradient_identity(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut accepted = 0;
    while accepted < 20 {
        let om = rng.gen_range(0.5..3.0);
        let params = desk(
            random_detuning(rng),
            rng.gen_range(8.0..20.0),
            BeamProfile::new(0, 2, 1.0, om)?,
        )?;
        let r = rng.gen_range(0.05..2.5);
        let (rabi, grad) = rabi_and_gradient(r, &params.beam);
        // relative error is meaningless at zeros of Ω·dΩ/dr
        if (rabi * grad).abs() < 1e-2 * om * om {
            continue;
        }
        accepted += 1;
        let rep = gradient_consistency(r, &params, &PhaseConfig::default(), TermToggles::ALL, 1e-4)?;
        for (analytic, fd) in rep.terms {
            worst = worst.max(relative_error(analytic, fd));
        }
    }
    Ok(Outcome::error(worst, 1e-5))
}

fn gradient_h_sweep(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let params = desk(3.0, 10.0, BeamProfile::new(0, 2, 1.0, 2.0)?)?;
    let ph = PhaseConfig::default();
    let err = |h: f64| gradient_consistency(0.3, &params, &ph, TermToggles::ALL, h).map(|r| r.rel_err);
    let (e3, e4, e5) = (err(1e-3)?, err(1e-4)?, err(1e-5)?);
    let ratio = e3 / e4;
    let note = format!("rel_err at h = 1e-3, 1e-4, 1e-5: {e3:.3e}, {e4:.3e}, {e5:.3e}");
    if e5 > 1e-5 {
        return Ok(Outcome::error(e5, 1e-5).note(note));
    }
    // second order: ratio ≈ 100; accept [50, 200]
    Ok(Outcome::within(ratio, 125.0, 75.0).note(note))
}

fn theta0_symmetry(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let params = desk(3.0, 10.0, BeamProfile::new(0, 2, 1.0, 2.0)?)?;
    let a = PhaseConfig::new(0.1, 0.4);
    let b = PhaseConfig::new(0.1, 0.4 + PI);
    let ia = averaged_coefficient_numeric(&params, 1.3, &a, TermToggles::ALL, QUAD_REL_TOL)?;
    let ib = averaged_coefficient_numeric(&params, 1.3, &b, TermToggles::ALL, QUAD_REL_TOL)?;
    Ok(Outcome::error(relative_error(ia.value, ib.value), 1e-9))
}

fn real_phase_exactness(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut mismatches = 0usize;
    for (d, z) in [(3.0, 10.0), (-2.0, 12.0), (4.5, 19.0)] {
        let params = desk(d, z, BeamProfile::new(0, 2, 1.0, 1.5)?)?;
        let ph = PhaseConfig::default();
        for i in 0..200 {
            let r = 0.015 * f64::from(i);
            let (rabi, grad) = rabi_and_gradient(r, &params.beam);
            let (g, w) = (params.gamma, d - z);
            let om2 = rabi * rabi;
            let lw = (2.0 * om2 / (w * w + g * g)).ln_1p();
            let real_u3 = -2.0 * (lw * w * w / (2.0 * z) - 2.0 * om2 / z);
            let damp = g * g + 2.0 * om2;
            let x = damp + w * w;
            let real_f3 = -rabi * grad * 2.0 * 2.0 * (damp / (z * x) + 1.0 / z);
            let u3 = potential_terms(&params, rabi, &ph)[2];
            let f3 = force_closed(r, &params, &ph, TermToggles::ALL)?.term3;
            if u3.to_bits() != real_u3.to_bits() || f3.to_bits() != real_f3.to_bits() {
                mismatches += 1;
            }
        }
    }
    Ok(Outcome::error(mismatches as f64, 0.0).note("count of non-identical evaluations"))
}

fn small_saturation_law(_: &mut ChaCha8Rng) -> Result<Outcome> {
    // Δ/Z holds once both the saturation and Γ/|Δ| are small.
    let mut worst: f64 = 0.0;
    for (d, z) in [(300.0, 1000.0), (-300.0, 1000.0), (150.0, 1700.0), (-400.0, 900.0)] {
        let params = desk(d, z, BeamProfile::new(0, 2, 1.0, 1e-2)?)?;
        for r in [0.0, 0.3, 0.9, 1.7] {
            let ratio = correction_ratio(&params, &PhaseConfig::default(), r)?;
            worst = worst.max(relative_error(ratio, d / z));
        }
    }
    // At Δ ~ Γ the first-order series keeps the Γ² pieces.
    for (d, z) in [(3.0, 10.0), (-3.0, 10.0), (1.5, 17.0), (-4.0, 9.0)] {
        let g = 1.0;
        let w: f64 = d - z;
        let series = (-z / (z * z + g * g) + (2.0 / z) * (2.0 - w * w / (w * w + g * g))) / (d / (d * d + g * g));
        let params = desk(d, z, BeamProfile::new(0, 2, 1.0, 1e-4)?)?;
        for r in [0.0, 0.3, 0.9, 1.7] {
            let ratio = correction_ratio(&params, &PhaseConfig::default(), r)?;
            worst = worst.max(relative_error(ratio, series));
        }
    }
    Ok(Outcome::error(worst, 1e-3))
}

fn complex_phase_numerator(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let (d, z, om) = (3.0, 10.0, 2.0);
    let params = desk(d, z, BeamProfile::new(0, 2, 1.0, om)?)?;
    let phase = PhaseConfig::new(PI / 8.0, 0.0);
    let numeric = averaged_coefficient_numeric(&params, om, &phase, TermToggles::ALL, QUAD_REL_TOL)?.value;
    let closed: f64 = averaged_coefficient_closed(&params, om, &phase).iter().sum();
    let tol = 1e-6 * numeric.abs();
    if (numeric - closed).abs() <= tol {
        return Ok(Outcome::within(closed, numeric, tol));
    }
    // averaging e^{−Γ't} sin(wt) yields Γ'w rather than Γw in the imaginary numerator
    let g = params.gamma;
    let gp = modified_linewidth(g, om);
    let w = d - z;
    let x = gp * gp + w * w;
    let predicted = 4.0 * (phase.factor() * Complex64::new(0.0, -(gp - g) * w / (z * x))).re;
    let deviation = numeric - closed;
    let mut out = Outcome::within(deviation, predicted, tol);
    if out.status == CheckStatus::Pass {
        out.status = CheckStatus::KnownDiscrepancy;
        out.note = Some(format!(
            "closed form uses Γ(Δ−Z) in the imaginary numerator; the time average gives Γ'(Δ−Z). \
             deviation {deviation:.6e} matches the predicted {predicted:.6e}; invisible for real phase factors"
        ));
    }
    Ok(out)
}

fn correction_band(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let ratio = correction_ratio(&stamper_kurn(DetuningSign::Positive)?, &PhaseConfig::default(), 0.0)?;
    Ok(Outcome::within(ratio, 0.255, 0.02))
}

fn correction_law(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let params = stamper_kurn(DetuningSign::Positive)?;
    let ratio = correction_ratio(&params, &PhaseConfig::default(), 0.0)?;
    Ok(Outcome::error(
        relative_error(ratio, params.detuning / params.zsum),
        1e-3,
    ))
}

fn sk_scan(sign: DetuningSign, n: usize) -> Result<crate::analysis::ScanCurve> {
    radial_scan(
        &stamper_kurn(sign)?,
        &PhaseConfig::default(),
        TermToggles::ALL,
        GridSpec::new(3.0, n)?,
        STAMPER_KURN_1998,
    )
}

fn pointwise_ordering(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut violations = 0usize;
    for row in sk_scan(DetuningSign::Positive, 600)?.rows {
        if row.potential.u_nonrwa < row.potential.u_rwa {
            violations += 1;
        }
    }
    for row in sk_scan(DetuningSign::Negative, 600)?.rows {
        if row.potential.u_rwa < 0.0 && row.potential.u_nonrwa.abs() > row.potential.u_rwa.abs() {
            violations += 1;
        }
    }
    Ok(Outcome::error(violations as f64, 0.0).note("grid points violating the ordering"))
}

fn depth_ratio_positive(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let cmp = compare_depths(&sk_scan(DetuningSign::Positive, 600)?);
    Ok(Outcome::within(cmp.ratio, 1.255, 0.025))
}

fn depth_ratio_negative(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let cmp = compare_depths(&sk_scan(DetuningSign::Negative, 600)?);
    Ok(Outcome::within(cmp.ratio, 0.745, 0.025))
}

fn chu_like_ratio(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let (sk, beam, _) = load_preset(STAMPER_KURN_1998)?;
    let chu = PhysicalParams::from_detuning_and_sum(5e11, sk.zsum(), sk.gamma())?;
    let m = term_magnitude_report(&to_internal(&chu, &beam), 0.0)?;
    Ok(Outcome::within(m.t1_over_t2, 1e4, 1e3))
}

fn extrema_refinement(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let coarse = trap_extrema(&sk_scan(DetuningSign::Positive, 600)?, Series::NonRwa);
    let fine = trap_extrema(&sk_scan(DetuningSign::Positive, 1200)?, Series::NonRwa);
    if coarse.extrema.len() != fine.extrema.len() {
        return Ok(
            Outcome::within(coarse.extrema.len() as f64, fine.extrema.len() as f64, 0.0)
                .note("extremum count changed under refinement"),
        );
    }
    let worst = coarse
        .extrema
        .iter()
        .zip(&fine.extrema)
        .map(|(a, b)| (a.r_star - b.r_star).abs())
        .fold(0.0, f64::max);
    Ok(Outcome::error(worst, 1e-6))
}

fn depth_convergence(_: &mut ChaCha8Rng) -> Result<Outcome> {
    let coarse = trap_extrema(&sk_scan(DetuningSign::Positive, 600)?, Series::NonRwa);
    let fine = trap_extrema(&sk_scan(DetuningSign::Positive, 1200)?, Series::NonRwa);
    Ok(Outcome::error(relative_error(coarse.depth, fine.depth), 1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_names_are_unique() {
        let mut names: Vec<&str> = CHECKS.iter().map(|c| c.name).collect();
        names.sort_unstable();
        let before = names.len();
        names.dedup();
        assert_eq!(before, names.len());
    }

    #[test]
    fn quick_profile_passes() {
        let report = run_verification(Profile::Quick, 42);
        assert!(report.checks.len() >= 12);
        assert!(report.all_passed(), "{}", report.to_text());
        assert!(report.checks.windows(2).all(|w| w[0].name < w[1].name));
        assert!(!report.to_json().contains("wall_time"));
    }

    #[test]
    fn profile_parsing() {
        assert_eq!("quick".parse::<Profile>().unwrap(), Profile::Quick);
        assert_eq!("full".parse::<Profile>().unwrap(), Profile::Full);
        assert!("slow".parse::<Profile>().is_err());
    }
}
