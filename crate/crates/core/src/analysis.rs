//! Radial scans, extremum and depth extraction, and ratio reports.

use serde::Serialize;

use crate::beam::{rabi_and_gradient, rabi_profile};
use crate::dynamics::{PhaseConfig, TermToggles};
use crate::error::{Error, Result};
use crate::potentials::{force_for_rabi, potential_for_rabi, ForceBreakdown, PotentialBreakdown};
use crate::units::InternalParams;

/// Residual |dU/dr| targeted by extremum refinement, in ħΓ/w0.
pub const SLOPE_TOLERANCE: f64 = 1e-10;
const GOLDEN: f64 = 0.618_033_988_749_894_9;
const MAX_GOLDEN_ITERS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub r_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub const MIN_POINTS: usize = 16;

    pub fn new(r_max: f64, n_points: usize) -> Result<Self> {
        let grid = Self { r_max, n_points };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < Self::MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "n_points = {} (need ≥ {})",
                self.n_points,
                Self::MIN_POINTS
            )));
        }
        if !(self.r_max.is_finite() && self.r_max > 0.0) {
            return Err(Error::InvalidGrid(format!("r_max = {} (need > 0)", self.r_max)));
        }
        Ok(())
    }

    /// Uniform radii from 0 to `r_max` inclusive.
    pub fn radii(&self) -> Vec<f64> {
        let last = (self.n_points - 1) as f64;
        (0..self.n_points).map(|i| self.r_max * i as f64 / last).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub r: f64,
    pub potential: PotentialBreakdown,
    pub force: ForceBreakdown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanMeta {
    pub label: String,
    pub toggles: TermToggles,
    pub phase: PhaseConfig,
    pub grid: GridSpec,
}

/// Potential and force sampled on a radial grid, radii in w0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanCurve {
    pub radii: Vec<f64>,
    pub rows: Vec<ScanRow>,
    pub meta: ScanMeta,
    pub params: InternalParams,
}

pub fn radial_scan(
    params: &InternalParams,
    phase: &PhaseConfig,
    toggles: TermToggles,
    grid: GridSpec,
    label: &str,
) -> Result<ScanCurve> {
    grid.validate()?;
    params.check_evaluable()?;
    let radii = grid.radii();
    let rows = radii
        .iter()
        .map(|&r| {
            let (rabi, grad) = rabi_and_gradient(r, &params.beam);
            ScanRow {
                r,
                potential: potential_for_rabi(params, rabi, phase, toggles),
                force: force_for_rabi(params, rabi, grad, phase, toggles),
            }
        })
        .collect();
    Ok(ScanCurve {
        radii,
        rows,
        meta: ScanMeta {
            label: label.to_string(),
            toggles,
            phase: *phase,
            grid,
        },
        params: *params,
    })
}

/// Which potential curve of a scan to analyze.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    Rwa,
    NonRwa,
}

impl ScanCurve {
    pub fn values(&self, series: Series) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| match series {
                Series::Rwa => row.potential.u_rwa,
                Series::NonRwa => row.potential.u_nonrwa,
            })
            .collect()
    }

    /// U(r) of the chosen series at an arbitrary radius.
    pub fn potential_at(&self, series: Series, r: f64) -> f64 {
        let rabi = rabi_profile(r, &self.params.beam);
        let b = potential_for_rabi(&self.params, rabi, &self.meta.phase, self.meta.toggles);
        match series {
            Series::Rwa => b.u_rwa,
            Series::NonRwa => b.u_nonrwa,
        }
    }

    /// dU/dr of the chosen series, from the analytic averaged force.
    pub fn slope_at(&self, series: Series, r: f64) -> f64 {
        let (rabi, grad) = rabi_and_gradient(r, &self.params.beam);
        let f = force_for_rabi(&self.params, rabi, grad, &self.meta.phase, self.meta.toggles);
        match series {
            Series::Rwa => -f.f_rwa,
            Series::NonRwa => -f.f_nonrwa,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub r_star: f64,
    pub u_star: f64,
    pub kind: ExtremumKind,
    /// |dU/dr| at `r_star` after refinement.
    pub residual_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrapExtrema {
    pub extrema: Vec<Extremum>,
    /// max |U| over the extrema, with U(∞) = 0 as reference.
    pub depth: f64,
}

/// Golden-section minimization of `f` on [a, b].
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..MAX_GOLDEN_ITERS {
        if (b - a).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Locates the stationary points of a sampled function.
///
/// Brackets come from sign changes of `slope` between grid points; each is
/// refined by golden-section minimization of |slope|. The left endpoint counts
/// as an extremum when the slope vanishes there (the axis of a radial profile).
pub fn locate_extrema<V, S>(value: V, slope: S, radii: &[f64]) -> Vec<Extremum>
where
    V: Fn(f64) -> f64,
    S: Fn(f64) -> f64,
{
    let mut out = Vec::new();
    if radii.len() < 3 {
        return out;
    }
    let slopes: Vec<f64> = radii.iter().map(|&r| slope(r)).collect();

    // Axis: stationary with a definite direction away from it.
    if slopes[0].abs() <= SLOPE_TOLERANCE && slopes[1] != 0.0 {
        out.push(Extremum {
            r_star: radii[0],
            u_star: value(radii[0]),
            kind: if slopes[1] < 0.0 {
                ExtremumKind::Maximum
            } else {
                ExtremumKind::Minimum
            },
            residual_slope: slopes[0].abs(),
        });
    }

    for i in 1..radii.len() - 1 {
        let (s0, s1) = (slopes[i], slopes[i + 1]);
        if s0 == 0.0 {
            let (sl, sr) = (slopes[i - 1], s1);
            if sl * sr < 0.0 {
                out.push(Extremum {
                    r_star: radii[i],
                    u_star: value(radii[i]),
                    kind: if sl > 0.0 {
                        ExtremumKind::Maximum
                    } else {
                        ExtremumKind::Minimum
                    },
                    residual_slope: 0.0,
                });
            }
        } else if s0 * s1 < 0.0 {
            let (r_star, residual) = golden_section_min(|r| slope(r).abs(), radii[i], radii[i + 1]);
            out.push(Extremum {
                r_star,
                u_star: value(r_star),
                kind: if s0 > 0.0 {
                    ExtremumKind::Maximum
                } else {
                    ExtremumKind::Minimum
                },
                residual_slope: residual,
            });
        }
    }
    out
}

/// Extrema of one potential series and the resulting trap depth.
pub fn trap_extrema(curve: &ScanCurve, series: Series) -> TrapExtrema {
    let all_zero = curve.values(series).iter().all(|&u| u == 0.0);
    if all_zero {
        return TrapExtrema {
            extrema: Vec::new(),
            depth: 0.0,
        };
    }
    let extrema = locate_extrema(
        |r| curve.potential_at(series, r),
        |r| curve.slope_at(series, r),
        &curve.radii,
    );
    let depth = extrema.iter().map(|e| e.u_star.abs()).fold(0.0, f64::max);
    TrapExtrema { extrema, depth }
}

/// (U_nonRWA − U_RWA)/U_RWA at radius `r`, all three terms enabled.
pub fn correction_ratio(params: &InternalParams, phase: &PhaseConfig, r: f64) -> Result<f64> {
    params.check_evaluable()?;
    let rabi = rabi_profile(r, &params.beam);
    if rabi == 0.0 {
        return Err(Error::UndefinedRatio { r });
    }
    let b = potential_for_rabi(params, rabi, phase, TermToggles::ALL);
    Ok((b.u_nonrwa - b.u_rwa) / b.u_rwa)
}

/// Absolute ratios between the potential addends; a zero denominator reads ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TermMagnitudes {
    pub t1_over_t2: f64,
    pub t1_over_t3: f64,
    pub t2_over_t3: f64,
}

fn abs_ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        f64::INFINITY
    } else {
        (num / den).abs()
    }
}

/// Term ratios at radius `r` with the phase factor set to 1.
pub fn term_magnitude_report(params: &InternalParams, r: f64) -> Result<TermMagnitudes> {
    params.check_evaluable()?;
    let rabi = rabi_profile(r, &params.beam);
    let b = potential_for_rabi(params, rabi, &PhaseConfig::default(), TermToggles::ALL);
    Ok(TermMagnitudes {
        t1_over_t2: abs_ratio(b.term1, b.term2),
        t1_over_t3: abs_ratio(b.term1, b.term3),
        t2_over_t3: abs_ratio(b.term2, b.term3),
    })
}

/// RWA and non-RWA depths from one scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthComparison {
    pub rwa: TrapExtrema,
    pub nonrwa: TrapExtrema,
    /// depth_nonrwa / depth_rwa; NaN when the RWA depth is 0.
    pub ratio: f64,
}

pub fn compare_depths(curve: &ScanCurve) -> DepthComparison {
    let rwa = trap_extrema(curve, Series::Rwa);
    let nonrwa = trap_extrema(curve, Series::NonRwa);
    let ratio = if rwa.depth == 0.0 {
        f64::NAN
    } else {
        nonrwa.depth / rwa.depth
    };
    DepthComparison { rwa, nonrwa, ratio }
}
