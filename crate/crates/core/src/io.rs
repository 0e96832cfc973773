//! Configuration files and CSV/SVG/JSON output.
//!
//! Outputs are byte-deterministic for fixed inputs: no timestamps, fixed
//! number formatting, LF line endings.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{GridSpec, ScanCurve};
use crate::beam::BeamProfile;
use crate::dynamics::{PhaseConfig, TermToggles};
use crate::error::{Error, Result};
use crate::units::{preset, to_internal, GammaConvention, InternalParams, PhysicalParams};

pub const CSV_HEADER: &str = "r_over_w0,u_rwa,u_nonrwa,term1,term2,term3,f_rwa,f_nonrwa";

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub r_max_over_w0: f64,
    pub n_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            r_max_over_w0: 3.0,
            n_points: 600,
        }
    }
}

/// On-disk run configuration. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gamma_rad_s: f64,
    pub omega0_rad_s: f64,
    #[serde(rename = "omegaL_rad_s")]
    pub omega_l_rad_s: f64,
    pub rabi_peak_over_gamma: f64,
    pub waist_m: f64,
    pub l: i32,
    pub p: u32,
    #[serde(default)]
    pub phi_rad: f64,
    #[serde(default)]
    pub theta0_rad: f64,
    #[serde(default = "default_true")]
    pub include_term1: bool,
    #[serde(default = "default_true")]
    pub include_term2: bool,
    #[serde(default = "default_true")]
    pub include_term3: bool,
    #[serde(default)]
    pub grid: GridConfig,
}

impl RunConfig {
    pub fn from_json(path: &Path, text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| Error::Config {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(path, &text)
    }

    pub fn to_scenario(&self, label: &str) -> Result<Scenario> {
        let params = PhysicalParams::new(self.omega0_rad_s, self.omega_l_rad_s, self.gamma_rad_s)?;
        if !(self.rabi_peak_over_gamma.is_finite() && self.rabi_peak_over_gamma >= 0.0) {
            return Err(Error::InvalidParameter {
                field: "rabi_peak_over_gamma",
                value: self.rabi_peak_over_gamma,
                reason: "must be finite and ≥ 0",
            });
        }
        let beam = BeamProfile::new(
            self.l,
            self.p,
            self.waist_m,
            self.rabi_peak_over_gamma * self.gamma_rad_s,
        )?;
        let grid = GridSpec::new(self.grid.r_max_over_w0, self.grid.n_points)?;
        Ok(Scenario {
            label: label.to_string(),
            params,
            beam,
            phase: PhaseConfig::new(self.phi_rad, self.theta0_rad),
            toggles: TermToggles {
                term1: self.include_term1,
                term2: self.include_term2,
                term3: self.include_term3,
            },
            grid,
        })
    }
}

/// Everything needed for one evaluation run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub label: String,
    pub params: PhysicalParams,
    pub beam: BeamProfile,
    pub phase: PhaseConfig,
    pub toggles: TermToggles,
    pub grid: GridSpec,
}

impl Scenario {
    pub fn from_preset(name: &str, convention: GammaConvention) -> Result<Self> {
        let p = preset(name, convention)?;
        Ok(Self {
            label: p.name.to_string(),
            params: p.params,
            beam: p.beam,
            phase: p.phase,
            toggles: TermToggles::ALL,
            grid: GridSpec::new(3.0, 600)?,
        })
    }

    pub fn internal(&self) -> InternalParams {
        to_internal(&self.params, &self.beam)
    }

    pub fn to_config(&self) -> RunConfig {
        RunConfig {
            gamma_rad_s: self.params.gamma(),
            omega0_rad_s: self.params.omega0(),
            omega_l_rad_s: self.params.omega_l(),
            rabi_peak_over_gamma: self.beam.rabi_peak / self.params.gamma(),
            waist_m: self.beam.waist,
            l: self.beam.l,
            p: self.beam.p,
            phi_rad: self.phase.phi,
            theta0_rad: self.phase.theta0,
            include_term1: self.toggles.term1,
            include_term2: self.toggles.term2,
            include_term3: self.toggles.term3,
            grid: GridConfig {
                r_max_over_w0: self.grid.r_max,
                n_points: self.grid.n_points,
            },
        }
    }
}

/// C-style `%.12e`: 12 fractional digits, signed exponent of at least two digits.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exp),
    };
    format!("{mantissa}e{sign}{digits:0>2}")
}

pub fn csv_string(curve: &ScanCurve) -> String {
    let mut out = String::with_capacity(128 * (curve.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &curve.rows {
        let p = &row.potential;
        let f = &row.force;
        let fields = [
            row.r, p.u_rwa, p.u_nonrwa, p.term1, p.term2, p.term3, f.f_rwa, f.f_nonrwa,
        ];
        let line: Vec<String> = fields.iter().map(|&v| format_sci(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_csv(curve: &ScanCurve, path: &Path) -> Result<()> {
    fs::write(path, csv_string(curve)).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overlay {
    Rwa,
    NonRwa,
    Both,
}

impl std::str::FromStr for Overlay {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rwa" => Ok(Overlay::Rwa),
            "nonrwa" => Ok(Overlay::NonRwa),
            "both" => Ok(Overlay::Both),
            _ => Err(format!("unknown overlay `{s}` (expected rwa, nonrwa, both)")),
        }
    }
}

const SVG_W: f64 = 800.0;
const SVG_H: f64 = 500.0;
const MARGIN_L: f64 = 90.0;
const MARGIN_R: f64 = 30.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 60.0;
const TICKS: usize = 5;

/// (label, points, dashed)
type Polyline<'a> = (&'a str, Vec<(f64, f64)>, bool);

/// Self-contained SVG: non-RWA solid, RWA dashed.
pub fn svg_string(curve: &ScanCurve, overlay: Overlay) -> Result<String> {
    let mut series: Vec<Polyline> = Vec::new();
    let pick = |f: fn(&crate::analysis::ScanRow) -> f64| -> Vec<(f64, f64)> {
        curve
            .rows
            .iter()
            .map(|row| (row.r, f(row)))
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect()
    };
    if matches!(overlay, Overlay::NonRwa | Overlay::Both) {
        series.push(("nonrwa", pick(|row| row.potential.u_nonrwa), false));
    }
    if matches!(overlay, Overlay::Rwa | Overlay::Both) {
        series.push(("rwa", pick(|row| row.potential.u_rwa), true));
    }
    if series.iter().all(|(_, pts, _)| pts.is_empty()) {
        return Err(Error::EmptyCurve);
    }

    let all = series.iter().flat_map(|(_, pts, _)| pts.iter());
    let (mut x_lo, mut x_hi, mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, 0.0f64);
    for &(x, y) in all {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_lo = y_lo.min(y);
        y_hi = y_hi.max(y);
    }
    if x_hi <= x_lo {
        x_hi = x_lo + 1.0;
    }
    if y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    let pad = 0.05 * (y_hi - y_lo);
    let (y_lo, y_hi) = (y_lo - pad, y_hi + pad);
    let plot_w = SVG_W - MARGIN_L - MARGIN_R;
    let plot_h = SVG_H - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut out = String::new();
    // writing into a String cannot fail
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let x_axis_y = sy(0.0f64.clamp(y_lo, y_hi));
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        MARGIN_L,
        x_axis_y,
        MARGIN_L + plot_w,
        x_axis_y
    );
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        MARGIN_L,
        MARGIN_T,
        MARGIN_L,
        MARGIN_T + plot_h
    );
    for k in 0..=TICKS {
        let fx = x_lo + (x_hi - x_lo) * k as f64 / TICKS as f64;
        let fy = y_lo + (y_hi - y_lo) * k as f64 / TICKS as f64;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{:.3}</text>"#,
            sx(fx),
            MARGIN_T + plot_h + 18.0,
            fx
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{:.3e}</text>"#,
            MARGIN_L - 6.0,
            sy(fy) + 4.0,
            fy
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">r / w0</text>"#,
        MARGIN_L + 0.5 * plot_w,
        SVG_H - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 18 {:.2})">U / ħΓ</text>"#,
        MARGIN_T + 0.5 * plot_h,
        MARGIN_T + 0.5 * plot_h
    );
    for (name, pts, dashed) in &series {
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let dash = if *dashed { r#" stroke-dasharray="8,5""# } else { "" };
        let _ = writeln!(
            out,
            r#"<polyline id="{name}" fill="none" stroke="black" stroke-width="1.5"{dash} points="{}"/>"#,
            coords.join(" ")
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Writes the SVG; nothing is written when the curve has no plottable points.
pub fn emit_svg(curve: &ScanCurve, path: &Path, overlay: Overlay) -> Result<()> {
    let svg = svg_string(curve, overlay)?;
    fs::write(path, svg).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::radial_scan;
    use crate::units::{DESK_SYNTHETIC, STAMPER_KURN_1998};

    fn desk_curve(n: usize) -> ScanCurve {
        let s = Scenario::from_preset(DESK_SYNTHETIC, GammaConvention::OrdinaryFrequency).unwrap();
        radial_scan(
            &s.internal(),
            &s.phase,
            s.toggles,
            GridSpec::new(3.0, n).unwrap(),
            &s.label,
        )
        .unwrap()
    }

    #[test]
    fn sci_format_matches_c_printf() {
        assert_eq!(format_sci(0.0), "0.000000000000e+00");
        assert_eq!(format_sci(1.0), "1.000000000000e+00");
        assert_eq!(format_sci(-0.00123), "-1.230000000000e-03");
        assert_eq!(format_sci(6.02e23), "6.020000000000e+23");
        assert_eq!(format_sci(1e-300), "1.000000000000e-300");
    }

    #[test]
    fn csv_layout() {
        let text = csv_string(&desk_curve(600));
        let lines: Vec<&str> = text.split_terminator('\n').collect();
        assert_eq!(lines.len(), 601);
        assert_eq!(lines[0], CSV_HEADER);
        assert!(!text.contains('\r'));
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 8));
    }

    #[test]
    fn svg_structure() {
        let curve = desk_curve(100);
        let svg = svg_string(&curve, Overlay::Both).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
        assert!(svg.contains("r / w0") && svg.contains("U / ħΓ"));
        assert!(!svg.contains("href"));
        assert_eq!(
            svg_string(&curve, Overlay::Rwa).unwrap().matches("<polyline").count(),
            1
        );
    }

    #[test]
    fn svg_empty_curve_writes_nothing() {
        let mut curve = desk_curve(100);
        curve.rows.clear();
        let dir = std::env::temp_dir().join(format!("fortcalc-svg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("empty.svg");
        assert!(matches!(emit_svg(&curve, &path, Overlay::Both), Err(Error::EmptyCurve)));
        assert!(!path.exists());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn config_round_trip_and_unknown_keys() {
        let s = Scenario::from_preset(STAMPER_KURN_1998, GammaConvention::OrdinaryFrequency).unwrap();
        let json = serde_json::to_string_pretty(&s.to_config()).unwrap();
        assert!(json.contains("\"omegaL_rad_s\""));
        let cfg = RunConfig::from_json(Path::new("x.json"), &json).unwrap();
        let back = cfg.to_scenario(&s.label).unwrap();
        assert_eq!(back.params, s.params);
        assert_eq!(back.beam.l, s.beam.l);
        assert!((back.beam.rabi_peak - s.beam.rabi_peak).abs() <= 1e-15 * s.beam.rabi_peak);

        let bad = json.replacen("\"l\"", "\"ell\"", 1);
        let err = RunConfig::from_json(Path::new("bad.json"), &bad).unwrap_err();
        assert!(err.to_string().contains("ell"), "{err}");
    }

    #[test]
    fn config_validation_names_field() {
        let json = r#"{"gamma_rad_s": 1, "omega0_rad_s": -1, "omegaL_rad_s": 1,
            "rabi_peak_over_gamma": 1, "waist_m": 1, "l": 0, "p": 0}"#;
        let cfg = RunConfig::from_json(Path::new("c.json"), json).unwrap();
        let err = cfg.to_scenario("c").unwrap_err();
        assert!(err.to_string().contains("omega0"), "{err}");
    }
}
