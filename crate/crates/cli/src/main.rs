use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use fortcalc_core::analysis::{radial_scan, GridSpec};
use fortcalc_core::io::{csv_string, write_text};
use fortcalc_core::units::{preset, DESK_SYNTHETIC};
use fortcalc_core::{
    compare_depths, correction_ratio, emit_csv, emit_svg, force_closed, force_coefficient, momentum_coefficient,
    potential_nonrwa, preset_names, run_verification, term_magnitude_report, DetuningSign, Error, GammaConvention,
    Overlay, PhaseConfig, Profile, RunConfig, Scenario, TermToggles, TrapExtrema,
};

#[derive(Debug, Parser)]
#[command(
    name = "fortcalc",
    version,
    about = "Optical dipole trap potentials with and without the RWA"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Radial scan of potentials and forces, written as CSV or SVG
    Scan {
        #[command(flatten)]
        source: SourceArgs,
        /// Output path; `.svg` selects the figure, anything else CSV. Defaults to CSV on stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Curves drawn in SVG output
        #[arg(long, default_value = "both")]
        overlay: Overlay,
    },
    /// Trap extrema and depths of the RWA and non-RWA curves
    Depth {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Correction ratio, term magnitudes and depth ratio
    Compare {
        #[command(flatten)]
        source: SourceArgs,
        /// Radius in units of w0
        #[arg(long, default_value_t = 0.0)]
        r: f64,
    },
    /// Averaged force at one radius, plus the time-domain braces when --t is given
    Force {
        #[command(flatten)]
        source: SourceArgs,
        /// Radius in units of w0
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        /// Time in units of 1/Γ
        #[arg(long)]
        t: Option<f64>,
    },
    /// Run the numerical verification suite
    Verify {
        #[arg(long, default_value = "quick")]
        profile: Profile,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the compiled-in parameter presets
    Presets,
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// Compiled-in preset (see `fortcalc presets`)
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// JSON run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sign of Δ = ω0 − ωL; `-` swaps ω0 and ωL, keeping ω0 + ωL
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
    detuning_sign: Option<DetuningSign>,
    /// Enabled potential terms, e.g. `1,2,3` or `1`
    #[arg(long, value_parser = parse_terms)]
    terms: Option<TermToggles>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta0: Option<f64>,
    /// Scan range in units of w0
    #[arg(long)]
    r_max: Option<f64>,
    /// Number of grid points, endpoints included
    #[arg(long)]
    n: Option<usize>,
    /// Read a preset's 10 MHz linewidth as rad/s instead of 2π·10 MHz
    #[arg(long)]
    gamma_literal: bool,
}

fn parse_sign(s: &str) -> Result<DetuningSign, String> {
    match s {
        "+" | "positive" => Ok(DetuningSign::Positive),
        "-" | "negative" => Ok(DetuningSign::Negative),
        _ => Err(format!("expected `+` or `-`, got `{s}`")),
    }
}

fn parse_terms(s: &str) -> Result<TermToggles, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn override_note(flag: &str, value: impl std::fmt::Display) {
    eprintln!("override: --{flag} = {value}");
}

impl SourceArgs {
    fn scenario(&self) -> fortcalc_core::Result<Scenario> {
        let convention = if self.gamma_literal {
            GammaConvention::Literal
        } else {
            GammaConvention::OrdinaryFrequency
        };
        let mut s = match (&self.preset, &self.config) {
            (_, Some(path)) => {
                let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("config");
                RunConfig::load(path)?.to_scenario(label)?
            }
            (Some(name), None) => Scenario::from_preset(name, convention)?,
            (None, None) => Scenario::from_preset(DESK_SYNTHETIC, convention)?,
        };
        if let Some(sign) = self.detuning_sign {
            override_note("detuning-sign", if sign == DetuningSign::Positive { "+" } else { "-" });
            s.params = s.params.with_detuning_sign(sign);
        }
        if let Some(t) = self.terms {
            override_note("terms", t);
            s.toggles = t;
        }
        if self.phi.is_some() || self.theta0.is_some() {
            let phi = self.phi.unwrap_or(s.phase.phi);
            let theta0 = self.theta0.unwrap_or(s.phase.theta0);
            if let Some(v) = self.phi {
                override_note("phi", v);
            }
            if let Some(v) = self.theta0 {
                override_note("theta0", v);
            }
            s.phase = PhaseConfig::new(phi, theta0);
        }
        if self.r_max.is_some() || self.n.is_some() {
            let r_max = self.r_max.unwrap_or(s.grid.r_max);
            let n = self.n.unwrap_or(s.grid.n_points);
            if let Some(v) = self.r_max {
                override_note("r-max", v);
            }
            if let Some(v) = self.n {
                override_note("n", v);
            }
            s.grid = GridSpec::new(r_max, n)?;
        }
        Ok(s)
    }
}

fn print_extrema(name: &str, e: &TrapExtrema) {
    println!("{name}: depth = {:.6e} ħΓ", e.depth);
    for x in &e.extrema {
        println!(
            "  {:?} r/w0 = {:.6} U = {:.6e} |dU/dr| = {:.2e}",
            x.kind, x.r_star, x.u_star, x.residual_slope
        );
    }
}

fn scan(source: &SourceArgs, out: Option<&Path>, overlay: Overlay) -> fortcalc_core::Result<()> {
    let s = source.scenario()?;
    let curve = radial_scan(&s.internal(), &s.phase, s.toggles, s.grid, &s.label)?;
    match out {
        Some(path) if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg")) => {
            emit_svg(&curve, path, overlay)
        }
        Some(path) => emit_csv(&curve, path),
        None => {
            // a closed pipe (`| head`) is not an error
            match std::io::stdout().lock().write_all(csv_string(&curve).as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source: e,
                }),
                _ => Ok(()),
            }
        }
    }
}

fn depth(source: &SourceArgs) -> fortcalc_core::Result<()> {
    let s = source.scenario()?;
    let curve = radial_scan(&s.internal(), &s.phase, s.toggles, s.grid, &s.label)?;
    let cmp = compare_depths(&curve);
    print_extrema("rwa", &cmp.rwa);
    print_extrema("nonrwa", &cmp.nonrwa);
    println!("depth ratio nonrwa/rwa = {:.6}", cmp.ratio);
    Ok(())
}

fn compare(source: &SourceArgs, r: f64) -> fortcalc_core::Result<()> {
    let s = source.scenario()?;
    let p = s.internal();
    let b = potential_nonrwa(r, &p, &s.phase, s.toggles)?;
    println!("scenario {} at r/w0 = {r}", s.label);
    println!(
        "detuning/Γ = {:.6e}, sum/Γ = {:.6e}, Δ/Z = {:.6}",
        p.detuning,
        p.zsum,
        p.detuning / p.zsum
    );
    println!(
        "term1 = {:.6e}  term2 = {:.6e}  term3 = {:.6e}",
        b.term1, b.term2, b.term3
    );
    println!("u_rwa = {:.6e}  u_nonrwa = {:.6e}", b.u_rwa, b.u_nonrwa);
    println!("correction ratio = {:.6}", correction_ratio(&p, &s.phase, r)?);
    let m = term_magnitude_report(&p, r)?;
    println!(
        "|t1/t2| = {:.6e}  |t1/t3| = {:.6e}  |t2/t3| = {:.6e}",
        m.t1_over_t2, m.t1_over_t3, m.t2_over_t3
    );
    let curve = radial_scan(&p, &s.phase, s.toggles, s.grid, &s.label)?;
    println!("depth ratio nonrwa/rwa = {:.6}", compare_depths(&curve).ratio);
    Ok(())
}

fn force(source: &SourceArgs, r: f64, t: Option<f64>) -> fortcalc_core::Result<()> {
    let s = source.scenario()?;
    let p = s.internal();
    let f = force_closed(r, &p, &s.phase, s.toggles)?;
    println!("averaged force at r/w0 = {r} (ħΓ²/w0)");
    println!(
        "term1 = {:.12e}\nterm2 = {:.12e}\nterm3 = {:.12e}",
        f.term1, f.term2, f.term3
    );
    println!("f_rwa = {:.12e}\nf_nonrwa = {:.12e}", f.f_rwa, f.f_nonrwa);
    if let Some(t) = t {
        println!(
            "momentum brace C_P(t={t}) = {:.12e}",
            momentum_coefficient(t, &p, &s.phase)?.value
        );
        println!(
            "force brace C_F(t={t}) = {:.12e}",
            force_coefficient(t, &p, &s.phase)?.value
        );
    }
    Ok(())
}

fn verify(profile: Profile, seed: u64, out: Option<&Path>) -> fortcalc_core::Result<bool> {
    let report = run_verification(profile, seed);
    print!("{}", report.to_text());
    if let Some(path) = out {
        write_text(path, &report.to_json())?;
    }
    Ok(report.all_passed())
}

fn presets() -> fortcalc_core::Result<()> {
    for name in preset_names() {
        let p = preset(name, GammaConvention::OrdinaryFrequency)?;
        println!("{name}");
        println!("  {}", p.description);
        println!("  gamma_rad_s          {:.6e}", p.params.gamma());
        println!("  omega0_rad_s         {:.6e}", p.params.omega0());
        println!("  omegaL_rad_s         {:.6e}", p.params.omega_l());
        println!("  detuning_rad_s       {:.6e}", p.params.detuning());
        println!("  sum_rad_s            {:.6e}", p.params.zsum());
        println!("  rabi_peak_over_gamma {:.6e}", p.beam.rabi_peak / p.params.gamma());
        println!("  waist_m              {:.6e}", p.beam.waist);
        println!("  l, p                 {}, {}", p.beam.l, p.beam.p);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Scan { source, out, overlay } => scan(source, out.as_deref(), *overlay),
        Command::Depth { source } => depth(source),
        Command::Compare { source, r } => compare(source, *r),
        Command::Force { source, r, t } => force(source, *r, *t),
        Command::Presets => presets(),
        Command::Verify { profile, seed, out } => match verify(*profile, *seed, out.as_deref()) {
            Ok(true) => return ExitCode::SUCCESS,
            Ok(false) => return ExitCode::from(2),
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
