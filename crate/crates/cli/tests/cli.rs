use std::path::PathBuf;
use std::process::{Command, Output};

fn fortcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fortcalc"))
        .args(args)
        .output()
        .expect("spawn fortcalc")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fortcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn presets_lists_both_compiled_in_sets() {
    let out = fortcalc(&["presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("stamper_kurn_1998"));
    assert!(text.contains("desk_synthetic"));
    assert!(text.contains("omegaL_rad_s"));
}

#[test]
fn scan_to_stdout_has_header_and_600_rows() {
    let out = fortcalc(&["scan", "--preset", "desk_synthetic"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 601);
    assert_eq!(lines[0], "r_over_w0,u_rwa,u_nonrwa,term1,term2,term3,f_rwa,f_nonrwa");
    assert!(!text.contains('\r'));
}

#[test]
fn scan_file_is_byte_identical_across_runs() {
    let a = scratch("a.csv");
    let b = scratch("b.csv");
    for p in [&a, &b] {
        let out = fortcalc(&[
            "scan",
            "--preset",
            "stamper_kurn_1998",
            "--detuning-sign",
            "+",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn negative_sign_override_is_logged_and_flips_the_potential() {
    let out = fortcalc(&[
        "scan",
        "--preset",
        "stamper_kurn_1998",
        "--detuning-sign",
        "-",
        "--n",
        "20",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--detuning-sign"));
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(row[1] < 0.0);
}

#[test]
fn svg_output_has_solid_and_dashed_curves() {
    let path = scratch("fig.svg");
    let out = fortcalc(&["scan", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert_eq!(svg.matches("stroke-dasharray").count(), 1);
}

#[test]
fn verify_json_is_deterministic() {
    let a = scratch("va.json");
    let b = scratch("vb.json");
    for p in [&a, &b] {
        let out = fortcalc(&[
            "verify",
            "--profile",
            "quick",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let ja = std::fs::read(&a).unwrap();
    assert_eq!(ja, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(ja).unwrap().contains("\"checks\""));
}

#[test]
fn config_file_with_unknown_key_is_rejected() {
    let path = scratch("bad.json");
    std::fs::write(&path, r#"{"gamma_rad_s": 1.0, "bogus": 3}"#).unwrap();
    let out = fortcalc(&["scan", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn config_file_drives_the_scan() {
    let path = scratch("desk.json");
    std::fs::write(
        &path,
        r#"{"gamma_rad_s": 1.0, "omega0_rad_s": 6.5, "omegaL_rad_s": 3.5, "rabi_peak_over_gamma": 2.0,
            "waist_m": 1.0, "l": 0, "p": 2, "phi_rad": 0.0, "theta0_rad": 0.0,
            "grid": {"r_max_over_w0": 2.0, "n_points": 40}}"#,
    )
    .unwrap();
    let out = fortcalc(&["scan", "--config", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 41);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(fortcalc(&["scan", "--bogus"]).status.code(), Some(1));
    assert_eq!(fortcalc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(fortcalc(&["scan", "--terms", "4"]).status.code(), Some(1));
    assert_eq!(fortcalc(&["scan", "--detuning-sign", "x"]).status.code(), Some(1));
    assert_eq!(fortcalc(&["--help"]).status.code(), Some(0));
}

#[test]
fn chu_preset_is_reported_unavailable() {
    let out = fortcalc(&["scan", "--preset", "chu_1985"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("chu_1985"));
}

#[test]
fn force_prints_time_domain_braces() {
    let out = fortcalc(&["force", "--r", "0.3", "--t", "1.0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("f_nonrwa"));
    assert!(text.contains("C_F"));
}

#[test]
fn compare_reports_the_quarter_correction() {
    let out = fortcalc(&["compare", "--preset", "stamper_kurn_1998"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("correction ratio = 0.2549"));
}
