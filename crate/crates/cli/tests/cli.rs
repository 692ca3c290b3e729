use std::process::{Command, Output};

fn cqnls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqnls")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data lines of a CSV report, header first.
fn csv_body(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn construct_emits_json_with_params_and_residuals() {
    let out = cqnls(&["construct", "--L", "6.2832", "--omega", "2", "--N", "256"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["subcommand"], "construct");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["N"], 256);
    assert_eq!(v["config"]["L"].to_string(), "6.2832");
    let rec = &v["records"][0];
    assert_eq!(rec["omega"].as_f64(), Some(2.0));
    assert!(rec["r_quad"].as_f64().unwrap() <= 1e-8);
    assert!(rec["r_ode"].as_f64().unwrap() <= 1e-6);
    let (a1, a2, a3) = (rec["alpha1"].as_f64().unwrap(), rec["alpha2"].as_f64().unwrap(), rec["alpha3"].as_f64().unwrap());
    assert!(a1 < 0.0 && 0.0 < a2 && a2 < a3);
    assert!((a1 + a2 + a3 + 1.5).abs() < 1e-12);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn below_threshold_is_a_domain_error() {
    let out = cqnls(&["construct", "--omega", "0.1", "--L", "6.2832"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("omega_min(L)"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_have_their_own_code() {
    assert_eq!(cqnls(&["construct", "--omega", "2", "--bogus"]).status.code(), Some(64));
    assert_eq!(cqnls(&["construct"]).status.code(), Some(64));
    assert_eq!(cqnls(&["construct", "--omega", "1:2"]).status.code(), Some(64));
    assert_eq!(cqnls(&["stability", "--omega", "2", "--perturbation", "kick"]).status.code(), Some(64));
    assert_eq!(cqnls(&["--help"]).status.code(), Some(0));
}

#[test]
fn help_documents_csv_columns() {
    let out = cqnls(&["stability", "--help"]);
    assert!(stdout(&out).contains("CSV columns: t,orbital_dist"));
}

#[test]
fn config_errors_exit_one() {
    assert_eq!(cqnls(&["audit", "--omega", "1:2:2"]).status.code(), Some(1));
    assert_eq!(cqnls(&["stability", "--omega", "1:2:3"]).status.code(), Some(1));
    assert_eq!(cqnls(&["construct", "--omega", "2", "--N", "100"]).status.code(), Some(1));
    assert_eq!(cqnls(&["theta", "--omega", "2", "--dt", "1e-3"]).status.code(), Some(1));
}

#[test]
fn stability_writes_time_series_deterministically() {
    let args = ["stability", "--L", "6.2832", "--omega", "2", "--delta", "1e-3", "--t-end", "0.5", "--N", "128"];
    let a = cqnls(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let text = stdout(&a);
    let body = csv_body(&text);
    assert_eq!(body[0], "t,orbital_dist");
    assert!(body.len() > 2);
    for line in &body[1..] {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 2);
        assert!(fields[1] >= 0.0 && fields[1] < 1e-2);
    }
    assert!(text.contains("# perturbation=mode_cos1\n"));
    assert!(text.contains("# seed=0\n"));
    let b = cqnls(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweeps_are_independent_of_worker_count() {
    let one = cqnls(&["curve", "--omega", "0.5:3:6", "--jobs", "1"]);
    let many = cqnls(&["curve", "--omega", "0.5:3:6", "--jobs", "4"]);
    assert_eq!(one.status.code(), Some(0), "{}", stderr(&one));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn curve_keeps_going_past_inadmissible_points() {
    let out = cqnls(&["curve", "--omega", "0.2:2:4"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    let body = csv_body(&text);
    assert_eq!(body.len(), 5);
    assert!(body[1].contains("omega_min(L)"));
    assert!(body[2..].iter().all(|l| l.split(',').nth(1) == Some("ok")));
}

#[test]
fn csv_numbers_carry_seventeen_significant_digits() {
    let out = cqnls(&["construct", "--omega", "2", "--format", "csv"]);
    let text = stdout(&out);
    let body = csv_body(&text);
    for field in body[1].split(',') {
        let mantissa = field.split('e').next().unwrap();
        assert_eq!(mantissa.trim_start_matches('-').len(), 18, "{field}");
    }
}

#[test]
fn audit_reports_failed_sign_claims_with_exit_two() {
    let out = cqnls(&["audit", "--omega", "1:3:3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    let rows = csv_body(&text);
    assert_eq!(rows[0], "omega,group,quantity,value,expected,holds");
    let find = |q: &str| rows.iter().filter(|r| r.contains(q)).map(|r| r.ends_with(",true")).collect::<Vec<_>>();
    assert_eq!(find(",dB/domega,"), [false; 3]);
    assert_eq!(find(",dalpha1/domega,"), [false; 3]);
    assert_eq!(find(",dLambda/domega,"), [true; 3]);
    assert_eq!(find(",d''(omega),"), [true; 3]);
    assert!(rows.iter().filter(|r| r.contains("integral identity")).all(|r| r.ends_with(",true")));
    assert!(stderr(&out).contains("check failed"));
}

#[test]
fn theta_and_spectrum_pass_at_the_reference_wave() {
    let theta = cqnls(&["theta", "--omega", "2"]);
    assert_eq!(theta.status.code(), Some(0), "{}", stderr(&theta));
    let v: serde_json::Value = serde_json::from_str(&stdout(&theta)).unwrap();
    assert!(v["records"][0]["theta"].as_f64().unwrap() < 0.0);
    let spec = cqnls(&["spectrum", "--omega", "2", "--N", "128", "--format", "csv"]);
    assert_eq!(spec.status.code(), Some(0), "{}", stderr(&spec));
    assert_eq!(csv_body(&stdout(&spec)).len(), 1 + 2 * 128);
}

#[test]
fn report_goes_to_output_file() {
    let dir = std::env::temp_dir().join(format!("cqnls-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("wave.json");
    let out = cqnls(&["construct", "--omega", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["records"][0]["omega"].as_f64(), Some(2.0));
    let missing = dir.join("no/such/dir/wave.json");
    assert_eq!(cqnls(&["construct", "--omega", "2", "--output", missing.to_str().unwrap()]).status.code(), Some(74));
    std::fs::remove_dir_all(&dir).unwrap();
}
