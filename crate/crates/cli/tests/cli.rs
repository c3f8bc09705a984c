use std::f64::consts::TAU;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracperiod"))
        .args(args)
        .output()
        .expect("spawn fracperiod")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn last_value(csv: &str) -> f64 {
    let line = csv.lines().last().unwrap();
    line.split(',').nth(1).unwrap().parse().unwrap()
}

fn write_sine(path: &Path, n: usize, t_end: f64) {
    let mut s = String::from("t,value\n");
    for k in 0..=n {
        let t = t_end * k as f64 / n as f64;
        s.push_str(&format!("{t:.17e},{:.17e}\n", t.sin()));
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn integral_of_unit_constant() {
    let o = run(&[
        "fracop", "apply", "--op", "integral", "--alpha", "0.5", "--signal", "const:1", "--t-end", "1", "--n", "1000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = last_value(&stdout(&o));
    assert!((v - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-9, "{v}");
    assert!(stdout(&o).starts_with("t,value\n"));
    assert_eq!(stdout(&o).lines().count(), 1002);
}

#[test]
fn rl_derivative_marks_the_singular_node() {
    let o = run(&[
        "fracop", "apply", "--op", "rl", "--alpha", "0.5", "--signal", "const:2", "--t-end", "1", "--n", "10",
    ]);
    let text = stdout(&o);
    let first = text.lines().nth(1).unwrap();
    assert!(first.ends_with(",inf"), "{first}");
    // D^α c = c t^{-α}/Γ(1-α)
    let v = last_value(&text);
    assert!((v - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
    let o = run(&[
        "--format", "json", "fracop", "apply", "--op", "rl", "--alpha", "0.5", "--signal", "const:2", "--t-end", "1",
        "--n", "10",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc[0]["value"].is_null());
}

#[test]
fn lemmas_certify_nonperiodic_integral() {
    let o = run(&[
        "periodicity",
        "lemmas",
        "--signal",
        "sin",
        "--period",
        "6.283185307",
        "--alpha",
        "0.5",
        "--n-max",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let big = text
        .lines()
        .filter(|l| l.starts_with("kernel_moment"))
        .map(|l| l.split(',').nth(3).unwrap().parse::<f64>().unwrap())
        .any(|v| v.abs() > 0.1);
    assert!(big);
    assert_eq!(text.lines().filter(|l| l.starts_with("psi")).count(), 5);
}

#[test]
fn lemmas_reject_nonperiodic_signals() {
    let o = run(&["periodicity", "lemmas", "--signal", "poly:2", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scan_finds_the_period_of_sampled_sine() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("sin.csv");
    write_sine(&input, 4000, 4.0 * TAU);
    let out = dir.path().join("scan.json");
    let o = run(&[
        "--format",
        "json",
        "periodicity",
        "scan",
        "--in",
        input.to_str().unwrap(),
        "--t-lo",
        "4",
        "--t-hi",
        "8",
        "--steps",
        "801",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = doc.as_array().unwrap();
    assert_eq!(rows.len(), 801);
    let keys: Vec<&str> = rows[0].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["T_tilde", "sup_defect", "l2_defect", "window_lo", "window_hi"]);
    let best = rows[0]["T_tilde"].as_f64().unwrap();
    assert!((best - TAU).abs() <= 4.0 * TAU / 4000.0);
}

#[test]
fn scan_rejects_bad_range() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("sin.csv");
    write_sine(&input, 100, 5.0);
    let o = run(&[
        "periodicity",
        "scan",
        "--in",
        input.to_str().unwrap(),
        "--t-lo",
        "3",
        "--t-hi",
        "9",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_writes_trajectory_sidecar_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let o = run(&[
        "solve",
        "--alpha",
        "0.5",
        "--rhs",
        "linear:-1",
        "--u0",
        "1",
        "--t-end",
        "10",
        "--n",
        "1024",
        "--out",
        out.to_str().unwrap(),
        "--certify",
        "0.5",
        "5",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let traj = std::fs::read_to_string(&out).unwrap();
    assert!(traj.starts_with("t,u\n"));
    assert_eq!(traj.lines().count(), 1026);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("traj.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["scheme"], "predictor-corrector");
    assert_eq!(meta["alpha"], 0.5);
    assert_eq!(meta["corrector_iterations"], 2);
    assert!((meta["h"].as_f64().unwrap() - 10.0 / 1024.0).abs() < 1e-15);
    let cert = std::fs::read_to_string(dir.path().join("traj.certificate.csv")).unwrap();
    assert!(cert.starts_with("T_tilde,sup_defect,l2_defect,window_lo,window_hi\n"));
    let margin: f64 = cert.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(margin > 0.05);
}

#[test]
fn equilibrium_solve_is_constant() {
    let o = run(&[
        "--format", "json", "solve", "--alpha", "0.3", "--rhs", "logistic", "--u0", "1", "--t-end", "4", "--n", "64",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let traj = doc["trajectory"].as_array().unwrap();
    assert_eq!(traj.len(), 65);
    assert!(traj.iter().all(|r| r["u"] == 1.0));
    assert_eq!(doc["max_residual"], 0.0);
}

#[test]
fn blow_up_exits_with_failure() {
    let o = run(&[
        "solve",
        "--alpha",
        "0.5",
        "--rhs",
        "linear:40",
        "--u0",
        "1",
        "--t-end",
        "10",
        "--n",
        "200",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("blew up"));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&[
            "solve",
            "--alpha",
            "0.7",
            "--rhs",
            "paper-example",
            "--u0",
            "0",
            "--t-end",
            "3",
            "--n",
            "300",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(
        std::fs::read(dir.path().join("a.meta.json")).unwrap(),
        std::fs::read(dir.path().join("b.meta.json")).unwrap()
    );
}

#[test]
fn specfun_values() {
    let o = run(&[
        "specfun", "eval", "--fn", "mlf", "--args", "1", "1", "1", "--tol", "1e-12",
    ]);
    let row = stdout(&o).lines().nth(1).unwrap().to_owned();
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols[0], "mlf");
    assert!((cols[1].parse::<f64>().unwrap() - std::f64::consts::E).abs() < 1e-12);
    assert_eq!(cols[6], "true");
    let o = run(&[
        "--format",
        "json",
        "specfun",
        "eval",
        "--fn",
        "1f2",
        "--args",
        "1",
        "1.25",
        "0.75",
        "-2.4674011002723395",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((doc[0]["value"].as_f64().unwrap() + 0.373_982_833_415_732_3).abs() < 1e-14);
    assert!(doc[0]["tail_bound"].as_f64().unwrap() <= 1e-15);
    let o = run(&["specfun", "eval", "--fn", "gamma", "--args", "1", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn laplace_commands() {
    let o = run(&["laplace", "check", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);
    let o = run(&["laplace", "check", "--alpha", "0.5", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&[
        "--format", "json", "laplace", "moments", "--signal", "cos", "--k-max", "2",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["first_nonzero_index"], 2);
    assert!((doc["moments"][2].as_f64().unwrap() - 4.0 * std::f64::consts::PI).abs() < 1e-8);
    assert!(doc["verdict"].is_string());
    let o = run(&[
        "laplace",
        "ratio",
        "--period",
        "6.283185307179586",
        "--other-period",
        "3.141592653589793",
    ]);
    let v = last_value(&stdout(&o));
    assert!((v - 2.0).abs() < 1e-7);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fracperiod.toml");
    std::fs::write(&cfg, "default_n = 10\ncorrector_sweeps = 3\n").unwrap();
    let c = cfg.to_str().unwrap();
    let base = [
        "fracop", "apply", "--op", "integral", "--alpha", "0.5", "--signal", "sin", "--t-end", "1",
    ];
    let o = run(&[&["--config", c], &base[..]].concat());
    assert_eq!(stdout(&o).lines().count(), 12);
    let o = run(&[&["--config", c], &base[..], &["--n", "20"]].concat());
    assert_eq!(stdout(&o).lines().count(), 22);
    let o = run(&[
        "--config",
        c,
        "--corrector-sweeps",
        "5",
        "--format",
        "json",
        "solve",
        "--alpha",
        "0.5",
        "--rhs",
        "logistic",
        "--u0",
        "0.2",
        "--t-end",
        "1",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["corrector_iterations"], 5);
    assert_eq!(doc["trajectory"].as_array().unwrap().len(), 11);
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(
        run(&["--config", c, "verify", "all", "--only", "7"]).status.code(),
        Some(2)
    );
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["frobnicate"][..],
        &[
            "fracop", "apply", "--op", "integral", "--alpha", "1.5", "--signal", "sin", "--t-end", "1",
        ],
        &[
            "fracop", "apply", "--op", "integral", "--alpha", "0.5", "--signal", "tan", "--t-end", "1",
        ],
        &[
            "fracop", "apply", "--op", "integral", "--alpha", "0.5", "--signal", "sin",
        ],
        &[
            "solve",
            "--alpha",
            "0.5",
            "--rhs",
            "quadratic",
            "--u0",
            "0",
            "--t-end",
            "1",
        ],
        &["verify", "all", "--only", "42"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn csv_signal_carries_its_grid() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("s.csv");
    write_sine(&input, 200, 4.0);
    let sig = format!("csv:{}", input.display());
    let o = run(&["fracop", "apply", "--op", "caputo", "--alpha", "0.5", "--signal", &sig]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 202);
    let o = run(&[
        "fracop", "apply", "--op", "caputo", "--alpha", "0.5", "--signal", &sig, "--t-end", "4",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_per_criterion() {
    let o = run(&["verify", "all", "--only", "7,8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    let o = run(&["--format", "csv", "verify", "all", "--only", "9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("id,title,passed,detail\n"));
}
