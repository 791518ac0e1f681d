use std::process::{Command, Output};

use serde_json::Value;

fn kgk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgk"))
        .args(args)
        .env_remove("KGK_NUM_THREADS")
        .output()
        .expect("spawn kgk")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON document on stdout")
}

fn parse(v: &Value) -> f64 {
    v.as_str().expect("numbers are strings").parse().unwrap()
}

#[test]
fn spectrum_equal_potentials_csv() {
    let o = kgk(&[
        "spectrum", "--m", "1", "--a1", "0", "--b1", "0.5", "--a2", "0", "--b2", "0.5", "--nmax", "2", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,branch,energy,method,residual,verdict,c,k,iterations");
    let expected = [0.6, 15.0 / 17.0, 35.0 / 37.0];
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for (row, e) in rows.iter().zip(expected) {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[1], "particle");
        assert!((cols[2].parse::<f64>().unwrap() - e).abs() < 1e-12);
    }
    for line in stderr(&o).lines() {
        assert!(line.starts_with("WARN: ") || line.starts_with("ERROR: "), "{line}");
    }
}

#[test]
fn imaginary_a_is_invalid() {
    let o = kgk(&["energy", "--m", "1", "--a1", "0", "--b1", "0", "--a2", "1", "--b2", "0", "--n", "0", "--method", "implicit"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("ERROR: invalid_parameter:"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    for args in [
        vec!["spectrum", "--m", "1"],
        vec!["spectrum", "--m", "abc", "--nmax", "1"],
        vec!["energy", "--m", "1", "--n", "0", "--method", "closed:nope"],
        vec!["verify", "--suite", "everything"],
        vec!["spectrum", "--m", "-1", "--nmax", "1"],
        vec!["frobnicate"],
    ] {
        let o = kgk(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert_eq!(stderr(&o).lines().count(), 1, "{args:?}");
        assert!(stderr(&o).starts_with("ERROR: "));
    }
    assert_eq!(kgk(&["--help"]).status.code(), Some(0));
}

#[test]
fn negative_couplings_parse() {
    let o = kgk(&["energy", "--m", "1", "--b1", "0.5", "--b2", "-0.5", "--n", "0", "--method", "closed:opposite"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = json(&o);
    assert!((parse(&doc["results"][0]["energy"]) + 0.6).abs() < 1e-15);
    assert_eq!(doc["request"]["params"]["b2"], "-5.0000000000000000e-1");
}

#[test]
fn no_bound_state_exit_three() {
    let o = kgk(&["energy", "--m", "1", "--n", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("ERROR: no_bound_state:"));
    let o = kgk(&["spectrum", "--m", "1", "--nmax", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn fall_to_center_is_no_bound_state() {
    let o = kgk(&["energy", "--m", "1", "--b2", "0.6", "--n", "0", "--method", "oracle"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).starts_with("ERROR: fall_to_center:"), "{}", stderr(&o));
}

#[test]
fn json_document_shape() {
    let o = kgk(&["energy", "--m", "1", "--b2", "0.1", "--n", "0", "--method", "closed:pure_vector_coulomb", "--compare", "oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = json(&o);
    let keys: Vec<&String> = doc.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["diagnostics", "request", "results", "version"]);
    let rec = &doc["results"][0];
    assert!((parse(&rec["energy"]) - 0.995_037_190_209_989).abs() < 1e-14);
    assert!((parse(&rec["oracle_energy"]) - 0.994_936_153_005_124).abs() < 1e-7);
    assert!(parse(&rec["deviation"]) < 2e-4);
    assert_eq!(rec["node_count"], 0);
    assert_eq!(doc["request"]["options"]["method"], "closed:pure_vector_coulomb");
    assert_eq!(doc["diagnostics"][0]["level"], "WARN");
}

#[test]
fn csv_and_json_agree() {
    let base = ["spectrum", "--m", "1.3", "--a1", "0.4", "--b1", "0.6", "--a2", "0.2", "--b2", "0.3", "--nmax", "3"];
    let j = kgk(&[&base[..], &["--format", "json"]].concat());
    let c = kgk(&[&base[..], &["--format", "csv"]].concat());
    assert_eq!(j.status.code(), Some(0));
    assert_eq!(c.status.code(), Some(0));
    let doc = json(&j);
    let rows = doc["results"].as_array().unwrap();
    let text = stdout(&c);
    let csv_rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), csv_rows.len());
    for (r, line) in rows.iter().zip(csv_rows) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(r["energy"].as_str().unwrap(), cols[2]);
        assert_eq!(r["residual"].as_str().unwrap(), cols[4]);
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"m": 1, "b1": 0.5, "b2": 0.5, "nmax": 0, "format": "csv"}"#).unwrap();
    let cfg = cfg.to_str().unwrap();

    let o = kgk(&["spectrum", "--config", cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 2);

    let o = kgk(&["spectrum", "--config", cfg, "--nmax", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["results"].as_array().unwrap().len(), 3);

    std::fs::write(dir.path().join("bad.json"), r#"{"mass": 1}"#).unwrap();
    let o = kgk(&["spectrum", "--config", dir.path().join("bad.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wf.csv");
    let o = kgk(&[
        "wavefunction", "--m", "1", "--b1", "0.5", "--b2", "0.5", "--e", "auto", "--rmin", "0.1", "--rmax", "10",
        "--points", "50", "--normalize", "--format", "csv", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 51);
    assert!(text.starts_with("r,chi,phi,psi,W,dW,W_susy,psi_normalized\n"));
}

#[test]
fn wavefunction_json_has_normalization() {
    let o = kgk(&["wavefunction", "--m", "1", "--b1", "0.5", "--b2", "0.5", "--e", "0.6", "--points", "5", "--normalize"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = json(&o);
    // a = 0, c = 0, k = 1.6: ∫ r² e^{-1.6 r} dr = 2/1.6³
    let integral = parse(&doc["results"]["normalization"]["integral"]);
    assert!((integral - 2.0 / 1.6f64.powi(3)).abs() < 1e-12);
    assert_eq!(doc["results"]["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn wavefunction_rejects_non_normalizable() {
    // k = 2E·B2 < 0 for E < 0
    let o = kgk(&["wavefunction", "--m", "1", "--b2", "0.3", "--e", "-0.5"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn scan_rows_are_ordered() {
    let o = kgk(&["scan", "--m", "1", "--b1", "0.5", "--param", "b2", "--from", "-0.5", "--to", "0.5", "--steps", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = json(&o);
    let rows = doc["results"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r["index"], i);
    }
    assert!((parse(&rows[10]["energy"]) - 0.6).abs() < 1e-12);
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["scan", "--m", "1", "--b1", "0.3", "--param", "a1", "--from", "0", "--to", "2", "--steps", "16"];
    let one = Command::new(env!("CARGO_BIN_EXE_kgk")).args(args).env("KGK_NUM_THREADS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_kgk")).args(args).env("KGK_NUM_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_kgk")).args(args).env("KGK_NUM_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_limits_passes() {
    let o = kgk(&["verify", "--suite", "limits", "--seed", "1", "--cases", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("check,passed,worst,threshold,detail\n"));
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(1) == Some("true")));
}
