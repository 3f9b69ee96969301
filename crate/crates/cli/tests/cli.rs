use std::path::Path;
use std::process::{Command, Output};

fn foldlab(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foldlab"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn exponent_prints_fraction() {
    let dir = tempfile::tempdir().unwrap();
    let o = foldlab(dir.path(), &["exponent", "--p", "-0.5", "--l", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("r = -1/12"), "{}", stdout(&o));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("exponent.json")).unwrap())
            .unwrap();
    assert!(json["seed"].is_u64());
    assert!(dir.path().join("run_manifest.json").exists());
    assert!(dir.path().join("run.conf").exists());
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["multiplier-plot", "--mu-min", "3", "--mu-max", "1"],
        vec!["multiplier-plot", "--samples", "1"],
        vec!["apply", "--operator", "fractional-cubic", "--l", "0.7"],
        vec!["decay", "--curve", "quartic"],
        vec!["--threads", "0", "zero"],
    ] {
        let o = foldlab(dir.path(), &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn missing_input_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let o = foldlab(dir.path(), &["apply", "--input", "/nonexistent/field.fiof"]);
    assert_eq!(
        o.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn zero_reports_vanishing_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let o = foldlab(dir.path(), &["zero"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("zero.json")).unwrap())
            .unwrap();
    let mu0 = json["mu0"].as_f64().unwrap();
    assert!(mu0 > -1.0 && mu0 < 0.0);
    assert_eq!(json["sign_changes"], 1);
}

#[test]
fn identity_operator_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let o = foldlab(
        &a,
        &[
            "apply",
            "--operator",
            "identity",
            "--field",
            "packet",
            "--n",
            "32",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let input = a.join("applied.fiof");
    let b = dir.path().join("b");
    let o = foldlab(
        &b,
        &[
            "apply",
            "--operator",
            "identity",
            "--input",
            input.to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let f = spectral::io::read_field(&a.join("applied.fiof")).unwrap();
    let g = spectral::io::read_field(&b.join("applied.fiof")).unwrap();
    assert_eq!(f.coeffs, g.coeffs);
}

#[test]
fn artifacts_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut runs = vec![];
    for t in ["1", "3"] {
        let out = dir.path().join(t);
        let o = foldlab(
            &out,
            &[
                "--threads",
                t,
                "--seed",
                "7",
                "apply",
                "--field",
                "random",
                "--n",
                "64",
            ],
        );
        assert_eq!(o.status.code(), Some(0));
        let o = foldlab(
            &out,
            &[
                "--threads",
                t,
                "multiplier-plot",
                "--mu-min",
                "-2",
                "--mu-max",
                "2",
                "--samples",
                "41",
            ],
        );
        assert_eq!(
            o.status.code(),
            Some(1),
            "no plateau check, minimum outside the window"
        );
        runs.push(out);
    }
    for name in [
        "applied.csv",
        "apply.json",
        "m_table.csv",
        "figure2.svg",
        "figure2.json",
    ] {
        let a = std::fs::read(runs[0].join(name)).unwrap();
        let b = std::fs::read(runs[1].join(name)).unwrap();
        assert!(a == b, "{name} differs");
    }
}

#[test]
fn config_file_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let o = foldlab(
        &first,
        &[
            "--seed",
            "11",
            "apply",
            "--n",
            "32",
            "--operator",
            "log-cubic",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let conf = std::fs::read_to_string(first.join("run.conf")).unwrap();
    let second = dir.path().join("second");
    let conf = conf.replace(first.to_str().unwrap(), second.to_str().unwrap());
    let conf_path = dir.path().join("rerun.conf");
    std::fs::write(&conf_path, conf).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_foldlab"))
        .arg("--config")
        .arg(&conf_path)
        .arg("apply")
        .output()
        .unwrap();
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    for name in ["applied.csv", "apply.json"] {
        assert_eq!(
            std::fs::read(first.join(name)).unwrap(),
            std::fs::read(second.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    std::fs::write(&conf, "colour = blue\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_foldlab"))
        .arg("--config")
        .arg(&conf)
        .arg("zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
