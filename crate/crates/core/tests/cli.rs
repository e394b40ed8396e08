//! End-to-end runs of the `geomech` binary.

use std::path::Path;
use std::process::{Command, Output};

fn geomech(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geomech"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn systems_lists_the_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let out = geomech(dir.path(), &["systems"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["free-particle", "harmonic-particle", "pendulum", "double-pendulum", "euler-top"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing:\n{text}");
    }
    assert!(text.contains("m1,m2,l1,l2,g"));
}

#[test]
fn pendulum_run_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("p.cfg"),
        "# small swing\nsystem = pendulum\nmode = simulate\nintegrator = verlet\nh = 0.01\nt_final = 10\n\
         param.m = 1\nparam.l = 1\nparam.g = 9.81\ninitial.q0 = 0.1\ninitial.p0 = 0\noutput = out/p.csv\n",
    )
    .unwrap();
    let out = geomech(dir.path(), &["run", "p.cfg"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "out/p.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# meta: system=pendulum method=verlet h=1.0000000000000000e-2");
    assert_eq!(lines[1], "t,q0,p0,H");
    assert_eq!(lines.len(), 2 + 1001);
    assert!(lines[1002].starts_with("1.0000000000000000e1,"), "{}", lines[1002]);

    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), "out/p.csv.report.json")).unwrap();
    let h = &report["quantities"][0];
    assert_eq!(h["name"], "H");
    assert!(h["max_abs_drift"].as_f64().unwrap() <= 1e-4);
    assert_eq!(h["pass"], true);
}

#[test]
fn overrides_alone_make_a_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = geomech(
        dir.path(),
        &[
            "run", "--set", "system=euler-top", "--set", "mode=euler-top", "--set", "h=0.01", "--set",
            "t_final=1", "--set", "param.i1=1", "--set", "param.i2=2", "--set", "param.i3=3", "--set",
            "initial.p0=1", "--set", "output=top.json", "--set", "format=json",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table: serde_json::Value = serde_json::from_str(&read(dir.path(), "top.json")).unwrap();
    assert_eq!(table["columns"][1], "Pi1");
    let rows = table["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 101);
    for row in rows {
        assert_eq!(row[1], 1.0);
        assert_eq!(row[2], 0.0);
        assert_eq!(row[3], 0.0);
    }
}

#[test]
fn bvp_run_writes_the_path() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("b.cfg"),
        "system = free-particle\nmode = bvp\nh = 0.125\nt_final = 1\nparam.m = 1\nfinal.q0 = 1\noutput = b.csv\n",
    )
    .unwrap();
    let out = geomech(dir.path(), &["run", "b.cfg"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "b.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,q0,q1,q2"));
    for (i, line) in lines.enumerate() {
        let q0: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((q0 - i as f64 / 8.0).abs() < 1e-12);
    }
}

#[test]
fn failures_map_to_exit_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let out = geomech(dir.path(), &["run", "missing.cfg"]);
    assert_eq!(out.status.code(), Some(1));

    std::fs::write(dir.path().join("bad.cfg"), "system = pendulum\nflavour = 3\n").unwrap();
    let out = geomech(dir.path(), &["run", "bad.cfg"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    // splitting methods need a constant mass matrix
    let out = geomech(
        dir.path(),
        &[
            "run", "--set", "system=double-pendulum", "--set", "integrator=verlet", "--set", "h=0.1",
            "--set", "t_final=1", "--set", "param.m1=1", "--set", "param.m2=1", "--set", "param.l1=1",
            "--set", "param.l2=1", "--set", "param.g=9.81", "--set", "output=dp.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}
