use std::path::PathBuf;
use std::process::{Command, Output};

fn hyperdec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperdec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{out}"))
        .to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hyperdec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn info_counts() {
    let o = hyperdec(&["info", "--torus", "d=4", "L=2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(field(&out, "qubits"), "96");
    assert_eq!(field(&out, "logical"), "6");
    assert_eq!(field(&out, "cells"), "16 64 96 64 16");

    let out = stdout(&hyperdec(&["info", "--torus", "d=2", "L=3"]));
    assert_eq!(field(&out, "qubits"), "18");
    assert_eq!(field(&out, "logical"), "2");

    let out = stdout(&hyperdec(&["info", "--torus", "d=3", "L=3", "--grade", "1", "--dual"]));
    assert_eq!(field(&out, "qubits"), "81");
    assert_eq!(field(&out, "logical"), "3");
    assert_eq!(field(&out, "orientation"), "dual");
}

#[test]
fn emitted_complex_reloads() {
    let path = scratch("t3.cx");
    let o = hyperdec(&["info", "--torus", "d=3", "L=2", "--emit", path.to_str().unwrap()]);
    assert!(o.status.success());
    let a = stdout(&o);
    let b = stdout(&hyperdec(&["info", "--file", path.to_str().unwrap()]));
    assert_eq!(field(&a, "qubits"), field(&b, "qubits"));
    assert_eq!(field(&a, "logical"), field(&b, "logical"));
}

#[test]
fn bad_input_exits_with_two() {
    let path = scratch("bad.cx");
    std::fs::write(&path, "this is not a complex\n").unwrap();
    let o = hyperdec(&["info", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    assert_eq!(hyperdec(&["info", "--torus", "d=5", "L=3"]).status.code(), Some(2));
    assert_eq!(
        hyperdec(&["info", "--torus", "d=4", "L=3", "--grade", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hyperdec(&["info", "--file", "/nonexistent/x.cx"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hyperdec(&["decode", "--torus", "d=4", "L=3", "--error", "cells=99999"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn decode_single_error() {
    let o = hyperdec(&["decode", "--torus", "d=4", "L=3", "--error", "cells=17"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, "verdict"), "trivial");
    assert_eq!(field(&out, "rounds"), "1");
    assert_eq!(field(&out, "residual syndrome weight"), "0");
}

#[test]
fn decode_logical_plane() {
    let o = hyperdec(&["decode", "--torus", "d=4", "L=3", "--error", "plane=13"]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert_eq!(field(&out, "error weight"), "9");
    assert_eq!(field(&out, "syndrome weight"), "0");
    assert_eq!(field(&out, "verdict"), "logical");
}

#[test]
fn decode_cap_exceeded() {
    let o = hyperdec(&[
        "decode",
        "--torus",
        "d=4",
        "L=3",
        "--kernel-cap",
        "4",
        "--error",
        "cells=0",
    ]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn memory_sim_reports() {
    let o = hyperdec(&[
        "memory-sim",
        "--torus",
        "d=4",
        "L=2",
        "--p",
        "0.005",
        "--tau",
        "5",
        "--delta",
        "10",
        "--trials",
        "3",
        "--weights",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(field(&out, "trials"), "3");
    let total: usize = ["success", "logical_failure", "timeout"]
        .iter()
        .map(|k| field(&out, k).parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 3);
    assert_eq!(out.lines().filter(|l| l.starts_with("weights ")).count(), 3);
}

#[test]
fn sweep_from_config_with_overrides() {
    let cfg = scratch("sweep.toml");
    std::fs::write(
        &cfg,
        "L = [2]\np = [0.001, 0.01]\ntrials = 3\ntau = 5\ndelta = 8\nseed = 4\n",
    )
    .unwrap();
    let o = hyperdec(&["sweep", "--config", cfg.to_str().unwrap(), "--trials", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], hyperdec::sweep::CSV_HEADER);
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("2,0.001,0.001,2,deterministic,2,"));

    std::fs::write(&cfg, "L = [2]\np = [0.01]\nbogus = 1\n").unwrap();
    assert_eq!(
        hyperdec(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(2)
    );
}
