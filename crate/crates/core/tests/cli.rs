use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_corrected-pf");
const XZ: &str = r#"{"n_qubits":1,"terms":[{"pauli":"X","coeff":1},{"pauli":"Z","coeff":1}]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn heisenberg_file(dir: &Path) -> String {
    let path = dir.join("h.json");
    let p = path.to_str().unwrap().to_owned();
    stdout(&[
        "generate",
        "--model",
        "heisenberg",
        "--n-qubits",
        "2",
        "--field",
        "0.5",
        "--out",
        &p,
    ]);
    p
}

#[test]
fn expand_emits_orders_and_schedule() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["expand", "--k", "1", "--hamiltonian", XZ])).unwrap();
    assert_eq!(v["gamma"], serde_json::json!([3, 5]));
    assert_eq!(v["orders"]["3"].as_array().unwrap().len(), 2);
    let sched: serde_json::Value = serde_json::from_str(&stdout(&[
        "expand",
        "--k",
        "2",
        "--hamiltonian",
        XZ,
        "--print-schedule",
    ]))
    .unwrap();
    assert_eq!(sched["N"], 11);
    assert_eq!(sched["factors"].as_array().unwrap().len(), 11);
}

#[test]
fn build_sampler_fields() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&[
        "build-sampler",
        "--k",
        "1",
        "--hamiltonian",
        XZ,
        "--t",
        "0.4",
        "--r",
        "2",
    ]))
    .unwrap();
    let entries = v["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    for key in [
        "l",
        "pauli",
        "beta",
        "epsilon_re",
        "epsilon_im",
        "alpha_re",
        "alpha_im",
        "prob",
    ] {
        assert!(entries[0].get(key).is_some(), "missing {key}");
    }
    let total: f64 = entries.iter().map(|e| e["prob"].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(v["A"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_passes_with_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let h = heisenberg_file(dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&[
        "verify",
        "--k",
        "1",
        "--hamiltonian",
        &h,
        "--t",
        "0.1",
        "--r",
        "2",
    ]))
    .unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"]["mixing_lemma_holds"], true);
}

#[test]
fn converge_csv_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let h = heisenberg_file(dir.path());
    let out = stdout(&[
        "converge",
        "--k",
        "1",
        "--hamiltonian",
        &h,
        "--t",
        "0.8",
        "--r",
        "4,8",
    ]);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "method,k,L,n_qubits,t,r,error,bound,exp_count,seed"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let h = heisenberg_file(dir.path());
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "converge",
            "--k",
            "1",
            "--hamiltonian",
            &h,
            "--t",
            "0.8",
            "--r",
            "4,8,16",
            "--seed",
            "3",
            "--format",
            "json",
        ],
        vec![
            "sample",
            "--k",
            "1",
            "--hamiltonian",
            &h,
            "--t",
            "0.8",
            "--r",
            "8",
            "--trajectories",
            "20",
            "--seed",
            "9",
        ],
        vec![
            "bench-counts",
            "--k",
            "1",
            "--L",
            "3",
            "--epsilon",
            "1e-4,1e-6",
        ],
        vec![
            "build-sampler",
            "--k",
            "2",
            "--hamiltonian",
            &h,
            "--t",
            "0.5",
            "--r",
            "4",
        ],
    ];
    for (i, args) in cases.into_iter().enumerate() {
        let mut files = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("out{i}_{rep}"));
            let mut full = args.clone();
            let p = path.to_str().unwrap().to_owned();
            full.extend(["--out", &p]);
            stdout(&full);
            files.push(std::fs::read(&path).unwrap());
        }
        assert!(!files[0].is_empty());
        assert_eq!(files[0], files[1], "case {i}");
    }
}

#[test]
fn sample_seed_changes_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let h = heisenberg_file(dir.path());
    let base = [
        "sample",
        "--k",
        "1",
        "--hamiltonian",
        &h,
        "--t",
        "0.8",
        "--r",
        "8",
        "--trajectories",
        "5",
    ];
    let a = stdout(&[&base[..], &["--seed", "1"]].concat());
    let b = stdout(&[&base[..], &["--seed", "2"]].concat());
    assert_ne!(a, b);
}

#[test]
fn validation_failures_exit_with_two() {
    let bad: [&[&str]; 6] = [
        &["expand", "--k", "1", "--hamiltonian", "{not json"],
        &["expand", "--k", "0", "--hamiltonian", XZ],
        &[
            "expand",
            "--k",
            "1",
            "--hamiltonian",
            r#"{"n_qubits":1,"terms":[{"pauli":"Q","coeff":1}]}"#,
        ],
        &[
            "build-sampler",
            "--k",
            "1",
            "--hamiltonian",
            XZ,
            "--t",
            "0.4",
            "--r",
            "0",
        ],
        &[
            "verify",
            "--k",
            "1",
            "--hamiltonian",
            "/nonexistent/h.json",
            "--t",
            "0.4",
            "--r",
            "1",
        ],
        &["bench-counts", "--epsilon", "-1"],
    ];
    for args in bad {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
