// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn quanfuzz() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_quanfuzz"));
    cmd.env_remove("QUANFUZZ_SEED");
    cmd
}

fn motivating() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../programs/motivating.qpl")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn analyze_emits_versioned_report() {
    let out = quanfuzz().arg("analyze").arg(motivating()).output().unwrap();
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["kind"], "sensitivity-report");
    let site = &v["sites"][0];
    assert_eq!(site["site_id"], 0);
    assert_eq!(site["register"], "q");
    assert_eq!(site["width"], 5);
    assert_eq!(site["op"], "==");
    assert_eq!(site["target"], 5);
    assert_eq!(site["span"]["line"], 5);
}

#[test]
fn parse_errors_report_position_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.qpl", "procedure p(){ qureg q[2]; H(q[3]); }");
    let out = quanfuzz().arg("analyze").arg(&p).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1:28"), "{err}");
}

#[test]
fn run_reports_coverage_and_honours_seed_fallback() {
    let base = ["run", "--trials", "40"];
    let explicit = quanfuzz()
        .args(base)
        .arg(motivating())
        .args(["--seed", "9"])
        .output()
        .unwrap();
    let from_env = quanfuzz()
        .args(base)
        .arg(motivating())
        .env("QUANFUZZ_SEED", "9")
        .output()
        .unwrap();
    assert!(explicit.status.success());
    assert_eq!(explicit.stdout, from_env.stdout);
    let v = json(&explicit);
    assert_eq!(v["kind"], "coverage-report");
    assert_eq!(v["trials"], 40);
    assert_eq!(v["universe"], 3);
}

#[test]
fn run_accepts_matrix_files_and_rejects_unnormalized_ones() {
    let dir = tempfile::tempdir().unwrap();
    let mut good = String::from("5\n");
    for i in 0..32 {
        good.push_str(if i == 0 { "1 0\n" } else { "0 0\n" });
    }
    let good = write(dir.path(), "zero.txt", &good);
    let out = quanfuzz()
        .arg("run")
        .arg(motivating())
        .arg("--matrix")
        .arg(&good)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let bad = write(
        dir.path(),
        "bad.txt",
        &"5\n".chars().chain("1 0\n".repeat(32).chars()).collect::<String>(),
    );
    let out = quanfuzz()
        .arg("run")
        .arg(motivating())
        .arg("--matrix")
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = quanfuzz()
        .arg("run")
        .arg(motivating())
        .arg("--matrix")
        .arg(&good)
        .args(["--basis", "3"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn fuzz_exit_code_reflects_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let matrix = dir.path().join("best.txt");
    let out = quanfuzz()
        .arg("fuzz")
        .arg(motivating())
        .args(["--seed", "1", "--emit-trace"])
        .arg(&trace)
        .arg("--emit-matrix")
        .arg(&matrix)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["kind"], "fuzz-result");
    assert_eq!(v["converged"], true);

    let csv = fs::read_to_string(&trace).unwrap();
    assert!(!csv.contains('\r'));
    let iterations = v["iterations_used"].as_u64().unwrap() as usize;
    assert_eq!(csv.lines().count(), iterations + 2);
    assert!(csv.starts_with("iteration,best_weight,evaluations\n"));

    // The emitted state drives the branch when fed back in.
    let run = quanfuzz()
        .arg("run")
        .arg(motivating())
        .arg("--matrix")
        .arg(&matrix)
        .args(["--trials", "200", "--seed", "2"])
        .output()
        .unwrap();
    let hit = json(&run)["sensitive_hit_frequency"][0].as_f64().unwrap();
    assert!(hit > 0.35, "hit rate {hit}");

    let out = quanfuzz()
        .arg("fuzz")
        .arg(motivating())
        .args(["--max-iters", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["converged"], false);
}

#[test]
fn fuzz_rejects_unknown_site() {
    let out = quanfuzz()
        .arg("fuzz")
        .arg(motivating())
        .args(["--site", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

fn bench_into(dir: &Path) {
    let out = quanfuzz()
        .args([
            "bench",
            "--min-qubits",
            "2",
            "--max-qubits",
            "4",
            "--repeats",
            "2",
            "--seed",
            "7",
            "--out",
        ])
        .arg(dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = quanfuzz().arg("report").arg(dir).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout)
        .contains("| Benchmark | Qubit number | Iteration | Evaluations | Probability |"));
}

#[test]
fn bench_and_report_are_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    bench_into(a.path());
    bench_into(b.path());
    for name in ["summary.csv", "trace.csv", "tables.md", "QB_01.qpl", "QB_03.qpl"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
    for id in ["QB_01", "QB_02", "QB_03"] {
        let load = |d: &Path| {
            let mut v: serde_json::Value =
                serde_json::from_slice(&fs::read(d.join(format!("{id}.json"))).unwrap()).unwrap();
            assert_eq!(v["schema_version"], 1);
            v.as_object_mut().unwrap().remove("timing");
            v
        };
        assert_eq!(load(a.path()), load(b.path()), "{id}");
    }
    let summary = fs::read_to_string(a.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 4);
    assert!(!summary.contains('\r'));
}

#[test]
fn report_rejects_missing_or_corrupt_campaigns() {
    let dir = tempfile::tempdir().unwrap();
    let out = quanfuzz().arg("report").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    write(
        dir.path(),
        "QB_01.json",
        "{\"schema_version\": 1, \"kind\": \"campaign-report\"",
    );
    let out = quanfuzz().arg("report").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("QB_01.json"));

    let out = quanfuzz()
        .arg("report")
        .arg(dir.path().join("absent"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_rejects_out_of_range_widths() {
    let dir = tempfile::tempdir().unwrap();
    let out = quanfuzz()
        .args(["bench", "--min-qubits", "1", "--max-qubits", "3", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
