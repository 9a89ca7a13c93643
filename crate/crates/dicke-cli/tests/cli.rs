//! End-to-end checks of the `dicke` binary: exit codes, file formats and
//! reproducibility.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dicke"))
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("dicke-cli-test-{}-{name}", std::process::id()));
    p
}

/// Data rows with the wall-time column stripped (timing varies run to run).
fn csv_data(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| {
            let mut cols: Vec<&str> = l.split(',').collect();
            cols.pop();
            cols.join(",")
        })
        .collect()
}

#[test]
fn sweep_writes_sorted_csv() {
    let out = temp_path("sweep.csv");
    let status = bin()
        .args([
            "sweep",
            "--n",
            "4",
            "--omega-min",
            "0.1",
            "--omega-max",
            "5",
            "--steps",
            "5",
            "--measures",
            "purity,observables",
            "--out",
        ])
        .arg(&out)
        .status()
        .expect("binary runs");
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,omega,measure,params,value,wall_time_ms"
    );
    // 5 grid points x (1 purity + 4 observables components)
    assert_eq!(lines.count(), 25);
    std::fs::remove_file(&out).ok();
}

#[test]
fn sweep_is_deterministic_across_worker_counts() {
    let out1 = temp_path("w1.csv");
    let out2 = temp_path("w2.csv");
    for (workers, out) in [("1", &out1), ("4", &out2)] {
        let status = bin()
            .args([
                "sweep",
                "--n",
                "4,6",
                "--omega-min",
                "0.2",
                "--omega-max",
                "2",
                "--steps",
                "4",
                "--measures",
                "negativity,purity",
                "--workers",
                workers,
                "--out",
            ])
            .arg(out)
            .status()
            .expect("binary runs");
        assert!(status.success());
    }
    let a = csv_data(&std::fs::read_to_string(&out1).unwrap());
    let b = csv_data(&std::fs::read_to_string(&out2).unwrap());
    assert_eq!(a, b, "data sections differ between worker counts");
    std::fs::remove_file(&out1).ok();
    std::fs::remove_file(&out2).ok();
}

#[test]
fn jsonl_records_carry_schema_version() {
    let out = temp_path("sweep.jsonl");
    let status = bin()
        .args([
            "sweep",
            "--n",
            "2",
            "--omega-min",
            "0.5",
            "--omega-max",
            "2",
            "--steps",
            "2",
            "--measures",
            "discord2",
            "--format",
            "jsonl",
            "--out",
        ])
        .arg(&out)
        .status()
        .expect("binary runs");
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["schema_version"], "1");
        assert!(v["aux"]["total"].is_number());
    }
    std::fs::remove_file(&out).ok();
}

#[test]
fn empty_measures_is_a_validation_error() {
    let out = temp_path("never.csv");
    let output = bin()
        .args(["sweep", "--n", "4", "--out"])
        .arg(&out)
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn oversized_gmn_is_rejected_up_front() {
    let out = temp_path("never2.csv");
    let output = bin()
        .args([
            "sweep",
            "--n",
            "8",
            "--measures",
            "gmn",
            "--nr",
            "7",
            "--out",
        ])
        .arg(&out)
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("cap"), "stderr: {stderr}");
}

#[test]
fn state_round_trips_through_file() {
    let out = temp_path("state.txt");
    let status = bin()
        .args(["state", "--n", "2", "--omega", "0.5", "--out"])
        .arg(&out)
        .status()
        .expect("binary runs");
    assert!(status.success());
    let (params, rho) = dicke_cli::statefile::read_state(&out).unwrap();
    assert_eq!(params.n_particles(), 2);
    assert_eq!(rho.dim(), 3);
    // strong-drive dump is near-diagonal
    let out2 = temp_path("state2.txt");
    let status = bin()
        .args(["state", "--n", "4", "--omega", "100", "--out"])
        .arg(&out2)
        .status()
        .expect("binary runs");
    assert!(status.success());
    let (_, rho2) = dicke_cli::statefile::read_state(&out2).unwrap();
    for r in 0..5 {
        for c in 0..5 {
            if r != c {
                assert!(rho2.matrix()[(r, c)].norm() < 1e-2);
            }
        }
    }
    std::fs::remove_file(&out).ok();
    std::fs::remove_file(&out2).ok();
}

#[test]
fn state_cache_is_reused() {
    let dir = temp_path("cache-dir");
    let out = temp_path("cached.csv");
    for _ in 0..2 {
        let status = bin()
            .args([
                "sweep",
                "--n",
                "4",
                "--omega-min",
                "0.5",
                "--omega-max",
                "1",
                "--steps",
                "2",
                "--measures",
                "purity",
                "--cache",
            ])
            .arg(&dir)
            .arg("--out")
            .arg(&out)
            .status()
            .expect("binary runs");
        assert!(status.success());
    }
    let entries = std::fs::read_dir(&dir).unwrap().count();
    assert_eq!(entries, 2, "one cache file per grid point");
    std::fs::remove_dir_all(&dir).ok();
    std::fs::remove_file(&out).ok();
}

#[test]
fn verify_quick_passes_within_a_minute() {
    let start = std::time::Instant::now();
    let output = bin()
        .args(["verify", "--level", "quick"])
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(output.status.success(), "verify failed:\n{stdout}");
    assert!(stdout.contains("all"), "{stdout}");
    assert!(!stdout.contains("FAIL"), "{stdout}");
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn tampered_cg_table_is_caught() {
    // fault injection: corrupt one coefficient and feed the table to the
    // orthonormality check
    let good = dicke::bipartite::CGTable::build(2, 3);
    assert!(dicke_cli::verify::cg_orthonormality_of(&good) < 1e-12);
    let mut rows = good.rows().to_vec();
    rows[2][0] += 1e-3;
    let bad = dicke::bipartite::CGTable::from_raw(2, 3, rows);
    assert!(dicke_cli::verify::cg_orthonormality_of(&bad) > 1e-4);
}

#[test]
fn config_file_with_flag_overrides() {
    let cfg = temp_path("config.json");
    let out = temp_path("from-config.csv");
    std::fs::write(
        &cfg,
        serde_json::json!({
            "n": [2],
            "omega": {"min": 0.1, "max": 1.0, "steps": 3, "scale": "log"},
            "measures": ["purity"],
            "out": "ignored.csv"
        })
        .to_string(),
    )
    .unwrap();
    let status = bin()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .args(["--steps", "4", "--out"])
        .arg(&out)
        .status()
        .expect("binary runs");
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 5); // header + 4 overridden steps
    std::fs::remove_file(&cfg).ok();
    std::fs::remove_file(&out).ok();
}
