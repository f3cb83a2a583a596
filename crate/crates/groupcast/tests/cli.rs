//! End-to-end tests of the command-line interface: artifact formats,
//! round-trips, exit codes, and determinism.

use std::path::Path;
use std::process::{Command, Output};

use groupcast::geometry::minimize;
use groupcast::io::{hrep_from_json, hrep_to_json};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_groupcast"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn write_unit_k3(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("unit-k3.json");
    let caps: Vec<String> = ["1", "2", "3", "12", "13", "23", "123"]
        .iter()
        .map(|s| format!("\"{s}\": \"1\""))
        .collect();
    std::fs::write(
        &path,
        format!("{{\"K\": 3, \"capacities\": {{{}}}}}", caps.join(", ")),
    )
    .unwrap();
    path
}

fn write_zero_k3(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("zero-k3.json");
    std::fs::write(&path, r#"{"K": 3, "capacities": {}}"#).unwrap();
    path
}

#[test]
fn region_emits_minimized_hrep_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let net = write_unit_k3(dir.path());
    let out = run(&[
        "region",
        "--kind",
        "capacity",
        "--net",
        net.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let poly = hrep_from_json(&stdout(&out)).unwrap();
    // At unit capacities every row except the strong receiver's throughput
    // cut is instance-redundant, leaving it plus the four sign rows.
    assert_eq!(poly.rows().len(), 5);

    // Reloading and minimizing again must reproduce the emitted system.
    assert_eq!(hrep_to_json(&minimize(&poly)), stdout(&out).trim_end());
}

#[test]
fn region_accepts_job_description() {
    let dir = tempfile::tempdir().unwrap();
    let net = write_unit_k3(dir.path());
    let job = dir.path().join("job.json");
    let net_json = std::fs::read_to_string(&net).unwrap();
    std::fs::write(
        &job,
        format!(r#"{{"kind": "capacity", "network": {net_json}}}"#),
    )
    .unwrap();

    let via_job = run(&["region", "--job", job.to_str().unwrap()]);
    assert!(
        via_job.status.success(),
        "{}",
        String::from_utf8_lossy(&via_job.stderr)
    );
    let via_flags = run(&[
        "region",
        "--kind",
        "capacity",
        "--net",
        net.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&via_job), stdout(&via_flags));
}

#[test]
fn region_kind_alias_matches_canonical_name() {
    let dir = tempfile::tempdir().unwrap();
    let net = write_unit_k3(dir.path());
    let canonical = run(&[
        "region",
        "--kind",
        "capacity",
        "--net",
        net.to_str().unwrap(),
    ]);
    let alias = run(&[
        "region",
        "--kind",
        "theorem2",
        "--net",
        net.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&canonical), stdout(&alias));
}

#[test]
fn verify_zero_network_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let net = write_zero_k3(dir.path());
    let out = run(&["verify", "--net", net.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("[pass] capacity::outer_contains_inner"));
}

#[test]
fn verify_writes_reports_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let net = write_unit_k3(dir.path());
    let outdir = dir.path().join("results");
    let out = run(&[
        "verify",
        "--net",
        net.to_str().unwrap(),
        "--out",
        outdir.to_str().unwrap(),
        "--seed",
        "3",
    ]);
    assert!(out.status.success());
    for name in [
        "report-capacity.json",
        "report-degraded.json",
        "report-binning.json",
        "summary.csv",
    ] {
        assert!(outdir.join(name).exists(), "missing {name}");
    }
    let csv = std::fs::read_to_string(outdir.join("summary.csv")).unwrap();
    assert!(csv.starts_with("instance,check,pass,millis"));

    // Reports are byte-identical across runs with the same seed.
    let first = std::fs::read_to_string(outdir.join("report-capacity.json")).unwrap();
    let out2 = run(&[
        "verify",
        "--net",
        net.to_str().unwrap(),
        "--out",
        outdir.to_str().unwrap(),
        "--seed",
        "3",
    ]);
    assert!(out2.status.success());
    let second = std::fs::read_to_string(outdir.join("report-capacity.json")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn example_k4_prints_match_table() {
    let out = run(&["example-k4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("9/9 rows matched"), "{text}");
    assert!(text.contains("[pass] example-k4::coefficients_match_bijectively"));
}

#[test]
fn fme_writes_step_files() {
    let dir = tempfile::tempdir().unwrap();
    let net = write_unit_k3(dir.path());
    let outdir = dir.path().join("fme");
    let out = run(&[
        "fme",
        "--net",
        net.to_str().unwrap(),
        "--check-intermediates",
        "--out",
        outdir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for i in 1..=5 {
        let step = outdir.join(format!("step{i}.json"));
        let poly = hrep_from_json(&std::fs::read_to_string(&step).unwrap()).unwrap();
        assert_eq!(poly.dim(), 9 - i);
    }
    assert!(stdout(&out).contains("[pass] fme::final_equals_inner_bound"));
}

#[test]
fn vertices_of_zero_capacity_region() {
    let dir = tempfile::tempdir().unwrap();
    let net = write_zero_k3(dir.path());
    let out = run(&[
        "vertices",
        "--kind",
        "capacity",
        "--net",
        net.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let coords: Vec<Vec<String>> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(coords, vec![vec!["0"; 4]]);
}

#[test]
fn vertices_from_hrep_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("square.json");
    std::fs::write(
        &path,
        r#"{"variables": ["x", "y"],
            "rows": [{"coeffs": {"x": "1"}, "rhs": "1"},
                     {"coeffs": {"x": "-1"}, "rhs": "0"},
                     {"coeffs": {"y": "1"}, "rhs": "1"},
                     {"coeffs": {"y": "-1"}, "rhs": "0"}]}"#,
    )
    .unwrap();
    let out = run(&["vertices", "--in", path.to_str().unwrap()]);
    assert!(out.status.success());
    let coords: Vec<Vec<String>> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(coords.len(), 4);
}

#[test]
fn schema_violation_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = run(&["verify", "--net", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let float = dir.path().join("float.json");
    std::fs::write(&float, r#"{"K": 3, "capacities": {"12": "0.5"}}"#).unwrap();
    let out = run(&["verify", "--net", float.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn capability_exceeded_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let net = write_unit_k3(dir.path());
    // An eleven-dimensional polytope is beyond the vertex enumeration cap.
    let out = run(&[
        "vertices",
        "--kind",
        "binning-split11d",
        "--net",
        net.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn campaign_smoke_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let outdir = dir.path().join("campaign");
    let args = [
        "campaign", "--seed", "5", "--count", "2", "--kmin", "3", "--kmax", "4", "--jobs", "2",
        "--out",
    ];
    let out = run(&[&args[..], &[outdir.to_str().unwrap()]].concat());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("campaign: 4/4 instances passed (seed 5)"));
    assert!(outdir.join("summary.csv").exists());

    let report_names: Vec<String> = std::fs::read_dir(&outdir)
        .unwrap()
        .filter_map(|e| {
            let name = e.unwrap().file_name().into_string().unwrap();
            name.starts_with("report-").then_some(name)
        })
        .collect();
    assert_eq!(report_names.len(), 4);

    let first = std::fs::read_to_string(outdir.join(&report_names[0])).unwrap();
    let out2 = run(&[&args[..], &[outdir.to_str().unwrap()]].concat());
    assert!(out2.status.success());
    let second = std::fs::read_to_string(outdir.join(&report_names[0])).unwrap();
    assert_eq!(first, second);
}

#[test]
fn missing_capacities_warn_under_log_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("partial.json");
    std::fs::write(&path, r#"{"K": 3, "capacities": {"123": "2"}}"#).unwrap();
    let out = bin()
        .args([
            "region",
            "--kind",
            "capacity",
            "--net",
            path.to_str().unwrap(),
        ])
        .env("GROUPCAST_LOG", "warn")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("missing 6 capacity entries"), "{stderr}");
}
