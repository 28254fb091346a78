use std::path::Path;
use std::process::{Command, Output};

use propchoose::{ListAssignment, WitnessSpec};
use propchoose_cli::RunReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_propchoose"))
        .args(args)
        .env_remove("PROPCHOOSE_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read_report(path: &Path) -> RunReport {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_exit_codes_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("c4p1.json");
    let out = run(&[
        "verify",
        "--graph",
        "union:cycle:4+path:1",
        "-k",
        "2",
        "-l",
        "3",
        "--quiet",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let r = read_report(&report);
    assert_eq!(r.subcommand, "verify");
    assert_eq!(r.result["choosable"], true);
    assert_eq!(r.result["assignments_checked"], 243);
    assert_eq!(r.result["graph"], "union:cycle:4+path:1");
    assert!(r.result["duration_ms"].is_u64());

    let out = run(&[
        "verify",
        "--graph",
        "path:6",
        "-k",
        "2",
        "-l",
        "4",
        "--quiet",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = read_report(&report);
    assert_eq!(r.result["choosable"], false);
    let witness: ListAssignment =
        serde_json::from_value(r.result["witness"]["assignment"].clone()).unwrap();
    assert_eq!(witness.len(), 6);
    assert!(r.result["witness"]["index"].is_u64());

    let out = run(&[
        "verify", "--graph", "path:6", "-k", "2", "-l", "4", "--cap", "100", "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(3));

    let out = run(&[
        "verify", "--graph", "path:3", "-k", "3", "-l", "2", "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--graph", "wheel:5", "-k", "2", "-l", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--graph", "path:3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn jobs_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_propchoose"))
        .args([
            "verify", "--graph", "path:5", "-k", "2", "-l", "4", "--quiet",
        ])
        .env("PROPCHOOSE_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("7776 assignments checked"));
}

#[test]
fn classify_explains() {
    let out = run(&["classify", "--graph", "star:3", "-l", "3", "--explain"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("claw-subgraph"), "{text}");
    assert!(text.lines().count() >= 2);

    let out = run(&["classify", "--graph", "union:path:6+path:1", "-l", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("unknown"));

    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = run(&[
        "classify",
        "--graph",
        "path:7",
        "-l",
        "4",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = read_report(&report);
    assert_eq!(r.result["status"], "known_yes");
    assert_eq!(r.result["rule"], "path-ell4");
}

#[test]
fn witness_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p9.json");
    let out = run(&["witness", "--name", "p9", "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let w: WitnessSpec = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(w.graph.order(), 9);

    let assignment = dir.path().join("lists.json");
    std::fs::write(&assignment, serde_json::to_string(&w.assignment).unwrap()).unwrap();
    let out = run(&[
        "solve",
        "--graph",
        "path:9",
        "--assignment",
        assignment.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("no proportional coloring"));

    let out = run(&[
        "witness",
        "--name",
        "p3p3",
        "--graph",
        "path:8",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "witness",
        "--name",
        "evencycle24",
        "--graph",
        "kbip:2,3",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "witness",
        "--name",
        "cycle23:5",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_by_index() {
    let out = run(&[
        "solve",
        "--graph",
        "path:3",
        "--assignment",
        "0",
        "-k",
        "2",
        "-l",
        "3",
        "--emit-coloring",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let colors: Vec<u16> = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(colors.len(), 3);
    assert_ne!(colors[0], colors[1]);

    let out = run(&["solve", "--graph", "path:3", "--assignment", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "solve",
        "--graph",
        "path:3",
        "--assignment",
        "27",
        "-k",
        "2",
        "-l",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproduce_is_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let mut results = Vec::new();
    for jobs in ["1", "4"] {
        let report = dir.path().join(format!("p7-{jobs}.json"));
        let out = run(&[
            "reproduce",
            "p7",
            "--jobs",
            jobs,
            "--quiet",
            "--report",
            report.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let r = read_report(&report);
        assert_eq!(r.result["assignments_checked"], 279_936);
        results.push((
            r.result["choosable"].clone(),
            r.result["assignments_checked"].clone(),
        ));
    }
    assert_eq!(results[0], results[1]);

    let report = dir.path().join("p7-canonical.json");
    let out = run(&[
        "reproduce",
        "p7",
        "--mode",
        "canonical",
        "--quiet",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = read_report(&report);
    assert_eq!(r.result["choosable"], true);
    let orbits = r.result["assignments_checked"].as_u64().unwrap();
    assert!((279_936 / 24..279_936).contains(&orbits));
}

#[test]
fn survey_small() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let report = dir.path().join("s.json");
    let out = run(&[
        "survey",
        "--max-n",
        "3",
        "-l",
        "3",
        "--csv",
        csv.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().any(|l| l.starts_with("3,3,8,")), "{text}");
    let r = read_report(&report);
    assert_eq!(r.result["disagreements"].as_array().unwrap().len(), 0);

    let out = run(&["survey", "--max-n", "7"]);
    assert_eq!(out.status.code(), Some(2));
}
