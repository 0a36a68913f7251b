use std::path::Path;
use std::process::{Command, Output};

fn qaoa(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qaoa"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn brute_force_prints_value_and_optima() {
    let dir = tempfile::tempdir().unwrap();
    let o = qaoa(&["brute-force", "--graph", "canonical"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "6 00011 11100\n");
    std::fs::write(dir.path().join("edge.txt"), "2\n0 1\n").unwrap();
    let o = qaoa(&["brute-force", "--graph", "edge.txt"], dir.path());
    assert_eq!(stdout(&o), "1 01 10\n");
    std::fs::write(dir.path().join("bad.txt"), "2\n0 2\n").unwrap();
    let o = qaoa(&["brute-force", "--graph", "bad.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn missing_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = qaoa(&["solve", "--config", "missing.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing.json"));
}

#[test]
fn unknown_subcommand_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = qaoa(&["optimise"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"), "{}", stderr(&o));
    let o = qaoa(&["brute-force", "--nodes", "5"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn invalid_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.json"), r#"{"p": 1, "shots": 10, "noise": "loud"}"#).unwrap();
    let o = qaoa(&["solve", "--config", "c.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("`noise`"), "{}", stderr(&o));
}

#[test]
fn unwritable_output_is_a_runtime_failure() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.json"), r#"{"p": 0, "shots": 10}"#).unwrap();
    std::fs::write(dir.path().join("blocker"), "").unwrap();
    let o = qaoa(&["solve", "--config", "c.json", "--out", "blocker/run"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn solve_then_plot() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("c.json"),
        r#"{"p": 2, "method": "powell", "shots": 2000, "init": {"random": {"restarts": 2}}}"#,
    )
    .unwrap();
    let o = qaoa(&["solve", "--config", "c.json", "--seed", "4", "--out", "run"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("best energy"));
    let run = dir.path().join("run");
    for f in ["counts.json", "trace.csv", "summary.json", "config.json"] {
        assert!(run.join(f).exists(), "{f}");
    }
    let counts: serde_json::Value = serde_json::from_slice(&std::fs::read(run.join("counts.json")).unwrap()).unwrap();
    assert_eq!(counts["seed"], 4);
    assert_eq!(counts["shots"], 2000);

    let o = qaoa(&["plot", "--in", "run/counts.json", "--out", "h.svg"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = std::fs::read_to_string(dir.path().join("h.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let bars: Vec<_> = doc
        .descendants()
        .filter(|n| n.has_tag_name("rect") && n.attribute("class").is_some_and(|c| c.starts_with("bar")))
        .collect();
    let keys = counts["counts"].as_object().unwrap();
    assert_eq!(bars.len(), keys.len());
    let labels: Vec<&str> = bars.iter().map(|b| b.attribute("data-bitstring").unwrap()).collect();
    let mut sorted = labels.clone();
    sorted.sort();
    assert_eq!(labels, sorted);
    for b in &bars {
        let optimum = matches!(b.attribute("data-bitstring"), Some("00011" | "11100"));
        assert_eq!(b.attribute("class") == Some("bar optimum"), optimum);
    }

    let o = qaoa(&["plot", "--in", "run/trace.csv", "--out", "p.svg", "--series", "params"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = std::fs::read_to_string(dir.path().join("p.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let series: Vec<&str> = doc
        .descendants()
        .filter(|n| n.has_tag_name("polyline"))
        .map(|n| n.attribute("data-series").unwrap())
        .collect();
    assert_eq!(series, ["beta_1", "beta_2", "gamma_1", "gamma_2"]);
}

#[test]
fn plot_rejects_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.json"), r#"{"shots": 3, "counts": {"00011": 2}}"#).unwrap();
    let o = qaoa(&["plot", "--in", "c.json", "--out", "h.svg"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    std::fs::write(dir.path().join("t.csv"), "eval,energy\n0,abc\n").unwrap();
    let o = qaoa(&["plot", "--in", "t.csv", "--out", "t.svg"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(!dir.path().join("t.svg").exists());
}

#[test]
fn sweep_writes_cells_and_table() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("s.json"),
        r#"{"base": {"p": 1, "shots": 500, "max_evals": 30}, "axes": {"method": ["powell", "cg"], "noise": ["none", "ibm-bounds"]}}"#,
    )
    .unwrap();
    let o = qaoa(&["sweep", "--config", "s.json", "--out", "sw"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("sw/sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    for i in 0..4 {
        assert!(dir.path().join(format!("sw/cell_{i:04}/counts.json")).exists());
    }
}
