use std::path::Path;
use std::process::{Command, Output};

fn beepnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beepnet"))
        .args(args)
        .env_remove("BEEPNET_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn run_on_a_clique_elects_one_node() {
    let out = beepnet(&[
        "run", "--algorithm", "alg1", "--graph", "clique", "--n", "4", "--N", "4", "--horizon", "10000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "seed,algorithm,graph,n,horizon,converged,convergence_round,mis_size,safety_violations,max_k"
    );
    let row = &rows(&text)[0];
    assert_eq!(row[5], "true");
    assert_eq!(row[7], "1");
}

#[test]
fn config_errors_exit_with_two() {
    for args in [
        &["run", "--algorithm", "alg2", "--graph", "clique", "--n", "4", "--feedback", "plain"][..],
        &["run", "--algorithm", "alg1", "--graph", "clique", "--n", "8", "--N", "4"],
        &["run", "--algorithm", "alg4", "--graph", "clique", "--n", "8", "--wake", "staggered:2"],
        &["run", "--algorithm", "alg9", "--graph", "clique", "--n", "8"],
        &["run", "--algorithm", "alg1", "--graph", "pairs", "--n", "7"],
        &["run", "--algorithm", "alg1", "--graph", "clique", "--n", "8", "--seeds", "0..2"],
        &["scenario", "case2", "--k", "7"],
        &["run", "--config", "/nonexistent/config.toml"],
    ] {
        let out = beepnet(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unconverged_run_exits_with_one() {
    let out = beepnet(&["run", "--algorithm", "alg1", "--graph", "path", "--n", "16", "--horizon", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(rows(&stdout(&out))[0][5], "false");
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let csv = dir.path().join(format!("run{i}.csv"));
        let trace = dir.path().join(format!("run{i}.trace"));
        let out = beepnet(&[
            "run", "--algorithm", "alg3", "--graph", "gnp-degree:4", "--n", "40", "--seed", "7",
            "--wake", "staggered:2", "--horizon", "3000",
            "--csv", csv.to_str().unwrap(), "--trace", trace.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        outputs.push((std::fs::read(csv).unwrap(), std::fs::read(trace).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn experiment_rows_are_sorted_with_medians() {
    let out = beepnet(&[
        "experiment", "--algorithm", "alg4", "--graph", "gnp-degree:8", "--ns", "64,32",
        "--seeds", "0..10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let table = rows(&text);
    assert_eq!(table.len(), 20);
    let keys: Vec<(usize, u64)> = table
        .iter()
        .map(|r| (r[3].parse().unwrap(), r[0].parse().unwrap()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for n in [32usize, 64] {
        let mut rounds: Vec<u64> = table
            .iter()
            .filter(|r| r[3] == n.to_string())
            .map(|r| r[6].parse().unwrap())
            .collect();
        rounds.sort();
        let line = format!("# median n={n} convergence_round={}", rounds[(rounds.len() - 1) / 2]);
        assert!(text.lines().any(|l| l == line), "missing `{line}`");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "experiment", "--algorithm", "alg2", "--graph", "gnp-degree:8", "--ns", "32",
        "--seeds", "0..6", "--wake", "staggered:1",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_beepnet"))
            .args(args)
            .env("BEEPNET_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let three = run("3");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.toml");
    std::fs::write(
        &path,
        r#"
algorithm = "alg3"
c = 3
seeds = [1, 2]
ns = [16]
horizon = 4000

[graph]
kind = "gnp-degree"
degree = 6.0

[wake]
kind = "staggered"
stride = 1
"#,
    )
    .unwrap();
    let out = beepnet(&["experiment", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = rows(&stdout(&out));
    assert_eq!(table.len(), 2);
    assert!(table.iter().all(|r| r[1] == "alg3" && r[4] == "4000"));
    let out = beepnet(&["experiment", "--config", path.to_str().unwrap(), "--horizon", "5000", "--seed", "9"]);
    let table = rows(&stdout(&out));
    assert_eq!(table.len(), 1);
    assert_eq!((table[0][0].as_str(), table[0][4].as_str()), ("9", "5000"));
}

#[test]
fn edge_list_graph_and_wake_file() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    std::fs::write(&graph, "n 4\n0 1\n1 2\n2 3\n").unwrap();
    let wake = dir.path().join("w.txt");
    std::fs::write(&wake, "n 4\n0 1\n1 2\n2 3\n# wake 0 0\n# wake 1 0\n# wake 2 3\n# wake 3 3\n").unwrap();
    let g = format!("file:{}", graph.display());
    let w = format!("file:{}", wake.display());
    let out = beepnet(&["run", "--algorithm", "alg4", "--graph", &g, "--wake", &w, "--horizon", "500"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(rows(&stdout(&out))[0][3], "4");
    let out = beepnet(&["run", "--algorithm", "alg4", "--graph", &g, "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_trace_accepts_own_traces_and_rejects_wrong_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.trace");
    let t = trace.to_str().unwrap();
    let out = beepnet(&[
        "run", "--algorithm", "alg2", "--graph", "gnp:0.2", "--n", "30", "--seed", "3",
        "--wake", "staggered:2", "--horizon", "2000", "--trace", t,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let ok = beepnet(&["verify-trace", "--trace", t, "--graph", "gnp:0.2", "--n", "30", "--seed", "3"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let bad = beepnet(&["verify-trace", "--trace", t, "--graph", "gnp:0.2", "--n", "30", "--seed", "4"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn scenario_pairs_reports_mean_above_bound() {
    let out = beepnet(&["scenario", "pairs", "--n", "256", "--trials", "20000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mean: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("mean="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(mean >= 256f64.log2() / std::f64::consts::E);
}

#[test]
fn scenario_case1_is_indistinguishable() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("case1.txt");
    let out = beepnet(&[
        "scenario", "case1", "--k", "6", "--clique-scale", "4", "--p", "0.9", "--ell", "2",
        "--seeds", "0..500", "--out", file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let fraction: f64 = stdout(&out)
        .lines()
        .find_map(|l| l.strip_prefix("fraction="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(fraction >= 0.95);
    let written = std::fs::read_to_string(Path::new(&file)).unwrap();
    assert!(written.starts_with("n 144\n"));
    assert!(written.contains("# label 0 C_1(1)"));
}

#[test]
fn scenario_case2_runs() {
    let out = beepnet(&["scenario", "case2", "--k", "8", "--m", "3", "--seeds", "0..20"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("case=case2"));
}
