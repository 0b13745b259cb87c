use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use beepnet::topology::{make_lb_case1, make_lb_case2, write_scenario, LbScenario};
use beepnet::verify::{
    expected_max_geometric, indistinguishability_check, is_mis, is_stable_configuration,
    mis_members, pair_symmetry_oracle, replay_scenario, stats::median_round,
};
use beepnet::{FeedbackMode, Graph, RunResult, Simulation, Trace};
use rayon::prelude::*;

use crate::config::{parse_seeds, read, ExperimentConfig};
use crate::{CliError, ScenarioArgs, ScenarioCase, VerifyArgs};

/// Executes one run; the trace text is produced only when asked for.
pub fn execute(
    config: &ExperimentConfig,
    n: Option<usize>,
    seed: u64,
    with_trace: bool,
) -> Result<(RunResult, Option<String>), CliError> {
    let graph = config.graph.build(n, seed)?;
    let size = graph.n();
    let n_bound = config.n_bound_for(size)?;
    let schedule = config.wake.build(size)?;
    let horizon = config.horizon_for(size);
    let kind = config.algorithm;
    // surface parameter errors before the engine asks for automata
    kind.build(Some(n_bound), config.c)?;
    let mut sim = Simulation::init(
        graph,
        |_| kind.build(Some(n_bound), config.c).expect("parameters checked above"),
        schedule,
        config.engine,
        seed,
    )?
    .with_labels(kind.name(), config.graph.to_string());
    if with_trace {
        let (trace, result) = sim.run(horizon)?;
        Ok((result, Some(trace.to_text())))
    } else {
        Ok((sim.run_with(horizon, |_| {})?, None))
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var("BEEPNET_THREADS") {
        let threads: usize = value
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| CliError::Config(format!("BEEPNET_THREADS=`{value}` is not a positive integer")))?;
        builder = builder.num_threads(threads);
    }
    builder
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io("<stdout>".into(), e)),
    }
}

pub fn csv_document(rows: &[RunResult]) -> String {
    let mut out = String::new();
    out.push_str(RunResult::CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_row());
        out.push('\n');
    }
    out
}

/// `# median n=<n> convergence_round=<r|none>` per size, in size order.
pub fn median_lines(rows: &[RunResult]) -> String {
    let mut by_n: BTreeMap<usize, Vec<Option<u64>>> = BTreeMap::new();
    for row in rows {
        by_n.entry(row.n).or_default().push(row.convergence_round);
    }
    let mut out = String::new();
    for (n, rounds) in by_n {
        let median = median_round(&rounds).map_or("none".to_string(), |m| m.to_string());
        writeln!(out, "# median n={n} convergence_round={median}").unwrap();
    }
    out
}

pub fn cmd_run(config: &ExperimentConfig) -> Result<bool, CliError> {
    if config.seeds.len() != 1 || config.ns.len() > 1 {
        return Err(CliError::Config(
            "run takes a single seed and size; use experiment for sweeps".into(),
        ));
    }
    let (result, trace) = execute(config, config.ns.first().copied(), config.seeds[0], config.trace.is_some())?;
    if let (Some(path), Some(text)) = (&config.trace, trace) {
        emit(Some(path), &text)?;
    }
    emit(config.csv.as_deref(), &csv_document(std::slice::from_ref(&result)))?;
    Ok(result.passed())
}

pub fn cmd_experiment(config: &ExperimentConfig) -> Result<bool, CliError> {
    let sizes: Vec<Option<usize>> = if config.ns.is_empty() {
        vec![None]
    } else {
        let mut ns = config.ns.clone();
        ns.sort_unstable();
        ns.dedup();
        ns.into_iter().map(Some).collect()
    };
    let mut seeds = config.seeds.clone();
    seeds.sort_unstable();
    seeds.dedup();
    let jobs: Vec<(Option<usize>, u64)> = sizes
        .iter()
        .flat_map(|&n| seeds.iter().map(move |&s| (n, s)))
        .collect();
    // collect() on an indexed parallel iterator keeps job order
    let rows: Vec<RunResult> = thread_pool()?.install(|| {
        jobs.par_iter()
            .map(|&(n, seed)| execute(config, n, seed, false).map(|(r, _)| r))
            .collect::<Result<_, _>>()
    })?;
    let mut text = csv_document(&rows);
    text.push_str(&median_lines(&rows));
    emit(config.csv.as_deref(), &text)?;
    Ok(rows.iter().all(RunResult::passed))
}

fn scenario(args: &ScenarioArgs) -> Result<LbScenario, CliError> {
    Ok(match args.case {
        ScenarioCase::Case1 => make_lb_case1(args.k, args.clique_scale, args.p, args.ell)?,
        ScenarioCase::Case2 => make_lb_case2(
            args.k,
            args.clique_scale,
            args.p,
            args.p_prime,
            args.ell,
            args.m,
        )?,
        ScenarioCase::Pairs => unreachable!("pairs has no graph scenario"),
    })
}

pub fn cmd_scenario(args: &ScenarioArgs) -> Result<bool, CliError> {
    if args.case == ScenarioCase::Pairs {
        let mean = pair_symmetry_oracle(args.n, args.trials, args.seed)?;
        let bound = (args.n as f64).log2() / std::f64::consts::E;
        let closed = expected_max_geometric::<f64>(args.n as u64 / 2);
        println!("case=pairs n={} trials={} seed={}", args.n, args.trials, args.seed);
        println!("mean={mean:.6}");
        println!("closed_form={closed:.6}");
        println!("lower_bound={bound:.6}");
        return Ok(true);
    }
    let scenario = scenario(args)?;
    if let Some(path) = &args.out {
        emit(Some(path), &write_scenario(&scenario))?;
    }
    let seeds = parse_seeds(&args.seeds)?;
    let prefix = args.k - 1;
    let horizon = args.horizon.unwrap_or(args.ell + 2 * args.k as u64);
    let matches: Vec<bool> = thread_pool()?.install(|| {
        seeds
            .par_iter()
            .map(|&seed| {
                replay_scenario(&scenario, seed, horizon)
                    .map(|trace| indistinguishability_check(&scenario, &trace, prefix))
            })
            .collect::<Result<_, _>>()
    })?;
    let hits = matches.iter().filter(|&&m| m).count();
    let case = match args.case {
        ScenarioCase::Case1 => "case1",
        _ => "case2",
    };
    println!(
        "case={case} k={} clique_scale={} p={} ell={} nodes={}",
        args.k,
        args.clique_scale,
        args.p,
        args.ell,
        scenario.graph.n()
    );
    println!("seeds={} prefix={prefix} horizon={horizon}", seeds.len());
    println!("indistinguishable={hits}");
    println!("fraction={:.4}", hits as f64 / seeds.len() as f64);
    Ok(true)
}

/// Problems found in `trace` when replayed against `graph`.
pub fn check_trace(graph: &Graph, trace: &Trace) -> Vec<String> {
    let mut problems = Vec::new();
    if trace.n != graph.n() {
        problems.push(format!("trace has {} nodes, graph has {}", trace.n, graph.n()));
        return problems;
    }
    let sender_cd = trace.feedback == FeedbackMode::SenderCd;
    for pair in trace.rounds.windows(2) {
        if !pair[0].awake.is_subset(&pair[1].awake) {
            problems.push(format!("t={}: a node fell asleep", pair[1].t));
        }
    }
    for round in &trace.rounds {
        if !round.beeped.is_subset(&round.awake) {
            problems.push(format!("t={}: a sleeping node beeped", round.t));
        }
        for v in round.awake.ones() {
            let any = graph.neighbors(v).iter().any(|&u| round.beeped.contains(u));
            let expected = any && (!round.beeped.contains(v) || sender_cd);
            if round.heard.contains(v) != expected {
                problems.push(format!("t={}: node {v} feedback should be {expected}", round.t));
            }
        }
    }
    let statuses = trace.final_statuses();
    let members = mis_members(&statuses);
    if !is_mis(graph, &members).unwrap_or(false) {
        problems.push("final MIS nodes do not form a maximal independent set".into());
    }
    if !is_stable_configuration(graph, &statuses) {
        problems.push("final statuses are not a stable configuration".into());
    }
    problems
}

pub fn cmd_verify_trace(args: &VerifyArgs) -> Result<bool, CliError> {
    let spec: crate::GraphSpec = args.graph.parse()?;
    let graph = spec.build(args.n, args.seed)?;
    let trace = Trace::from_text(&read(&args.trace)?)?;
    let problems = check_trace(&graph, &trace);
    for p in problems.iter().take(20) {
        println!("{p}");
    }
    println!("rounds={} problems={}", trace.len(), problems.len());
    Ok(problems.is_empty())
}
