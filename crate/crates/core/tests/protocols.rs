use beepnet::protocols::{
    ceil_log2, KnownBoundMis, ProtocolKind, SenderCdMis, SenderCdPhase, SyncClockMis, WakeOnBeepMis,
};
use beepnet::topology::{make_clique, make_disjoint_pairs, make_gnp, make_path};
use beepnet::verify::{is_mis, is_stable_configuration, mis_members};
use beepnet::{
    Action, EngineConfig, ExactPotentialProbe, FeedbackMode, Graph, PotentialProbe, Rational,
    Simulation, Status, Trace, WakeMode, WakeupSchedule,
};

fn status_series(trace: &Trace, node: usize) -> Vec<Status> {
    let mut out = Vec::new();
    trace.for_each_statuses(|_, s| out.push(s[node]));
    out
}

fn first_round_with(trace: &Trace, node: usize, status: Status) -> Option<u64> {
    status_series(trace, node)
        .iter()
        .position(|&s| s == status)
        .map(|t| t as u64)
}

fn isolated(kind: ProtocolKind, wake: u64, n_bound: u64, horizon: u64) -> Trace {
    let mut sim = Simulation::init(
        Graph::empty(1),
        |_| kind.build(Some(n_bound), None).unwrap(),
        WakeupSchedule::from_rounds(&[wake]),
        kind.engine_config(),
        17,
    )
    .unwrap();
    sim.run(horizon).unwrap().0
}

#[test]
fn alg1_isolated_joins_in_its_36th_round() {
    for wake in [0, 5] {
        let trace = isolated(ProtocolKind::Alg1, wake, 8, 80);
        assert_eq!(first_round_with(&trace, 0, Status::Mis), Some(wake + 35));
        let beeps: Vec<_> = trace.rounds.iter().filter(|r| r.beeped.contains(0)).map(|r| r.t).collect();
        // silent through the 18-round listening period, random while competing
        assert!(beeps.iter().all(|&t| t >= wake + 18), "{beeps:?}");
        // from then on one beep per two-round block
        for block in (wake + 36..78).step_by(2) {
            let n = beeps.iter().filter(|&&t| t == block || t == block + 1).count();
            assert_eq!(n, 1, "block at {block}");
        }
    }
}

#[test]
fn alg2_isolated_joins_in_its_8th_round() {
    for wake in [0, 3] {
        let trace = isolated(ProtocolKind::Alg2, wake, 1, 30);
        let acts: Vec<_> = trace.rounds[wake as usize..wake as usize + 8]
            .iter()
            .map(|r| r.action(0).unwrap())
            .collect();
        use Action::{Beep as B, Listen as L};
        assert_eq!(acts, vec![B, L, L, B, L, L, B, L]);
        assert_eq!(first_round_with(&trace, 0, Status::Mis), Some(wake + 7));
        assert!(trace.rounds[wake as usize + 8..].iter().all(|r| !r.beeped.contains(0)));
    }
}

#[test]
fn alg3_isolated_joins_after_first_step() {
    let trace = isolated(ProtocolKind::Alg3, 2, 1, 60);
    // wake beep, wait, then c * 1 = 3 exchanges of 3 rounds
    assert_eq!(first_round_with(&trace, 0, Status::Mis), Some(2 + 10));
    assert_eq!(trace.final_statuses(), vec![Status::Mis]);
}

#[test]
fn alg4_isolated_in_mis_from_round_seven() {
    let trace = isolated(ProtocolKind::Alg4, 0, 1, 40);
    let series = status_series(&trace, 0);
    assert!(series[..7].iter().all(|&s| s != Status::Mis));
    assert!(series[7..].iter().all(|&s| s == Status::Mis));
}

fn safety_graphs(n: usize, seed: u64) -> Vec<Graph> {
    vec![
        make_clique(n).unwrap(),
        make_path(n).unwrap(),
        make_gnp(n, 8.0 / n as f64, seed).unwrap(),
        make_disjoint_pairs(n).unwrap(),
    ]
}

#[test]
fn every_protocol_reaches_a_stable_mis() {
    for kind in ProtocolKind::ALL {
        for seed in 0..6 {
            for g in safety_graphs(24, seed) {
                let schedule = match kind {
                    ProtocolKind::Alg2 | ProtocolKind::Alg3 => WakeupSchedule::staggered(24, 2),
                    _ => WakeupSchedule::all_at(24, 0),
                };
                let mut sim = Simulation::init(
                    g.clone(),
                    |_| kind.build(Some(24), None).unwrap(),
                    schedule,
                    kind.engine_config(),
                    seed,
                )
                .unwrap();
                let r = sim.run_with(20_000, |_| {}).unwrap();
                assert!(r.converged, "{kind} seed {seed}: {r:?}");
                assert!(is_mis(&g, &r.mis_set).unwrap());
                assert!(is_stable_configuration(&g, &r.final_statuses));
                assert_eq!(r.persistent_violations, 0);
                assert_eq!(mis_members(&r.final_statuses), r.mis_set);
            }
        }
    }
}

#[test]
fn alg1_stays_silent_after_hearing() {
    let n = 40;
    let silence = {
        let a = KnownBoundMis::new(n as u64, KnownBoundMis::DEFAULT_C).unwrap();
        a.inactive_len()
    };
    for seed in 0..4 {
        let g = make_gnp(n, 0.15, seed).unwrap();
        let mut sim = Simulation::init(
            g,
            |_| KnownBoundMis::new(n as u64, KnownBoundMis::DEFAULT_C).unwrap(),
            WakeupSchedule::all_at(n, 0),
            ProtocolKind::Alg1.engine_config(),
            seed,
        )
        .unwrap();
        let (trace, _) = sim.run(3000).unwrap();
        let mut quiet_until = vec![0u64; n];
        let mut restarts = 0;
        for r in &trace.rounds {
            for u in r.beeped.ones() {
                assert!(r.t >= quiet_until[u], "node {u} beeped at {} within its silence", r.t);
            }
            for u in r.heard.ones() {
                quiet_until[u] = r.t + 1 + silence;
                restarts += 1;
            }
        }
        assert!(restarts > 0);
    }
}

#[test]
fn alg1_mis_nodes_beep_every_three_rounds() {
    let g = make_gnp(30, 0.2, 5).unwrap();
    let mut sim = Simulation::init(
        g,
        |_| KnownBoundMis::new(30, 2).unwrap(),
        WakeupSchedule::all_at(30, 0),
        ProtocolKind::Alg1.engine_config(),
        5,
    )
    .unwrap();
    let (trace, r) = sim.run(4000).unwrap();
    assert!(r.converged);
    let start = r.convergence_round.unwrap() as usize + 1;
    for u in r.mis_set {
        for w in trace.rounds[start..].windows(3) {
            assert!(w.iter().any(|r| r.beeped.contains(u)), "node {u} at {}", w[0].t);
        }
    }
}

#[test]
fn alg1_potential_changes_slowly() {
    let n = 32u64;
    let c = KnownBoundMis::DEFAULT_C;
    for seed in 0..3 {
        let g = make_gnp(n as usize, 0.25, seed).unwrap();
        let mut sim = Simulation::init(
            g.clone(),
            |_| KnownBoundMis::new(n, c).unwrap(),
            WakeupSchedule::staggered(n as usize, 7),
            ProtocolKind::Alg1.engine_config(),
            seed,
        )
        .unwrap();
        let mut probe = PotentialProbe::new();
        let mut exact = ExactPotentialProbe::new();
        for _ in 0..2500 {
            sim.step_probed(&mut |t, p| {
                probe.record(t, p);
                exact.record(t, p);
            });
        }
        let window = c * u64::from(ceil_log2(n));
        for v in 0..n as usize {
            let mut s: Vec<usize> = g.neighbors(v).to_vec();
            s.push(v);
            for lambda in [1.0 / 8.0, 0.25, 0.5, 1.0] {
                let bad = probe.slow_change_violations(&s, lambda, window).unwrap();
                assert!(bad.is_empty(), "node {v} lambda {lambda}: {bad:?}");
            }
            let t = 1234;
            let e: f64 = probe.beep_potential(&s, t).unwrap();
            let q: Rational = exact.beep_potential(&s, t).unwrap();
            assert!((e - *q.numer() as f64 / *q.denom() as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn alg1_potential_of_one_phase_one_node() {
    let mut sim = Simulation::init(
        Graph::empty(1),
        |_| KnownBoundMis::new(8, 2).unwrap(),
        WakeupSchedule::all_at(1, 0),
        ProtocolKind::Alg1.engine_config(),
        0,
    )
    .unwrap();
    let mut probe = ExactPotentialProbe::new();
    for _ in 0..40 {
        sim.step_probed(&mut |t, p| probe.record(t, p));
    }
    // silent for 18 rounds, then phase 1 with probability 2/64
    assert_eq!(probe.beep_potential(&[0], 17).unwrap(), Rational::from_integer(0));
    assert_eq!(probe.beep_potential(&[0], 18).unwrap(), Rational::new(1, 32));
    assert_eq!(probe.beep_potential(&[0], 30).unwrap(), Rational::new(1, 8));
}

#[test]
fn alg2_beeps_land_in_the_same_exchange() {
    let mut checked = 0;
    for seed in 0..10 {
        let n = 40;
        let g = make_gnp(n, 0.12, seed).unwrap();
        let mut sim = Simulation::init(
            g.clone(),
            |_| SenderCdMis::new(),
            WakeupSchedule::staggered(n, 4),
            EngineConfig::new(FeedbackMode::SenderCd, WakeMode::WakeOnBeep),
            seed,
        )
        .unwrap();
        for _ in 0..600 {
            let before: Vec<SenderCdPhase> = (0..n).map(|u| sim.automaton(u).phase()).collect();
            let round = sim.step().clone();
            for v in round.heard.ones() {
                let SenderCdPhase::Loop { x, i, exchange, .. } = before[v] else { continue };
                if exchange != 1 {
                    continue;
                }
                for &u in g.neighbors(v) {
                    if !round.beeped.contains(u) {
                        continue;
                    }
                    if let SenderCdPhase::Loop { x: xu, i: iu, exchange: eu, round: ru } = before[u] {
                        assert_eq!((xu, iu, eu, ru), (x, i, exchange, 2), "seed {seed} t {}", round.t);
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 50, "only {checked} beeps checked");
}

#[test]
fn alg3_beeps_land_in_the_same_exchange() {
    let mut checked = 0;
    for seed in 0..6 {
        let n = 40;
        let g = make_gnp(n, 0.12, seed).unwrap();
        let mut sim = Simulation::init(
            g.clone(),
            |_| WakeOnBeepMis::new(3).unwrap(),
            WakeupSchedule::staggered(n, 4),
            EngineConfig::new(FeedbackMode::Plain, WakeMode::WakeOnBeep),
            seed,
        )
        .unwrap();
        for _ in 0..1500 {
            let before: Vec<_> = (0..n)
                .map(|u| {
                    let a = sim.automaton(u);
                    (a.in_loop(), a.phase(), a.step_index(), a.exchange_index())
                })
                .collect();
            let round = sim.step().clone();
            for v in round.heard.ones() {
                if !before[v].0 {
                    continue;
                }
                for &u in g.neighbors(v) {
                    if round.beeped.contains(u) && before[u].0 {
                        assert_eq!(before[u], before[v], "seed {seed} t {}", round.t);
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 50, "only {checked} beeps checked");
}

/// Two aligned candidates at step `(x, 0)`; returns whether both are still
/// candidates after the step.
fn pair_survives(c: u32, x: u32, seed: u64) -> bool {
    let g = Graph::from_edges(2, [(0, 1)]).unwrap();
    let mut sim = Simulation::init(
        g,
        |_| WakeOnBeepMis::at_step(c, x, 0, true, false).unwrap(),
        WakeupSchedule::all_at(2, 0),
        EngineConfig::new(FeedbackMode::Plain, WakeMode::AdversarialOnly),
        seed,
    )
    .unwrap();
    for _ in 0..3 * c * x {
        sim.step();
    }
    sim.automaton(0).candidate() && sim.automaton(1).candidate()
}

/// Probability that two independently drawn schedules of length `len`
/// coincide: a schedule `v` has probability `|v| / (len * 2^(len-1))`.
fn schedules_coincide(len: u32) -> f64 {
    let mut binom = 1.0f64;
    let mut sum = 0.0;
    for w in 0..=len {
        if w > 0 {
            binom = binom * f64::from(len - w + 1) / f64::from(w);
        }
        sum += binom * f64::from(w * w);
    }
    sum / (f64::from(len * len) * 4f64.powi(len as i32 - 1))
}

#[test]
fn alg3_conflicts_resolve_at_the_predicted_rate() {
    let trials = 6000;
    for (c, x) in [(3, 1), (1, 2)] {
        let survived = (0..trials).filter(|&s| pair_survives(c, x, s)).count();
        let rate = survived as f64 / trials as f64;
        let p = schedules_coincide(c * x);
        let sd = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((rate - p).abs() < 4.0 * sd, "c={c} x={x}: {rate} vs {p}");
        assert!(rate <= 0.75f64.powi((c * x) as i32) + 4.0 * sd);
    }
    // at x = 10, c = 3 the bound (3/4)^30 is about 1.8e-4
    let trials = 3000;
    let survived = (0..trials).filter(|&s| pair_survives(3, 10, s)).count();
    let bound = 0.75f64.powi(30);
    assert!((survived as f64) <= bound * trials as f64 + 3.0, "{survived} survivors");
    assert!(schedules_coincide(30) <= bound);
}

#[test]
fn alg3_inhibited_node_recandidates_after_quiet_step() {
    let g = Graph::empty(1);
    let mut sim = Simulation::init(
        g,
        |_| WakeOnBeepMis::at_step(3, 2, 0, false, true).unwrap(),
        WakeupSchedule::all_at(1, 0),
        EngineConfig::new(FeedbackMode::Plain, WakeMode::AdversarialOnly),
        1,
    )
    .unwrap();
    // first step: inhibited, so no candidacy even with probability 1
    sim.step();
    assert!(!sim.automaton(0).candidate());
    assert!(!sim.automaton(0).inhibited());
    for _ in 1..18 {
        sim.step();
    }
    // second step (i = 1) begins with the next round
    let mut became = false;
    for _ in 0..200 {
        sim.step();
        became |= sim.automaton(0).candidate();
    }
    assert!(became);
}

#[test]
fn alg3_mis_holds_when_every_edge_is_one_round_skewed() {
    // each node wakes one round after its left neighbor, so the left node of
    // every edge hears the right node's beeps only in its third round
    let n = 64;
    let g = make_path(n).unwrap();
    for seed in 0..4 {
        let mut sim = Simulation::init(
            g.clone(),
            |_| ProtocolKind::Alg3.build(None, None).unwrap(),
            WakeupSchedule::staggered(n, 1),
            ProtocolKind::Alg3.engine_config(),
            seed,
        )
        .unwrap();
        let (trace, _) = sim.run(20_000).unwrap();
        let mut last_change = 0;
        let mut prev: Option<Vec<Status>> = None;
        trace.for_each_statuses(|t, s| {
            if prev.as_deref() != Some(s) {
                last_change = t;
                prev = Some(s.to_vec());
            }
        });
        let fin = trace.final_statuses();
        assert!(is_mis(&g, &mis_members(&fin)).unwrap(), "seed {seed}");
        assert!(last_change < 5_000, "seed {seed}: churn until {last_change}");
    }
}

#[test]
fn alg4_k_doubles_from_six_and_mis_exits_need_a_beep() {
    for seed in 0..5 {
        let n = 60;
        let g = make_gnp(n, 0.1, seed).unwrap();
        let mut sim = Simulation::init(
            g,
            |_| SyncClockMis::new(),
            WakeupSchedule::all_at(n, 0),
            ProtocolKind::Alg4.engine_config(),
            seed,
        )
        .unwrap();
        let mut prev_k = vec![6u64; n];
        let mut prev_status = vec![Status::Sleeping; n];
        for _ in 0..3000 {
            let round = sim.step().clone();
            for u in 0..n {
                let k = sim.automaton(u).k();
                assert_eq!(k % 6, 0);
                assert!((k / 6).is_power_of_two(), "k = {k}");
                assert!(k == prev_k[u] || k == 2 * prev_k[u]);
                prev_k[u] = k;
            }
            for &(u, s) in &round.status_changes {
                if prev_status[u] == Status::Mis {
                    assert!(round.heard.contains(u), "node {u} left MIS silently to {s:?}");
                }
                prev_status[u] = s;
            }
        }
        assert!(prev_k.iter().any(|&k| k > 6));
    }
}
