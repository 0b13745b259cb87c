use fixedbitset::FixedBitSet;

use super::trace::{RoundTrace, Trace};
use super::{
    node_rng, Action, Automaton, EngineConfig, FeedbackMode, NodeRng, Round, RoundFeedback,
    Status, WakeMode, WakeupSchedule,
};
use crate::error::{Error, Result};
use crate::scalar::Probability;
use crate::topology::{Graph, NodeId};
use crate::verify::{RunMonitor, RunResult};

/// Single-owner simulation state for one run.
#[derive(Debug, Clone)]
pub struct Simulation<A> {
    graph: Graph,
    config: EngineConfig,
    schedule: WakeupSchedule,
    seed: u64,
    t: Round,
    awake: FixedBitSet,
    pending_wake: FixedBitSet,
    neighbor_beeped: FixedBitSet,
    automata: Vec<A>,
    rngs: Vec<NodeRng>,
    statuses: Vec<Status>,
    first_round: Vec<Option<Round>>,
    diag_max: Vec<Vec<(&'static str, u64)>>,
    algorithm: String,
    graph_name: String,
    round: RoundTrace,
}

impl<A: Automaton> Simulation<A> {
    /// Creates a run at `t = 0` with every node asleep. Node `u`'s automaton
    /// is `factory(u)` and its random stream is [`node_rng`]`(seed, u)`.
    pub fn init<F>(
        graph: Graph,
        mut factory: F,
        schedule: WakeupSchedule,
        config: EngineConfig,
        seed: u64,
    ) -> Result<Self>
    where
        F: FnMut(NodeId) -> A,
    {
        let n = graph.n();
        schedule.check(n, config.wake)?;
        Ok(Simulation {
            automata: (0..n).map(&mut factory).collect(),
            rngs: (0..n).map(|u| node_rng(seed, u)).collect(),
            graph,
            config,
            schedule,
            seed,
            t: 0,
            awake: FixedBitSet::with_capacity(n),
            pending_wake: FixedBitSet::with_capacity(n),
            neighbor_beeped: FixedBitSet::with_capacity(n),
            statuses: vec![Status::Sleeping; n],
            first_round: vec![None; n],
            diag_max: vec![Vec::new(); n],
            algorithm: String::new(),
            graph_name: String::new(),
            round: RoundTrace::empty(n),
        })
    }

    /// Provenance copied into [`RunResult`].
    pub fn with_labels(mut self, algorithm: impl Into<String>, graph: impl Into<String>) -> Self {
        self.algorithm = algorithm.into();
        self.graph_name = graph.into();
        self
    }

    /// Replaces node `u`'s random stream by the one it would have in a run
    /// seeded with `seed`.
    pub fn reseed_node(&mut self, u: NodeId, seed: u64) {
        self.rngs[u] = node_rng(seed, u);
    }

    pub fn t(&self) -> Round {
        self.t
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn config(&self) -> EngineConfig {
        self.config
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_awake(&self, u: NodeId) -> bool {
        self.awake.contains(u)
    }

    pub fn awake_count(&self) -> usize {
        self.awake.count_ones(..)
    }

    pub fn automaton(&self, u: NodeId) -> &A {
        &self.automata[u]
    }

    pub fn statuses(&self) -> &[Status] {
        &self.statuses
    }

    pub fn first_round(&self, u: NodeId) -> Option<Round> {
        self.first_round[u]
    }

    /// Largest value each node has reported for each diagnostic key.
    pub fn diagnostic_maxima(&self) -> &[Vec<(&'static str, u64)>] {
        &self.diag_max
    }

    /// Executes one round.
    pub fn step(&mut self) -> &RoundTrace {
        self.step_inner(None);
        &self.round
    }

    /// Like [`step`](Self::step), but first reports every node's competition
    /// beep probability for this round (zero for sleeping nodes and for
    /// protocols that do not expose one).
    pub fn step_probed(&mut self, probe: &mut dyn FnMut(Round, &[Probability])) -> &RoundTrace {
        self.step_inner(Some(probe));
        &self.round
    }

    fn step_inner(&mut self, probe: Option<&mut dyn FnMut(Round, &[Probability])>) {
        let n = self.graph.n();
        let t = self.t;
        let round = &mut self.round;
        round.t = t;
        round.beeped.clear();
        round.heard.clear();
        round.woke.clear();
        round.status_changes.clear();

        // 1. wakeups
        for u in 0..n {
            if self.awake.contains(u) {
                continue;
            }
            if self.pending_wake.contains(u) || self.schedule.wake_round(u) == Some(t) {
                self.awake.insert(u);
                self.first_round[u] = Some(t);
                round.woke.insert(u);
            }
        }
        self.pending_wake.clear();
        round.awake.clone_from(&self.awake);

        if let Some(probe) = probe {
            let probs: Vec<Probability> = (0..n)
                .map(|u| {
                    if self.awake.contains(u) {
                        self.automata[u]
                            .beep_probability(t)
                            .unwrap_or(Probability::ZERO)
                    } else {
                        Probability::ZERO
                    }
                })
                .collect();
            probe(t, &probs);
        }

        // 2. actions
        let mut beeper_degree = 0usize;
        let mut other_degree = 0usize;
        for u in self.awake.ones() {
            if self.automata[u].decide(t, &mut self.rngs[u]) == Action::Beep {
                round.beeped.insert(u);
                beeper_degree += self.graph.degree(u);
            } else {
                other_degree += self.graph.degree(u);
            }
        }

        // 3. propagation: push from beepers while they are the minority by
        // degree, otherwise pull (pull scans stop at the first beeper found).
        self.neighbor_beeped.clear();
        if beeper_degree > 0 {
            if beeper_degree <= other_degree {
                for u in round.beeped.ones() {
                    for &v in self.graph.neighbors(u) {
                        self.neighbor_beeped.insert(v);
                    }
                }
            } else {
                let pull_all = self.config.wake == WakeMode::WakeOnBeep;
                for v in 0..n {
                    if !pull_all && !self.awake.contains(v) {
                        continue;
                    }
                    if self
                        .graph
                        .neighbors(v)
                        .iter()
                        .any(|&u| round.beeped.contains(u))
                    {
                        self.neighbor_beeped.insert(v);
                    }
                }
            }
        }

        // 4 + 6. feedback and state update
        let sender_cd = self.config.feedback == FeedbackMode::SenderCd;
        for u in self.awake.ones() {
            let beeped = round.beeped.contains(u);
            let heard_beep = self.neighbor_beeped.contains(u) && (!beeped || sender_cd);
            if heard_beep {
                round.heard.insert(u);
            }
            let feedback = RoundFeedback {
                heard_beep,
                woke_this_round: round.woke.contains(u),
            };
            let automaton = &mut self.automata[u];
            automaton.absorb(feedback, t, &mut self.rngs[u]);

            let status = automaton.status();
            if status != self.statuses[u] {
                self.statuses[u] = status;
                round.status_changes.push((u, status));
            }
            for &(key, value) in automaton.diagnostics() {
                let maxima = &mut self.diag_max[u];
                match maxima.iter_mut().find(|(k, _)| *k == key) {
                    Some(entry) => entry.1 = entry.1.max(value),
                    None => maxima.push((key, value)),
                }
            }
        }

        // 5. beep-triggered wakeups take effect next round
        if self.config.wake == WakeMode::WakeOnBeep && beeper_degree > 0 {
            for v in self.neighbor_beeped.ones() {
                if !self.awake.contains(v) {
                    self.pending_wake.insert(v);
                }
            }
        }

        self.t += 1;
    }

    /// Runs `horizon` rounds and returns the recorded trace with its summary.
    pub fn run(&mut self, horizon: Round) -> Result<(Trace, RunResult)> {
        let mut trace = Trace::new(self.graph.n(), self.config.feedback);
        let result = self.run_with(horizon, |round| trace.push(round.clone()))?;
        Ok((trace, result))
    }

    /// Runs `horizon` rounds, handing every round to `observer` instead of
    /// storing it.
    pub fn run_with<F>(&mut self, horizon: Round, mut observer: F) -> Result<RunResult>
    where
        F: FnMut(&RoundTrace),
    {
        if horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be at least 1".into()));
        }
        let mut monitor = RunMonitor::new(&self.graph, &self.statuses);
        for _ in 0..horizon {
            self.step_inner(None);
            monitor.observe(&self.graph, &self.round);
            observer(&self.round);
        }
        let max_k = self
            .diag_max
            .iter()
            .flat_map(|m| m.iter().filter(|(k, _)| *k == "k").map(|&(_, v)| v))
            .max();
        Ok(monitor.finish(
            &self.graph,
            self.t,
            max_k,
            self.seed,
            horizon,
            &self.algorithm,
            &self.graph_name,
        ))
    }
}
