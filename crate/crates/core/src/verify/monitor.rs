use std::collections::BTreeMap;

use super::mis::{is_mis, is_stable_configuration, mis_members};
use super::RunResult;
use crate::engine::{Round, RoundTrace, Status};
use crate::topology::{Graph, NodeId};

/// Adjacent MIS pairs lasting this many rounds count as persistent violations.
pub const PERSISTENCE_WINDOW: Round = 64;

/// Online summary of a run: convergence round and safety violations,
/// computed from each round's status changes.
#[derive(Debug, Clone)]
pub struct RunMonitor {
    statuses: Vec<Status>,
    first_round: Option<Round>,
    last_change: Option<Round>,
    open_pairs: BTreeMap<(NodeId, NodeId), Round>,
    violation_rounds: u64,
    persistent: u64,
    longest: Round,
}

impl RunMonitor {
    pub fn new(graph: &Graph, statuses: &[Status]) -> Self {
        let mut monitor = RunMonitor {
            statuses: statuses.to_vec(),
            first_round: None,
            last_change: None,
            open_pairs: BTreeMap::new(),
            violation_rounds: 0,
            persistent: 0,
            longest: 0,
        };
        for u in 0..graph.n() {
            if statuses[u] == Status::Mis {
                for &v in graph.neighbors(u) {
                    if v > u && statuses[v] == Status::Mis {
                        monitor.open_pairs.insert((u, v), 0);
                    }
                }
            }
        }
        monitor
    }

    fn close(&mut self, pair: (NodeId, NodeId), start: Round, end: Round) {
        let length = end - start;
        self.longest = self.longest.max(length);
        if length >= PERSISTENCE_WINDOW {
            self.persistent += 1;
        }
        self.open_pairs.remove(&pair);
    }

    pub fn observe(&mut self, graph: &Graph, round: &RoundTrace) {
        let t = round.t;
        self.first_round.get_or_insert(t);
        if !round.status_changes.is_empty() {
            self.last_change = Some(t);
        }
        for &(u, status) in &round.status_changes {
            let old = std::mem::replace(&mut self.statuses[u], status);
            if old == Status::Mis {
                for &v in graph.neighbors(u) {
                    let pair = (u.min(v), u.max(v));
                    if let Some(&start) = self.open_pairs.get(&pair) {
                        self.close(pair, start, t);
                    }
                }
            }
            if status == Status::Mis {
                for &v in graph.neighbors(u) {
                    if self.statuses[v] == Status::Mis {
                        self.open_pairs.insert((u.min(v), u.max(v)), t);
                    }
                }
            }
        }
        if !self.open_pairs.is_empty() {
            self.violation_rounds += 1;
        }
    }

    pub fn statuses(&self) -> &[Status] {
        &self.statuses
    }

    /// Longest adjacent-MIS episode closed so far.
    pub fn longest_violation(&self) -> Round {
        self.longest
    }

    #[allow(clippy::too_many_arguments)]
    pub fn finish(
        mut self,
        graph: &Graph,
        end: Round,
        max_k: Option<u64>,
        seed: u64,
        horizon: Round,
        algorithm: &str,
        graph_name: &str,
    ) -> RunResult {
        let open: Vec<_> = self.open_pairs.iter().map(|(&p, &s)| (p, s)).collect();
        for (pair, start) in open {
            self.close(pair, start, end);
        }
        let stable = is_stable_configuration(graph, &self.statuses);
        let mis_set = mis_members(&self.statuses);
        let valid = is_mis(graph, &mis_set).unwrap_or(false);
        let convergence_round = if stable && valid {
            Some(self.last_change.or(self.first_round).unwrap_or(0))
        } else {
            None
        };
        RunResult {
            seed,
            algorithm: algorithm.to_string(),
            graph: graph_name.to_string(),
            n: graph.n(),
            horizon,
            converged: convergence_round.is_some(),
            convergence_round,
            mis_set,
            safety_violations: self.violation_rounds,
            persistent_violations: self.persistent,
            longest_violation: self.longest,
            max_k,
            final_statuses: self.statuses,
        }
    }
}
