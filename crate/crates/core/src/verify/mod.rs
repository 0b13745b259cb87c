//! Correctness checks, convergence measurement and analysis oracles.

mod good_nodes;
mod indistinguishability;
mod mis;
mod monitor;
mod oracle;
pub mod potential;
pub mod stats;

pub use good_nodes::{good_edge_count, good_nodes};
pub use indistinguishability::{indistinguishability_check, replay_scenario};
pub use mis::{is_independent, is_mis, is_stable_configuration, mis_members, stable_nodes};
pub use monitor::{RunMonitor, PERSISTENCE_WINDOW};
pub use oracle::{expected_max_geometric, pair_symmetry_oracle};

use crate::engine::{Round, Status, Trace};
use crate::topology::{Graph, NodeId};

/// Smallest round `T` such that every round `>= T` shows the final statuses,
/// provided the final statuses form a stable configuration. Computed from
/// full status snapshots; [`RunMonitor`] computes the same value online.
pub fn convergence_round(graph: &Graph, trace: &Trace) -> Option<Round> {
    let last = trace.final_statuses();
    if !is_stable_configuration(graph, &last) {
        return None;
    }
    let mut candidate = trace.rounds.first().map(|r| r.t)?;
    trace.for_each_statuses(|t, statuses| {
        if statuses != last.as_slice() {
            candidate = t + 1;
        }
    });
    // the last change happens in the first round showing the final statuses
    Some(candidate)
}

/// Summary of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub seed: u64,
    pub algorithm: String,
    pub graph: String,
    pub n: usize,
    pub horizon: Round,
    pub converged: bool,
    pub convergence_round: Option<Round>,
    pub mis_set: Vec<NodeId>,
    /// Rounds in which some pair of neighbors both reported MIS.
    pub safety_violations: u64,
    /// Adjacent-MIS episodes lasting at least [`PERSISTENCE_WINDOW`] rounds.
    pub persistent_violations: u64,
    pub longest_violation: Round,
    pub max_k: Option<u64>,
    pub final_statuses: Vec<Status>,
}

impl RunResult {
    pub const CSV_HEADER: &'static str =
        "seed,algorithm,graph,n,horizon,converged,convergence_round,mis_size,safety_violations,max_k";

    /// One CSV line without the trailing newline. Absent values are empty.
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            self.seed.to_string(),
            csv_field(&self.algorithm),
            csv_field(&self.graph),
            self.n.to_string(),
            self.horizon.to_string(),
            self.converged.to_string(),
            opt(self.convergence_round),
            self.mis_set.len().to_string(),
            self.safety_violations.to_string(),
            opt(self.max_k),
        ]
        .join(",")
    }

    /// Converged with no persistent adjacent-MIS episode.
    pub fn passed(&self) -> bool {
        self.converged && self.persistent_violations == 0
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
