//! Undirected communication graphs and the generators used by experiments.

mod generators;
mod io;
mod lower_bound;

pub use generators::{connect_bipartite, make_clique, make_disjoint_pairs, make_gnp, make_path};
pub use io::{parse_edge_list, parse_scenario, write_edge_list, write_scenario, ScenarioFile};
pub use lower_bound::{make_lb_case1, make_lb_case2, LbParams, LbScenario};

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Simple undirected graph on nodes `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adjacency })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adjacency[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Adds `{u, v}` keeping lists sorted. No-op if the edge exists.
    pub(crate) fn insert_edge(&mut self, u: NodeId, v: NodeId) {
        debug_assert!(u != v);
        if let Err(pos) = self.adjacency[u].binary_search(&v) {
            self.adjacency[u].insert(pos, v);
        }
        if let Err(pos) = self.adjacency[v].binary_search(&u) {
            self.adjacency[v].insert(pos, u);
        }
    }

    /// Checks symmetry, absence of self-loops, ordering and duplicates.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for (u, list) in self.adjacency.iter().enumerate() {
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::InvalidArgument(format!(
                        "adjacency of {u} not strictly sorted"
                    )));
                }
            }
            for &v in list {
                if v >= n {
                    return Err(Error::InvalidArgument(format!("neighbor {v} of {u} out of range")));
                }
                if v == u {
                    return Err(Error::InvalidArgument(format!("self-loop at {u}")));
                }
                if self.adjacency[v].binary_search(&u).is_err() {
                    return Err(Error::InvalidArgument(format!("edge {u}->{v} not symmetric")));
                }
            }
        }
        Ok(())
    }

    /// Connected components as a component id per node (ids in discovery order).
    pub fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &v in &self.adjacency[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }
}
