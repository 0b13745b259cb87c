use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Graph, NodeId};
use crate::error::{Error, Result};
use crate::scalar::Probability;

fn require_positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidSize(format!("{what} needs at least one node")));
    }
    Ok(())
}

pub fn make_clique(n: usize) -> Result<Graph> {
    require_positive(n, "clique")?;
    let adjacency = (0..n)
        .map(|u| (0..n).filter(|&v| v != u).collect())
        .collect();
    Ok(Graph { adjacency })
}

/// `n / 2` disjoint edges `{2i, 2i + 1}`.
pub fn make_disjoint_pairs(n: usize) -> Result<Graph> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::InvalidSize(format!(
            "disjoint pairs need a positive even node count, got {n}"
        )));
    }
    Graph::from_edges(n, (0..n / 2).map(|i| (2 * i, 2 * i + 1)))
}

/// Erdős–Rényi `G(n, p)`. Pairs are visited in lexicographic order and each
/// consumes exactly one Bernoulli draw from a ChaCha8 stream seeded by `seed`.
pub fn make_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    require_positive(n, "G(n, p)")?;
    let prob = Probability::from_f64(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if prob.sample(&mut rng) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

pub fn make_path(n: usize) -> Result<Graph> {
    require_positive(n, "path")?;
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
}

/// Adds every edge between `a` and `b`.
pub fn connect_bipartite(mut g: Graph, a: &[NodeId], b: &[NodeId]) -> Result<Graph> {
    let n = g.n();
    if let Some(&bad) = a.iter().chain(b).find(|&&u| u >= n) {
        return Err(Error::InvalidArgument(format!("node {bad} out of range")));
    }
    if let Some(&shared) = a.iter().find(|u| b.contains(u)) {
        return Err(Error::InvalidArgument(format!(
            "node {shared} appears on both sides"
        )));
    }
    for &u in a {
        for &v in b {
            g.insert_edge(u, v);
        }
    }
    Ok(g)
}
