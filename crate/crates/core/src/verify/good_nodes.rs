use fixedbitset::FixedBitSet;

use crate::topology::{Graph, NodeId};

fn active_degrees(g: &Graph, active: &FixedBitSet) -> Vec<usize> {
    (0..g.n())
        .map(|u| {
            if active.contains(u) {
                g.neighbors(u).iter().filter(|&&v| active.contains(v)).count()
            } else {
                0
            }
        })
        .collect()
}

fn active_set(g: &Graph, active: &[NodeId]) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(g.n());
    for &u in active {
        if u < g.n() {
            set.insert(u);
        }
    }
    set
}

fn good_flags(g: &Graph, set: &FixedBitSet) -> Vec<bool> {
    let deg = active_degrees(g, set);
    (0..g.n())
        .map(|v| {
            set.contains(v) && {
                let low = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| set.contains(u) && deg[u] <= deg[v])
                    .count();
                3 * low >= deg[v]
            }
        })
        .collect()
}

/// Active nodes `v` with at least `d(v) / 3` active neighbors `u` such that
/// `d(u) <= d(v)`, degrees taken in the subgraph induced by `active`.
pub fn good_nodes(g: &Graph, active: &[NodeId]) -> Vec<NodeId> {
    let set = active_set(g, active);
    good_flags(g, &set)
        .into_iter()
        .enumerate()
        .filter(|(_, good)| *good)
        .map(|(v, _)| v)
        .collect()
}

/// `(good edges, all edges)` of the active subgraph; an edge is good if
/// either endpoint is a good node.
pub fn good_edge_count(g: &Graph, active: &[NodeId]) -> (usize, usize) {
    let set = active_set(g, active);
    let good = good_flags(g, &set);
    let mut total = 0;
    let mut good_edges = 0;
    for (u, v) in g.edges() {
        if set.contains(u) && set.contains(v) {
            total += 1;
            if good[u] || good[v] {
                good_edges += 1;
            }
        }
    }
    (good_edges, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{make_clique, make_gnp, Graph};

    #[test]
    fn regular_graph_all_good() {
        let g = make_clique(6).unwrap();
        let all: Vec<_> = (0..6).collect();
        assert_eq!(good_nodes(&g, &all), all);
    }

    #[test]
    fn star_centre_is_good() {
        // every leaf of the centre has degree 1 <= 5, while a leaf's only
        // neighbor has the larger degree
        let g = Graph::from_edges(6, (1..6).map(|v| (0, v))).unwrap();
        let all: Vec<_> = (0..6).collect();
        assert_eq!(good_nodes(&g, &all), vec![0]);
        assert_eq!(good_edge_count(&g, &all), (5, 5));
    }

    #[test]
    fn respects_active_subgraph() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        // with 2, 3 inactive the star collapses to one edge
        assert_eq!(good_nodes(&g, &[0, 1]), vec![0, 1]);
        assert_eq!(good_edge_count(&g, &[0, 1]), (1, 1));
    }

    #[test]
    fn half_the_edges_are_good_on_random_graphs() {
        for seed in 0..200 {
            let g = make_gnp(12, 0.3, seed).unwrap();
            let all: Vec<_> = (0..12).collect();
            let (good, total) = good_edge_count(&g, &all);
            assert!(2 * good >= total, "seed {seed}: {good}/{total}");
        }
    }
}
