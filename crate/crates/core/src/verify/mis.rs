use fixedbitset::FixedBitSet;

use crate::engine::Status;
use crate::error::{Error, Result};
use crate::topology::{Graph, NodeId};

fn membership(g: &Graph, s: &[NodeId]) -> Result<FixedBitSet> {
    let mut set = FixedBitSet::with_capacity(g.n());
    for &u in s {
        if u >= g.n() {
            return Err(Error::InvalidArgument(format!(
                "node {u} out of range for {} nodes",
                g.n()
            )));
        }
        set.insert(u);
    }
    Ok(set)
}

/// No edge has both endpoints in `s`.
pub fn is_independent(g: &Graph, s: &[NodeId]) -> Result<bool> {
    let set = membership(g, s)?;
    Ok(set
        .ones()
        .all(|u| g.neighbors(u).iter().all(|&v| !set.contains(v))))
}

/// `s` is independent and every node outside it has a neighbor inside it.
pub fn is_mis(g: &Graph, s: &[NodeId]) -> Result<bool> {
    let set = membership(g, s)?;
    let independent = set
        .ones()
        .all(|u| g.neighbors(u).iter().all(|&v| !set.contains(v)));
    Ok(independent
        && (0..g.n()).all(|u| set.contains(u) || g.neighbors(u).iter().any(|&v| set.contains(v))))
}

/// Nodes in the MIS state whose neighbors are all inactive.
fn settled_mis(g: &Graph, statuses: &[Status]) -> Vec<bool> {
    (0..g.n())
        .map(|u| {
            statuses[u] == Status::Mis
                && g.neighbors(u)
                    .iter()
                    .all(|&v| statuses[v] == Status::Inactive)
        })
        .collect()
}

/// Per-node stability: in the MIS with all neighbors inactive, or adjacent
/// to such a node.
pub fn stable_nodes(g: &Graph, statuses: &[Status]) -> Vec<bool> {
    assert_eq!(statuses.len(), g.n(), "statuses must cover every node");
    let settled = settled_mis(g, statuses);
    (0..g.n())
        .map(|u| settled[u] || g.neighbors(u).iter().any(|&v| settled[v]))
        .collect()
}

pub fn is_stable_configuration(g: &Graph, statuses: &[Status]) -> bool {
    stable_nodes(g, statuses).into_iter().all(|s| s)
}

pub fn mis_members(statuses: &[Status]) -> Vec<NodeId> {
    statuses
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == Status::Mis)
        .map(|(u, _)| u)
        .collect()
}
