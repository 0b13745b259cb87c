//! Adversarial graph families and wakeup schedules from the polynomial
//! lower-bound argument for uniform algorithms.
//!
//! Both families are unions of cliques joined by complete bipartite
//! connections. Node ids are assigned in construction order and every node
//! carries the name of its (sub-)clique, e.g. `C_2(3)` or `U_5`.

use std::collections::BTreeMap;

use super::{connect_bipartite, Graph, NodeId};
use crate::engine::Round;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LbParams {
    /// Clique-count parameter.
    pub k: usize,
    /// Nodes per (sub-)clique; stands in for the asymptotic clique size.
    pub clique_scale: usize,
    /// Listening prefix before a silence-hearing node may beep.
    pub ell: u64,
    /// Beep probability after `ell` rounds of silence.
    pub p: f64,
    /// Rounds before a collision-hearing node may beep (case 2 only).
    pub m: Option<u64>,
    /// Beep probability after `m` rounds of collisions (case 2 only).
    pub p_prime: Option<f64>,
    /// `floor(k / 4)`.
    pub q: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LbScenario {
    pub graph: Graph,
    pub wakeup: Vec<Round>,
    pub group_labels: Vec<String>,
    pub params: LbParams,
}

impl LbScenario {
    /// Members of every group, keyed by label.
    pub fn groups(&self) -> BTreeMap<&str, Vec<NodeId>> {
        let mut out: BTreeMap<&str, Vec<NodeId>> = BTreeMap::new();
        for (u, label) in self.group_labels.iter().enumerate() {
            out.entry(label.as_str()).or_default().push(u);
        }
        out
    }

    /// Groups whose label names a `U` clique.
    pub fn u_groups(&self) -> Vec<Vec<NodeId>> {
        self.groups()
            .into_iter()
            .filter(|(label, _)| label.starts_with('U'))
            .map(|(_, members)| members)
            .collect()
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("{name} = {p} must lie in (0, 1]")));
    }
    Ok(())
}

fn add_clique(g: &mut Graph, members: &[NodeId]) {
    for (idx, &u) in members.iter().enumerate() {
        for &v in &members[idx + 1..] {
            g.insert_edge(u, v);
        }
    }
}

/// Case 1: nodes that hear only collisions stay silent forever.
///
/// `k - 1` cliques `C_i`, each split into `k` sub-cliques `C_i(j)`, and `k`
/// cliques `U_j`; `U_j` is fully joined to `C_i(j)` for every `i`. `C_i`
/// wakes at round `i`, all `U_j` at round `ell`.
pub fn make_lb_case1(k: usize, clique_scale: usize, p: f64, ell: u64) -> Result<LbScenario> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k = {k} must be at least 2")));
    }
    if clique_scale == 0 {
        return Err(Error::InvalidParameter("clique_scale must be positive".into()));
    }
    if ell == 0 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    check_probability("p", p)?;

    let s = clique_scale;
    let n = (k - 1) * k * s + k * s;
    let mut wakeup = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    // sub_clique[i-1][j-1] = node ids of C_i(j)
    let mut sub_clique = vec![vec![Vec::new(); k]; k - 1];
    let mut next = 0;
    for (i, row) in sub_clique.iter_mut().enumerate() {
        for (j, members) in row.iter_mut().enumerate() {
            for _ in 0..s {
                members.push(next);
                wakeup.push(i as Round + 1);
                labels.push(format!("C_{}({})", i + 1, j + 1));
                next += 1;
            }
        }
    }
    let mut u_cliques = vec![Vec::new(); k];
    for (j, members) in u_cliques.iter_mut().enumerate() {
        for _ in 0..s {
            members.push(next);
            wakeup.push(ell);
            labels.push(format!("U_{}", j + 1));
            next += 1;
        }
    }

    let mut g = Graph::empty(n);
    for row in &sub_clique {
        let whole: Vec<NodeId> = row.iter().flatten().copied().collect();
        add_clique(&mut g, &whole);
    }
    for members in &u_cliques {
        add_clique(&mut g, members);
    }
    for (j, u_members) in u_cliques.iter().enumerate() {
        for row in &sub_clique {
            g = connect_bipartite(g, u_members, &row[j])?;
        }
    }
    g.validate()?;

    Ok(LbScenario {
        graph: g,
        wakeup,
        group_labels: labels,
        params: LbParams {
            k,
            clique_scale,
            ell,
            p,
            m: None,
            p_prime: None,
            q: k / 4,
        },
    })
}

/// Case 2: nodes that hear only collisions beep with probability `p_prime`
/// after `m` rounds.
///
/// `k` cliques `U_j` and `m - 1` cliques `C_h`. `U_j` is joined to `U_i` for
/// `i` in `max(1, j - q)..j` and, when `j < m`, to every existing `C_h` with
/// `h >= j`. `C_i` wakes at round `i`, `U_j` at round `ell + j`.
pub fn make_lb_case2(
    k: usize,
    clique_scale: usize,
    p: f64,
    p_prime: f64,
    ell: u64,
    m: u64,
) -> Result<LbScenario> {
    if k < 8 {
        return Err(Error::InvalidParameter(format!("k = {k} must be at least 8")));
    }
    if m < 2 {
        return Err(Error::InvalidParameter(format!("m = {m} must be at least 2")));
    }
    if clique_scale == 0 {
        return Err(Error::InvalidParameter("clique_scale must be positive".into()));
    }
    if ell == 0 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    check_probability("p", p)?;
    check_probability("p_prime", p_prime)?;

    let s = clique_scale;
    let q = k / 4;
    let c_count = (m - 1) as usize;
    let n = k * s + c_count * s;
    let mut wakeup = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut next = 0;
    let mut u_cliques = vec![Vec::new(); k];
    for (j, members) in u_cliques.iter_mut().enumerate() {
        for _ in 0..s {
            members.push(next);
            wakeup.push(ell + j as Round + 1);
            labels.push(format!("U_{}", j + 1));
            next += 1;
        }
    }
    let mut c_cliques = vec![Vec::new(); c_count];
    for (h, members) in c_cliques.iter_mut().enumerate() {
        for _ in 0..s {
            members.push(next);
            wakeup.push(h as Round + 1);
            labels.push(format!("C_{}", h + 1));
            next += 1;
        }
    }

    let mut g = Graph::empty(n);
    for members in u_cliques.iter().chain(&c_cliques) {
        add_clique(&mut g, members);
    }
    for j in 1..=k {
        for i in j.saturating_sub(q).max(1)..j {
            g = connect_bipartite(g, &u_cliques[j - 1], &u_cliques[i - 1])?;
        }
        if (j as u64) < m {
            for h in j..=c_count {
                g = connect_bipartite(g, &u_cliques[j - 1], &c_cliques[h - 1])?;
            }
        }
    }
    g.validate()?;

    Ok(LbScenario {
        graph: g,
        wakeup,
        group_labels: labels,
        params: LbParams {
            k,
            clique_scale,
            ell,
            p,
            m: Some(m),
            p_prime: Some(p_prime),
            q,
        },
    })
}
