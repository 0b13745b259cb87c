//! Plain-text edge-list format.
//!
//! ```text
//! n 4
//! 0 1
//! 0 2
//! 1 3
//! # wake 3 2
//! # label 3 U_1
//! ```
//!
//! The first line gives the node count; each following line is one edge
//! `u v` with `u < v`, sorted lexicographically. Scenario files append
//! `# wake <node> <round>` and `# label <node> <string>` lines. Any other
//! line starting with `#` is ignored.

use std::fmt::Write as _;

use super::{Graph, LbScenario};
use crate::engine::Round;
use crate::error::{Error, Result};

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_scenario(s: &LbScenario) -> String {
    let mut out = write_edge_list(&s.graph);
    for (u, w) in s.wakeup.iter().enumerate() {
        let _ = writeln!(out, "# wake {u} {w}");
    }
    for (u, label) in s.group_labels.iter().enumerate() {
        let _ = writeln!(out, "# label {u} {label}");
    }
    out
}

/// Graph plus the optional per-node annotations of a scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub graph: Graph,
    pub wakeup: Vec<Option<Round>>,
    pub labels: Vec<Option<String>>,
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    parse_scenario(text).map(|s| s.graph)
}

pub fn parse_scenario(text: &str) -> Result<ScenarioFile> {
    let mut n = None;
    let mut edges = Vec::new();
    let mut wakes = Vec::new();
    let mut labels = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let mut parts = comment.trim_start().splitn(3, ' ');
            match parts.next() {
                Some("wake") => {
                    let u = parse_num(parts.next(), lineno, "wake node")?;
                    let r = parse_num(parts.next(), lineno, "wake round")?;
                    wakes.push((lineno, u as usize, r));
                }
                Some("label") => {
                    let u = parse_num(parts.next(), lineno, "label node")?;
                    let label = parts
                        .next()
                        .map(str::trim)
                        .filter(|l| !l.is_empty())
                        .ok_or_else(|| Error::parse(lineno, "missing label"))?;
                    labels.push((lineno, u as usize, label.to_string()));
                }
                _ => {}
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        if n.is_none() {
            if parts.next() != Some("n") {
                return Err(Error::parse(lineno, "expected header `n <count>`"));
            }
            n = Some(parse_num(parts.next(), lineno, "node count")? as usize);
            continue;
        }
        let u = parse_num(parts.next(), lineno, "edge endpoint")? as usize;
        let v = parse_num(parts.next(), lineno, "edge endpoint")? as usize;
        if parts.next().is_some() {
            return Err(Error::parse(lineno, "trailing tokens"));
        }
        edges.push((u, v));
    }

    let n = n.ok_or_else(|| Error::parse(1, "missing header `n <count>`"))?;
    let graph = Graph::from_edges(n, edges)?;
    let mut wakeup = vec![None; n];
    for (lineno, u, r) in wakes {
        *wakeup
            .get_mut(u)
            .ok_or_else(|| Error::parse(lineno, format!("node {u} out of range")))? = Some(r);
    }
    let mut label_vec = vec![None; n];
    for (lineno, u, l) in labels {
        *label_vec
            .get_mut(u)
            .ok_or_else(|| Error::parse(lineno, format!("node {u} out of range")))? = Some(l);
    }
    Ok(ScenarioFile {
        graph,
        wakeup,
        labels: label_vec,
    })
}

fn parse_num(tok: Option<&str>, line: usize, what: &str) -> Result<u64> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} `{tok}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{make_gnp, make_lb_case1};
    use proptest::prelude::*;

    #[test]
    fn exact_format() {
        let g = Graph::from_edges(4, [(1, 3), (0, 2), (0, 1)]).unwrap();
        assert_eq!(write_edge_list(&g), "n 4\n0 1\n0 2\n1 3\n");
    }

    #[test]
    fn scenario_round_trip() {
        let s = make_lb_case1(3, 2, 0.9, 2).unwrap();
        let parsed = parse_scenario(&write_scenario(&s)).unwrap();
        assert_eq!(parsed.graph, s.graph);
        assert_eq!(parsed.wakeup, s.wakeup.iter().map(|&w| Some(w)).collect::<Vec<_>>());
        assert_eq!(
            parsed.labels,
            s.group_labels.iter().cloned().map(Some).collect::<Vec<_>>()
        );
    }

    #[test]
    fn parse_errors() {
        assert!(parse_edge_list("0 1\n").is_err());
        assert!(parse_edge_list("n 2\n0 x\n").is_err());
        assert!(parse_edge_list("n 2\n0 5\n").is_err());
        assert!(parse_edge_list("").is_err());
        assert!(parse_scenario("n 2\n# wake 7 1\n").is_err());
    }

    proptest! {
        #[test]
        fn edge_list_round_trip(n in 1usize..30, p in 0.0f64..1.0, seed: u64) {
            let g = make_gnp(n, p, seed).unwrap();
            prop_assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
        }
    }
}
