use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use super::{Action, FeedbackMode, Round, RoundFeedback, Status};
use crate::error::{Error, Result};
use crate::topology::NodeId;

/// Everything observable about one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrace {
    pub t: Round,
    /// Participating nodes.
    pub awake: FixedBitSet,
    pub beeped: FixedBitSet,
    /// `heard_beep` of each participating node's feedback.
    pub heard: FixedBitSet,
    /// Nodes whose first participating round is `t`.
    pub woke: FixedBitSet,
    /// Statuses that differ from the previous round, in node order.
    pub status_changes: Vec<(NodeId, Status)>,
}

impl RoundTrace {
    pub(crate) fn empty(n: usize) -> Self {
        RoundTrace {
            t: 0,
            awake: FixedBitSet::with_capacity(n),
            beeped: FixedBitSet::with_capacity(n),
            heard: FixedBitSet::with_capacity(n),
            woke: FixedBitSet::with_capacity(n),
            status_changes: Vec::new(),
        }
    }

    pub fn action(&self, u: NodeId) -> Option<Action> {
        if !self.awake.contains(u) {
            None
        } else if self.beeped.contains(u) {
            Some(Action::Beep)
        } else {
            Some(Action::Listen)
        }
    }

    pub fn feedback(&self, u: NodeId) -> Option<RoundFeedback> {
        self.awake.contains(u).then(|| RoundFeedback {
            heard_beep: self.heard.contains(u),
            woke_this_round: self.woke.contains(u),
        })
    }
}

/// A recorded run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub n: usize,
    pub feedback: FeedbackMode,
    pub rounds: Vec<RoundTrace>,
}

impl Trace {
    pub fn new(n: usize, feedback: FeedbackMode) -> Self {
        Trace {
            n,
            feedback,
            rounds: Vec::new(),
        }
    }

    pub fn push(&mut self, round: RoundTrace) {
        self.rounds.push(round);
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Calls `f(t, statuses)` with the full status vector after every round.
    pub fn for_each_statuses(&self, mut f: impl FnMut(Round, &[Status])) {
        let mut statuses = vec![Status::Sleeping; self.n];
        for round in &self.rounds {
            for &(u, s) in &round.status_changes {
                statuses[u] = s;
            }
            f(round.t, &statuses);
        }
    }

    pub fn final_statuses(&self) -> Vec<Status> {
        let mut statuses = vec![Status::Sleeping; self.n];
        for round in &self.rounds {
            for &(u, s) in &round.status_changes {
                statuses[u] = s;
            }
        }
        statuses
    }

    /// Line-delimited text form.
    ///
    /// ```text
    /// # beepnet-trace n=3 feedback=plain
    /// t=0 actions=1.1.1 heard=2.1 statuses=0:C,1:C,2:C
    /// t=1 actions=3 heard=3 statuses=-
    /// ```
    ///
    /// `actions` and `heard` are bit strings over node ids (1 = beeped /
    /// heard a beep), run-length encoded as alternating run lengths starting
    /// with a run of zeros. `statuses` lists only nodes whose status changed;
    /// a node participates exactly when its status is not `S`.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# beepnet-trace n={} feedback={}\n",
            self.n,
            match self.feedback {
                FeedbackMode::Plain => "plain",
                FeedbackMode::SenderCd => "sender-cd",
            }
        );
        for round in &self.rounds {
            let _ = write!(
                out,
                "t={} actions={} heard={} statuses=",
                round.t,
                rle_encode(&round.beeped, self.n),
                rle_encode(&round.heard, self.n)
            );
            if round.status_changes.is_empty() {
                out.push('-');
            } else {
                for (idx, (u, s)) in round.status_changes.iter().enumerate() {
                    if idx > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{u}:{}", s.code());
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Trace> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty trace"))?;
        let mut n = None;
        let mut feedback = None;
        for field in header
            .strip_prefix("# beepnet-trace")
            .ok_or_else(|| Error::parse(1, "missing trace header"))?
            .split_whitespace()
        {
            match field.split_once('=') {
                Some(("n", v)) => {
                    n = Some(v.parse().map_err(|_| Error::parse(1, "bad n"))?);
                }
                Some(("feedback", "plain")) => feedback = Some(FeedbackMode::Plain),
                Some(("feedback", "sender-cd")) => feedback = Some(FeedbackMode::SenderCd),
                _ => return Err(Error::parse(1, format!("unknown header field `{field}`"))),
            }
        }
        let n: usize = n.ok_or_else(|| Error::parse(1, "header lacks n"))?;
        let feedback = feedback.ok_or_else(|| Error::parse(1, "header lacks feedback"))?;

        let mut trace = Trace::new(n, feedback);
        let mut awake = FixedBitSet::with_capacity(n);
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut take = |name: &str| -> Result<&str> {
                fields
                    .next()
                    .and_then(|f| f.strip_prefix(name))
                    .and_then(|f| f.strip_prefix('='))
                    .ok_or_else(|| Error::parse(lineno, format!("expected field `{name}`")))
            };
            let t: Round = take("t")?
                .parse()
                .map_err(|_| Error::parse(lineno, "bad round"))?;
            let beeped = rle_decode(take("actions")?, n).map_err(|m| Error::parse(lineno, m))?;
            let heard = rle_decode(take("heard")?, n).map_err(|m| Error::parse(lineno, m))?;
            let statuses = take("statuses")?;
            let mut changes = Vec::new();
            if statuses != "-" {
                for item in statuses.split(',') {
                    let (u, code) = item
                        .split_once(':')
                        .ok_or_else(|| Error::parse(lineno, format!("bad status `{item}`")))?;
                    let u: NodeId = u
                        .parse()
                        .ok()
                        .filter(|&u| u < n)
                        .ok_or_else(|| Error::parse(lineno, format!("bad node `{u}`")))?;
                    let mut chars = code.chars();
                    let status = match (chars.next(), chars.next()) {
                        (Some(c), None) => Status::from_code(c),
                        _ => None,
                    }
                    .ok_or_else(|| Error::parse(lineno, format!("bad status code `{code}`")))?;
                    changes.push((u, status));
                }
            }
            let mut woke = FixedBitSet::with_capacity(n);
            for &(u, s) in &changes {
                if s != Status::Sleeping && !awake.contains(u) {
                    awake.insert(u);
                    woke.insert(u);
                }
            }
            trace.push(RoundTrace {
                t,
                awake: awake.clone(),
                beeped,
                heard,
                woke,
                status_changes: changes,
            });
        }
        Ok(trace)
    }
}

fn rle_encode(bits: &FixedBitSet, n: usize) -> String {
    let mut out = String::new();
    let mut current = false;
    let mut run = 0usize;
    for u in 0..n {
        let bit = bits.contains(u);
        if bit != current {
            let _ = write!(out, "{run}.");
            current = bit;
            run = 0;
        }
        run += 1;
    }
    let _ = write!(out, "{run}");
    out
}

fn rle_decode(text: &str, n: usize) -> std::result::Result<FixedBitSet, String> {
    let mut bits = FixedBitSet::with_capacity(n);
    let mut pos = 0usize;
    let mut bit = false;
    for part in text.split('.') {
        let run: usize = part
            .parse()
            .map_err(|_| format!("bad run length `{part}`"))?;
        if pos + run > n {
            return Err(format!("bit string `{text}` longer than {n}"));
        }
        if bit {
            bits.insert_range(pos..pos + run);
        }
        pos += run;
        bit = !bit;
    }
    if pos != n {
        return Err(format!("bit string `{text}` covers {pos} of {n} nodes"));
    }
    Ok(bits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observation {
    Beeped,
    Heard,
    Silence,
}

/// What `node` saw in each round from its first participating round on.
/// Empty if the node never woke.
pub fn observation_history(trace: &Trace, node: NodeId) -> Vec<Observation> {
    trace
        .rounds
        .iter()
        .filter(|r| r.awake.contains(node))
        .map(|r| {
            if r.beeped.contains(node) {
                Observation::Beeped
            } else if r.heard.contains(node) {
                Observation::Heard
            } else {
                Observation::Silence
            }
        })
        .collect()
}
