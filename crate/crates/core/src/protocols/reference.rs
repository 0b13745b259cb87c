use crate::engine::{Action, Automaton, NodeRng, Round, RoundFeedback, Status};
use crate::error::{Error, Result};
use crate::scalar::Probability;

/// What a [`SilenceBeeper`] does once it has heard a beep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AfterBeep {
    SilentForever,
    /// Beep with probability `p_prime` in every participating round `>= m`.
    BeepAfter { m: u64, p_prime: Probability },
}

/// Reference automaton for replaying the lower-bound executions.
///
/// Any algorithm run by a node that hears only silence either never beeps or
/// first beeps with some probability `p` in some round `ell`. This automaton
/// is that behavior: it listens, and from its `ell`-th participating round on
/// beeps with probability `p` for as long as it has heard nothing. Once it
/// hears a beep it switches to the [`AfterBeep`] rule.
#[derive(Debug, Clone, PartialEq)]
pub struct SilenceBeeper {
    ell: u64,
    p: Probability,
    after_beep: AfterBeep,
    rounds: u64,
    heard: bool,
    last: Action,
}

impl SilenceBeeper {
    pub fn new(ell: u64, p: f64, after_beep: AfterBeep) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidParameter("ell must be at least 1".into()));
        }
        if !(p > 0.0) {
            return Err(Error::InvalidParameter(format!("p = {p} must be positive")));
        }
        if let AfterBeep::BeepAfter { m, .. } = after_beep {
            if m == 0 {
                return Err(Error::InvalidParameter("m must be at least 1".into()));
            }
        }
        Ok(SilenceBeeper {
            ell,
            p: Probability::from_f64(p)?,
            after_beep,
            rounds: 0,
            heard: false,
            last: Action::Listen,
        })
    }

    pub fn heard_beep(&self) -> bool {
        self.heard
    }
}

impl Automaton for SilenceBeeper {
    fn decide(&mut self, _t: Round, rng: &mut NodeRng) -> Action {
        self.rounds += 1;
        let beep = if !self.heard {
            self.rounds >= self.ell && self.p.sample(rng)
        } else {
            match self.after_beep {
                AfterBeep::SilentForever => false,
                AfterBeep::BeepAfter { m, p_prime } => self.rounds >= m && p_prime.sample(rng),
            }
        };
        self.last = if beep { Action::Beep } else { Action::Listen };
        self.last
    }

    fn absorb(&mut self, feedback: RoundFeedback, _t: Round, _rng: &mut NodeRng) {
        if self.last == Action::Listen && feedback.heard_beep {
            self.heard = true;
        }
    }

    fn status(&self) -> Status {
        match (self.heard, self.after_beep) {
            (true, AfterBeep::SilentForever) => Status::Inactive,
            _ => Status::Competing,
        }
    }
}
