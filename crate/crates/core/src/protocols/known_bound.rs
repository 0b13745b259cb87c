use crate::engine::{Action, Automaton, NodeRng, Round, RoundFeedback, Status};
use crate::error::{Error, Result};
use crate::scalar::Probability;

use super::ceil_log2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnownBoundMode {
    /// Listening; `left` rounds of the inactivity period remain.
    Inactive { left: u64 },
    /// Competing in `phase` (1-based), `round` rounds into it.
    Competing { phase: u32, round: u64 },
    /// Two-round MIS pattern. `second` is set in the block's second round;
    /// `beep_second` records which half the coin picked.
    Mis { second: bool, beep_second: bool },
}

/// MIS with a known upper bound `N` on the network size.
///
/// After waking, or after hearing any beep while listening, a node listens
/// for `c log^2 N` rounds. It then competes for `log N` phases of `c log N`
/// rounds, beeping in phase `i` with probability `2^i / 8N`. A node that gets
/// through all phases without hearing a beep is in the MIS and from then on
/// repeats two-round blocks, beeping in the first or the second round of
/// each block with equal probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownBoundMis {
    n_bound: u64,
    log_n: u32,
    inactive_len: u64,
    phase_len: u64,
    mode: KnownBoundMode,
    last: Action,
}

impl KnownBoundMis {
    pub const DEFAULT_C: u64 = 2;

    pub fn new(n_bound: u64, c: u64) -> Result<Self> {
        if n_bound == 0 {
            return Err(Error::InvalidParameter("N must be positive".into()));
        }
        if c == 0 {
            return Err(Error::InvalidParameter("c must be positive".into()));
        }
        // N = 1 would give zero phases; treat it as N = 2.
        let log_n = ceil_log2(n_bound).max(1);
        let inactive_len = c * u64::from(log_n) * u64::from(log_n);
        Ok(KnownBoundMis {
            n_bound,
            log_n,
            inactive_len,
            phase_len: c * u64::from(log_n),
            mode: KnownBoundMode::Inactive { left: inactive_len },
            last: Action::Listen,
        })
    }

    pub fn mode(&self) -> KnownBoundMode {
        self.mode
    }

    pub fn inactive_len(&self) -> u64 {
        self.inactive_len
    }

    pub fn phase_len(&self) -> u64 {
        self.phase_len
    }

    pub fn phases(&self) -> u32 {
        self.log_n
    }

    /// `2^phase / 8N`.
    pub fn phase_probability(&self, phase: u32) -> Probability {
        Probability::new(1 << phase, 8 * self.n_bound).expect("2^phase <= 2N < 8N")
    }

    fn restart(&mut self) {
        self.mode = KnownBoundMode::Inactive {
            left: self.inactive_len,
        };
    }
}

impl Automaton for KnownBoundMis {
    fn decide(&mut self, _t: Round, rng: &mut NodeRng) -> Action {
        let action = match &mut self.mode {
            KnownBoundMode::Inactive { .. } => Action::Listen,
            KnownBoundMode::Competing { phase, .. } => {
                let phase = *phase;
                if self.phase_probability(phase).sample(rng) {
                    Action::Beep
                } else {
                    Action::Listen
                }
            }
            KnownBoundMode::Mis {
                second: false,
                beep_second,
            } => {
                *beep_second = !Probability::HALF.sample(rng);
                if *beep_second {
                    Action::Listen
                } else {
                    Action::Beep
                }
            }
            KnownBoundMode::Mis {
                second: true,
                beep_second,
            } => {
                if *beep_second {
                    Action::Beep
                } else {
                    Action::Listen
                }
            }
        };
        self.last = action;
        action
    }

    fn absorb(&mut self, feedback: RoundFeedback, _t: Round, _rng: &mut NodeRng) {
        if self.last == Action::Listen && feedback.heard_beep {
            self.restart();
            return;
        }
        self.mode = match self.mode {
            KnownBoundMode::Inactive { left } if left > 1 => {
                KnownBoundMode::Inactive { left: left - 1 }
            }
            KnownBoundMode::Inactive { .. } => KnownBoundMode::Competing { phase: 1, round: 0 },
            KnownBoundMode::Competing { phase, round } => {
                if round + 1 < self.phase_len {
                    KnownBoundMode::Competing {
                        phase,
                        round: round + 1,
                    }
                } else if phase < self.log_n {
                    KnownBoundMode::Competing {
                        phase: phase + 1,
                        round: 0,
                    }
                } else {
                    KnownBoundMode::Mis {
                        second: false,
                        beep_second: false,
                    }
                }
            }
            KnownBoundMode::Mis {
                second,
                beep_second,
            } => KnownBoundMode::Mis {
                second: !second,
                beep_second,
            },
        };
    }

    fn status(&self) -> Status {
        match self.mode {
            KnownBoundMode::Inactive { .. } => Status::Inactive,
            KnownBoundMode::Competing { .. } => Status::Competing,
            KnownBoundMode::Mis { .. } => Status::Mis,
        }
    }

    fn beep_probability(&self, _t: Round) -> Option<Probability> {
        Some(match self.mode {
            KnownBoundMode::Competing { phase, .. } => self.phase_probability(phase),
            _ => Probability::ZERO,
        })
    }
}
