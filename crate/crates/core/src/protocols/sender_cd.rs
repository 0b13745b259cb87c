use crate::engine::{Action, Automaton, NodeRng, Round, RoundFeedback, Status};
use crate::scalar::Probability;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SenderCdPhase {
    /// First round after waking: beep so that sleeping neighbors wake up.
    WakeBeep,
    /// One silent round while neighbors wake up.
    Wait,
    /// Inside step `i` of phase `x`; `exchange` is 1 or 2 and `round` 1..=3.
    Loop {
        x: u32,
        i: u32,
        exchange: u8,
        round: u8,
    },
    Mis,
    Terminated,
}

/// MIS under wake-on-beep with sender-side collision detection.
///
/// Phase `x = 1, 2, ...` consists of steps `i = 0..=x`, each made of two
/// three-round exchanges. In exchange 1 a node beeps in the middle round
/// with probability `2^-i` and becomes a candidate; any beep received during
/// the exchange (including a collision reported to a beeper) cancels the
/// candidacy. In exchange 2 a surviving candidate beeps in the middle round
/// and is in the MIS once the exchange completes; a non-candidate that
/// receives a beep in exchange 2 terminates as inactive. Nodes that are in
/// the MIS or terminated stay silent.
///
/// Three-round exchanges absorb the one-round wakeup skew between
/// neighbors: a neighbor's middle-round beep always lands inside the
/// receiver's copy of the same exchange.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenderCdMis {
    phase: SenderCdPhase,
    candidate: bool,
    heard_in_exchange: bool,
    last: Action,
}

impl Default for SenderCdMis {
    fn default() -> Self {
        Self::new()
    }
}

impl SenderCdMis {
    pub fn new() -> Self {
        SenderCdMis {
            phase: SenderCdPhase::WakeBeep,
            candidate: false,
            heard_in_exchange: false,
            last: Action::Listen,
        }
    }

    pub fn phase(&self) -> SenderCdPhase {
        self.phase
    }

    pub fn candidate(&self) -> bool {
        self.candidate
    }
}

impl Automaton for SenderCdMis {
    fn decide(&mut self, _t: Round, rng: &mut NodeRng) -> Action {
        let action = match self.phase {
            SenderCdPhase::WakeBeep => Action::Beep,
            SenderCdPhase::Loop {
                exchange: 1, round: 1, ..
            } => {
                self.candidate = false;
                self.heard_in_exchange = false;
                Action::Listen
            }
            SenderCdPhase::Loop {
                i, exchange: 1, round: 2, ..
            } => {
                if Probability::inverse_power_of_two(i).sample(rng) {
                    self.candidate = true;
                    Action::Beep
                } else {
                    Action::Listen
                }
            }
            SenderCdPhase::Loop {
                exchange: 2, round: 1, ..
            } => {
                self.heard_in_exchange = false;
                Action::Listen
            }
            SenderCdPhase::Loop {
                exchange: 2, round: 2, ..
            } if self.candidate => Action::Beep,
            _ => Action::Listen,
        };
        self.last = action;
        action
    }

    fn absorb(&mut self, feedback: RoundFeedback, _t: Round, _rng: &mut NodeRng) {
        self.heard_in_exchange |= feedback.heard_beep;
        self.phase = match self.phase {
            SenderCdPhase::WakeBeep => SenderCdPhase::Wait,
            SenderCdPhase::Wait => SenderCdPhase::Loop {
                x: 1,
                i: 0,
                exchange: 1,
                round: 1,
            },
            SenderCdPhase::Loop {
                x,
                i,
                exchange,
                round,
            } if round < 3 => SenderCdPhase::Loop {
                x,
                i,
                exchange,
                round: round + 1,
            },
            SenderCdPhase::Loop { x, i, exchange: 1, .. } => {
                if self.heard_in_exchange {
                    self.candidate = false;
                }
                SenderCdPhase::Loop {
                    x,
                    i,
                    exchange: 2,
                    round: 1,
                }
            }
            SenderCdPhase::Loop { x, i, .. } => {
                if self.candidate {
                    SenderCdPhase::Mis
                } else if self.heard_in_exchange {
                    SenderCdPhase::Terminated
                } else if i < x {
                    SenderCdPhase::Loop {
                        x,
                        i: i + 1,
                        exchange: 1,
                        round: 1,
                    }
                } else {
                    SenderCdPhase::Loop {
                        x: x + 1,
                        i: 0,
                        exchange: 1,
                        round: 1,
                    }
                }
            }
            done @ (SenderCdPhase::Mis | SenderCdPhase::Terminated) => done,
        };
    }

    fn status(&self) -> Status {
        match self.phase {
            SenderCdPhase::Mis => Status::Mis,
            SenderCdPhase::Terminated => Status::Inactive,
            _ => Status::Competing,
        }
    }

    fn beep_probability(&self, _t: Round) -> Option<Probability> {
        Some(match self.phase {
            SenderCdPhase::WakeBeep => Probability::ONE,
            SenderCdPhase::Loop {
                i, exchange: 1, round: 2, ..
            } => Probability::inverse_power_of_two(i),
            SenderCdPhase::Loop {
                exchange: 2, round: 2, ..
            } if self.candidate => Probability::ONE,
            _ => Probability::ZERO,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::node_rng;

    fn run_script(a: &mut SenderCdMis, heard: &[bool]) -> Vec<Action> {
        let mut rng = node_rng(0, 0);
        heard
            .iter()
            .enumerate()
            .map(|(t, &h)| {
                let act = a.decide(t as Round, &mut rng);
                a.absorb(
                    RoundFeedback {
                        heard_beep: h,
                        woke_this_round: t == 0,
                    },
                    t as Round,
                    &mut rng,
                );
                act
            })
            .collect()
    }

    use Action::{Beep as B, Listen as L};

    #[test]
    fn isolated_joins_after_eight_rounds() {
        let mut a = SenderCdMis::new();
        let acts = run_script(&mut a, &[false; 7]);
        assert_eq!(acts, vec![B, L, L, B, L, L, B]);
        assert_eq!(a.status(), Status::Competing);
        run_script(&mut a, &[false]);
        assert_eq!(a.status(), Status::Mis);
        assert_eq!(run_script(&mut a, &[false; 20]), vec![L; 20]);
    }

    #[test]
    fn collision_in_exchange_one_cancels() {
        let mut a = SenderCdMis::new();
        // beep collides in exchange 1, silence in exchange 2 -> next step (x=1, i=1)
        let acts = run_script(&mut a, &[false, false, false, true, false, false, false, false]);
        assert_eq!(acts, vec![B, L, L, B, L, L, L, L]);
        assert_eq!(
            a.phase(),
            SenderCdPhase::Loop {
                x: 1,
                i: 1,
                exchange: 1,
                round: 1
            }
        );
    }

    #[test]
    fn beep_in_exchange_two_terminates() {
        let mut a = SenderCdMis::new();
        // heard in round 1 of exchange 1 -> not candidate; beep in exchange 2 round 3
        run_script(&mut a, &[false, false, true, false, false, false, false, true]);
        assert_eq!(a.phase(), SenderCdPhase::Terminated);
        assert_eq!(a.status(), Status::Inactive);
        assert_eq!(run_script(&mut a, &[true; 10]), vec![L; 10]);
    }

    #[test]
    fn phases_grow() {
        // a node that never becomes a candidate walks i = 0..=x, then x + 1
        let mut a = SenderCdMis::new();
        a.phase = SenderCdPhase::Loop {
            x: 1,
            i: 1,
            exchange: 1,
            round: 1,
        };
        // force loss in every exchange 1 via a heard beep in its first round
        run_script(&mut a, &[true, false, false, false, false, false]);
        assert_eq!(
            a.phase(),
            SenderCdPhase::Loop {
                x: 2,
                i: 0,
                exchange: 1,
                round: 1
            }
        );
    }
}
