use rand::Rng;

use crate::engine::{Action, Automaton, NodeRng, Round, RoundFeedback, Status};
use crate::error::{Error, Result};
use crate::scalar::Probability;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    WakeBeep,
    Wait,
    Loop,
}

/// MIS under wake-on-beep without sender-side collision detection.
///
/// The single candidacy exchange of the collision-detection variant is
/// replaced by `c * x` competition exchanges per step. At the start of step
/// `i` an uninhibited non-candidate becomes a candidate with probability
/// `2^-i`, and every node draws a random bit vector `X` of length `c * x`
/// with at least one set entry. In competition exchange `k` a candidate with
/// `X[k] = 1` beeps in the middle round; any other node listens. A beep heard
/// in any round of an exchange cancels the candidacy and inhibits the node
/// for the next step.
///
/// Inhibiting on a third-round beep matters when neighbors are one round out
/// of step: the node that is ahead hears the other's middle-round beep only in
/// its own third round. Without inhibition it recandidates at `i = 0` of every
/// phase and can unseat an MIS neighbor that is one round behind.
///
/// A candidate that survives a whole step is reported as in the MIS. It keeps
/// its candidacy, and so keeps beeping in at least one exchange per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WakeOnBeepMis {
    c: u32,
    stage: Stage,
    x: u32,
    i: u32,
    step_pending: bool,
    schedule: Vec<bool>,
    exchange: usize,
    round: u8,
    candidate: bool,
    inhibited: bool,
    joined: bool,
    last: Action,
}

impl WakeOnBeepMis {
    pub const DEFAULT_C: u32 = 3;

    pub fn new(c: u32) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidParameter("c must be positive".into()));
        }
        Ok(WakeOnBeepMis {
            c,
            stage: Stage::WakeBeep,
            x: 0,
            i: 0,
            step_pending: false,
            schedule: Vec::new(),
            exchange: 0,
            round: 1,
            candidate: false,
            inhibited: false,
            joined: false,
            last: Action::Listen,
        })
    }

    /// A node already in the main loop, about to start step `i` of phase `x`.
    pub fn at_step(c: u32, x: u32, i: u32, candidate: bool, inhibited: bool) -> Result<Self> {
        if x == 0 || i > x {
            return Err(Error::InvalidParameter(format!("step {i} of phase {x}")));
        }
        let mut a = Self::new(c)?;
        a.stage = Stage::Loop;
        a.x = x;
        a.i = i;
        a.step_pending = true;
        a.candidate = candidate;
        a.inhibited = inhibited;
        Ok(a)
    }

    pub fn phase(&self) -> u32 {
        self.x
    }

    pub fn step_index(&self) -> u32 {
        self.i
    }

    /// Zero-based competition exchange that the next round belongs to.
    pub fn exchange_index(&self) -> usize {
        if self.step_pending {
            0
        } else {
            self.exchange
        }
    }

    pub fn exchanges_per_step(&self) -> usize {
        (self.c * self.x) as usize
    }

    pub fn candidate(&self) -> bool {
        self.candidate
    }

    pub fn inhibited(&self) -> bool {
        self.inhibited
    }

    pub fn in_loop(&self) -> bool {
        self.stage == Stage::Loop
    }

    /// Beep schedule `X` of the current step.
    pub fn schedule(&self) -> &[bool] {
        &self.schedule
    }

    fn begin_step(&mut self, rng: &mut NodeRng) {
        if !self.candidate && !self.inhibited {
            self.candidate = Probability::inverse_power_of_two(self.i).sample(rng);
        }
        let len = self.exchanges_per_step();
        self.schedule.clear();
        self.schedule.extend((0..len).map(|_| rng.gen::<bool>()));
        let forced = rng.gen_range(0..len);
        self.schedule[forced] = true;
        self.inhibited = false;
        self.exchange = 0;
        self.round = 1;
        self.step_pending = false;
    }

    fn lose(&mut self) {
        self.candidate = false;
        self.joined = false;
        self.inhibited = true;
    }
}

impl Automaton for WakeOnBeepMis {
    fn decide(&mut self, _t: Round, rng: &mut NodeRng) -> Action {
        let action = match self.stage {
            Stage::WakeBeep => Action::Beep,
            Stage::Wait => Action::Listen,
            Stage::Loop => {
                if self.step_pending {
                    self.begin_step(rng);
                }
                if self.round == 2 && self.candidate && self.schedule[self.exchange] {
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
        match self.stage {
            Stage::WakeBeep => self.stage = Stage::Wait,
            Stage::Wait => {
                self.stage = Stage::Loop;
                self.x = 1;
                self.i = 0;
                self.step_pending = true;
            }
            Stage::Loop => {
                let heard = self.last == Action::Listen && feedback.heard_beep;
                if heard {
                    self.lose();
                }
                if self.round < 3 {
                    self.round += 1;
                    return;
                }
                self.round = 1;
                self.exchange += 1;
                if self.exchange < self.exchanges_per_step() {
                    return;
                }
                self.joined = self.candidate;
                if self.i < self.x {
                    self.i += 1;
                } else {
                    self.x += 1;
                    self.i = 0;
                }
                self.step_pending = true;
            }
        }
    }

    fn status(&self) -> Status {
        match self.stage {
            Stage::WakeBeep | Stage::Wait => Status::Competing,
            Stage::Loop if self.candidate && self.joined => Status::Mis,
            Stage::Loop if self.candidate => Status::Competing,
            Stage::Loop => Status::Inactive,
        }
    }
}
