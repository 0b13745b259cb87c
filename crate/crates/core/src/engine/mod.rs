//! Round-by-round execution of the beeping model.
//!
//! In every round each participating node either beeps or listens. A
//! listener learns only whether at least one participating neighbor beeped;
//! a beeper learns nothing under [`FeedbackMode::Plain`] and whether some
//! neighbor beeped concurrently under [`FeedbackMode::SenderCd`]. A node
//! never hears its own beep.
//!
//! Round `t` proceeds as:
//!
//! 1. nodes whose adversarial wake round is `t`, and nodes woken by a beep in
//!    round `t - 1`, start participating;
//! 2. every participating automaton picks an action;
//! 3. beeps are propagated simultaneously, with no intra-round order;
//! 4. feedback is delivered according to the feedback mode;
//! 5. under [`WakeMode::WakeOnBeep`] sleeping nodes with a beeping neighbor
//!    are scheduled to participate from `t + 1`;
//! 6. automata absorb their feedback;
//! 7. the round is recorded and `t` advances.
//!
//! A wake round `w` means the node's first action happens in round `w`.

mod rng;
mod sim;
mod trace;

pub use rng::{node_rng, NodeRng};
pub use sim::Simulation;
pub use trace::{observation_history, Observation, RoundTrace, Trace};

use crate::error::{Error, Result};
use crate::scalar::Probability;

pub type Round = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Beep,
    Listen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Sleeping,
    Inactive,
    Competing,
    Mis,
}

impl Status {
    pub fn code(self) -> char {
        match self {
            Status::Sleeping => 'S',
            Status::Inactive => 'I',
            Status::Competing => 'C',
            Status::Mis => 'M',
        }
    }

    pub fn from_code(c: char) -> Option<Self> {
        Some(match c {
            'S' => Status::Sleeping,
            'I' => Status::Inactive,
            'C' => Status::Competing,
            'M' => Status::Mis,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RoundFeedback {
    /// Listener: some neighbor beeped. Beeper: some neighbor beeped too
    /// (sender-side collision detection only; always false otherwise).
    pub heard_beep: bool,
    /// This is the node's first participating round.
    pub woke_this_round: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeedbackMode {
    #[default]
    Plain,
    SenderCd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WakeMode {
    #[default]
    AdversarialOnly,
    WakeOnBeep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EngineConfig {
    pub feedback: FeedbackMode,
    pub wake: WakeMode,
}

impl EngineConfig {
    pub fn new(feedback: FeedbackMode, wake: WakeMode) -> Self {
        EngineConfig { feedback, wake }
    }
}

/// Per-node adversarial wake round; `None` means never woken by the adversary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WakeupSchedule {
    wake_round: Vec<Option<Round>>,
}

impl WakeupSchedule {
    pub fn new(wake_round: Vec<Option<Round>>) -> Self {
        WakeupSchedule { wake_round }
    }

    pub fn from_rounds(rounds: &[Round]) -> Self {
        WakeupSchedule {
            wake_round: rounds.iter().copied().map(Some).collect(),
        }
    }

    pub fn all_at(n: usize, round: Round) -> Self {
        WakeupSchedule {
            wake_round: vec![Some(round); n],
        }
    }

    /// Node `u` wakes at `u * stride`.
    pub fn staggered(n: usize, stride: Round) -> Self {
        WakeupSchedule {
            wake_round: (0..n as Round).map(|u| Some(u * stride)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.wake_round.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wake_round.is_empty()
    }

    pub fn wake_round(&self, u: usize) -> Option<Round> {
        self.wake_round[u]
    }

    pub fn rounds(&self) -> &[Option<Round>] {
        &self.wake_round
    }

    pub(crate) fn check(&self, n: usize, mode: WakeMode) -> Result<()> {
        if self.wake_round.len() != n {
            return Err(Error::Config(format!(
                "wakeup schedule covers {} nodes, graph has {n}",
                self.wake_round.len()
            )));
        }
        if mode == WakeMode::AdversarialOnly {
            if let Some(u) = self.wake_round.iter().position(Option::is_none) {
                return Err(Error::Config(format!(
                    "node {u} is never woken and wake-on-beep is disabled"
                )));
            }
        }
        Ok(())
    }
}

/// A node protocol driven by the engine.
///
/// Each participating round the engine calls [`decide`](Automaton::decide)
/// and then [`absorb`](Automaton::absorb) with the resulting feedback.
/// [`status`](Automaton::status) is read after `absorb` and is used for
/// verification only.
pub trait Automaton {
    fn decide(&mut self, t: Round, rng: &mut NodeRng) -> Action;

    fn absorb(&mut self, feedback: RoundFeedback, t: Round, rng: &mut NodeRng);

    fn status(&self) -> Status;

    /// Protocol-specific counters, e.g. `("k", 12)`.
    fn diagnostics(&self) -> &[(&'static str, u64)] {
        &[]
    }

    /// Probability of beeping in round `t` as part of a competition, read
    /// before `decide`. `None` if the protocol does not expose it.
    fn beep_probability(&self, _t: Round) -> Option<Probability> {
        None
    }
}

impl<T: Automaton + ?Sized> Automaton for Box<T> {
    fn decide(&mut self, t: Round, rng: &mut NodeRng) -> Action {
        (**self).decide(t, rng)
    }

    fn absorb(&mut self, feedback: RoundFeedback, t: Round, rng: &mut NodeRng) {
        (**self).absorb(feedback, t, rng)
    }

    fn status(&self) -> Status {
        (**self).status()
    }

    fn diagnostics(&self) -> &[(&'static str, u64)] {
        (**self).diagnostics()
    }

    fn beep_probability(&self, t: Round) -> Option<Probability> {
        (**self).beep_probability(t)
    }
}
