//! MIS node automata.
//!
//! | name   | type                 | model assumptions                              |
//! |--------|----------------------|------------------------------------------------|
//! | `alg1` | [`KnownBoundMis`]    | upper bound `N >= n` known to every node        |
//! | `alg2` | [`SenderCdMis`]      | wake-on-beep, sender-side collision detection   |
//! | `alg3` | [`WakeOnBeepMis`]    | wake-on-beep only                               |
//! | `alg4` | [`SyncClockMis`]     | globally synchronized round counter             |
//!
//! [`SilenceBeeper`] is not an MIS protocol; it replays the executions used
//! in the lower-bound constructions.
//!
//! All logarithms are `ceil(log2(.))`.

mod known_bound;
mod reference;
mod sender_cd;
mod sync_clock;
mod wake_on_beep;

pub use known_bound::{KnownBoundMis, KnownBoundMode};
pub use reference::{AfterBeep, SilenceBeeper};
pub use sender_cd::{SenderCdMis, SenderCdPhase};
pub use sync_clock::{SyncClockMis, SyncClockState};
pub use wake_on_beep::WakeOnBeepMis;

use std::fmt;
use std::str::FromStr;

use crate::engine::{Automaton, EngineConfig, FeedbackMode, WakeMode};
use crate::error::Error;

/// `ceil(log2(x))`, with `ceil_log2(0) = ceil_log2(1) = 0`.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProtocolKind {
    Alg1,
    Alg2,
    Alg3,
    Alg4,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 4] = [
        ProtocolKind::Alg1,
        ProtocolKind::Alg2,
        ProtocolKind::Alg3,
        ProtocolKind::Alg4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Alg1 => "alg1",
            ProtocolKind::Alg2 => "alg2",
            ProtocolKind::Alg3 => "alg3",
            ProtocolKind::Alg4 => "alg4",
        }
    }

    /// The model each protocol is designed for.
    pub fn engine_config(self) -> EngineConfig {
        match self {
            ProtocolKind::Alg1 | ProtocolKind::Alg4 => {
                EngineConfig::new(FeedbackMode::Plain, WakeMode::AdversarialOnly)
            }
            ProtocolKind::Alg2 => EngineConfig::new(FeedbackMode::SenderCd, WakeMode::WakeOnBeep),
            ProtocolKind::Alg3 => EngineConfig::new(FeedbackMode::Plain, WakeMode::WakeOnBeep),
        }
    }

    /// A fresh automaton. `n_bound` is required by `alg1`; `c` falls back to
    /// the protocol default and is ignored by `alg2` and `alg4`.
    pub fn build(self, n_bound: Option<u64>, c: Option<u64>) -> Result<Box<dyn Automaton + Send>, Error> {
        Ok(match self {
            ProtocolKind::Alg1 => {
                let n_bound = n_bound
                    .ok_or_else(|| Error::Config("alg1 needs the size bound N".into()))?;
                Box::new(KnownBoundMis::new(n_bound, c.unwrap_or(KnownBoundMis::DEFAULT_C))?)
            }
            ProtocolKind::Alg2 => Box::new(SenderCdMis::new()),
            ProtocolKind::Alg3 => {
                let c = c.unwrap_or(u64::from(WakeOnBeepMis::DEFAULT_C));
                let c = u32::try_from(c)
                    .map_err(|_| Error::InvalidParameter(format!("c = {c} too large")))?;
                Box::new(WakeOnBeepMis::new(c)?)
            }
            ProtocolKind::Alg4 => Box::new(SyncClockMis::new()),
        })
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alg1" => Ok(ProtocolKind::Alg1),
            "alg2" => Ok(ProtocolKind::Alg2),
            "alg3" => Ok(ProtocolKind::Alg3),
            "alg4" => Ok(ProtocolKind::Alg4),
            other => Err(Error::Config(format!("unknown algorithm `{other}`"))),
        }
    }
}
