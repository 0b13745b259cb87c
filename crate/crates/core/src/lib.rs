//! Deterministic, seedable simulator of the synchronous beeping network model.
//!
//! The crate is organised around four pieces:
//!
//! * [`topology`]: undirected graphs, generators and the adversarial
//!   lower-bound scenario families.
//! * [`engine`]: the round-by-round beeping model (beep/listen, feedback,
//!   adversarial and beep-triggered wakeups, per-node random streams, traces).
//! * [`protocols`]: the four maximal-independent-set node automata plus the
//!   reference automaton used for lower-bound replays.
//! * [`verify`]: MIS/stability checks, convergence measurement, analysis
//!   probes and Monte Carlo oracles.
//!
//! Probability-valued quantities are generic over a [`Scalar`] so they can be
//! evaluated in floating point or exactly over the rationals. The aliases at
//! the crate root pick the common instantiations.

pub mod engine;
pub mod error;
pub mod protocols;
pub mod scalar;
pub mod topology;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Probability, Scalar};

pub use engine::{
    Action, Automaton, EngineConfig, FeedbackMode, Round, RoundFeedback, RoundTrace, Simulation,
    Status, Trace, WakeMode, WakeupSchedule,
};
pub use topology::{Graph, LbScenario, NodeId};
pub use verify::RunResult;

/// Exact rational used when potentials must be summed without rounding.
pub type Rational = num_rational::Rational64;

/// Beep-potential probe evaluated in `f64`.
pub type PotentialProbe = verify::potential::PotentialProbe<f64>;
/// Beep-potential probe evaluated over exact rationals.
pub type ExactPotentialProbe = verify::potential::PotentialProbe<Rational>;
