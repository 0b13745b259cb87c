use crate::engine::{
    observation_history, EngineConfig, FeedbackMode, Round, Simulation, Trace, WakeMode,
    WakeupSchedule,
};
use crate::error::Result;
use crate::protocols::{AfterBeep, SilenceBeeper};
use crate::scalar::Probability;
use crate::topology::LbScenario;

/// True iff, within every `U` group of the scenario, all members saw the
/// same observations during their first `prefix_len` participating rounds.
pub fn indistinguishability_check(scenario: &LbScenario, trace: &Trace, prefix_len: usize) -> bool {
    if prefix_len == 0 {
        return true;
    }
    scenario.u_groups().iter().all(|members| {
        let mut histories = members.iter().map(|&u| {
            let mut h = observation_history(trace, u);
            h.truncate(prefix_len);
            h
        });
        match histories.next() {
            Some(first) => histories.all(|h| h == first),
            None => true,
        }
    })
}

/// Replays the scenario's execution with [`SilenceBeeper`] automata on the
/// plain beeping model: every node listens for `ell - 1` participating
/// rounds and then beeps with probability `p` while it hears silence. After
/// hearing a beep, case 1 nodes fall silent and case 2 nodes beep with
/// probability `p_prime` from their `m`-th participating round on.
pub fn replay_scenario(scenario: &LbScenario, seed: u64, horizon: Round) -> Result<Trace> {
    let params = &scenario.params;
    let after = match (params.m, params.p_prime) {
        (Some(m), Some(p_prime)) => AfterBeep::BeepAfter {
            m,
            p_prime: Probability::from_f64(p_prime)?,
        },
        _ => AfterBeep::SilentForever,
    };
    let template = SilenceBeeper::new(params.ell, params.p, after)?;
    let mut sim = Simulation::init(
        scenario.graph.clone(),
        |_| template.clone(),
        WakeupSchedule::from_rounds(&scenario.wakeup),
        EngineConfig::new(FeedbackMode::Plain, WakeMode::AdversarialOnly),
        seed,
    )?;
    let (trace, _) = sim.run(horizon)?;
    Ok(trace)
}
