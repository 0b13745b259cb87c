//! Beep potential: the sum of competition beep probabilities over a node set.

use crate::engine::Round;
use crate::error::{Error, Result};
use crate::scalar::{Probability, Scalar};
use crate::topology::NodeId;

/// Per-round, per-node beep probabilities recorded from a run.
///
/// Probabilities are stored exactly; the scalar type only decides how sums
/// are evaluated.
#[derive(Debug, Clone, Default)]
pub struct PotentialProbe<S> {
    start: Round,
    rounds: Vec<Vec<Probability>>,
    _scalar: std::marker::PhantomData<S>,
}

impl<S: Scalar> PotentialProbe<S> {
    pub fn new() -> Self {
        PotentialProbe {
            start: 0,
            rounds: Vec::new(),
            _scalar: std::marker::PhantomData,
        }
    }

    /// Appends round `t`; rounds must be recorded consecutively.
    pub fn record(&mut self, t: Round, probabilities: &[Probability]) {
        if self.rounds.is_empty() {
            self.start = t;
        }
        assert_eq!(
            t,
            self.start + self.rounds.len() as Round,
            "rounds must be recorded consecutively"
        );
        self.rounds.push(probabilities.to_vec());
    }

    /// Recorded rounds as a half-open range.
    pub fn covered(&self) -> std::ops::Range<Round> {
        self.start..self.start + self.rounds.len() as Round
    }

    pub fn probability(&self, u: NodeId, t: Round) -> Result<Probability> {
        let round = self.round(t)?;
        round
            .get(u)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("node {u} out of range")))
    }

    fn round(&self, t: Round) -> Result<&[Probability]> {
        if !self.covered().contains(&t) {
            return Err(Error::InvalidArgument(format!(
                "round {t} outside recorded rounds {:?}",
                self.covered()
            )));
        }
        Ok(&self.rounds[(t - self.start) as usize])
    }

    /// `E_S(t)`: sum of the beep probabilities of the nodes in `s` at `t`.
    pub fn beep_potential(&self, s: &[NodeId], t: Round) -> Result<S> {
        let round = self.round(t)?;
        let mut sum = S::zero();
        for &u in s {
            let p = round
                .get(u)
                .ok_or_else(|| Error::InvalidArgument(format!("node {u} out of range")))?;
            sum = sum + p.value::<S>();
        }
        Ok(sum)
    }

    /// Rounds `t` with `E_S(t) >= lambda` for which some earlier round
    /// `t'` in `[t - window, t]` (clipped to the recorded range) has
    /// `E_S(t') < lambda / 2 - 1/8`. Empty when the potential never drops
    /// that fast.
    pub fn slow_change_violations(&self, s: &[NodeId], lambda: S, window: Round) -> Result<Vec<Round>> {
        let series = self
            .covered()
            .map(|t| self.beep_potential(s, t))
            .collect::<Result<Vec<S>>>()?;
        let floor = lambda.clone() / S::from_ratio(2, 1) - S::from_ratio(1, 8);
        let mut out = Vec::new();
        for (idx, e) in series.iter().enumerate() {
            if *e < lambda {
                continue;
            }
            let lo = idx.saturating_sub(window as usize);
            if series[lo..=idx].iter().any(|x| *x < floor) {
                out.push(self.start + idx as Round);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn sums_exactly() {
        let mut probe = PotentialProbe::<Rational>::new();
        let p = Probability::new(2, 64).unwrap();
        probe.record(5, &[p, Probability::ZERO, p]);
        assert_eq!(probe.beep_potential(&[0, 2], 5).unwrap(), Rational::new(1, 16));
        assert_eq!(probe.beep_potential(&[1], 5).unwrap(), Rational::new(0, 1));
        assert_eq!(probe.beep_potential(&[], 5).unwrap(), Rational::new(0, 1));
        assert!(probe.beep_potential(&[0], 4).is_err());
        assert!(probe.beep_potential(&[0], 6).is_err());
        assert!(probe.beep_potential(&[3], 5).is_err());
    }

    #[test]
    fn detects_fast_drop() {
        let mut probe = PotentialProbe::<f64>::new();
        probe.record(0, &[Probability::ZERO]);
        probe.record(1, &[Probability::ONE]);
        assert_eq!(probe.slow_change_violations(&[0], 1.0, 1).unwrap(), vec![1]);
        assert!(probe.slow_change_violations(&[0], 1.0, 0).unwrap().is_empty());
    }
}
