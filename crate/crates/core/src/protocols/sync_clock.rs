use crate::engine::{Action, Automaton, NodeRng, Round, RoundFeedback, Status};
use crate::scalar::Probability;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyncClockState {
    Inactive,
    Competing,
    Mis,
}

/// MIS with globally synchronized clocks: a beeping version of Luby's
/// permutation algorithm with a self-adjusting priority length `k`.
///
/// Rounds form triplets aligned to `t mod 3`:
///
/// * `t ≡ 0` Restart-Bit: beep iff `t ≢ 0 (mod k)`. At `t ≡ 0 (mod k)` the
///   node listens; a beep means some neighbor runs with a larger `k`, so the
///   node doubles `k` and becomes inactive. Silence advances the state
///   (inactive to competing, competing to MIS) effective from round `t + 1`.
/// * `t ≡ 1` MIS-Bit: MIS nodes beep; a listener that hears one becomes
///   inactive.
/// * `t ≡ 2` Competing-Bit: competing nodes beep with probability 1/2 and
///   drop out on hearing a beep. MIS nodes beep in at least one of any two
///   consecutive Competing-Bits; an MIS node that listens and hears a beep
///   becomes inactive and doubles `k`.
///
/// `k` starts at 6 and only doubles, so it is always a multiple of 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncClockMis {
    state: SyncClockState,
    advance_pending: bool,
    next: Option<bool>,
    diag: [(&'static str, u64); 1],
    last: Action,
}

impl Default for SyncClockMis {
    fn default() -> Self {
        Self::new()
    }
}

impl SyncClockMis {
    pub const INITIAL_K: u64 = 6;

    pub fn new() -> Self {
        SyncClockMis {
            state: SyncClockState::Inactive,
            advance_pending: false,
            next: None,
            diag: [("k", Self::INITIAL_K)],
            last: Action::Listen,
        }
    }

    pub fn k(&self) -> u64 {
        self.diag[0].1
    }

    pub fn state(&self) -> SyncClockState {
        self.state
    }

    fn double_k(&mut self) {
        self.diag[0].1 *= 2;
    }

    fn go_inactive(&mut self) {
        self.state = SyncClockState::Inactive;
        self.advance_pending = false;
    }
}

impl Automaton for SyncClockMis {
    fn decide(&mut self, t: Round, rng: &mut NodeRng) -> Action {
        if self.next.is_none() {
            self.next = Some(Probability::HALF.sample(rng));
        }
        if self.advance_pending {
            self.advance_pending = false;
            self.state = match self.state {
                SyncClockState::Inactive => SyncClockState::Competing,
                SyncClockState::Competing | SyncClockState::Mis => SyncClockState::Mis,
            };
        }
        let k = self.k();
        let action = match t % 3 {
            0 if t % k != 0 => Action::Beep,
            0 => Action::Listen,
            1 if self.state == SyncClockState::Mis => Action::Beep,
            1 => Action::Listen,
            _ => match self.state {
                SyncClockState::Inactive => Action::Listen,
                SyncClockState::Competing => {
                    if Probability::HALF.sample(rng) {
                        Action::Beep
                    } else {
                        Action::Listen
                    }
                }
                SyncClockState::Mis => {
                    if self.next == Some(true) {
                        self.next = Some(Probability::HALF.sample(rng));
                        Action::Beep
                    } else {
                        self.next = Some(true);
                        Action::Listen
                    }
                }
            },
        };
        self.last = action;
        action
    }

    fn absorb(&mut self, feedback: RoundFeedback, t: Round, _rng: &mut NodeRng) {
        if self.last == Action::Beep {
            return;
        }
        let heard = feedback.heard_beep;
        match t % 3 {
            0 if t % self.k() == 0 => {
                if heard {
                    self.go_inactive();
                    self.double_k();
                } else {
                    self.advance_pending = true;
                }
            }
            0 => {}
            1 => {
                if heard {
                    self.go_inactive();
                }
            }
            _ => {
                if heard {
                    match self.state {
                        SyncClockState::Inactive => {}
                        SyncClockState::Competing => self.go_inactive(),
                        SyncClockState::Mis => {
                            self.go_inactive();
                            self.double_k();
                        }
                    }
                }
            }
        }
    }

    fn status(&self) -> Status {
        match self.state {
            SyncClockState::Inactive => Status::Inactive,
            SyncClockState::Competing => Status::Competing,
            SyncClockState::Mis => Status::Mis,
        }
    }

    fn diagnostics(&self) -> &[(&'static str, u64)] {
        &self.diag
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::node_rng;

    fn step(a: &mut SyncClockMis, rng: &mut NodeRng, t: Round, heard: bool) -> Action {
        let act = a.decide(t, rng);
        a.absorb(
            RoundFeedback {
                heard_beep: heard,
                woke_this_round: t == 0,
            },
            t,
            rng,
        );
        act
    }

    #[test]
    fn isolated_node_schedule() {
        let mut a = SyncClockMis::new();
        let mut rng = node_rng(1, 0);
        let mut states = Vec::new();
        for t in 0..12 {
            step(&mut a, &mut rng, t, false);
            states.push(a.state());
        }
        use SyncClockState::*;
        assert_eq!(states[0], Inactive);
        assert!(states[1..7].iter().all(|&s| s == Competing));
        assert!(states[7..].iter().all(|&s| s == Mis));
        assert_eq!(a.k(), 6);
    }

    #[test]
    fn restart_bit_beep_doubles_k() {
        let mut a = SyncClockMis::new();
        let mut rng = node_rng(1, 0);
        assert_eq!(step(&mut a, &mut rng, 0, true), Action::Listen);
        assert_eq!(a.k(), 12);
        assert_eq!(a.state(), SyncClockState::Inactive);
    }

    #[test]
    fn restart_bit_beeps_off_multiples_of_k() {
        let mut a = SyncClockMis::new();
        let mut rng = node_rng(1, 0);
        for t in 0..60 {
            let act = step(&mut a, &mut rng, t, false);
            if t % 3 == 0 {
                assert_eq!(act == Action::Beep, t % 6 != 0, "t = {t}");
            }
        }
    }

    #[test]
    fn mis_beeps_every_other_competing_bit() {
        let mut a = SyncClockMis::new();
        let mut rng = node_rng(8, 0);
        let mut competing_bits = Vec::new();
        for t in 0..3000 {
            let act = step(&mut a, &mut rng, t, false);
            if t > 7 && t % 3 == 2 {
                competing_bits.push(act);
            }
            if t > 7 && t % 3 == 1 {
                assert_eq!(act, Action::Beep);
            }
        }
        for w in competing_bits.windows(2) {
            assert!(w.contains(&Action::Beep));
        }
    }

    #[test]
    fn mis_node_hearing_competing_bit_backs_off() {
        let mut a = SyncClockMis::new();
        let mut rng = node_rng(8, 0);
        for t in 0..9 {
            step(&mut a, &mut rng, t, false);
        }
        assert_eq!(a.state(), SyncClockState::Mis);
        let mut t = 9;
        loop {
            let act = step(&mut a, &mut rng, t, t % 3 == 2);
            if t % 3 == 2 && act == Action::Listen {
                break;
            }
            t += 1;
        }
        assert_eq!(a.state(), SyncClockState::Inactive);
        assert_eq!(a.k(), 12);
    }

    #[test]
    fn mis_bit_silences_listener() {
        let mut a = SyncClockMis::new();
        let mut rng = node_rng(8, 0);
        step(&mut a, &mut rng, 0, false);
        step(&mut a, &mut rng, 1, true);
        assert_eq!(a.state(), SyncClockState::Inactive);
        assert_eq!(a.k(), 6);
    }
}
