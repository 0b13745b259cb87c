//! Scalar abstraction for probability-valued quantities.
//!
//! Every probability the protocols use is a ratio of small integers
//! (`2^i / 8N`, `1 / 2^i`, `1/2`), so the engine samples them exactly from
//! integer draws and the analysis code can evaluate sums of them in whatever
//! [`Scalar`] it needs: `f64` for speed, a rational type for exact checks.

use std::fmt::Debug;

use num_rational::{BigRational, Ratio};
use num_traits::{Num, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};

pub trait Scalar: Num + Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// `num / den`, rounded if the type is inexact.
    fn from_ratio(num: u64, den: u64) -> Self;

    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_ratio(num: u64, den: u64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for Ratio<i64> {
    fn from_ratio(num: u64, den: u64) -> Self {
        let num = i64::try_from(num).expect("numerator exceeds i64");
        let den = i64::try_from(den).expect("denominator exceeds i64");
        Ratio::new(num, den)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: u64, den: u64) -> Self {
        BigRational::new(num.into(), den.into())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// An exact probability `num / den` with `0 <= num <= den`, `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Probability {
    num: u64,
    den: u64,
}

impl Probability {
    pub const ZERO: Probability = Probability { num: 0, den: 1 };
    pub const ONE: Probability = Probability { num: 1, den: 1 };
    pub const HALF: Probability = Probability { num: 1, den: 2 };

    /// Resolution used when converting a float into an exact ratio.
    const FLOAT_DEN: u64 = 1 << 53;

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidParameter(format!(
                "{num}/{den} is not a probability"
            )));
        }
        Ok(Probability { num, den })
    }

    /// `1 / 2^exp`. Exponents past 62 saturate at `2^-63`.
    pub fn inverse_power_of_two(exp: u32) -> Self {
        Probability {
            num: 1,
            den: 1 << exp.min(63),
        }
    }

    pub fn from_f64(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        let num = (p * Self::FLOAT_DEN as f64).round() as u64;
        Ok(Probability {
            num,
            den: Self::FLOAT_DEN,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn value<S: Scalar>(&self) -> S {
        S::from_ratio(self.num, self.den)
    }

    /// Draws a Bernoulli trial. Degenerate probabilities consume no randomness.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        if self.num == 0 {
            false
        } else if self.num == self.den {
            true
        } else {
            rng.gen_range(0..self.den) < self.num
        }
    }
}
