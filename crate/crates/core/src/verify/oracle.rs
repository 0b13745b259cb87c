use num_traits::Float;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Monte Carlo of the symmetry-breaking game on `n / 2` disjoint pairs.
///
/// Every round each undecided pair breaks symmetry with probability 1/2.
/// Returns the mean, over `trials`, of the (1-based) round in which the last
/// pair breaks.
pub fn pair_symmetry_oracle(n: usize, trials: u64, seed: u64) -> Result<f64> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidSize(format!("n = {n} must be even and at least 2")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total: u64 = 0;
    for _ in 0..trials {
        let mut undecided = n / 2;
        let mut rounds = 0;
        while undecided > 0 {
            rounds += 1;
            // one fair bit per undecided pair; ones stay undecided
            let mut remaining = 0;
            let mut left = undecided;
            while left >= 64 {
                remaining += rng.next_u64().count_ones() as usize;
                left -= 64;
            }
            if left > 0 {
                remaining += (rng.next_u64() & ((1u64 << left) - 1)).count_ones() as usize;
            }
            undecided = remaining;
        }
        total += rounds;
    }
    Ok(total as f64 / trials as f64)
}

/// Expected maximum of `m` independent geometric(1/2) variables on
/// `{1, 2, ...}`: `sum_{t >= 0} 1 - (1 - 2^-t)^m`.
pub fn expected_max_geometric<F: Float>(m: u64) -> F {
    if m == 0 {
        return F::zero();
    }
    let one = F::one();
    let half = one / (one + one);
    let m_f = F::from(m).unwrap();
    let mut sum = F::zero();
    let mut tail = one; // 2^-t
    for _ in 0..4096 {
        // 1 - (1 - x)^m, evaluated via exp/ln_1p to keep precision for small x
        let term = -(m_f * (-tail).ln_1p()).exp_m1();
        sum = sum + term;
        if term <= F::epsilon() * sum {
            break;
        }
        tail = tail * half;
    }
    sum
}
