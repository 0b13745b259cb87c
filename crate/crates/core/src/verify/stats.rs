//! Small statistics helpers for experiment summaries.

use num_traits::Float;

use crate::engine::Round;

/// Lower median, treating `None` (no convergence) as larger than any round.
/// `None` for an empty slice or when the median itself did not converge.
pub fn median_round(values: &[Option<Round>]) -> Option<Round> {
    if values.is_empty() {
        return None;
    }
    let mut sorted: Vec<Option<Round>> = values.to_vec();
    sorted.sort_by_key(|v| v.unwrap_or(Round::MAX));
    sorted[(sorted.len() - 1) / 2]
}

pub fn mean<F: Float>(values: impl IntoIterator<Item = F>) -> Option<F> {
    let mut sum = F::zero();
    let mut count = F::zero();
    for v in values {
        sum = sum + v;
        count = count + F::one();
    }
    (count > F::zero()).then(|| sum / count)
}
