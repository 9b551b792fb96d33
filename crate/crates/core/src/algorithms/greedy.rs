use super::{additive_delta, pack_if_fits, ConfigError, Policy, SingleTarget};
use crate::model::{Accuracy, Action, EstimateList, KnapsackState, RevealedItem};

/// `2/(1-2δ)`-competitive policy.
///
/// If the largest announced size is at least 1/2, waits for the first item
/// announced with that size, packs it and ends; otherwise packs greedily.
#[derive(Debug, Clone)]
pub struct LargestOrGreedy {
    target: Option<SingleTarget>,
}

impl LargestOrGreedy {
    pub fn new(accuracy: &Accuracy, estimates: &EstimateList) -> Result<Self, ConfigError> {
        additive_delta("alg1", accuracy)?;
        let announced = estimates.as_slice();
        let largest = announced.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let target = (largest >= 0.5)
            .then(|| announced.iter().position(|&x| x == largest))
            .flatten()
            .map(|index| SingleTarget { index, packed: false });
        Ok(LargestOrGreedy { target })
    }

    /// Index of the item the policy waits for, if it is in single-item mode.
    pub fn target(&self) -> Option<usize> {
        self.target.map(|t| t.index)
    }
}

impl Policy for LargestOrGreedy {
    fn name(&self) -> &str {
        "alg1"
    }

    fn decide(&mut self, item: &RevealedItem, state: &KnapsackState) -> Action {
        match &mut self.target {
            Some(target) => target.decide(item),
            None => pack_if_fits(item, state),
        }
    }
}
