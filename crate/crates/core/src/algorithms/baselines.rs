use super::{pack_if_fits, Policy};
use crate::model::{Action, KnapsackState, RevealedItem};

/// Packs whatever fits and ignores the estimates.
#[derive(Debug, Clone, Copy, Default)]
pub struct BlindGreedy;

impl Policy for BlindGreedy {
    fn name(&self) -> &str {
        "blind-greedy"
    }

    fn decide(&mut self, item: &RevealedItem, state: &KnapsackState) -> Action {
        pack_if_fits(item, state)
    }
}

/// Packs the first item of non-zero size, then ends.
#[derive(Debug, Clone, Copy, Default)]
pub struct TakeFirst {
    taken: bool,
}

impl Policy for TakeFirst {
    fn name(&self) -> &str {
        "take-first"
    }

    fn decide(&mut self, item: &RevealedItem, state: &KnapsackState) -> Action {
        if self.taken {
            Action::End
        } else if item.actual > 0.0 && state.fits(item.actual) {
            self.taken = true;
            Action::Pack
        } else {
            Action::Reject
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RejectAll;

impl Policy for RejectAll {
    fn name(&self) -> &str {
        "reject-all"
    }

    fn decide(&mut self, _item: &RevealedItem, _state: &KnapsackState) -> Action {
        Action::Reject
    }
}
