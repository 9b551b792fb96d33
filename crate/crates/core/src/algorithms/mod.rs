//! Online policies behind one contract.
//!
//! A policy is built from what is known before the first reveal (accuracy,
//! estimates, whether removals are allowed) and then sees one reveal at a
//! time together with the current knapsack.

mod baselines;
mod greedy;
mod refined;
mod removable;

pub use baselines::{BlindGreedy, RejectAll, TakeFirst};
pub use greedy::LargestOrGreedy;
pub use refined::{Refined, RefinedPlan, SizeClass};
pub use removable::{Removable, SwapRule};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{Accuracy, Action, EstimateList, KnapsackState, Mode, RevealedItem};

pub trait Policy {
    fn name(&self) -> &str;

    /// Move for the current reveal. Must be legal for `state`.
    fn decide(&mut self, item: &RevealedItem, state: &KnapsackState) -> Action;
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("policy {policy} needs 0 < delta < 0.5, got {delta}")]
    DeltaOutOfRange { policy: &'static str, delta: f64 },
    #[error("policy {policy} does not support {mode} accuracy")]
    UnsupportedMode { policy: &'static str, mode: Mode },
    #[error("policy {0} needs removability mode")]
    NotRemovable(&'static str),
    #[error("unknown policy {0:?} (expected alg1, alg2, alg3, blind-greedy, take-first or reject-all)")]
    UnknownPolicy(String),
}

/// The built-in policies, selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    /// Largest announced item if it is at least 1/2, else greedy.
    Alg1,
    /// Size-class policy matching `1/min(p, q)`.
    Alg2,
    /// Removability policy matching `(3-2δ)/(2-2δ)`.
    Alg3,
    BlindGreedy,
    TakeFirst,
    RejectAll,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 6] = [
        PolicyKind::Alg1,
        PolicyKind::Alg2,
        PolicyKind::Alg3,
        PolicyKind::BlindGreedy,
        PolicyKind::TakeFirst,
        PolicyKind::RejectAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Alg1 => "alg1",
            PolicyKind::Alg2 => "alg2",
            PolicyKind::Alg3 => "alg3",
            PolicyKind::BlindGreedy => "blind-greedy",
            PolicyKind::TakeFirst => "take-first",
            PolicyKind::RejectAll => "reject-all",
        }
    }

    pub fn build(
        self,
        accuracy: &Accuracy,
        estimates: &EstimateList,
        removable: bool,
    ) -> Result<Box<dyn Policy>, ConfigError> {
        Ok(match self {
            PolicyKind::Alg1 => Box::new(LargestOrGreedy::new(accuracy, estimates)?),
            PolicyKind::Alg2 => Box::new(Refined::new(accuracy, estimates)?),
            PolicyKind::Alg3 => Box::new(Removable::new(accuracy, estimates, removable)?),
            PolicyKind::BlindGreedy => Box::new(BlindGreedy),
            PolicyKind::TakeFirst => Box::new(TakeFirst::default()),
            PolicyKind::RejectAll => Box::new(RejectAll),
        })
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ConfigError::UnknownPolicy(s.to_string()))
    }
}

fn additive_delta(policy: &'static str, accuracy: &Accuracy) -> Result<f64, ConfigError> {
    if accuracy.mode != Mode::Additive {
        return Err(ConfigError::UnsupportedMode { policy, mode: accuracy.mode });
    }
    let delta = accuracy.delta;
    if delta > 0.0 && delta < 0.5 {
        Ok(delta)
    } else {
        Err(ConfigError::DeltaOutOfRange { policy, delta })
    }
}

fn pack_if_fits(item: &RevealedItem, state: &KnapsackState) -> Action {
    if state.fits(item.actual) {
        Action::Pack
    } else {
        Action::Reject
    }
}

/// Waits for one chosen item, packs it, then ends.
#[derive(Debug, Clone, Copy)]
struct SingleTarget {
    index: usize,
    packed: bool,
}

impl SingleTarget {
    fn decide(&mut self, item: &RevealedItem) -> Action {
        if self.packed {
            Action::End
        } else if item.index == self.index {
            self.packed = true;
            Action::Pack
        } else {
            Action::Reject
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for kind in PolicyKind::ALL {
            assert_eq!(kind.name().parse::<PolicyKind>().unwrap(), kind);
        }
        assert!("alg4".parse::<PolicyKind>().is_err());
    }
}
