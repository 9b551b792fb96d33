//! Problem state machine: estimates, reveals, the knapsack and its legal moves.

mod game;
mod instance;
mod transcript;

pub use game::{play, play_instance, History, RevealSource, SimError};
pub use instance::{FixedSource, Instance, InstanceItem};
pub use transcript::{replay, AdversaryInfo, Transcript};
pub(crate) use transcript::ratio_serde;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::Grid;

/// Capacity slack for float sums of packed sizes. Grid sizes differ by at
/// least `1e-6`, so this never changes whether a grid item fits.
pub const CAPACITY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Additive,
    Multiplicative,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Additive => "additive",
            Mode::Multiplicative => "multiplicative",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "additive" => Ok(Mode::Additive),
            "multiplicative" => Ok(Mode::Multiplicative),
            other => Err(format!("unknown accuracy mode {other:?}")),
        }
    }
}

/// Estimate accuracy: how far an actual size may stray from its estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub delta: f64,
    pub mode: Mode,
}

impl Accuracy {
    pub fn additive(delta: f64) -> Self {
        Accuracy { delta, mode: Mode::Additive }
    }

    pub fn multiplicative(delta: f64) -> Self {
        Accuracy { delta, mode: Mode::Multiplicative }
    }

    pub fn check(&self) -> Result<(), ModelError> {
        if self.delta.is_finite() && self.delta >= 0.0 {
            Ok(())
        } else {
            Err(ModelError::BadAccuracy(self.delta))
        }
    }

    /// Closed interval of legal actual sizes for an announced size, clamped to `[0, 1]`.
    pub fn band(&self, announced: f64) -> (f64, f64) {
        let (lo, hi) = match self.mode {
            Mode::Additive => (announced - self.delta, announced + self.delta),
            Mode::Multiplicative => (announced / (1.0 + self.delta), announced * (1.0 + self.delta)),
        };
        (lo.max(0.0), hi.min(1.0))
    }
}

/// Announced sizes `x'_1, ..., x'_n`, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EstimateList(Vec<f64>);

impl EstimateList {
    pub fn new(announced: Vec<f64>) -> Result<Self, ModelError> {
        if let Some((index, &value)) = announced
            .iter()
            .enumerate()
            .find(|(_, x)| !(x.is_finite() && (0.0..=1.0).contains(*x)))
        {
            return Err(ModelError::EstimateOutOfRange { index, value });
        }
        Ok(EstimateList(announced))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.0.get(index).copied()
    }
}

impl std::ops::Index<usize> for EstimateList {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.0[index]
    }
}

/// The `index`-th item with its actual size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RevealedItem {
    pub index: usize,
    pub actual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackedItem {
    pub index: usize,
    pub size: f64,
}

/// The knapsack after some prefix of the game.
///
/// `packed` is kept sorted by index, and `load` is always the left-to-right
/// sum of the packed sizes, so replaying the same moves gives bit-identical loads.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct KnapsackState {
    packed: Vec<PackedItem>,
    load: f64,
    terminated: bool,
}

impl KnapsackState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn packed(&self) -> &[PackedItem] {
        &self.packed
    }

    pub fn load(&self) -> f64 {
        self.load
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    pub fn holds(&self, index: usize) -> bool {
        self.packed.binary_search_by_key(&index, |p| p.index).is_ok()
    }

    pub fn size_of(&self, index: usize) -> Option<f64> {
        self.packed
            .binary_search_by_key(&index, |p| p.index)
            .ok()
            .map(|i| self.packed[i].size)
    }

    /// Would an item of `size` fit on top of the current load?
    pub fn fits(&self, size: f64) -> bool {
        self.load + size <= 1.0 + CAPACITY_EPS
    }

    pub fn packed_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.packed.iter().map(|p| p.index)
    }

    fn recompute_load(&mut self) {
        self.load = self.packed.iter().map(|p| p.size).sum();
    }

    fn remove(&mut self, remove: &[usize]) -> Result<(), ModelError> {
        for &index in remove {
            if !self.holds(index) {
                return Err(ModelError::IllegalAction(format!("cannot remove item {index}: not packed")));
            }
        }
        self.packed.retain(|p| !remove.contains(&p.index));
        self.recompute_load();
        Ok(())
    }

    fn pack(&mut self, item: &RevealedItem) -> Result<(), ModelError> {
        if self.holds(item.index) {
            return Err(ModelError::IllegalAction(format!("item {} is already packed", item.index)));
        }
        if let Some(last) = self.packed.last() {
            if last.index > item.index {
                return Err(ModelError::IllegalAction(format!(
                    "item {} arrives after item {}",
                    item.index, last.index
                )));
            }
        }
        if !self.fits(item.actual) {
            return Err(ModelError::IllegalAction(format!(
                "item {} of size {} overflows load {}",
                item.index, item.actual, self.load
            )));
        }
        self.packed.push(PackedItem { index: item.index, size: item.actual });
        self.load += item.actual;
        Ok(())
    }
}

/// A policy's move on the current reveal.
///
/// `End` rejects the current item and stops the policy: every later item is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Action {
    Reject,
    Pack,
    RemoveThenPack { remove: Vec<usize> },
    RemoveOnly { remove: Vec<usize> },
    End,
}

impl Action {
    /// True for moves that put the current item into the knapsack.
    pub fn packs(&self) -> bool {
        matches!(self, Action::Pack | Action::RemoveThenPack { .. })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("illegal action: {0}")]
    IllegalAction(String),
    #[error("accuracy delta must be finite and non-negative, got {0}")]
    BadAccuracy(f64),
    #[error("announced size {value} of item {index} is outside [0, 1]")]
    EstimateOutOfRange { index: usize, value: f64 },
    #[error("actual size {actual} of item {index} is outside the band of its estimate {announced}")]
    BandViolation { index: usize, announced: f64, actual: f64 },
    #[error("{0}")]
    Malformed(String),
}

/// Is `actual` a legal reveal for `announced` under `acc`?
///
/// The actual size must lie in `[0, 1]`, and inside the estimate band widened by
/// the grid slack `2/D`.
pub fn validate_reveal(announced: f64, actual: f64, acc: &Accuracy, grid: Grid) -> bool {
    if !(actual.is_finite() && (0.0..=1.0).contains(&actual)) {
        return false;
    }
    let (lo, hi) = acc.band(announced);
    let g = grid.slack();
    actual >= lo - g && actual <= hi + g
}

/// Applies `action` for `item` and returns the next state.
///
/// Removals happen before the pack. A pack that does not fit is an error, never
/// a silent reject. Once the state is terminated, only `Reject` is accepted.
pub fn apply_action(
    state: &KnapsackState,
    action: &Action,
    item: &RevealedItem,
    removable: bool,
) -> Result<KnapsackState, ModelError> {
    if state.terminated {
        return match action {
            Action::Reject => Ok(state.clone()),
            other => Err(ModelError::IllegalAction(format!("{other:?} after END"))),
        };
    }
    let mut next = state.clone();
    match action {
        Action::Reject => {}
        Action::End => next.terminated = true,
        Action::Pack => next.pack(item)?,
        Action::RemoveThenPack { remove } | Action::RemoveOnly { remove } => {
            if !removable {
                return Err(ModelError::IllegalAction(
                    "removal is only legal in removability mode".to_string(),
                ));
            }
            let mut sorted = remove.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != remove.len() {
                return Err(ModelError::IllegalAction("duplicate index in removal set".to_string()));
            }
            next.remove(remove)?;
            if matches!(action, Action::RemoveThenPack { .. }) {
                next.pack(item)?;
            }
        }
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(index: usize, actual: f64) -> RevealedItem {
        RevealedItem { index, actual }
    }

    fn state_with(sizes: &[f64]) -> KnapsackState {
        let mut s = KnapsackState::new();
        for (i, &x) in sizes.iter().enumerate() {
            s = apply_action(&s, &Action::Pack, &item(i, x), false).unwrap();
        }
        s
    }

    #[test]
    fn reveal_band_examples() {
        let g = Grid::default();
        let acc = Accuracy::additive(0.25);
        assert!(validate_reveal(0.5, 0.25, &acc, g));
        assert!(!validate_reveal(0.5, 0.76, &acc, g));
        assert!(!validate_reveal(0.5, 0.0, &acc, g));
        assert!(validate_reveal(0.5, 0.75, &acc, g));
        assert!(!validate_reveal(0.9, 1.05, &acc, g));
    }

    #[test]
    fn multiplicative_band() {
        let g = Grid::default();
        let acc = Accuracy::multiplicative(0.5);
        assert!(validate_reveal(0.3, 0.2, &acc, g));
        assert!(validate_reveal(0.3, 0.45, &acc, g));
        assert!(!validate_reveal(0.3, 0.19, &acc, g));
        assert!(!validate_reveal(0.3, 0.46, &acc, g));
        // no zero reveal for a non-zero estimate
        assert!(!validate_reveal(0.3, 0.0, &acc, g));
    }

    #[test]
    fn pack_examples() {
        let s = state_with(&[0.3]);
        let s = apply_action(&s, &Action::Pack, &item(1, 0.6), false).unwrap();
        assert!((s.load() - 0.9).abs() < 1e-12);

        let s = state_with(&[0.7]);
        let err = apply_action(&s, &Action::Pack, &item(1, 0.4), false).unwrap_err();
        assert!(matches!(err, ModelError::IllegalAction(_)));
    }

    #[test]
    fn remove_then_pack() {
        let s = state_with(&[0.3, 0.4]);
        let action = Action::RemoveThenPack { remove: vec![0] };
        let s = apply_action(&s, &action, &item(2, 0.55), true).unwrap();
        assert!((s.load() - 0.95).abs() < 1e-12);
        assert_eq!(s.packed_indices().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn illegal_removals() {
        let s = state_with(&[0.3, 0.4]);
        let action = Action::RemoveThenPack { remove: vec![0] };
        assert!(apply_action(&s, &action, &item(2, 0.1), false).is_err());
        let action = Action::RemoveOnly { remove: vec![5] };
        assert!(apply_action(&s, &action, &item(2, 0.1), true).is_err());
        let action = Action::RemoveOnly { remove: vec![0, 0] };
        assert!(apply_action(&s, &action, &item(2, 0.1), true).is_err());
    }

    #[test]
    fn end_is_final() {
        let s = state_with(&[0.3]);
        let s = apply_action(&s, &Action::End, &item(1, 0.2), false).unwrap();
        assert!(s.is_terminated());
        assert!(apply_action(&s, &Action::Reject, &item(2, 0.2), false).is_ok());
        assert!(apply_action(&s, &Action::Pack, &item(2, 0.2), false).is_err());
    }

    #[test]
    fn estimate_list_rejects_out_of_range() {
        assert!(EstimateList::new(vec![0.0, 1.0, 0.5]).is_ok());
        assert!(EstimateList::new(vec![0.2, 1.2]).is_err());
        assert!(EstimateList::new(vec![f64::NAN]).is_err());
    }
}
