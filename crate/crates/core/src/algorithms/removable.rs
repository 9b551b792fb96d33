use super::{pack_if_fits, ConfigError, Policy};
use crate::model::{Accuracy, Action, EstimateList, KnapsackState, Mode, PackedItem, RevealedItem, CAPACITY_EPS};
use crate::ratios::{removability_x_additive, removability_x_multiplicative};

/// When a medium item `y` that does not fit next to the packed medium `z`
/// replaces it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SwapRule {
    /// Keep the smallest medium before `x_l`, and the larger of `z` and `x_l`
    /// when `x_l` arrives. This is what the `1/x` guarantee needs.
    #[default]
    SmallestThenLargest,
    /// `y < z`, or `y` is `x_l` and `y > z`. When `x_l` is the smaller of the
    /// two it replaces `z`, and the ratio can exceed `1/x`.
    Literal,
}

/// `(3-2δ)/(2-2δ)`-competitive policy for the removable variant.
///
/// Items are small (`<= 1-x`), medium (strictly between) or large (`>= x`) by
/// actual size, with `x = (2-2δ)/(3-2δ)`.
#[derive(Debug, Clone)]
pub struct Removable {
    x: f64,
    last: Option<usize>,
    rule: SwapRule,
    finished: bool,
}

impl Removable {
    pub fn new(accuracy: &Accuracy, estimates: &EstimateList, removable: bool) -> Result<Self, ConfigError> {
        Self::with_rule(accuracy, estimates, removable, SwapRule::default())
    }

    pub fn with_rule(
        accuracy: &Accuracy,
        estimates: &EstimateList,
        removable: bool,
        rule: SwapRule,
    ) -> Result<Self, ConfigError> {
        if !removable {
            return Err(ConfigError::NotRemovable("alg3"));
        }
        let delta = accuracy.delta;
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(ConfigError::DeltaOutOfRange { policy: "alg3", delta });
        }
        let x = match accuracy.mode {
            Mode::Additive => removability_x_additive(delta),
            Mode::Multiplicative => removability_x_multiplicative(delta),
        };
        // x_l: last item whose actual size may turn out medium
        let last = estimates.as_slice().iter().rposition(|&a| accuracy.band(a).1 > 1.0 - x);
        Ok(Removable { x, last, rule, finished: false })
    }

    pub fn threshold(&self) -> f64 {
        self.x
    }

    /// Index of `x_l`, or `None` when no estimate can produce a medium item.
    pub fn last_interesting(&self) -> Option<usize> {
        self.last
    }

    fn is_small(&self, size: f64) -> bool {
        size <= 1.0 - self.x
    }

    fn is_large(&self, size: f64) -> bool {
        size >= self.x
    }

    fn is_medium(&self, size: f64) -> bool {
        !self.is_small(size) && !self.is_large(size)
    }

    /// Packs `y` after removing `removed`, dropping small items largest first
    /// until it fits.
    fn pack_star(&self, y: f64, state: &KnapsackState, mut removed: Vec<usize>) -> Action {
        let kept = |removed: &[usize]| -> Vec<PackedItem> {
            state.packed().iter().filter(|p| !removed.contains(&p.index)).copied().collect()
        };
        let load = |items: &[PackedItem]| -> f64 { items.iter().map(|p| p.size).sum() };

        let mut smalls: Vec<PackedItem> = kept(&removed).into_iter().filter(|p| self.is_small(p.size)).collect();
        smalls.sort_by(|a, b| b.size.total_cmp(&a.size).then(a.index.cmp(&b.index)));
        let mut smalls = smalls.into_iter();
        while load(&kept(&removed)) + y > 1.0 + CAPACITY_EPS {
            match smalls.next() {
                Some(p) => removed.push(p.index),
                None => break,
            }
        }
        if removed.is_empty() {
            Action::Pack
        } else {
            removed.sort_unstable();
            Action::RemoveThenPack { remove: removed }
        }
    }

    fn replaces(&self, y: f64, z: f64, is_last: bool) -> bool {
        match self.rule {
            SwapRule::SmallestThenLargest => {
                if is_last {
                    y > z
                } else {
                    y < z
                }
            }
            SwapRule::Literal => y < z || (is_last && y > z),
        }
    }
}

impl Policy for Removable {
    fn name(&self) -> &str {
        "alg3"
    }

    fn decide(&mut self, item: &RevealedItem, state: &KnapsackState) -> Action {
        let y = item.actual;
        if self.finished || state.load() >= self.x - 1e-12 {
            return Action::End;
        }
        if self.is_large(y) {
            self.finished = true;
            let all: Vec<usize> = state.packed_indices().collect();
            return if all.is_empty() { Action::Pack } else { Action::RemoveThenPack { remove: all } };
        }
        if self.is_small(y) {
            return pack_if_fits(item, state);
        }
        let medium = state.packed().iter().find(|p| self.is_medium(p.size)).copied();
        let Some(z) = medium else {
            return self.pack_star(y, state, Vec::new());
        };
        if y + z.size <= 1.0 + CAPACITY_EPS {
            self.finished = true;
            let others: Vec<usize> = state.packed_indices().filter(|&i| i != z.index).collect();
            return if others.is_empty() { Action::Pack } else { Action::RemoveThenPack { remove: others } };
        }
        if self.replaces(y, z.size, Some(item.index) == self.last) {
            self.pack_star(y, state, vec![z.index])
        } else {
            Action::Reject
        }
    }
}
