use serde::{Deserialize, Serialize};

use super::{additive_delta, pack_if_fits, ConfigError, Policy, SingleTarget};
use crate::model::{Accuracy, Action, EstimateList, KnapsackState, RevealedItem};
use crate::ratios::ratio_bundle;

/// Load-relative class of an item `y` arriving on load `m`, for the guarded
/// phase of [`Refined`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeClass {
    /// `y + m ∈ [0, t)`
    Tiny,
    /// `y + m ∈ [t, M]`
    Small,
    /// `y + m ∈ (M, r)`
    Medium,
    /// `y + m >= r`
    Large,
}

/// What [`Refined`] decided to do from the estimates alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RefinedPlan {
    /// Some item is announced at `>= r + δ`: wait for the first one, pack it, end.
    SingleItem { index: usize },
    /// Every announced size is `<= 1 - r - δ`.
    Greedy,
    /// `x_l` is the last item announced inside `(1-r-δ, r+δ)`. Before it, skip
    /// when the load is in `[t, M]` or the item would be medium.
    Guarded { last: usize, t: f64, m_upper: f64, r: f64 },
}

impl RefinedPlan {
    /// Classifies `y` arriving on load `m`. Only meaningful for `Guarded`.
    pub fn classify(&self, y: f64, m: f64) -> Option<SizeClass> {
        let RefinedPlan::Guarded { t, m_upper, r, .. } = *self else {
            return None;
        };
        let s = y + m;
        Some(if s < t {
            SizeClass::Tiny
        } else if s <= m_upper {
            SizeClass::Small
        } else if s < r {
            SizeClass::Medium
        } else {
            SizeClass::Large
        })
    }
}

/// `1/min(p, q)`-competitive policy for additive accuracy `0 < δ < 1/2`.
#[derive(Debug, Clone)]
pub struct Refined {
    plan: RefinedPlan,
    target: Option<SingleTarget>,
    greedy: bool,
}

impl Refined {
    pub fn new(accuracy: &Accuracy, estimates: &EstimateList) -> Result<Self, ConfigError> {
        let delta = additive_delta("alg2", accuracy)?;
        let r = ratio_bundle(delta)
            .map_err(|_| ConfigError::DeltaOutOfRange { policy: "alg2", delta })?
            .r;
        let announced = estimates.as_slice();
        let plan = if let Some(index) = announced.iter().position(|&x| x >= r + delta) {
            RefinedPlan::SingleItem { index }
        } else if announced.iter().all(|&x| x <= 1.0 - r - delta) {
            RefinedPlan::Greedy
        } else {
            let last = announced
                .iter()
                .rposition(|&x| x > 1.0 - r - delta && x < r + delta)
                .expect("some estimate lies strictly between 1-r-δ and r+δ");
            let xl = announced[last];
            RefinedPlan::Guarded { last, t: r - (xl - delta), m_upper: 1.0 - (xl + delta), r }
        };
        let target = match plan {
            RefinedPlan::SingleItem { index } => Some(SingleTarget { index, packed: false }),
            _ => None,
        };
        Ok(Refined { plan, target, greedy: matches!(plan, RefinedPlan::Greedy) })
    }

    pub fn plan(&self) -> RefinedPlan {
        self.plan
    }
}

impl Policy for Refined {
    fn name(&self) -> &str {
        "alg2"
    }

    fn decide(&mut self, item: &RevealedItem, state: &KnapsackState) -> Action {
        if let Some(target) = &mut self.target {
            return target.decide(item);
        }
        let RefinedPlan::Guarded { last, t, m_upper, r } = self.plan else {
            return pack_if_fits(item, state);
        };
        if item.index == last {
            self.greedy = true;
        }
        if self.greedy {
            return pack_if_fits(item, state);
        }
        let m = state.load();
        let s = item.actual + m;
        let load_is_small = (t..=m_upper).contains(&m);
        let would_be_medium = s > m_upper && s < r;
        if load_is_small || would_be_medium {
            Action::Reject
        } else {
            pack_if_fits(item, state)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::apply_action;

    fn run(delta: f64, announced: &[f64], actual: &[f64]) -> (Refined, f64) {
        let acc = Accuracy::additive(delta);
        let est = EstimateList::new(announced.to_vec()).unwrap();
        let mut policy = Refined::new(&acc, &est).unwrap();
        let mut state = KnapsackState::new();
        for (index, &x) in actual.iter().enumerate() {
            let item = RevealedItem { index, actual: x };
            let action = if state.is_terminated() { Action::Reject } else { policy.decide(&item, &state) };
            state = apply_action(&state, &action, &item, false).unwrap();
        }
        (policy, state.load())
    }

    #[test]
    fn single_item_branch() {
        let (p, gain) = run(0.25, &[0.5, 0.3], &[0.5, 0.3]);
        assert_eq!(p.plan(), RefinedPlan::SingleItem { index: 0 });
        assert_eq!(gain, 0.5);
    }

    #[test]
    fn empty_guard_interval_at_integer_kappa() {
        // δ = 0.25: 1-r-δ = r+δ = 0.5, so the guarded phase never applies
        let (p, gain) = run(0.25, &[0.4], &[0.3]);
        assert_eq!(p.plan(), RefinedPlan::Greedy);
        assert_eq!(gain, 0.3);
    }

    #[test]
    fn greedy_branch_packs_everything_that_fits() {
        let (p, gain) = run(0.25, &[0.2, 0.1, 0.25], &[0.3, 0.05, 0.4]);
        assert_eq!(p.plan(), RefinedPlan::Greedy);
        assert!((gain - 0.75).abs() < 1e-12);
    }

    #[test]
    fn guarded_phase() {
        // δ = 0.1: r = p ≈ 0.430074, guard interval (0.469926, 0.530074)
        let (p, gain) = run(0.1, &[0.3, 0.5], &[0.38, 0.55]);
        match p.plan() {
            RefinedPlan::Guarded { last, t, m_upper, r } => {
                assert_eq!(last, 1);
                assert!((t - (r - 0.4)).abs() < 1e-15);
                assert!((m_upper - 0.4).abs() < 1e-12);
            }
            other => panic!("unexpected plan {other:?}"),
        }
        // small item packed, then x_l packed greedily
        assert!((gain - 0.93).abs() < 1e-12);

        // 0.41 lands in (M, r) = (0.4, 0.43): medium, skipped
        let (_, gain) = run(0.1, &[0.3, 0.5], &[0.41, 0.45]);
        assert!((gain - 0.45).abs() < 1e-12);

        // load 0.2 ∈ [t, M] skips the next item until x_l
        let (_, gain) = run(0.1, &[0.2, 0.2, 0.5], &[0.2, 0.1, 0.5]);
        assert!((gain - 0.7).abs() < 1e-12);
    }

    #[test]
    fn classify_partition() {
        let plan = RefinedPlan::Guarded { last: 3, t: 0.1, m_upper: 0.4, r: 0.45 };
        assert_eq!(plan.classify(0.05, 0.0), Some(SizeClass::Tiny));
        assert_eq!(plan.classify(0.1, 0.0), Some(SizeClass::Small));
        assert_eq!(plan.classify(0.4, 0.0), Some(SizeClass::Small));
        assert_eq!(plan.classify(0.42, 0.0), Some(SizeClass::Medium));
        assert_eq!(plan.classify(0.45, 0.0), Some(SizeClass::Large));
        assert_eq!(RefinedPlan::Greedy.classify(0.1, 0.0), None);
    }

    #[test]
    fn rejects_bad_delta() {
        let est = EstimateList::new(vec![0.5]).unwrap();
        assert!(Refined::new(&Accuracy::additive(0.5), &est).is_err());
        assert!(Refined::new(&Accuracy::additive(0.0), &est).is_err());
        assert!(Refined::new(&Accuracy::multiplicative(0.2), &est).is_err());
    }
}
