use super::{any_packed, Adversary, AdversaryParams, ParamError};
use crate::grid::Grid;
use crate::model::{Accuracy, EstimateList, History, RevealSource};

/// Shows that no policy is competitive once `δ >= 1/2`.
///
/// Both items are announced at `1/2`, so any size in `[0, 1]` is consistent.
/// The first one is `ε`. If the policy packs it the second is `1-ε/2`,
/// otherwise `0`.
#[derive(Debug, Clone)]
pub struct NonCompetitive {
    accuracy: Accuracy,
    estimates: EstimateList,
    grid: Grid,
    eps: f64,
    big: f64,
    case: String,
}

impl NonCompetitive {
    pub fn new(delta: f64, params: AdversaryParams) -> Result<Self, ParamError> {
        if !(delta >= 0.5 && delta.is_finite()) {
            return Err(ParamError::DeltaOutOfRange { adversary: "noncomp", delta, range: "[0.5, inf)" });
        }
        params.tiny_count()?;
        let eps = params.epsilon;
        Ok(NonCompetitive {
            accuracy: Accuracy::additive(delta),
            grid: params.grid,
            estimates: EstimateList::new(vec![0.5, 0.5]).expect("estimates lie in [0, 1]"),
            eps,
            big: params.grid.snap(1.0 - eps / 2.0),
            case: String::new(),
        })
    }
}

impl RevealSource for NonCompetitive {
    fn accuracy(&self) -> Accuracy {
        self.accuracy
    }

    fn estimates(&self) -> &EstimateList {
        &self.estimates
    }

    fn next_size(&mut self, history: &History<'_>) -> f64 {
        let size = self.choose(history);
        self.grid.snap(size)
    }
}

impl NonCompetitive {
    fn choose(&mut self, history: &History<'_>) -> f64 {
        if history.step() == 0 {
            self.case = String::new();
            return self.eps;
        }
        if any_packed(history.actions, 0..1) {
            self.case = "1".into();
            self.big
        } else {
            self.case = "2".into();
            0.0
        }
    }
}

impl Adversary for NonCompetitive {
    fn name(&self) -> &'static str {
        "noncomp"
    }

    /// `(1-ε/2)/ε`, which grows without bound as `ε → 0`.
    fn target_ratio(&self) -> f64 {
        self.big / self.eps
    }

    fn case_label(&self) -> String {
        self.case.clone()
    }
}
