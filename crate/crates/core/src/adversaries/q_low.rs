use super::{any_packed, count_packed, Adversary, AdversaryParams, ParamError};
use crate::grid::Grid;
use crate::model::{Accuracy, EstimateList, History, RevealSource};

/// Forces ratio `1/q = 1/(2/3-2δ)` for additive `1/12 < δ < 1/6`.
///
/// Announces `1/ε` tiny items of size `ε` and three items of size `1/3+δ`.
/// Let `a = 1/3-2δ`. Tiny items stay at `ε` until the policy holds more than
/// `a` of them, then drop to `0`. If it did, the next items are `1/3` until one
/// is packed. Otherwise, with `y` packed in tiny items, they are
/// `1/3+(a-y)+ε`, so that packing one brings the load just above `q`. After a
/// packed third every remaining item is `1/3+2δ`, which no longer fits.
#[derive(Debug, Clone)]
pub struct QBoundLow {
    accuracy: Accuracy,
    estimates: EstimateList,
    grid: Grid,
    tiny: usize,
    /// Largest number of tiny items whose total stays within `a`.
    budget: usize,
    eps: f64,
    third: f64,
    wide: f64,
    q: f64,
    unit: f64,
    case: String,
}

const THIRDS: usize = 3;

impl QBoundLow {
    pub fn new(delta: f64, params: AdversaryParams) -> Result<Self, ParamError> {
        if !(delta > 1.0 / 12.0 && delta < 1.0 / 6.0) {
            return Err(ParamError::DeltaOutOfRange { adversary: "q-low", delta, range: "(1/12, 1/6)" });
        }
        let tiny = params.tiny_count()?;
        let eps = params.epsilon;
        let limit = 4.0 * delta - 1.0 / 3.0;
        if eps > limit || eps > delta {
            return Err(ParamError::Epsilon(format!(
                "epsilon {eps} too large for delta {delta} (at most {})",
                limit.min(delta)
            )));
        }
        let grid = params.grid;
        let a = 1.0 / 3.0 - 2.0 * delta;
        let budget = (a / eps + 1e-9).floor() as usize;
        let mut announced = vec![eps; tiny];
        announced.extend(std::iter::repeat(grid.snap(1.0 / 3.0 + delta)).take(THIRDS));
        Ok(QBoundLow {
            accuracy: Accuracy::additive(delta),
            grid: params.grid,
            estimates: EstimateList::new(announced).expect("estimates lie in [0, 1]"),
            tiny,
            budget,
            eps,
            third: grid.snap(1.0 / 3.0),
            wide: grid.snap(1.0 / 3.0 + 2.0 * delta),
            q: 2.0 / 3.0 - 2.0 * delta,
            unit: grid.unit(),
            case: String::new(),
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

impl RevealSource for QBoundLow {
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

impl QBoundLow {
    fn choose(&mut self, history: &History<'_>) -> f64 {
        let i = history.step();
        let m = self.tiny;
        let actions = history.actions;
        let packed_tiny = count_packed(actions, 0..m);
        let over = packed_tiny > self.budget;
        let third_packed = any_packed(actions, m..m + THIRDS);

        let prefix = if over { "1" } else { "2" };
        self.case = if i <= m {
            prefix.to_string()
        } else if third_packed {
            format!("{prefix}.1")
        } else {
            format!("{prefix}.2")
        };

        if i < m {
            return if over { 0.0 } else { self.eps };
        }
        if third_packed {
            self.wide
        } else if over {
            self.third
        } else {
            // y and a_g are both multiples of ε, so this stays on the grid
            let slack = (self.budget - packed_tiny) as f64 * self.eps;
            let size = self.third + slack + self.eps;
            (size / self.unit).round() * self.unit
        }
    }
}

impl Adversary for QBoundLow {
    fn name(&self) -> &'static str {
        "q-low"
    }

    fn target_ratio(&self) -> f64 {
        1.0 / self.q
    }

    fn case_label(&self) -> String {
        self.case.clone()
    }
}
