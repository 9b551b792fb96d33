use super::{Adversary, AdversaryParams, ParamError};
use crate::grid::Grid;
use crate::model::{Accuracy, EstimateList, History, RevealSource};
use crate::ratios::{delta_star_additive, removability_x_additive};

/// Forces ratio `1/x = (3-2δ)/(2-2δ)` on policies that may remove items, for
/// additive `0 < δ <= (3-√5)/4` and `2ε <= δ`.
///
/// Announces `(1-x, x+ε, x, 1-x+ε-δ)` and reveals `1-x`, then `x+ε`.
/// Holding `x+ε`, the policy sees `x` and `1-x+ε`. Otherwise it sees `x+2ε`,
/// followed by `1-x-ε` if it holds that, or by `1-x-2δ+ε` if not.
#[derive(Debug, Clone)]
pub struct RemovabilityBound {
    accuracy: Accuracy,
    estimates: EstimateList,
    grid: Grid,
    x: f64,
    x_g: f64,
    eps: f64,
    delta: f64,
    case: String,
}

impl RemovabilityBound {
    pub fn new(delta: f64, params: AdversaryParams) -> Result<Self, ParamError> {
        if !(delta > 0.0 && delta <= delta_star_additive()) {
            return Err(ParamError::DeltaOutOfRange {
                adversary: "removability",
                delta,
                range: "(0, (3-sqrt 5)/4]",
            });
        }
        params.tiny_count()?;
        let eps = params.epsilon;
        if 2.0 * eps > delta {
            return Err(ParamError::Epsilon(format!("epsilon {eps} must be at most delta/2 = {}", delta / 2.0)));
        }
        let grid = params.grid;
        let x = removability_x_additive(delta);
        let x_g = grid.snap(x);
        let announced = [1.0 - x_g, x_g + eps, x_g, 1.0 - x_g + eps - delta].map(|a| grid.snap(a)).to_vec();
        Ok(RemovabilityBound {
            accuracy: Accuracy::additive(delta),
            grid: params.grid,
            estimates: EstimateList::new(announced).expect("estimates lie in [0, 1]"),
            x,
            x_g,
            eps,
            delta: grid.snap(delta),
            case: String::new(),
        })
    }
}

impl RevealSource for RemovabilityBound {
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

impl RemovabilityBound {
    fn choose(&mut self, history: &History<'_>) -> f64 {
        let (x, eps) = (self.x_g, self.eps);
        match history.step() {
            0 => {
                self.case = String::new();
                1.0 - x
            }
            1 => x + eps,
            2 => {
                if history.state.holds(1) {
                    self.case = "1".into();
                    x
                } else {
                    self.case = "2".into();
                    x + 2.0 * eps
                }
            }
            _ => {
                if self.case == "1" {
                    1.0 - x + eps
                } else if history.state.holds(2) {
                    self.case = "2.1".into();
                    1.0 - x - eps
                } else {
                    self.case = "2.2".into();
                    1.0 - x - 2.0 * self.delta + eps
                }
            }
        }
    }
}

impl Adversary for RemovabilityBound {
    fn name(&self) -> &'static str {
        "removability"
    }

    fn target_ratio(&self) -> f64 {
        1.0 / self.x
    }

    fn case_label(&self) -> String {
        self.case.clone()
    }

    fn removable(&self) -> bool {
        true
    }
}
