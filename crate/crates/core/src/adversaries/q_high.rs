use super::{any_packed, Adversary, AdversaryParams, ParamError};
use crate::grid::Grid;
use crate::model::{Accuracy, EstimateList, History, RevealSource};
use crate::ratios::ratio_bundle;

/// Forces ratio `1/q` for additive `3/16 < δ < 1/2`, with `k = ⌈κ⌉`.
///
/// Announces `1/ε` tiny items of size `ε`, `k` items of size `δ` and one item
/// of size `q+δ`. Once a tiny item is packed the rest are `0` and the `δ`
/// items come out as `1/k` until one is packed, then as `0`; the last item is
/// `1-1/k` after a packed `1/k` and `q` otherwise. If no tiny item is packed,
/// every `δ` item is `0` and the last one is `q`.
#[derive(Debug, Clone)]
pub struct QBoundHigh {
    accuracy: Accuracy,
    estimates: EstimateList,
    grid: Grid,
    tiny: usize,
    k: usize,
    q: f64,
    q_g: f64,
    unit: f64,
    eps: f64,
    case: String,
}

impl QBoundHigh {
    pub fn new(delta: f64, params: AdversaryParams) -> Result<Self, ParamError> {
        let out_of_range = || ParamError::DeltaOutOfRange { adversary: "q-high", delta, range: "(3/16, 0.5)" };
        if !(delta > 3.0 / 16.0 && delta < 0.5) {
            return Err(out_of_range());
        }
        let bundle = ratio_bundle(delta).map_err(|_| out_of_range())?;
        let tiny = params.tiny_count()?;
        let eps = params.epsilon;
        if eps > delta {
            return Err(ParamError::Epsilon(format!("epsilon {eps} must not exceed delta {delta}")));
        }
        let grid = params.grid;
        let k = bundle.kappa_ceil as usize;
        let unit = grid.snap(1.0 / k as f64);
        assert!(unit <= 2.0 * delta + grid.slack(), "1/k fits the band of δ");
        let q_g = grid.snap(bundle.q);
        let mut announced = vec![eps; tiny];
        announced.extend(std::iter::repeat(grid.snap(delta)).take(k));
        announced.push(grid.snap(bundle.q + delta));
        Ok(QBoundHigh {
            accuracy: Accuracy::additive(delta),
            grid: params.grid,
            estimates: EstimateList::new(announced).expect("estimates lie in [0, 1]"),
            tiny,
            k,
            q: bundle.q,
            q_g,
            unit,
            eps,
            case: String::new(),
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

impl RevealSource for QBoundHigh {
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

impl QBoundHigh {
    fn choose(&mut self, history: &History<'_>) -> f64 {
        let i = history.step();
        let m = self.tiny;
        let actions = history.actions;
        let first_tiny = any_packed(actions, 0..1);
        let tiny_packed = any_packed(actions, 0..m);
        let unit_packed = tiny_packed && any_packed(actions, m..m + self.k);

        let prefix = match (first_tiny, tiny_packed) {
            (true, _) => "1",
            (false, true) => "2→1",
            (false, false) => "2",
        };
        self.case = if i <= m || !tiny_packed {
            prefix.to_string()
        } else if unit_packed {
            format!("{prefix}.1")
        } else {
            format!("{prefix}.2")
        };

        if i < m {
            if tiny_packed {
                0.0
            } else {
                self.eps
            }
        } else if i < m + self.k {
            if tiny_packed && !unit_packed {
                self.unit
            } else {
                0.0
            }
        } else if unit_packed {
            1.0 - self.unit
        } else {
            self.q_g
        }
    }
}

impl Adversary for QBoundHigh {
    fn name(&self) -> &'static str {
        "q-high"
    }

    fn target_ratio(&self) -> f64 {
        1.0 / self.q
    }

    fn case_label(&self) -> String {
        self.case.clone()
    }
}
