use super::{any_packed, Adversary, AdversaryParams, ParamError};
use crate::grid::Grid;
use crate::model::{Accuracy, EstimateList, History, RevealSource};
use crate::ratios::ratio_bundle;

/// Forces ratio `1/p` on any policy, for additive `0 < δ < 1/2`.
///
/// Announces `1/ε` tiny items of size `ε`, `⌊κ⌋` items of size `1/2` and one
/// item of size `1-p-δ`. The tiny items stay at `ε` until the policy packs one
/// and are `0` afterwards. Half items come out as `p` (or `p+ε` if no tiny item
/// was packed) until one is packed, then as `1-p`. The last item is `1-p` after
/// a packed half item and `1-p-2δ` otherwise.
#[derive(Debug, Clone)]
pub struct PBound {
    accuracy: Accuracy,
    estimates: EstimateList,
    grid: Grid,
    tiny: usize,
    halves: usize,
    p: f64,
    p_g: f64,
    eps: f64,
    last_small: f64,
    case: String,
}

impl PBound {
    pub fn new(delta: f64, params: AdversaryParams) -> Result<Self, ParamError> {
        let out_of_range = || ParamError::DeltaOutOfRange { adversary: "p", delta, range: "(0, 0.5)" };
        let bundle = ratio_bundle(delta).map_err(|_| out_of_range())?;
        let tiny = params.tiny_count()?;
        let eps = params.epsilon;
        let grid = params.grid;
        let p = bundle.p;
        if eps > delta || eps > 0.5 + delta - p {
            return Err(ParamError::Epsilon(format!(
                "epsilon {eps} too large for delta {delta} (at most {})",
                delta.min(0.5 + delta - p)
            )));
        }
        let halves = bundle.kappa_floor as usize;
        let mut announced = vec![eps; tiny];
        announced.extend(std::iter::repeat(0.5).take(halves));
        announced.push(grid.snap(1.0 - p - delta));
        let last_small = grid.snap(1.0 - p - 2.0 * delta).max(0.0);
        Ok(PBound {
            accuracy: Accuracy::additive(delta),
            grid: params.grid,
            estimates: EstimateList::new(announced).expect("estimates lie in [0, 1]"),
            tiny,
            halves,
            p,
            p_g: grid.snap(p),
            eps,
            last_small,
            case: String::new(),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

impl RevealSource for PBound {
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

impl PBound {
    fn choose(&mut self, history: &History<'_>) -> f64 {
        let i = history.step();
        let m = self.tiny;
        let actions = history.actions;
        let first_tiny = any_packed(actions, 0..1);
        let tiny_packed = any_packed(actions, 0..m);
        let half_packed = any_packed(actions, m..m + self.halves);

        let prefix = match (first_tiny, tiny_packed) {
            (true, _) => "1",
            (false, true) => "2→1",
            (false, false) => "2",
        };
        let suffix = if half_packed { ".1" } else { ".2" };
        self.case = if i <= m { prefix.to_string() } else { format!("{prefix}{suffix}") };

        if i < m {
            if tiny_packed {
                0.0
            } else {
                self.eps
            }
        } else if i < m + self.halves {
            if half_packed {
                1.0 - self.p_g
            } else if tiny_packed {
                self.p_g
            } else {
                self.p_g + self.eps
            }
        } else if half_packed {
            1.0 - self.p_g
        } else {
            self.last_small
        }
    }
}

impl Adversary for PBound {
    fn name(&self) -> &'static str {
        "p"
    }

    fn target_ratio(&self) -> f64 {
        1.0 / self.p
    }

    fn case_label(&self) -> String {
        self.case.clone()
    }
}
