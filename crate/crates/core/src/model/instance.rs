use serde::{Deserialize, Serialize};

use super::game::{History, RevealSource};
use super::{validate_reveal, Accuracy, EstimateList, Mode, ModelError};
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceItem {
    pub announced: f64,
    pub actual: f64,
}

/// A fully specified (oblivious) instance, as stored in instance files.
///
/// ```json
/// { "mode": "additive", "delta": 0.25, "removable": false,
///   "items": [ { "announced": 0.5, "actual": 0.25 } ] }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub mode: Mode,
    pub delta: f64,
    #[serde(default)]
    pub removable: bool,
    pub items: Vec<InstanceItem>,
}

impl Instance {
    pub fn new(accuracy: Accuracy, removable: bool, items: Vec<InstanceItem>) -> Self {
        Instance { mode: accuracy.mode, delta: accuracy.delta, removable, items }
    }

    /// Parses and validates an instance file. Parse errors carry line and column.
    pub fn from_json(text: &str, grid: Grid) -> Result<Self, ModelError> {
        let instance: Instance = serde_json::from_str(text).map_err(|e| {
            ModelError::Malformed(format!("line {}, column {}: {}", e.line(), e.column(), e))
        })?;
        instance.validate(grid)?;
        Ok(instance)
    }

    pub fn accuracy(&self) -> Accuracy {
        Accuracy { delta: self.delta, mode: self.mode }
    }

    pub fn estimates(&self) -> Result<EstimateList, ModelError> {
        EstimateList::new(self.items.iter().map(|i| i.announced).collect())
    }

    pub fn actual_sizes(&self) -> Vec<f64> {
        self.items.iter().map(|i| i.actual).collect()
    }

    pub fn validate(&self, grid: Grid) -> Result<(), ModelError> {
        let acc = self.accuracy();
        acc.check()?;
        self.estimates()?;
        for (index, item) in self.items.iter().enumerate() {
            if !validate_reveal(item.announced, item.actual, &acc, grid) {
                return Err(ModelError::BandViolation {
                    index,
                    announced: item.announced,
                    actual: item.actual,
                });
            }
        }
        Ok(())
    }

    /// The instance as a reveal source that ignores the policy's moves.
    pub fn source(&self) -> Result<FixedSource, ModelError> {
        Ok(FixedSource {
            accuracy: self.accuracy(),
            estimates: self.estimates()?,
            actual: self.actual_sizes(),
        })
    }
}

/// Reveals a predetermined sequence of actual sizes.
#[derive(Debug, Clone)]
pub struct FixedSource {
    accuracy: Accuracy,
    estimates: EstimateList,
    actual: Vec<f64>,
}

impl RevealSource for FixedSource {
    fn accuracy(&self) -> Accuracy {
        self.accuracy
    }

    fn estimates(&self) -> &EstimateList {
        &self.estimates
    }

    fn next_size(&mut self, history: &History<'_>) -> f64 {
        self.actual[history.reveals.len()]
    }
}
