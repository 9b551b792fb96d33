use serde::{Deserialize, Serialize};

use super::{apply_action, validate_reveal, Accuracy, Action, EstimateList, KnapsackState, ModelError, RevealedItem};
use crate::grid::Grid;
use crate::offline::OptMethod;

/// Which adversary produced a transcript, and which branch of its case
/// analysis the game went through.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversaryInfo {
    pub name: String,
    pub case: String,
    #[serde(with = "ratio_serde")]
    pub target_ratio: f64,
    pub epsilon: f64,
}

/// Full record of one game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub accuracy: Accuracy,
    pub removable: bool,
    pub grid: Grid,
    pub policy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adversary: Option<AdversaryInfo>,
    pub estimates: EstimateList,
    pub reveals: Vec<RevealedItem>,
    pub actions: Vec<Action>,
    pub final_gain: f64,
    pub opt_value: f64,
    pub opt_method: OptMethod,
    /// `opt_value / final_gain`; serialized as `"inf"` when the gain is zero.
    #[serde(with = "ratio_serde")]
    pub ratio: f64,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| {
            ModelError::Malformed(format!("line {}, column {}: {}", e.line(), e.column(), e))
        })
    }

    /// Final state after the recorded moves.
    pub fn final_state(&self) -> Result<KnapsackState, ModelError> {
        if self.reveals.len() != self.actions.len() || self.reveals.len() != self.estimates.len() {
            return Err(ModelError::Malformed(format!(
                "transcript lengths differ: {} estimates, {} reveals, {} actions",
                self.estimates.len(),
                self.reveals.len(),
                self.actions.len()
            )));
        }
        let mut state = KnapsackState::new();
        for (item, action) in self.reveals.iter().zip(&self.actions) {
            state = apply_action(&state, action, item, self.removable)?;
        }
        Ok(state)
    }

    /// Re-checks a recorded game: every reveal lies in its band, every move is
    /// legal (so the load never exceeds 1), the replayed gain matches the
    /// recorded one and does not exceed the recorded optimum.
    pub fn audit(&self) -> Result<(), ModelError> {
        for (i, item) in self.reveals.iter().enumerate() {
            if item.index != i {
                return Err(ModelError::Malformed(format!("reveal {i} carries index {}", item.index)));
            }
            let announced = self.estimates.get(i).unwrap_or(f64::NAN);
            if !validate_reveal(announced, item.actual, &self.accuracy, self.grid) {
                return Err(ModelError::BandViolation { index: i, announced, actual: item.actual });
            }
        }
        let gain = replay(self)?;
        if (gain - self.final_gain).abs() > 1e-12 {
            return Err(ModelError::Malformed(format!(
                "replayed gain {gain} differs from recorded {}",
                self.final_gain
            )));
        }
        if gain > self.opt_value + 1e-9 {
            return Err(ModelError::Malformed(format!("gain {gain} exceeds optimum {}", self.opt_value)));
        }
        Ok(())
    }
}

/// Replays the recorded moves through [`apply_action`] and returns the final gain.
pub fn replay(transcript: &Transcript) -> Result<f64, ModelError> {
    Ok(transcript.final_state()?.load())
}

pub(crate) mod ratio_serde {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
        if value.is_infinite() && *value > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*value)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Raw::Str(s) => Err(de::Error::custom(format!("expected a number or \"inf\", got {s:?}"))),
        }
    }
}
