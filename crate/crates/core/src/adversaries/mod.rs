//! Adaptive adversaries from the lower-bound constructions.
//!
//! Each adversary announces its estimates up front and then picks every
//! actual size after looking at what the policy did so far. Every reveal stays
//! inside the estimate band (up to the grid slack), and the case of the
//! construction that a game went through is reported as a label.

mod noncompetitive;
mod p_bound;
mod q_high;
mod q_low;
mod removability;

pub use noncompetitive::NonCompetitive;
pub use p_bound::PBound;
pub use q_high::QBoundHigh;
pub use q_low::QBoundLow;
pub use removability::RemovabilityBound;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algorithms::{Policy, PolicyKind};
use crate::grid::Grid;
use crate::model::{play, Action, AdversaryInfo, RevealSource, Transcript};

/// Default `ε` of the constructions.
pub const DEFAULT_EPSILON: f64 = 0.01;

pub trait Adversary: RevealSource {
    fn name(&self) -> &'static str;

    /// The ratio the construction forces as `ε → 0`.
    fn target_ratio(&self) -> f64;

    /// Case of the construction the game went through so far.
    fn case_label(&self) -> String;

    /// Whether the game is played with removals allowed.
    fn removable(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversaryParams {
    pub epsilon: f64,
    pub grid: Grid,
}

impl Default for AdversaryParams {
    fn default() -> Self {
        AdversaryParams { epsilon: DEFAULT_EPSILON, grid: Grid::default() }
    }
}

impl AdversaryParams {
    pub fn new(epsilon: f64, grid: Grid) -> Self {
        AdversaryParams { epsilon, grid }
    }

    /// Checks `0 < ε < 1`, `1/ε ∈ N` and that `ε` is a grid point. Returns `1/ε`.
    fn tiny_count(&self) -> Result<usize, ParamError> {
        let eps = self.epsilon;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(ParamError::Epsilon(format!("epsilon must lie in (0, 1), got {eps}")));
        }
        let inv = 1.0 / eps;
        if (inv - inv.round()).abs() > 1e-9 * inv {
            return Err(ParamError::Epsilon(format!("1/epsilon must be an integer, got {inv}")));
        }
        if !self.grid.is_on_grid(eps) {
            return Err(ParamError::Epsilon(format!(
                "epsilon {eps} is not a multiple of 1/{}",
                self.grid.resolution()
            )));
        }
        Ok(inv.round() as usize)
    }

    /// Engineering tolerance `8ε + 16/D` between a measured ratio and a bound.
    pub fn tolerance(&self) -> f64 {
        8.0 * self.epsilon + 16.0 / self.grid.resolution() as f64
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("adversary {adversary} needs delta in {range}, got {delta}")]
    DeltaOutOfRange { adversary: &'static str, delta: f64, range: &'static str },
    #[error("{0}")]
    Epsilon(String),
    #[error("unknown adversary {0:?} (expected p, q-high, q-low, noncomp or removability)")]
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdversaryKind {
    /// Forces `1/p` for `0 < δ < 1/2`.
    P,
    /// Forces `1/q` for `3/16 < δ < 1/2`.
    QHigh,
    /// Forces `1/q` for `1/12 < δ < 1/6`.
    QLow,
    /// Unbounded ratio for `δ >= 1/2`.
    NonCompetitive,
    /// Forces `(3-2δ)/(2-2δ)` with removals, `0 < δ <= (3-√5)/4`.
    Removability,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 5] = [
        AdversaryKind::P,
        AdversaryKind::QHigh,
        AdversaryKind::QLow,
        AdversaryKind::NonCompetitive,
        AdversaryKind::Removability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AdversaryKind::P => "p",
            AdversaryKind::QHigh => "q-high",
            AdversaryKind::QLow => "q-low",
            AdversaryKind::NonCompetitive => "noncomp",
            AdversaryKind::Removability => "removability",
        }
    }

    pub fn build(self, delta: f64, params: AdversaryParams) -> Result<Box<dyn Adversary>, ParamError> {
        Ok(match self {
            AdversaryKind::P => Box::new(PBound::new(delta, params)?),
            AdversaryKind::QHigh => Box::new(QBoundHigh::new(delta, params)?),
            AdversaryKind::QLow => Box::new(QBoundLow::new(delta, params)?),
            AdversaryKind::NonCompetitive => Box::new(NonCompetitive::new(delta, params)?),
            AdversaryKind::Removability => Box::new(RemovabilityBound::new(delta, params)?),
        })
    }

    /// Whether `delta` lies in the range the construction is stated for.
    pub fn accepts_delta(self, delta: f64) -> bool {
        match self {
            AdversaryKind::P => delta > 0.0 && delta < 0.5,
            AdversaryKind::QHigh => delta > 3.0 / 16.0 && delta < 0.5,
            AdversaryKind::QLow => delta > 1.0 / 12.0 && delta < 1.0 / 6.0,
            AdversaryKind::NonCompetitive => delta >= 0.5,
            AdversaryKind::Removability => delta > 0.0 && delta <= crate::ratios::delta_star_additive(),
        }
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdversaryKind {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AdversaryKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ParamError::Unknown(s.to_string()))
    }
}

/// Plays `policy` against `adversary` and records the adversary's case.
pub fn duel_with(
    adversary: &mut dyn Adversary,
    policy: &mut dyn Policy,
    params: AdversaryParams,
) -> Result<Transcript, crate::Error> {
    let removable = adversary.removable();
    let mut transcript = play(adversary, policy, removable, params.grid)?;
    transcript.adversary = Some(AdversaryInfo {
        name: adversary.name().to_string(),
        case: adversary.case_label(),
        target_ratio: adversary.target_ratio(),
        epsilon: params.epsilon,
    });
    Ok(transcript)
}

/// Plays a built-in policy against a built-in adversary.
pub fn duel(
    adversary: AdversaryKind,
    policy: PolicyKind,
    delta: f64,
    params: AdversaryParams,
) -> Result<Transcript, crate::Error> {
    let mut adv = adversary.build(delta, params)?;
    let mut pol = policy.build(&adv.accuracy(), adv.estimates(), adv.removable())?;
    duel_with(adv.as_mut(), pol.as_mut(), params)
}

/// Whether any item in `range` has been packed by an earlier move.
fn any_packed(actions: &[Action], range: std::ops::Range<usize>) -> bool {
    actions
        .get(range.start.min(actions.len())..range.end.min(actions.len()))
        .is_some_and(|a| a.iter().any(Action::packs))
}

fn count_packed(actions: &[Action], range: std::ops::Range<usize>) -> usize {
    actions
        .get(range.start.min(actions.len())..range.end.min(actions.len()))
        .map_or(0, |a| a.iter().filter(|x| x.packs()).count())
}
