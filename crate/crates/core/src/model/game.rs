use thiserror::Error;

use super::instance::Instance;
use super::transcript::Transcript;
use super::{apply_action, validate_reveal, Accuracy, Action, EstimateList, KnapsackState, ModelError, RevealedItem};
use crate::algorithms::{Policy, PolicyKind};
use crate::grid::Grid;
use crate::offline::{competitive_ratio, opt_auto, OfflineError};

/// Everything that happened so far, as seen by an adaptive reveal source.
#[derive(Debug, Clone, Copy)]
pub struct History<'a> {
    pub reveals: &'a [RevealedItem],
    pub actions: &'a [Action],
    pub state: &'a KnapsackState,
}

impl History<'_> {
    /// Index of the item about to be revealed.
    pub fn step(&self) -> usize {
        self.reveals.len()
    }
}

/// Announces estimates up front and then picks each actual size, possibly
/// after looking at the policy's moves.
pub trait RevealSource {
    fn accuracy(&self) -> Accuracy;
    fn estimates(&self) -> &EstimateList;
    fn next_size(&mut self, history: &History<'_>) -> f64;
}

/// Invariant violations detected while simulating a game.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("reveal {actual} for item {index} is outside the band of estimate {announced}")]
    BandViolation { index: usize, announced: f64, actual: f64 },
    #[error("policy {policy} made an illegal move on item {index}: {source}")]
    IllegalMove { policy: String, index: usize, source: ModelError },
    #[error(transparent)]
    Offline(#[from] OfflineError),
}

/// Plays one game: each reveal goes to the policy until it ends; every later
/// item is rejected without consulting it.
pub fn play(
    source: &mut dyn RevealSource,
    policy: &mut dyn Policy,
    removable: bool,
    grid: Grid,
) -> Result<Transcript, SimError> {
    let accuracy = source.accuracy();
    let estimates = source.estimates().clone();
    let n = estimates.len();
    let mut reveals = Vec::with_capacity(n);
    let mut actions = Vec::with_capacity(n);
    let mut state = KnapsackState::new();

    for index in 0..n {
        let history = History { reveals: &reveals, actions: &actions, state: &state };
        let actual = source.next_size(&history);
        let announced = estimates[index];
        if !validate_reveal(announced, actual, &accuracy, grid) {
            return Err(SimError::BandViolation { index, announced, actual });
        }
        let item = RevealedItem { index, actual };
        let action = if state.is_terminated() {
            Action::Reject
        } else {
            policy.decide(&item, &state)
        };
        state = apply_action(&state, &action, &item, removable).map_err(|source| SimError::IllegalMove {
            policy: policy.name().to_string(),
            index,
            source,
        })?;
        reveals.push(item);
        actions.push(action);
    }

    let sizes: Vec<f64> = reveals.iter().map(|r| r.actual).collect();
    let opt = opt_auto(&sizes, grid)?;
    let final_gain = state.load();
    let ratio = competitive_ratio(opt.value, final_gain)?;
    Ok(Transcript {
        accuracy,
        removable,
        grid,
        policy: policy.name().to_string(),
        adversary: None,
        estimates,
        reveals,
        actions,
        final_gain,
        opt_value: opt.value,
        opt_method: opt.method,
        ratio,
    })
}

/// Runs a named policy over a fixed instance.
pub fn play_instance(instance: &Instance, kind: PolicyKind, grid: Grid) -> Result<Transcript, crate::Error> {
    instance.validate(grid)?;
    let mut source = instance.source()?;
    let mut policy = kind.build(&instance.accuracy(), source.estimates(), instance.removable)?;
    Ok(play(&mut source, policy.as_mut(), instance.removable, grid)?)
}
