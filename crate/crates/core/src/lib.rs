//! Online knapsack with size estimates.
//!
//! Every item announces an estimate of its size before the sequence starts.
//! Actual sizes are revealed one at a time and must lie within `δ` of the
//! estimate (additively or multiplicatively). A policy packs or rejects each
//! item on arrival, and may discard packed items if the variant allows it.
//!
//! - [`model`]: items, knapsack state, actions and the game loop.
//! - [`ratios`]: the competitive-ratio formulas as functions of `δ`.
//! - [`algorithms`]: the online policies.
//! - [`adversaries`]: adaptive reveal sources that force the lower bounds.
//! - [`offline`]: the exact offline optimum.
//! - [`cli`]: the `oske` command line.
//!
//! ```
//! use oske::algorithms::PolicyKind;
//! use oske::grid::Grid;
//! use oske::model::{Accuracy, Instance, InstanceItem, play_instance};
//!
//! let items = vec![
//!     InstanceItem { announced: 0.3, actual: 0.35 },
//!     InstanceItem { announced: 0.6, actual: 0.55 },
//! ];
//! let instance = Instance::new(Accuracy::additive(0.1), false, items);
//! let t = play_instance(&instance, PolicyKind::Alg2, Grid::default()).unwrap();
//! assert!(t.final_gain <= t.opt_value);
//! ```

pub mod adversaries;
pub mod algorithms;
pub mod cli;
pub mod grid;
pub mod model;
pub mod offline;
pub mod ratios;

use thiserror::Error;

pub use adversaries::{duel, AdversaryKind, AdversaryParams, ParamError};
pub use algorithms::{ConfigError, Policy, PolicyKind};
pub use grid::Grid;
pub use model::{Accuracy, Action, Mode, ModelError, SimError, Transcript};
pub use offline::OfflineError;
pub use ratios::{ratio_bundle, RatioError};

/// Any error the library can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Ratio(#[from] RatioError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Offline(#[from] OfflineError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl Error {
    /// True for invariant violations found while simulating a game.
    pub fn is_simulation(&self) -> bool {
        matches!(self, Error::Sim(_))
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/ratios.md")]
    mod ratios {}
    #[doc = include_str!("../../../book/src/algorithms.md")]
    mod algorithms {}
    #[doc = include_str!("../../../book/src/adversaries.md")]
    mod adversaries {}
    #[doc = include_str!("../../../book/src/offline.md")]
    mod offline {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
