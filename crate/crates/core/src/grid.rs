//! Size grid shared by adversaries, instance files and the exact optimum.
//!
//! Sizes are plain `f64`, but every size an adversary produces is snapped to a
//! multiple of `1/D`. Competitive-ratio quantities such as `p` contain square
//! roots, so exact rationals are out of reach; a common denominator is what
//! makes the subset-sum optimum exact.

use serde::{Deserialize, Serialize};

/// Default grid resolution `D`.
pub const DEFAULT_GRID: u64 = 1_000_000;

/// Tolerance used for "is this size a multiple of `1/D`".
pub const ON_GRID_TOL: f64 = 1e-12;

/// Grid resolution `D`: sizes are multiples of `1/D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Grid(u64);

impl Grid {
    pub fn new(resolution: u64) -> Option<Self> {
        (resolution > 0).then_some(Grid(resolution))
    }

    pub fn resolution(self) -> u64 {
        self.0
    }

    /// One grid unit, `1/D`.
    pub fn unit(self) -> f64 {
        1.0 / self.0 as f64
    }

    /// Band slack `g = 2/D` granted to reveal validation.
    pub fn slack(self) -> f64 {
        2.0 * self.unit()
    }

    /// Nearest grid point.
    pub fn snap(self, x: f64) -> f64 {
        (x * self.0 as f64).round() / self.0 as f64
    }

    /// Nearest grid point not below `x`.
    pub fn snap_up(self, x: f64) -> f64 {
        let d = self.0 as f64;
        let units = (x * d).round();
        if units / d < x {
            (units + 1.0) / d
        } else {
            units / d
        }
    }

    /// Nearest grid point not above `x`.
    pub fn snap_down(self, x: f64) -> f64 {
        let d = self.0 as f64;
        let units = (x * d).round();
        if units / d > x {
            (units - 1.0) / d
        } else {
            units / d
        }
    }

    /// Integer number of grid units for `x`, or `None` if `x` is off the grid.
    pub fn units(self, x: f64) -> Option<u64> {
        if !(x.is_finite() && x >= -ON_GRID_TOL) {
            return None;
        }
        let units = (x * self.0 as f64).round();
        if (x - units / self.0 as f64).abs() <= ON_GRID_TOL {
            Some(units.max(0.0) as u64)
        } else {
            None
        }
    }

    pub fn is_on_grid(self, x: f64) -> bool {
        self.units(x).is_some()
    }

    /// Reads `OSKE_GRID_D`, falling back to [`DEFAULT_GRID`].
    pub fn from_env() -> Result<Self, String> {
        match std::env::var("OSKE_GRID_D") {
            Ok(raw) => raw
                .trim()
                .parse::<u64>()
                .ok()
                .and_then(Grid::new)
                .ok_or_else(|| format!("OSKE_GRID_D must be a positive integer, got {raw:?}")),
            Err(_) => Ok(Grid::default()),
        }
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid(DEFAULT_GRID)
    }
}
