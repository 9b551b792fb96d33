//! Exact offline optimum and the competitive ratio.
//!
//! Two independent routes: meet-in-the-middle enumeration over float sizes
//! (`n <= 40`), and a reachability bitset over grid units `0..=D` for
//! grid-snapped instances of any length.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::Grid;
use crate::model::CAPACITY_EPS;

/// Largest instance handled by [`opt_bruteforce`].
pub const BRUTE_MAX_ITEMS: usize = 40;

/// Instances up to this size use brute force in [`opt_auto`].
const AUTO_BRUTE_ITEMS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptMethod {
    Brute,
    GridDp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub value: f64,
    /// Indices of the chosen items, ascending.
    pub chosen: Vec<usize>,
    pub method: OptMethod,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OfflineError {
    #[error("brute force handles at most {BRUTE_MAX_ITEMS} items, got {0}")]
    TooLarge(usize),
    #[error("size {value} of item {index} is not a multiple of 1/{resolution}")]
    OffGrid { index: usize, value: f64, resolution: u64 },
    #[error("gain {gain} exceeds optimum {opt}")]
    Inconsistent { opt: f64, gain: f64 },
}

/// Every subset sum of `sizes` that fits, with its membership mask.
fn half_sums(sizes: &[f64]) -> Vec<(f64, u64)> {
    let mut sums = Vec::with_capacity(1 << sizes.len());
    sums.push((0.0, 0u64));
    for (bit, &x) in sizes.iter().enumerate() {
        let len = sums.len();
        for j in 0..len {
            let (s, mask) = sums[j];
            let t = s + x;
            if t <= 1.0 + CAPACITY_EPS {
                sums.push((t, mask | (1 << bit)));
            }
        }
    }
    sums
}

/// Exact maximum subset sum not exceeding 1, by meet in the middle.
pub fn opt_bruteforce(sizes: &[f64]) -> Result<OptResult, OfflineError> {
    if sizes.len() > BRUTE_MAX_ITEMS {
        return Err(OfflineError::TooLarge(sizes.len()));
    }
    let mid = sizes.len() / 2;
    let left = half_sums(&sizes[..mid]);
    let mut right = half_sums(&sizes[mid..]);
    right.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best = (0.0f64, 0u64, 0u64);
    for &(s, lmask) in &left {
        let room = 1.0 + CAPACITY_EPS - s;
        let pos = right.partition_point(|&(t, _)| t <= room);
        if pos == 0 {
            continue;
        }
        let (t, rmask) = right[pos - 1];
        if s + t > best.0 {
            best = (s + t, lmask, rmask);
        }
    }
    let mut chosen: Vec<usize> = (0..mid).filter(|i| best.1 >> i & 1 == 1).collect();
    chosen.extend((0..sizes.len() - mid).filter(|i| best.2 >> i & 1 == 1).map(|i| i + mid));
    Ok(OptResult { value: sum_of(sizes, &chosen), chosen, method: OptMethod::Brute })
}

fn sum_of(sizes: &[f64], chosen: &[usize]) -> f64 {
    chosen.iter().map(|&i| sizes[i]).sum()
}

/// Exact maximum subset sum not exceeding 1 for sizes that are multiples of `1/D`.
///
/// Reachability bitset over capacities `0..=D`. For every capacity the first
/// item that made it reachable is remembered, which is enough to walk back to
/// a witness set.
pub fn opt_grid_dp(sizes: &[f64], grid: Grid) -> Result<OptResult, OfflineError> {
    let cap = grid.resolution() as usize;
    let mut weights = Vec::with_capacity(sizes.len());
    for (index, &value) in sizes.iter().enumerate() {
        match grid.units(value) {
            Some(w) => weights.push(w as usize),
            None => {
                return Err(OfflineError::OffGrid { index, value, resolution: grid.resolution() })
            }
        }
    }

    let words = cap / 64 + 1;
    let mut bits = vec![0u64; words];
    bits[0] = 1;
    let mut from = vec![u32::MAX; cap + 1];
    let mut reach = 0usize;

    for (i, &w) in weights.iter().enumerate() {
        if w == 0 || w > cap {
            continue;
        }
        let top = (reach + w).min(cap);
        let (ws, bs) = (w / 64, w % 64);
        // descending so that bits[src] still holds the pre-item value
        for dst in (ws..=top / 64).rev() {
            let src = dst - ws;
            let mut shifted = bits[src] << bs;
            if bs > 0 && src > 0 {
                shifted |= bits[src - 1] >> (64 - bs);
            }
            let fresh = shifted & !bits[dst];
            if fresh != 0 {
                let mut f = fresh;
                while f != 0 {
                    let c = dst * 64 + f.trailing_zeros() as usize;
                    f &= f - 1;
                    if c <= cap {
                        from[c] = i as u32;
                        bits[dst] |= 1 << (c % 64);
                    }
                }
            }
        }
        reach = top;
    }

    let best = (0..=reach).rev().find(|&c| bits[c / 64] >> (c % 64) & 1 == 1).unwrap_or(0);
    let mut chosen = Vec::new();
    let mut c = best;
    while c > 0 {
        let i = from[c] as usize;
        chosen.push(i);
        c -= weights[i];
    }
    chosen.sort_unstable();
    Ok(OptResult { value: best as f64 / cap as f64, chosen, method: OptMethod::GridDp })
}

/// Brute force for short instances, grid DP otherwise.
pub fn opt_auto(sizes: &[f64], grid: Grid) -> Result<OptResult, OfflineError> {
    if sizes.len() <= AUTO_BRUTE_ITEMS {
        return opt_bruteforce(sizes);
    }
    match opt_grid_dp(sizes, grid) {
        Err(OfflineError::OffGrid { .. }) if sizes.len() <= BRUTE_MAX_ITEMS => opt_bruteforce(sizes),
        other => other,
    }
}

/// `opt / gain`, with `+inf` for a zero gain against a positive optimum and 1
/// for the vacuous `0 / 0`.
pub fn competitive_ratio(opt: f64, gain: f64) -> Result<f64, OfflineError> {
    if gain > opt + 1e-9 {
        return Err(OfflineError::Inconsistent { opt, gain });
    }
    Ok(if gain <= 0.0 {
        if opt <= 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        opt / gain
    })
}
