#![allow(dead_code)]

use oske::algorithms::Policy;
use oske::model::{Accuracy, Action, Instance, InstanceItem, KnapsackState, RevealedItem, Transcript};
use oske::ratios::{ratio_bundle, removability_x_additive};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Fuzzed sizes are multiples of 1/FUZZ_UNITS, a sub-grid of the default grid.
pub const FUZZ_UNITS: i64 = 1000;

/// Panics unless the transcript is band-legal, replays to its recorded gain
/// and survives a JSON round trip unchanged.
pub fn check_transcript(t: &Transcript) {
    if let Err(e) = t.audit() {
        panic!("transcript audit failed: {e}\n{}", t.to_json());
    }
    let back = Transcript::from_json(&t.to_json()).expect("transcript parses back");
    assert_eq!(&back, t, "JSON round trip changed the transcript");
}

/// Sizes the policies and adversaries branch on, for biasing the fuzzer.
fn critical_points(delta: f64) -> Vec<f64> {
    let mut pts = vec![0.5, 1.0 / 3.0, delta, 2.0 * delta, 0.0, 1.0];
    if let Ok(b) = ratio_bundle(delta) {
        pts.extend([b.r + delta, 1.0 - b.r - delta, b.r, b.p, b.q + delta, 1.0 - b.p - delta, 0.5 - delta]);
    }
    let x = removability_x_additive(delta);
    pts.extend([x, 1.0 - x, 1.0 - x - delta, 1.0 - x + delta, x - delta]);
    pts
}

fn units(x: f64) -> i64 {
    (x * FUZZ_UNITS as f64).round() as i64
}

fn size(u: i64) -> f64 {
    u as f64 / FUZZ_UNITS as f64
}

/// Random additive instance with 1..=max_items items; every actual size lies
/// in the band of its estimate.
pub fn random_instance(rng: &mut ChaCha8Rng, delta: f64, removable: bool, max_items: usize) -> Instance {
    let n = rng.gen_range(1..=max_items);
    let crit = critical_points(delta);
    let d = units(delta);
    let items = (0..n)
        .map(|_| {
            let a = if rng.gen_bool(0.6) {
                let c = units(crit[rng.gen_range(0..crit.len())]);
                (c + rng.gen_range(-20..=20)).clamp(0, FUZZ_UNITS)
            } else {
                rng.gen_range(0..=FUZZ_UNITS)
            };
            let lo = (a - d).max(0);
            let hi = (a + d).min(FUZZ_UNITS);
            let y = match rng.gen_range(0..6) {
                0 => lo,
                1 => hi,
                _ => rng.gen_range(lo..=hi),
            };
            InstanceItem { announced: size(a), actual: size(y) }
        })
        .collect();
    Instance::new(Accuracy::additive(delta), removable, items)
}

/// Test policy that plays a fixed move per item index and rejects the rest.
/// Moves that would be illegal for the current state are replaced by Reject.
pub struct Scripted {
    name: String,
    moves: Box<dyn FnMut(&RevealedItem, &KnapsackState) -> Action>,
}

impl Scripted {
    pub fn new(name: &str, moves: impl FnMut(&RevealedItem, &KnapsackState) -> Action + 'static) -> Self {
        Scripted { name: name.to_string(), moves: Box::new(moves) }
    }

    /// Packs exactly the listed indices, when they fit.
    pub fn pack_indices(name: &str, indices: Vec<usize>) -> Self {
        Scripted::new(name, move |item, state| {
            if indices.contains(&item.index) && state.fits(item.actual) {
                Action::Pack
            } else {
                Action::Reject
            }
        })
    }
}

impl Policy for Scripted {
    fn name(&self) -> &str {
        &self.name
    }

    fn decide(&mut self, item: &RevealedItem, state: &KnapsackState) -> Action {
        (self.moves)(item, state)
    }
}
