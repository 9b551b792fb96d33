use oske::offline::{competitive_ratio, opt_auto, opt_bruteforce, opt_grid_dp, OfflineError, OptMethod};
use oske::Grid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_sizes(rng: &mut ChaCha8Rng, n: usize, units: u64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0..=units) as f64 / units as f64).collect()
}

#[test]
fn worked_examples() {
    assert_eq!(opt_bruteforce(&[0.5, 0.5, 0.5]).unwrap().value, 1.0);
    let r = opt_bruteforce(&[0.6, 0.5, 0.4, 0.3]).unwrap();
    assert!((r.value - 1.0).abs() < 1e-12);
    assert_eq!(r.chosen, vec![0, 2]);
    assert_eq!(opt_bruteforce(&[]).unwrap().value, 0.0);

    let g = Grid::default();
    assert_eq!(opt_grid_dp(&[0.25; 4], g).unwrap().value, 1.0);
    assert_eq!(opt_grid_dp(&[0.999999], g).unwrap().value, 0.999999);
    assert!(matches!(opt_grid_dp(&[1.0 / 3.0], g), Err(OfflineError::OffGrid { index: 0, .. })));
    assert!(matches!(opt_bruteforce(&[0.1; 41]), Err(OfflineError::TooLarge(41))));

    assert_eq!(competitive_ratio(1.0, 0.25).unwrap(), 4.0);
    assert_eq!(competitive_ratio(0.0, 0.0).unwrap(), 1.0);
    assert_eq!(competitive_ratio(1.0, 0.0).unwrap(), f64::INFINITY);
    assert!(competitive_ratio(0.5, 0.6).is_err());
}

#[test]
fn dp_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = Grid::default();
    for round in 0..1500 {
        let n = rng.gen_range(0..=20);
        // coarse units force many exact fills and ties
        let units = [10, 100, 1000, 1_000_000][round % 4];
        let sizes = random_sizes(&mut rng, n, units);
        let brute = opt_bruteforce(&sizes).unwrap();
        let dp = opt_grid_dp(&sizes, g).unwrap();
        assert!((brute.value - dp.value).abs() < 1e-12, "{sizes:?}: {} vs {}", brute.value, dp.value);
        let dp_sum: f64 = dp.chosen.iter().map(|&i| sizes[i]).sum();
        assert!((dp_sum - dp.value).abs() < 1e-12);
        assert!(dp.value <= 1.0);
        let brute_sum: f64 = brute.chosen.iter().map(|&i| sizes[i]).sum();
        assert!((brute_sum - brute.value).abs() < 1e-12);
    }
}

#[test]
fn superadditive_under_concatenation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = Grid::default();
    for _ in 0..500 {
        let (na, nb) = (rng.gen_range(0..10), rng.gen_range(0..10));
        let a = random_sizes(&mut rng, na, 1000);
        let b = random_sizes(&mut rng, nb, 1000);
        let ab: Vec<f64> = a.iter().chain(&b).copied().collect();
        let (oa, ob, oab) =
            (opt_auto(&a, g).unwrap().value, opt_auto(&b, g).unwrap().value, opt_auto(&ab, g).unwrap().value);
        assert!(oab + 1e-12 >= oa.max(ob));
    }
}

#[test]
fn large_instances_use_the_dp() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sizes = random_sizes(&mut rng, 3000, 1_000_000);
    let r = opt_auto(&sizes, Grid::default()).unwrap();
    assert_eq!(r.method, OptMethod::GridDp);
    assert!(r.value <= 1.0 && r.value > 0.999);
}
