use necklace_core::walks::{
    difference_walk, fold_min, fold_min_direct, nonreturn_probability, sample_walk,
    single_nonreturn, single_nonreturn_conditioned, NonReturnCurve, StepDistribution,
};
use necklace_core::{enumerate_all, min_cuts_two, RngSeed};
use proptest::prelude::*;

#[test]
fn endpoint_mean_is_zero() {
    let dist = StepDistribution::new(3).unwrap();
    let len = 20;
    let samples = 100_000u64;
    let mut sum = [0f64; 2];
    let mut sum_sq = [0f64; 2];
    for i in 0..samples {
        let mut rng = RngSeed::new(77, i).rng();
        let w = sample_walk(&dist, len, &mut rng);
        for c in 0..2 {
            let x = w.position(len as i64)[c] as f64 / len as f64;
            sum[c] += x;
            sum_sq[c] += x * x;
        }
    }
    for c in 0..2 {
        let mean = sum[c] / samples as f64;
        let var = sum_sq[c] / samples as f64 - mean * mean;
        let sigma = (var / samples as f64).sqrt();
        assert!(mean.abs() < 4.0 * sigma, "coordinate {c}: {mean} vs sigma {sigma}");
    }
}

#[test]
fn two_sided_return_probability_decays_like_one_over_n() {
    // a single t = 3 walk only reaches the origin at multiples of 3, so the check uses
    // W(n) + W(-n), a difference of two independent n-step walks
    let dist = StepDistribution::new(3).unwrap();
    let samples = 200_000u64;
    let grid = [8usize, 16, 32, 64];
    let mut scaled = Vec::new();
    for &n in &grid {
        let zeros = (0..samples)
            .filter(|&i| {
                let mut rng = RngSeed::new(n as u64, i).rng();
                let w = sample_walk(&dist, n, &mut rng);
                let (a, b) = (w.position(n as i64), w.position(-(n as i64)));
                a[0] + b[0] == 0 && a[1] + b[1] == 0
            })
            .count();
        scaled.push(n as f64 * zeros as f64 / samples as f64);
    }
    let max = scaled.iter().cloned().fold(f64::MIN, f64::max);
    let min = scaled.iter().cloned().fold(f64::MAX, f64::min);
    assert!(min > 0.0 && max / min <= 3.0, "{scaled:?}");
}

#[test]
fn fold_search_matches_cut_solver_exhaustively() {
    for (t, m) in [(1, 1), (2, 1), (3, 1), (2, 2), (3, 2)] {
        for n in enumerate_all(2, t, m).unwrap() {
            let x = min_cuts_two(&n).unwrap().cut_count;
            assert_eq!(fold_min(&n).unwrap(), x);
            assert_eq!(fold_min_direct(&n).unwrap(), x, "{n}");
        }
    }
}

#[test]
fn nonreturn_curves_are_monotone() {
    let c: NonReturnCurve<f64> =
        nonreturn_probability(2, &[1, 4, 16, 64, 256], 4000, RngSeed::new(3, 0)).unwrap();
    for w in c.points.windows(2) {
        assert!(w[1].estimate.estimate <= w[0].estimate.estimate);
    }
    assert!(c.points.iter().all(|p| p.estimate.ci_low <= p.estimate.estimate));
    let c: NonReturnCurve<f64> =
        single_nonreturn(3, &[1, 10, 100, 1000], 4000, RngSeed::new(4, 0)).unwrap();
    for w in c.points.windows(2) {
        assert!(w[1].estimate.estimate <= w[0].estimate.estimate);
    }
}

#[test]
fn three_walk_sums_one_step() {
    // A_1 for s = 3 holds the zero-sum, lexicographically positive vectors in {-1,0,1}^3;
    // the event is rarer than for two walks
    let three: NonReturnCurve<f64> =
        nonreturn_probability(3, &[1, 2], 4000, RngSeed::new(5, 0)).unwrap();
    let p = three.points[0].estimate;
    assert!(p.estimate > 0.5 && p.estimate < 1.0, "{p:?}");
    assert_eq!(three.t, 5);
}

#[test]
fn conditioned_and_memoryless_models_are_comparable() {
    // both decay slowly; over short horizons they agree within a constant factor
    let grid = [1usize, 4, 16];
    let free: NonReturnCurve<f64> = single_nonreturn(3, &grid, 10_000, RngSeed::new(6, 0)).unwrap();
    let cond: NonReturnCurve<f64> =
        single_nonreturn_conditioned(3, 8, &grid, 10_000, RngSeed::new(6, 1)).unwrap();
    for (a, b) in free.points.iter().zip(&cond.points) {
        let ratio = a.estimate.estimate / b.estimate.estimate;
        assert!((0.5..=2.0).contains(&ratio), "steps {}: {ratio}", a.n);
    }
}

proptest! {
    #[test]
    fn difference_walk_increments_are_bead_differences(seed in any::<u64>(), t in 2usize..6, m in 1usize..5) {
        let n = necklace_core::generate_uniform(2, t, m, RngSeed::new(seed, 0)).unwrap();
        let w = difference_walk(&n, t * m).unwrap();
        prop_assert!(w.is_origin(0));
        for i in 0..(t * m) as i64 {
            let inc = w.increment(i);
            prop_assert!(inc.iter().all(|x| x.abs() <= 1));
            prop_assert!(inc.iter().filter(|&&x| x == 1).count() <= 1);
            prop_assert!(inc.iter().filter(|&&x| x == -1).count() <= 1);
        }
    }
}
