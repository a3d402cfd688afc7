//! Monte Carlo non-return probabilities.
//!
//! Each trial records the first time (or radius) at which its walk hits the origin, so
//! a single batch of trials answers every point of the grid and the resulting curve is
//! non-increasing by construction.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::necklace::generate_with;
use crate::oracles::fair_probability_exact;
use crate::rng::RngSeed;
use crate::scalar::Scalar;
use crate::stats::Estimate;

use super::{difference_walk, sample_walk, StepDistribution};

/// Upper bound on `trials * (2 N + 1)^(s - 1)` for [`nonreturn_probability`].
pub const NONRETURN_WORK_CAP: u64 = 50_000_000_000;

/// Largest expected number of rejections per trial in the conditioned model.
const REJECTION_CAP: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonReturnPoint<S> {
    /// `N` for sums of two-sided walks, the step count for a single walk.
    pub n: usize,
    pub estimate: Estimate<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonReturnCurve<S> {
    /// Number of walks summed (1 for a single walk).
    pub walks: usize,
    pub t: usize,
    pub trials: u64,
    pub points: Vec<NonReturnPoint<S>>,
}

fn check_grid(grid: &[usize], trials: u64) -> Result<usize> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if grid.is_empty() || grid.contains(&0) {
        return Err(Error::invalid(format!("grid must be non-empty and positive: {grid:?}")));
    }
    Ok(*grid.iter().max().expect("non-empty"))
}

fn curve<S: Scalar>(
    walks: usize,
    t: usize,
    grid: &[usize],
    trials: u64,
    hits: &[Option<usize>],
) -> NonReturnCurve<S> {
    let points = grid
        .iter()
        .map(|&n| {
            let survived = hits.iter().filter(|h| h.is_none_or(|r| r > n)).count() as u64;
            NonReturnPoint {
                n,
                estimate: Estimate::wilson(survived, trials),
            }
        })
        .collect();
    NonReturnCurve {
        walks,
        t,
        trials,
        points,
    }
}

/// Probability that `sum_j W_j(k_j) != 0` for every `k` in `A_N`, where `W_1..W_s` are
/// iid two-sided walks in `Z^(2s-2)` with [`StepDistribution`] steps (`t = 2s - 1`) and
/// `A_N` holds the nonzero, lexicographically positive `k ∈ [-N, N]^s` with zero sum.
pub fn nonreturn_probability<S: Scalar>(
    s: usize,
    grid: &[usize],
    trials: u64,
    seed: RngSeed,
) -> Result<NonReturnCurve<S>> {
    if s < 2 {
        return Err(Error::invalid(format!("need at least two walks, got {s}")));
    }
    let n_max = check_grid(grid, trials)?;
    let work = ((2 * n_max + 1) as f64).powi(s as i32 - 1) * trials as f64;
    if work > NONRETURN_WORK_CAP as f64 {
        return Err(Error::too_large("trials * |A_N|", work, NONRETURN_WORK_CAP));
    }
    let t = 2 * s - 1;
    let dist = StepDistribution::new(t)?;
    let hits: Vec<Option<usize>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.trial(i).rng();
            let walks: Vec<_> = (0..s).map(|_| sample_walk(&dist, n_max, &mut rng)).collect();
            first_hit_radius(&walks, n_max)
        })
        .collect();
    Ok(curve(s, t, grid, trials, &hits))
}

/// Smallest `max_j |k_j|` over zero-sum, lexicographically positive `k` with
/// `sum_j W_j(k_j) = 0`.
fn first_hit_radius(walks: &[super::WalkPath], n_max: usize) -> Option<usize> {
    let s = walks.len();
    let dim = walks[0].dim();
    if s == 2 {
        // A_N = {(a, -a) : 1 <= a <= N}
        return (1..=n_max).find(|&a| {
            let (x, y) = (walks[0].position(a as i64), walks[1].position(-(a as i64)));
            x.iter().zip(y).all(|(p, q)| p + q == 0)
        });
    }
    let n = n_max as i64;
    let mut best: Option<usize> = None;
    let mut k = vec![-n; s - 1];
    let mut sum = vec![0i64; dim];
    loop {
        let last = -k.iter().sum::<i64>();
        let radius = k.iter().chain([&last]).map(|x| x.unsigned_abs() as usize).max();
        let lex_positive = k
            .iter()
            .chain([&last])
            .find(|&&x| x != 0)
            .is_some_and(|&x| x > 0);
        if last.abs() <= n && lex_positive && best.is_none_or(|b| radius.is_some_and(|r| r < b)) {
            sum.fill(0);
            for (j, &kj) in k.iter().chain([&last]).enumerate() {
                for (acc, x) in sum.iter_mut().zip(walks[j].position(kj)) {
                    *acc += x;
                }
            }
            if sum.iter().all(|&x| x == 0) {
                best = radius;
            }
        }
        // odometer over [-n, n]^(s-1)
        let mut i = s - 1;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if k[i] < n {
                k[i] += 1;
                break;
            }
            k[i] = -n;
        }
    }
}

/// Probability that the walk with steps `a - b`, `a, b` iid uniform over
/// `{0, e_1, ..., e_(t-1)}` in `Z^(t-1)`, avoids the origin at times `1..=steps`.
pub fn single_nonreturn<S: Scalar>(
    t: usize,
    grid: &[usize],
    trials: u64,
    seed: RngSeed,
) -> Result<NonReturnCurve<S>> {
    if t < 2 {
        return Err(Error::invalid(format!("walks need t >= 2, got {t}")));
    }
    let max_steps = check_grid(grid, trials)?;
    let dim = t - 1;
    let hits: Vec<Option<usize>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            use rand::Rng;
            let mut rng = seed.trial(i).rng();
            let mut pos = vec![0i64; dim];
            let mut nonzero = 0usize;
            for step in 1..=max_steps {
                let a = rng.random_range(0..t);
                let b = rng.random_range(0..t);
                if a == b {
                    if nonzero == 0 {
                        return Some(step);
                    }
                    continue;
                }
                for (c, delta) in [(a, 1), (b, -1)] {
                    if c < dim {
                        let before = pos[c] != 0;
                        pos[c] += delta;
                        match (before, pos[c] != 0) {
                            (false, true) => nonzero += 1,
                            (true, false) => nonzero -= 1,
                            _ => {}
                        }
                    }
                }
                if nonzero == 0 {
                    return Some(step);
                }
            }
            None
        })
        .collect();
    Ok(curve(1, t, grid, trials, &hits))
}

/// The same probability for the difference walk of a uniform `(2, t, m)` necklace
/// conditioned on its halves split being fair, sampled by rejection.
pub fn single_nonreturn_conditioned<S: Scalar>(
    t: usize,
    m: usize,
    grid: &[usize],
    trials: u64,
    seed: RngSeed,
) -> Result<NonReturnCurve<S>> {
    let max_steps = check_grid(grid, trials)?;
    if max_steps >= t * m {
        return Err(Error::invalid(format!(
            "steps must stay below tm = {}, got {max_steps}",
            t * m
        )));
    }
    let p = fair_probability_exact(2, t, m)?.to_f64();
    if 1.0 / p > REJECTION_CAP {
        return Err(Error::too_large("expected rejections per trial", 1.0 / p, REJECTION_CAP));
    }
    let half = t * m;
    let hits: Vec<Option<usize>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.trial(i).rng();
            let necklace = loop {
                let n = generate_with(2, t, m, &mut rng);
                let mut counts = vec![0usize; t];
                for &b in &n.beads()[..half] {
                    counts[b as usize] += 1;
                }
                if counts.iter().all(|&c| c == m) {
                    break n;
                }
            };
            let w = difference_walk(&necklace, max_steps).expect("window below tm");
            (1..=max_steps).find(|&i| w.is_origin(i as i64))
        })
        .collect();
    Ok(curve(1, t, grid, trials, &hits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_walks_one_step() {
        let c: NonReturnCurve<f64> =
            nonreturn_probability(2, &[1], 40_000, RngSeed::new(11, 0)).unwrap();
        let e = c.points[0].estimate;
        let sigma = (2.0 / 9.0f64 / 40_000.0).sqrt();
        assert!((e.estimate - 2.0 / 3.0).abs() < 4.0 * sigma, "{e:?}");
    }

    #[test]
    fn single_walk_one_step() {
        let c: NonReturnCurve<f64> =
            single_nonreturn(3, &[1, 2, 4], 40_000, RngSeed::new(5, 0)).unwrap();
        let e = c.points[0].estimate;
        let sigma = (2.0 / 9.0f64 / 40_000.0).sqrt();
        assert!((e.estimate - 2.0 / 3.0).abs() < 4.0 * sigma, "{e:?}");
        assert!(c.points.windows(2).all(|w| w[0].estimate.estimate >= w[1].estimate.estimate));
    }

    #[test]
    fn three_walks_agree_with_direct_search() {
        // the odometer search against a plain scan of all k for a few seeds
        let dist = StepDistribution::new(5).unwrap();
        for i in 0..20 {
            let mut rng = RngSeed::new(9, i).rng();
            let walks: Vec<_> = (0..3).map(|_| sample_walk(&dist, 4, &mut rng)).collect();
            let mut direct: Option<usize> = None;
            for a in -4i64..=4 {
                for b in -4i64..=4 {
                    let c = -a - b;
                    let first = [a, b, c].into_iter().find(|&x| x != 0);
                    if c.abs() > 4 || first.is_none_or(|x| x < 0) {
                        continue;
                    }
                    let zero = (0..4).all(|d| {
                        walks[0].position(a)[d] + walks[1].position(b)[d] + walks[2].position(c)[d]
                            == 0
                    });
                    let r = a.abs().max(b.abs()).max(c.abs()) as usize;
                    if zero && direct.is_none_or(|x| r < x) {
                        direct = Some(r);
                    }
                }
            }
            assert_eq!(first_hit_radius(&walks, 4), direct);
        }
    }

    #[test]
    fn conditioned_model_one_step() {
        // given a fair halves split of a (2, 3, 2) necklace, bead 1 and bead 7 agree with
        // probability sum_j (m/tm)^2 = 1/3
        let c: NonReturnCurve<f64> =
            single_nonreturn_conditioned(3, 2, &[1], 20_000, RngSeed::new(1, 0)).unwrap();
        let e = c.points[0].estimate;
        let sigma = (2.0 / 9.0f64 / 20_000.0).sqrt();
        assert!((e.estimate - 2.0 / 3.0).abs() < 4.0 * sigma, "{e:?}");
    }

    #[test]
    fn guards() {
        assert!(nonreturn_probability::<f64>(1, &[1], 10, RngSeed::new(0, 0)).is_err());
        assert!(nonreturn_probability::<f64>(2, &[], 10, RngSeed::new(0, 0)).is_err());
        assert!(nonreturn_probability::<f64>(4, &[1000], 1000, RngSeed::new(0, 0))
            .unwrap_err()
            .is_too_large());
        assert!(single_nonreturn_conditioned::<f64>(3, 2, &[6], 10, RngSeed::new(0, 0)).is_err());
    }
}
