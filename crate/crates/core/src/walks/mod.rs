//! Lattice walks behind the two-thief probabilities.
//!
//! With two thieves and a fair split of the halves, shifting both cuts right by `i`
//! keeps the split fair exactly when the difference walk of the necklace is back at the
//! origin at time `i`. Non-return estimates for such walks, and for sums of independent
//! two-sided walks, are what drive the `1 / log m` behaviour at `s = (t + 1) / 2`.

mod fold;
mod nonreturn;

use rand::Rng;

use crate::error::{Error, Result};
use crate::necklace::Necklace;

pub use fold::{fold_min, fold_min_direct, FOLD_DIRECT_MAX_LEN};
pub use nonreturn::{
    nonreturn_probability, single_nonreturn, single_nonreturn_conditioned, NonReturnCurve,
    NONRETURN_WORK_CAP,
};

/// Uniform distribution on `{t e_j - (1, ..., 1) : j < t - 1} ∪ {-(1, ..., 1)}` in
/// `Z^(t-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepDistribution {
    t: usize,
}

impl StepDistribution {
    pub fn new(t: usize) -> Result<Self> {
        if t < 2 {
            return Err(Error::invalid(format!("steps need t >= 2, got {t}")));
        }
        Ok(StepDistribution { t })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.t - 1
    }

    /// Support point `j`; index `t - 1` is the all-minus-one vector.
    pub fn step(&self, j: usize) -> Vec<i64> {
        let mut v = vec![-1; self.dim()];
        if j < self.dim() {
            v[j] += self.t as i64;
        }
        v
    }

    pub fn support(&self) -> Vec<Vec<i64>> {
        (0..self.t).map(|j| self.step(j)).collect()
    }

    /// Adds a random step to `pos` in place.
    pub fn add_sample<R: Rng + ?Sized>(&self, rng: &mut R, pos: &mut [i64], sign: i64) {
        let j = rng.random_range(0..self.t);
        for x in pos.iter_mut() {
            *x -= sign;
        }
        if j < self.dim() {
            pos[j] += sign * self.t as i64;
        }
    }
}

/// Positions of a walk at integer times `-back..=forward`, anchored at the origin at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkPath {
    dim: usize,
    back: usize,
    forward: usize,
    coords: Vec<i64>,
}

impl WalkPath {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn back(&self) -> usize {
        self.back
    }

    pub fn forward(&self) -> usize {
        self.forward
    }

    pub fn position(&self, time: i64) -> &[i64] {
        assert!(
            -(self.back as i64) <= time && time <= self.forward as i64,
            "time {time} outside -{}..={}",
            self.back,
            self.forward
        );
        let row = (time + self.back as i64) as usize;
        &self.coords[row * self.dim..(row + 1) * self.dim]
    }

    /// `position(time + 1) - position(time)`.
    pub fn increment(&self, time: i64) -> Vec<i64> {
        let a = self.position(time);
        let b = self.position(time + 1);
        b.iter().zip(a).map(|(x, y)| x - y).collect()
    }

    pub fn is_origin(&self, time: i64) -> bool {
        self.position(time).iter().all(|&x| x == 0)
    }
}

/// Two-sided walk with `len` iid steps on each side of time 0.
pub fn sample_walk<R: Rng + ?Sized>(dist: &StepDistribution, len: usize, rng: &mut R) -> WalkPath {
    let dim = dist.dim();
    let mut coords = vec![0i64; (2 * len + 1) * dim];
    let mut pos = vec![0i64; dim];
    for i in 1..=len {
        dist.add_sample(rng, &mut pos, 1);
        coords[(len + i) * dim..(len + i + 1) * dim].copy_from_slice(&pos);
    }
    pos.fill(0);
    for i in 1..=len {
        // W(-i) = W(-i + 1) - Y_{-i + 1}
        dist.add_sample(rng, &mut pos, -1);
        coords[(len - i) * dim..(len - i + 1) * dim].copy_from_slice(&pos);
    }
    WalkPath {
        dim,
        back: len,
        forward: len,
        coords,
    }
}

/// `position(i) = U(i) - (U(tm + i) - U(tm))` over the first `t - 1` types, for
/// `0 <= i <= window`. When the halves split is fair, the partition with cuts
/// `{i, tm + i}` is fair exactly when `position(i)` is the origin.
pub fn difference_walk(necklace: &Necklace, window: usize) -> Result<WalkPath> {
    if necklace.k() != 2 {
        return Err(Error::unsupported(format!(
            "difference walks need k = 2, got k = {}",
            necklace.k()
        )));
    }
    let half = necklace.share();
    if window > half {
        return Err(Error::invalid(format!(
            "window {window} exceeds tm = {half}"
        )));
    }
    let dim = necklace.t() - 1;
    let beads = necklace.beads();
    let mut coords = vec![0i64; (window + 1) * dim];
    let mut pos = vec![0i64; dim];
    for i in 1..=window {
        let (a, b) = (beads[i - 1] as usize, beads[half + i - 1] as usize);
        if a < dim {
            pos[a] += 1;
        }
        if b < dim {
            pos[b] -= 1;
        }
        coords[i * dim..(i + 1) * dim].copy_from_slice(&pos);
    }
    Ok(WalkPath {
        dim,
        back: 0,
        forward: window,
        coords,
    })
}
