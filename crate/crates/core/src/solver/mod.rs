//! Minimum number of cuts for a fair split, and fair-partition counting.
//!
//! Two backends answer the same questions. [`min_cuts_exact`] enumerates cut sets and
//! owner sequences and serves as the oracle; [`min_cuts_two`] is a pruned depth-first
//! search for two thieves and is the path experiments use. Among witnesses with the
//! same cut count both return the lexicographically smallest cut vector.

mod dfs;
mod exact;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::necklace::Necklace;
use crate::oracles::factorial::binomial;
use crate::partition::Partition;

use dfs::TwoThiefSearch;

/// Size guards for exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverLimits {
    /// Longest necklace [`min_cuts_exact`] accepts when `k = 2`.
    pub exact_len_two: usize,
    /// Longest necklace accepted by the enumeration backend when `k >= 3`.
    pub exact_len_general: usize,
    /// Largest `C(n - 1, s)` for which [`count_fair_scut`] runs.
    pub count_candidates: u64,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            exact_len_two: 40,
            exact_len_general: 24,
            count_candidates: 1_000_000_000,
        }
    }
}

/// A fair partition together with its cut count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub partition: Partition,
    pub cut_count: usize,
}

impl Witness {
    fn new(partition: Partition) -> Self {
        Witness {
            cut_count: partition.cut_count(),
            partition,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Witness", 3)?;
        st.serialize_field("s", &self.cut_count)?;
        st.serialize_field("cuts", self.partition.cuts())?;
        st.serialize_field("owners", self.partition.owners())?;
        st.end()
    }
}

/// `(k - 1) t`: every necklace has a fair split with at most this many cuts.
pub fn cut_ceiling(k: usize, t: usize) -> usize {
    (k - 1) * t
}

/// `ceil((k - 1)(t + 1) / 2)`: below this, fair splits become rare as `m` grows.
pub fn typical_lower_bound(k: usize, t: usize) -> usize {
    ((k - 1) * (t + 1)).div_ceil(2)
}

fn check_k(necklace: &Necklace, k: usize) -> Result<()> {
    if necklace.k() != k {
        return Err(Error::invalid(format!(
            "necklace was built for k = {}, solver asked for k = {k}",
            necklace.k()
        )));
    }
    Ok(())
}

fn single_thief(necklace: &Necklace) -> Witness {
    Witness::new(Partition::new(necklace.len(), vec![], vec![0]).expect("one interval"))
}

fn exact_witness(necklace: &Necklace, s: usize) -> Option<Witness> {
    exact::first_fair_with(necklace, s).map(|(cuts, owners)| {
        Witness::new(Partition::new(necklace.len(), cuts, owners).expect("enumerated canonical"))
    })
}

/// Minimum-cut fair witness by plain enumeration.
pub fn min_cuts_exact(necklace: &Necklace, k: usize) -> Result<Witness> {
    min_cuts_exact_with(necklace, k, &SolverLimits::default())
}

pub fn min_cuts_exact_with(necklace: &Necklace, k: usize, limits: &SolverLimits) -> Result<Witness> {
    check_k(necklace, k)?;
    let cap = if k == 2 {
        limits.exact_len_two
    } else {
        limits.exact_len_general
    };
    if necklace.len() > cap {
        return Err(Error::too_large("necklace length", necklace.len(), cap));
    }
    for s in 0..=cut_ceiling(k, necklace.t()) {
        if let Some(w) = exact_witness(necklace, s) {
            return Ok(w);
        }
    }
    unreachable!("a fair split with at most (k-1)t cuts always exists")
}

/// Minimum-cut fair witness for two thieves via pruned depth-first search.
pub fn min_cuts_two(necklace: &Necklace) -> Result<Witness> {
    check_k(necklace, 2)?;
    let search = TwoThiefSearch::new(necklace);
    for s in 1..necklace.len() {
        if let Some(cuts) = search.first_fair(s) {
            return Ok(Witness::new(
                Partition::alternating(necklace.len(), cuts).expect("search yields canonical cuts"),
            ));
        }
    }
    unreachable!("a fair split with at most t cuts always exists")
}

/// `X(N)` for two thieves without building a witness for the `s = t` case: when no fair
/// split with fewer than `t` cuts exists, the answer is `t`.
pub fn min_cut_count_two(necklace: &Necklace) -> Result<usize> {
    check_k(necklace, 2)?;
    let t = necklace.t();
    Ok(min_cut_count_two_below(necklace, t).unwrap_or(t))
}

/// Smallest `s < bound` with a fair two-thief split, if any.
pub fn min_cut_count_two_below(necklace: &Necklace, bound: usize) -> Option<usize> {
    debug_assert_eq!(necklace.k(), 2);
    let search = TwoThiefSearch::new(necklace);
    (1..bound).find(|&s| search.first_fair(s).is_some())
}

/// `X(N)` for any `k`: the two-thief search when `k = 2`, enumeration otherwise.
pub fn min_cut_count(necklace: &Necklace, limits: &SolverLimits) -> Result<usize> {
    match necklace.k() {
        1 => Ok(0),
        2 => min_cut_count_two(necklace),
        k => Ok(min_cuts_exact_with(necklace, k, limits)?.cut_count),
    }
}

/// Some fair witness with at most `s` cuts (the one with fewest cuts), or `None`.
pub fn exists_fair_with_cuts(necklace: &Necklace, k: usize, s: usize) -> Result<Option<Witness>> {
    exists_fair_with_cuts_with(necklace, k, s, &SolverLimits::default())
}

pub fn exists_fair_with_cuts_with(
    necklace: &Necklace,
    k: usize,
    s: usize,
    limits: &SolverLimits,
) -> Result<Option<Witness>> {
    check_k(necklace, k)?;
    match k {
        1 => Ok(Some(single_thief(necklace))),
        2 => {
            let search = TwoThiefSearch::new(necklace);
            Ok((1..=s.min(necklace.t())).find_map(|c| {
                search.first_fair(c).map(|cuts| {
                    Witness::new(Partition::alternating(necklace.len(), cuts).expect("canonical"))
                })
            }))
        }
        _ => {
            if necklace.len() > limits.exact_len_general {
                return Err(Error::too_large(
                    "necklace length",
                    necklace.len(),
                    limits.exact_len_general,
                ));
            }
            Ok((0..=s.min(cut_ceiling(k, necklace.t()))).find_map(|c| exact_witness(necklace, c)))
        }
    }
}

/// Number of fair two-thief partitions needing exactly `s` cuts; owner-swapped
/// labelings count once.
pub fn count_fair_scut(necklace: &Necklace, s: usize) -> Result<u64> {
    count_fair_scut_with(necklace, s, &SolverLimits::default())
}

pub fn count_fair_scut_with(necklace: &Necklace, s: usize, limits: &SolverLimits) -> Result<u64> {
    if necklace.k() != 2 {
        return Err(Error::unsupported(format!(
            "fair s-cut counting needs k = 2, got k = {}",
            necklace.k()
        )));
    }
    let candidates = binomial(necklace.len() as u64 - 1, s as u64);
    if candidates > limits.count_candidates.into() {
        return Err(Error::too_large("C(n-1, s)", candidates, limits.count_candidates));
    }
    Ok(TwoThiefSearch::new(necklace).count_fair(s))
}
