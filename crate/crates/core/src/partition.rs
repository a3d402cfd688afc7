//! Cut sets with an interval-to-thief assignment.
//!
//! A cut at position `p` (with `0 < p < n`) separates beads `p` and `p + 1` in 1-indexed
//! terms, i.e. it sits after the first `p` beads. A [`Partition`] is always stored in
//! canonical form: cuts strictly increasing, adjacent intervals owned by different
//! thieves. Anything else has to go through [`canonicalize`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::necklace::Necklace;

pub type Thief = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    len: usize,
    cuts: Vec<usize>,
    owners: Vec<Thief>,
}

impl Partition {
    /// Validates canonical form.
    pub fn new(len: usize, cuts: Vec<usize>, owners: Vec<Thief>) -> Result<Self> {
        if owners.len() != cuts.len() + 1 {
            return Err(Error::invalid(format!(
                "{} cuts need {} owners, got {}",
                cuts.len(),
                cuts.len() + 1,
                owners.len()
            )));
        }
        if len == 0 {
            return Err(Error::invalid("partition of an empty necklace"));
        }
        let mut prev = 0;
        for &c in &cuts {
            if c <= prev || c >= len {
                return Err(Error::invalid(format!(
                    "cuts must be strictly increasing inside (0, {len}): {cuts:?}"
                )));
            }
            prev = c;
        }
        if let Some(w) = owners.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!(
                "adjacent intervals share owner {}; use canonicalize",
                w[0]
            )));
        }
        Ok(Partition { len, cuts, owners })
    }

    /// Two-thief partition with alternating owners, thief 0 taking the first interval.
    pub fn alternating(len: usize, cuts: Vec<usize>) -> Result<Self> {
        let owners = (0..=cuts.len()).map(|j| (j % 2) as Thief).collect();
        Partition::new(len, cuts, owners)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    pub fn owners(&self) -> &[Thief] {
        &self.owners
    }

    pub fn cut_count(&self) -> usize {
        self.cuts.len()
    }

    /// `(start, end, owner)` for every interval, as half-open bead ranges.
    pub fn intervals(&self) -> impl Iterator<Item = (usize, usize, Thief)> + '_ {
        let starts = std::iter::once(0).chain(self.cuts.iter().copied());
        let ends = self.cuts.iter().copied().chain(std::iter::once(self.len));
        starts
            .zip(ends)
            .zip(self.owners.iter().copied())
            .map(|((s, e), o)| (s, e, o))
    }

    /// Owner of every bead.
    pub fn assignment(&self) -> Vec<Thief> {
        let mut out = Vec::with_capacity(self.len);
        for (s, e, o) in self.intervals() {
            out.extend(std::iter::repeat_n(o, e - s));
        }
        out
    }

    /// Canonical partition inducing the given bead-to-thief map.
    pub fn from_assignment(assignment: &[Thief]) -> Result<Self> {
        let Some(&first) = assignment.first() else {
            return Err(Error::invalid("empty assignment"));
        };
        let mut cuts = Vec::new();
        let mut owners = vec![first];
        for (p, w) in assignment.windows(2).enumerate() {
            if w[0] != w[1] {
                cuts.push(p + 1);
                owners.push(w[1]);
            }
        }
        Ok(Partition {
            len: assignment.len(),
            cuts,
            owners,
        })
    }

    /// Beads owned by each of the `k` thieves.
    pub fn part_sizes(&self, k: usize) -> Vec<usize> {
        let mut sizes = vec![0; k];
        for (s, e, o) in self.intervals() {
            if let Some(slot) = sizes.get_mut(o as usize) {
                *slot += e - s;
            }
        }
        sizes
    }

    pub fn is_balanced(&self, necklace: &Necklace) -> bool {
        self.len == necklace.len()
            && self.owners.iter().all(|&o| (o as usize) < necklace.k())
            && self
                .part_sizes(necklace.k())
                .iter()
                .all(|&s| s == necklace.share())
    }

    fn check_over(&self, necklace: &Necklace) -> Result<()> {
        if self.len != necklace.len() {
            return Err(Error::invalid(format!(
                "partition covers {} beads, necklace has {}",
                self.len,
                necklace.len()
            )));
        }
        if let Some(&o) = self.owners.iter().find(|&&o| o as usize >= necklace.k()) {
            return Err(Error::invalid(format!(
                "owner {o} outside [0, {})",
                necklace.k()
            )));
        }
        Ok(())
    }
}

/// Merges same-owner neighbours and drops empty intervals.
///
/// `cuts` must be non-decreasing within `[0, len]`; repeated cuts and cuts at the ends
/// describe empty intervals.
pub fn canonicalize(len: usize, cuts: &[usize], owners: &[Thief]) -> Result<Partition> {
    if owners.len() != cuts.len() + 1 {
        return Err(Error::invalid(format!(
            "{} cuts need {} owners, got {}",
            cuts.len(),
            cuts.len() + 1,
            owners.len()
        )));
    }
    if cuts.windows(2).any(|w| w[0] > w[1]) || cuts.last().is_some_and(|&c| c > len) {
        return Err(Error::invalid(format!(
            "cuts must be non-decreasing within [0, {len}]: {cuts:?}"
        )));
    }
    let mut assignment = Vec::with_capacity(len);
    let starts = std::iter::once(0).chain(cuts.iter().copied());
    let ends = cuts.iter().copied().chain(std::iter::once(len));
    for ((s, e), &o) in starts.zip(ends).zip(owners) {
        assignment.extend(std::iter::repeat_n(o, e - s));
    }
    Partition::from_assignment(&assignment)
}

/// Idempotent re-canonicalization of an already valid partition.
pub fn canonicalize_partition(p: &Partition) -> Partition {
    canonicalize(p.len, &p.cuts, &p.owners).expect("valid partition canonicalizes")
}

/// True iff every thief receives exactly `m` beads of each type.
pub fn is_fair(necklace: &Necklace, partition: &Partition) -> Result<bool> {
    partition.check_over(necklace)?;
    let (k, t, m) = (necklace.k(), necklace.t(), necklace.m());
    let mut counts = vec![0usize; k * t];
    for (s, e, o) in partition.intervals() {
        for &b in &necklace.beads()[s..e] {
            counts[o as usize * t + b as usize] += 1;
        }
    }
    Ok(counts.iter().all(|&c| c == m))
}

/// Two-thief fairness through counting vectors: a balanced partition with cut points
/// `0 = i_0 < i_1 < ... < i_{s+1} = n` is fair iff `sum_j (-1)^j (U(i_{j+1}) - U(i_j))`
/// vanishes, `U` being the prefix counts of types `0..t-1`.
pub fn is_fair_by_counting_vectors(necklace: &Necklace, partition: &Partition) -> Result<bool> {
    if necklace.k() != 2 {
        return Err(Error::unsupported("counting-vector criterion needs k = 2"));
    }
    partition.check_over(necklace)?;
    if !partition.is_balanced(necklace) {
        return Ok(false);
    }
    let mut points = vec![0];
    points.extend_from_slice(partition.cuts());
    points.push(necklace.len());
    let mut total = vec![0i64; necklace.t() - 1];
    for (j, w) in points.windows(2).enumerate() {
        let lo = necklace.counting_vector(w[0])?;
        let hi = necklace.counting_vector(w[1])?;
        let sign = if j % 2 == 0 { 1 } else { -1 };
        for (acc, (h, l)) in total.iter_mut().zip(hi.counts.iter().zip(&lo.counts)) {
            *acc += sign * (*h as i64 - *l as i64);
        }
    }
    Ok(total.iter().all(|&v| v == 0))
}

/// Distance between two balanced two-thief partitions: `min |H1 \ H2|` over the choice
/// of part `H2` of the second partition, `H1` being thief 0's part of the first.
pub fn partition_distance(p1: &Partition, p2: &Partition, k: usize) -> Result<usize> {
    if k != 2 {
        return Err(Error::unsupported(format!(
            "partition distance is defined for k = 2, got k = {k}"
        )));
    }
    if p1.len != p2.len {
        return Err(Error::invalid("partitions cover different lengths"));
    }
    for p in [p1, p2] {
        if p.owners.iter().any(|&o| o > 1) || p.part_sizes(2) != [p.len / 2, p.len - p.len / 2] {
            return Err(Error::invalid("partition distance needs balanced partitions"));
        }
    }
    let (a, b) = (p1.assignment(), p2.assignment());
    let same = a
        .iter()
        .zip(&b)
        .filter(|(x, y)| **x == 0 && **y == 0)
        .count();
    let half = p1.len / 2;
    // |H1 \ H2| against thief 0's part, and against its complement.
    let against_zero = half - same;
    let against_one = same;
    Ok(against_zero.min(against_one))
}
