//! Reference solver: plain enumeration of cut sets and owner sequences.
//!
//! Deliberately shares nothing with the two-thief search beyond the necklace type; it is
//! the oracle the fast path is checked against.

use crate::necklace::Necklace;
use crate::partition::Thief;

/// Every `s`-subset of `1..n`, lexicographically, fed to `visit` until it returns true.
fn for_each_cut_set(n: usize, s: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if s == 0 {
        return visit(&[]);
    }
    if s > n.saturating_sub(1) {
        return false;
    }
    let mut cuts: Vec<usize> = (1..=s).collect();
    loop {
        if visit(&cuts) {
            return true;
        }
        // advance to the next combination of {1, ..., n-1}
        let mut i = s;
        while i > 0 && cuts[i - 1] == n - 1 - (s - i) {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        cuts[i - 1] += 1;
        for j in i..s {
            cuts[j] = cuts[j - 1] + 1;
        }
    }
}

/// Type counts of every interval cut out by `cuts`, flattened as `[interval * t + type]`.
fn interval_counts(necklace: &Necklace, cuts: &[usize]) -> Vec<usize> {
    let t = necklace.t();
    let mut counts = vec![0; (cuts.len() + 1) * t];
    let mut interval = 0;
    for (pos, &b) in necklace.beads().iter().enumerate() {
        while interval < cuts.len() && pos >= cuts[interval] {
            interval += 1;
        }
        counts[interval * t + b as usize] += 1;
    }
    counts
}

/// Smallest lexicographic owner sequence (adjacent owners distinct) making the intervals
/// fair, if any.
fn fair_owners(necklace: &Necklace, counts: &[usize]) -> Option<Vec<Thief>> {
    let (k, t, m) = (necklace.k(), necklace.t(), necklace.m());
    let intervals = counts.len() / t;
    let mut held = vec![0usize; k * t];
    let mut owners = Vec::with_capacity(intervals);

    fn rec(
        j: usize,
        intervals: usize,
        k: usize,
        t: usize,
        m: usize,
        counts: &[usize],
        held: &mut [usize],
        owners: &mut Vec<Thief>,
    ) -> bool {
        if j == intervals {
            return held.iter().all(|&h| h == m);
        }
        for o in 0..k {
            if owners.last() == Some(&(o as Thief)) {
                continue;
            }
            let row = &counts[j * t..j * t + t];
            if (0..t).any(|ty| held[o * t + ty] + row[ty] > m) {
                continue;
            }
            for ty in 0..t {
                held[o * t + ty] += row[ty];
            }
            owners.push(o as Thief);
            if rec(j + 1, intervals, k, t, m, counts, held, owners) {
                return true;
            }
            owners.pop();
            for ty in 0..t {
                held[o * t + ty] -= row[ty];
            }
        }
        false
    }

    rec(0, intervals, k, t, m, counts, &mut held, &mut owners).then_some(owners)
}

/// Lexicographically first fair `(cuts, owners)` with exactly `s` cuts.
pub(crate) fn first_fair_with(necklace: &Necklace, s: usize) -> Option<(Vec<usize>, Vec<Thief>)> {
    let mut found = None;
    for_each_cut_set(necklace.len(), s, |cuts| {
        let counts = interval_counts(necklace, cuts);
        if let Some(owners) = fair_owners(necklace, &counts) {
            found = Some((cuts.to_vec(), owners));
            true
        } else {
            false
        }
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_complete() {
        let mut seen = Vec::new();
        for_each_cut_set(5, 2, |c| {
            seen.push(c.to_vec());
            false
        });
        assert_eq!(
            seen,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        let mut zero = 0;
        for_each_cut_set(5, 0, |c| {
            assert!(c.is_empty());
            zero += 1;
            false
        });
        assert_eq!(zero, 1);
        assert!(!for_each_cut_set(3, 3, |_| true));
    }

    #[test]
    fn interval_counting() {
        let n = Necklace::from_letters(2, "AABB").unwrap();
        assert_eq!(interval_counts(&n, &[1, 3]), vec![1, 0, 1, 1, 0, 1]);
    }
}
