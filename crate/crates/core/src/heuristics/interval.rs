//! Window/matching splitting for `m = 1` and many thieves.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::necklace::Necklace;
use crate::partition::{Partition, Thief};

use super::{FairSolution, PhaseStats};

/// A `C`-uniform hypergraph on the bead types. Edges may repeat.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypergraph {
    vertex_count: usize,
    uniformity: usize,
    edges: Vec<Vec<u32>>,
}

impl Hypergraph {
    /// Every edge must hold exactly `uniformity` distinct vertices below `vertex_count`.
    pub fn new(vertex_count: usize, uniformity: usize, edges: Vec<Vec<u32>>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            let mut sorted = e.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != uniformity || e.len() != uniformity {
                return Err(Error::invalid(format!(
                    "edge {i} needs {uniformity} distinct vertices, got {e:?}"
                )));
            }
            if sorted.last().is_some_and(|&v| v as usize >= vertex_count) {
                return Err(Error::invalid(format!(
                    "edge {i} leaves the vertex range 0..{vertex_count}"
                )));
            }
        }
        Ok(Hypergraph {
            vertex_count,
            uniformity,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for e in &self.edges {
            for &v in e {
                d[v as usize] += 1;
            }
        }
        d
    }
}

/// The windows of a necklace: rainbow windows as hyperedges, everything else as bad.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalHypergraph {
    pub hypergraph: Hypergraph,
    /// Window index of each edge.
    pub edge_intervals: Vec<usize>,
    /// Windows with a repeated type, and a short trailing window.
    pub bad_intervals: Vec<usize>,
    pub interval_count: usize,
}

pub fn build_interval_hypergraph(necklace: &Necklace, c: usize) -> Result<IntervalHypergraph> {
    if c < 2 {
        return Err(Error::invalid(format!("window length must be at least 2, got {c}")));
    }
    if necklace.m() != 1 {
        return Err(Error::unsupported(format!(
            "window splitting needs m = 1, got m = {}",
            necklace.m()
        )));
    }
    let t = necklace.t();
    let beads = necklace.beads();
    let mut seen = vec![usize::MAX; t];
    let mut edges = Vec::new();
    let mut edge_intervals = Vec::new();
    let mut bad_intervals = Vec::new();
    let chunks = beads.chunks(c);
    let interval_count = chunks.len();
    for (j, window) in chunks.enumerate() {
        let rainbow = window.len() == c
            && window.iter().all(|&b| {
                let fresh = seen[b as usize] != j;
                seen[b as usize] = j;
                fresh
            });
        if rainbow {
            edges.push(window.to_vec());
            edge_intervals.push(j);
        } else {
            bad_intervals.push(j);
        }
    }
    Ok(IntervalHypergraph {
        hypergraph: Hypergraph {
            vertex_count: t,
            uniformity: c,
            edges,
        },
        edge_intervals,
        bad_intervals,
        interval_count,
    })
}

/// First-fit edge colouring: each edge, in input order, joins the first matching it is
/// vertex-disjoint from. Returns edge indices per matching.
pub fn greedy_matchings(h: &Hypergraph) -> Vec<Vec<usize>> {
    // member[v] is a bitset over matchings containing v
    let mut member: Vec<Vec<u64>> = vec![Vec::new(); h.vertex_count];
    let mut matchings: Vec<Vec<usize>> = Vec::new();
    let mut busy: Vec<u64> = Vec::new();
    for (i, e) in h.edges.iter().enumerate() {
        let words = matchings.len().div_ceil(64) + 1;
        busy.clear();
        busy.resize(words, 0);
        for &v in e {
            for (w, &bits) in member[v as usize].iter().enumerate() {
                busy[w] |= bits;
            }
        }
        let slot = busy
            .iter()
            .enumerate()
            .find(|(_, &b)| b != u64::MAX)
            .map(|(w, &b)| w * 64 + (!b).trailing_zeros() as usize)
            .expect("spare word");
        if slot == matchings.len() {
            matchings.push(Vec::new());
        }
        matchings[slot].push(i);
        for &v in e {
            let m = &mut member[v as usize];
            if m.len() <= slot / 64 {
                m.resize(slot / 64 + 1, 0);
            }
            m[slot / 64] |= 1 << (slot % 64);
        }
    }
    matchings
}

/// Thief `i` gets the windows of the `i`-th largest matching (ties to the lower index).
/// Every other window is cut into single beads, each going to the lowest-index thief
/// still missing its type.
pub fn interval_hypergraph_partition(
    necklace: &Necklace,
    k: usize,
    c: usize,
) -> Result<FairSolution> {
    if k < 2 || necklace.k() != k {
        return Err(Error::unsupported(format!(
            "window splitting needs k >= 2 matching the necklace, got k = {k} for a necklace with k = {}",
            necklace.k()
        )));
    }
    let ih = build_interval_hypergraph(necklace, c)?;
    let matchings = greedy_matchings(&ih.hypergraph);
    let mut order: Vec<usize> = (0..matchings.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(matchings[i].len()), i));

    let n = necklace.len();
    let t = necklace.t();
    let beads = necklace.beads();
    const UNSET: Thief = Thief::MAX;
    let mut owners = vec![UNSET; n];
    let mut kept = vec![false; ih.interval_count];
    let mut holds = vec![false; k * t];
    let mut intervals_kept = 0;
    for (thief, &mi) in order.iter().take(k).enumerate() {
        for &e in &matchings[mi] {
            let j = ih.edge_intervals[e];
            kept[j] = true;
            intervals_kept += 1;
            for p in j * c..(j + 1) * c {
                owners[p] = thief as Thief;
                holds[thief * t + beads[p] as usize] = true;
            }
        }
    }
    let mut cuts_leftover = 0;
    for j in 0..ih.interval_count {
        if kept[j] {
            continue;
        }
        let end = ((j + 1) * c).min(n);
        cuts_leftover += end - j * c - 1;
        for p in j * c..end {
            let ty = beads[p] as usize;
            let thief = (0..k)
                .find(|&i| !holds[i * t + ty])
                .expect("each type has exactly k beads");
            holds[thief * t + ty] = true;
            owners[p] = thief as Thief;
        }
    }
    let partition = Partition::from_assignment(&owners)?;
    Ok(FairSolution::new(
        partition,
        PhaseStats {
            cuts_intervals: ih.interval_count - 1,
            cuts_leftover,
            matchings: matchings.len(),
            intervals_kept,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::is_fair;

    #[test]
    fn rainbow_windows() {
        let n = Necklace::from_letters(2, "ABCDEFABCDEF").unwrap();
        let ih = build_interval_hypergraph(&n, 3).unwrap();
        assert_eq!(ih.hypergraph.edges().len(), 4);
        assert!(ih.bad_intervals.is_empty());
        assert_eq!(ih.edge_intervals, vec![0, 1, 2, 3]);
    }

    #[test]
    fn repeated_type_and_short_tail_are_bad() {
        let n = Necklace::from_letters(2, "AABB").unwrap();
        let ih = build_interval_hypergraph(&n, 2).unwrap();
        assert_eq!(ih.bad_intervals, vec![0, 1]);
        let n = Necklace::from_letters(2, "ABCDABCD").unwrap();
        let ih = build_interval_hypergraph(&n, 3).unwrap();
        assert_eq!(ih.bad_intervals, vec![2]);
        assert_eq!(ih.edge_intervals, vec![0, 1]);
        assert!(build_interval_hypergraph(&n, 1).is_err());
    }

    #[test]
    fn matchings_of_disjoint_and_parallel_edges() {
        let h = Hypergraph::new(6, 2, vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        assert_eq!(greedy_matchings(&h), vec![vec![0, 1, 2]]);
        let h = Hypergraph::new(3, 3, vec![vec![0, 1, 2]; 5]).unwrap();
        assert_eq!(greedy_matchings(&h).len(), 5);
    }

    #[test]
    fn many_matchings_cross_word_boundaries() {
        let h = Hypergraph::new(2, 2, vec![vec![0, 1]; 200]).unwrap();
        let ms = greedy_matchings(&h);
        assert_eq!(ms.len(), 200);
        assert!(ms.iter().enumerate().all(|(i, m)| m == &vec![i]));
    }

    #[test]
    fn hypergraph_validation() {
        assert!(Hypergraph::new(3, 2, vec![vec![0, 0]]).is_err());
        assert!(Hypergraph::new(3, 2, vec![vec![0, 3]]).is_err());
        assert!(Hypergraph::new(3, 2, vec![vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn tiny_instance() {
        let n = Necklace::from_letters(2, "ABCDDCBA").unwrap();
        let s = interval_hypergraph_partition(&n, 2, 2).unwrap();
        assert!(is_fair(&n, &s.partition).unwrap());
        assert!(s.cut_count <= 2 * 4);
        assert!(s.cut_count <= s.stats.cuts_intervals + s.stats.cuts_leftover);
    }
}
