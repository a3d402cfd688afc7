//! Constructive fair splits for `m = 1` that do not search.
//!
//! [`incremental_two_thief`] peels types off the end of the necklace and repairs the
//! smaller solution one type at a time. [`interval_hypergraph_partition`] chops the
//! necklace into windows of length `C`, packs rainbow windows into matchings, and
//! hands out whatever is left bead by bead.

mod incremental;
mod interval;

use serde::Serialize;

use crate::partition::Partition;

pub use incremental::incremental_two_thief;
pub use interval::{
    build_interval_hypergraph, greedy_matchings, interval_hypergraph_partition, Hypergraph,
    IntervalHypergraph,
};

/// Cut bookkeeping of a heuristic run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhaseStats {
    /// Cuts placed between the length-`C` windows (interval algorithm) or added while
    /// reinserting types (incremental algorithm).
    pub cuts_intervals: usize,
    /// Cuts made by splitting leftover windows into single beads.
    pub cuts_leftover: usize,
    /// Matchings produced by the greedy colouring; zero for the incremental algorithm.
    pub matchings: usize,
    /// Windows that went to a thief whole.
    pub intervals_kept: usize,
}

/// A fair partition built by a heuristic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FairSolution {
    pub partition: Partition,
    /// Canonical cut count; at most `stats.cuts_intervals + stats.cuts_leftover`.
    pub cut_count: usize,
    pub stats: PhaseStats,
}

impl FairSolution {
    fn new(partition: Partition, stats: PhaseStats) -> Self {
        FairSolution {
            cut_count: partition.cut_count(),
            partition,
            stats,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("solution serializes")
    }
}
