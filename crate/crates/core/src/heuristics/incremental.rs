//! Incremental two-thief splitting for `m = 1`.
//!
//! Let `tau` be the type of the last bead. Drop both `tau` beads, split the remaining
//! necklace recursively, then put them back. The last bead joins the last interval and
//! the other `tau` bead has to go to the opponent. That costs nothing when one of its
//! neighbours already belongs to the opponent (in particular when it lands on a cut);
//! otherwise the roles swap and a single new cut goes just before the last bead.

use crate::error::{Error, Result};
use crate::necklace::{Bead, Necklace};
use crate::partition::{Partition, Thief};

use super::{FairSolution, PhaseStats};

pub fn incremental_two_thief(necklace: &Necklace) -> Result<FairSolution> {
    if necklace.k() != 2 || necklace.m() != 1 {
        return Err(Error::unsupported(format!(
            "incremental splitting needs k = 2 and m = 1, got k = {}, m = {}",
            necklace.k(),
            necklace.m()
        )));
    }
    let (mut owners, added) = split(necklace.beads());
    if owners[0] != 0 {
        for o in &mut owners {
            *o = 1 - *o;
        }
    }
    let partition = Partition::from_assignment(&owners)?;
    Ok(FairSolution::new(
        partition,
        PhaseStats {
            cuts_intervals: added,
            cuts_leftover: 0,
            matchings: 0,
            intervals_kept: 0,
        },
    ))
}

/// Owner of every bead plus the number of cuts the recursion added.
fn split(beads: &[Bead]) -> (Vec<Thief>, usize) {
    // peel from the end: gaps[level] is where the partner bead was removed
    let mut seq = beads.to_vec();
    let mut gaps = Vec::with_capacity(beads.len() / 2);
    while seq.len() > 2 {
        let last = seq.pop().expect("non-empty");
        let e = seq
            .iter()
            .position(|&b| b == last)
            .expect("every type appears twice");
        seq.remove(e);
        gaps.push(e);
    }
    debug_assert_eq!(seq[0], seq[1]);

    let mut owners: Vec<Thief> = vec![0, 1];
    let mut added = 1;
    for &e in gaps.iter().rev() {
        let last_owner = *owners.last().expect("non-empty");
        let opponent = 1 - last_owner;
        let touches_opponent = (e > 0 && owners[e - 1] == opponent)
            || owners.get(e).is_some_and(|&o| o == opponent);
        let (extra, last) = if touches_opponent {
            (opponent, last_owner)
        } else {
            added += 1;
            (last_owner, opponent)
        };
        owners.insert(e, extra);
        owners.push(last);
    }
    (owners, added)
}
