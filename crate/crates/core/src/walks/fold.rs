//! Foldings of the bead walk.
//!
//! Read the necklace as a walk in `Z^t` whose `i`-th step is the unit vector of bead
//! `i`'s type. An elementary folding at `j` negates every step from bead `j` on. The
//! folded walk ends at the origin exactly when the beads with `+` and `-` signs form a
//! fair two-thief split, so the minimum number of foldings is `X`.

use crate::error::{Error, Result};
use crate::necklace::Necklace;
use crate::solver::min_cuts_two;

/// Longest necklace [`fold_min_direct`] accepts.
pub const FOLD_DIRECT_MAX_LEN: usize = 28;

/// Minimum number of foldings, through the cut solver.
pub fn fold_min(necklace: &Necklace) -> Result<usize> {
    Ok(min_cuts_two(necklace)?.cut_count)
}

/// Minimum number of foldings by trying fold sets of increasing size.
pub fn fold_min_direct(necklace: &Necklace) -> Result<usize> {
    if necklace.k() != 2 {
        return Err(Error::unsupported(format!(
            "foldings need k = 2, got k = {}",
            necklace.k()
        )));
    }
    let n = necklace.len();
    if n > FOLD_DIRECT_MAX_LEN {
        return Err(Error::too_large("necklace length", n, FOLD_DIRECT_MAX_LEN));
    }
    let beads = necklace.beads();
    let t = necklace.t();
    let mut end = vec![0i64; t];
    let ends_at_origin = |mask: u64, end: &mut [i64]| {
        end.fill(0);
        let mut sign = 1;
        for (i, &b) in beads.iter().enumerate() {
            if i > 0 && mask >> (i - 1) & 1 == 1 {
                sign = -sign;
            }
            end[b as usize] += sign;
        }
        end.iter().all(|&x| x == 0)
    };
    // bit j - 1 of a mask set means a folding at j (1 <= j < n)
    let limit = 1u64 << (n - 1);
    for folds in 0..n {
        let mut mask = (1u64 << folds) - 1;
        while mask < limit {
            if ends_at_origin(mask, &mut end) {
                return Ok(folds);
            }
            if mask == 0 {
                break;
            }
            // next mask with the same popcount
            let low = mask & mask.wrapping_neg();
            let ripple = mask + low;
            mask = (((ripple ^ mask) >> 2) / low) | ripple;
        }
    }
    unreachable!("folding before every bead of the second copy of each type works")
}
