//! Depth-first search over alternating two-thief cut placements.
//!
//! With two thieves a canonical partition alternates owners, so an `s`-cut candidate is
//! just an increasing cut vector; thief 0 takes the first interval. Cuts are placed left
//! to right. While an interval grows, its owner's per-type counts only increase, so the
//! scan of a cut position stops as soon as the owner holds more than `m` beads of some
//! type or more than `tm` beads overall. The last cut is forced by balance.

use std::ops::ControlFlow;

use crate::necklace::Necklace;

pub(crate) struct TwoThiefSearch {
    prefix: Vec<u32>,
    beads: Vec<u32>,
    t: usize,
    m: u32,
    n: usize,
    share: usize,
}

struct Frame<'a, F> {
    s: usize,
    cuts: Vec<usize>,
    counts: Vec<u32>,
    lens: [usize; 2],
    visit: &'a mut F,
}

impl TwoThiefSearch {
    pub(crate) fn new(necklace: &Necklace) -> Self {
        debug_assert_eq!(necklace.k(), 2);
        TwoThiefSearch {
            prefix: necklace.prefix_counts(),
            beads: necklace.beads().to_vec(),
            t: necklace.t(),
            m: necklace.m() as u32,
            n: necklace.len(),
            share: necklace.share(),
        }
    }

    #[inline]
    fn seg(&self, from: usize, to: usize, ty: usize) -> u32 {
        self.prefix[to * self.t + ty] - self.prefix[from * self.t + ty]
    }

    /// Calls `visit` with the cut vector of every fair alternating partition with exactly
    /// `s` cuts, in lexicographic order, until it breaks.
    pub(crate) fn for_each_fair<F>(&self, s: usize, mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if s == 0 || s >= self.n {
            return ControlFlow::Continue(());
        }
        let mut frame = Frame {
            s,
            cuts: Vec::with_capacity(s),
            counts: vec![0; 2 * self.t],
            lens: [0, 0],
            visit: &mut visit,
        };
        self.descend(&mut frame, 0)
    }

    pub(crate) fn first_fair(&self, s: usize) -> Option<Vec<usize>> {
        let mut found = None;
        let _ = self.for_each_fair(s, |cuts| {
            found = Some(cuts.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    pub(crate) fn count_fair(&self, s: usize) -> u64 {
        let mut count = 0;
        let _ = self.for_each_fair(s, |_| {
            count += 1;
            ControlFlow::Continue(())
        });
        count
    }

    fn descend<F>(&self, f: &mut Frame<'_, F>, depth: usize) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let start = f.cuts.last().copied().unwrap_or(0);
        let owner = depth % 2;
        let t = self.t;
        if depth + 1 == f.s {
            // the last cut is forced: the owner of this interval must reach tm beads
            let need = self.share - f.lens[owner];
            let cut = start + need;
            if need == 0 || cut >= self.n {
                return ControlFlow::Continue(());
            }
            let base = &f.counts[owner * t..owner * t + t];
            if (0..t).all(|ty| base[ty] + self.seg(start, cut, ty) == self.m) {
                f.cuts.push(cut);
                let flow = (f.visit)(&f.cuts);
                f.cuts.pop();
                return flow;
            }
            return ControlFlow::Continue(());
        }
        // leave room for the remaining cuts and a non-empty final interval
        let last_cut = self.n - (f.s - depth);
        // thief `owner` gets another interval later, so it may not fill up here
        let owner_returns = depth + 2 <= f.s;
        let mut flow = ControlFlow::Continue(());
        let mut cut = start;
        while cut < last_cut {
            let ty = self.beads[cut] as usize;
            cut += 1;
            f.counts[owner * t + ty] += 1;
            f.lens[owner] += 1;
            if f.counts[owner * t + ty] > self.m
                || f.lens[owner] > self.share
                || (owner_returns && f.lens[owner] >= self.share)
            {
                break;
            }
            f.cuts.push(cut);
            flow = self.descend(f, depth + 1);
            f.cuts.pop();
            if flow.is_break() {
                break;
            }
        }
        for ty in 0..t {
            f.counts[owner * t + ty] -= self.seg(start, cut, ty);
        }
        f.lens[owner] -= cut - start;
        flow
    }
}
