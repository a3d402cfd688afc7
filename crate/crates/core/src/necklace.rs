//! Open necklaces with `k·m` beads of each of `t` types.

use std::fmt;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracles::factorial::Factorials;
use crate::rng::RngSeed;

/// Default cap on the number of arrangements `enumerate_all` will walk.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Bead type id, in `[0, t)`.
pub type Bead = u32;

/// A linear sequence of `n = k·t·m` beads holding exactly `k·m` beads of every type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "NecklaceRepr", into = "NecklaceRepr")]
pub struct Necklace {
    k: usize,
    t: usize,
    m: usize,
    beads: Vec<Bead>,
}

#[derive(Serialize, Deserialize)]
struct NecklaceRepr {
    k: usize,
    t: usize,
    m: usize,
    beads: Vec<Bead>,
}

impl TryFrom<NecklaceRepr> for Necklace {
    type Error = Error;

    fn try_from(r: NecklaceRepr) -> Result<Self> {
        Necklace::new(r.k, r.t, r.m, r.beads)
    }
}

impl From<Necklace> for NecklaceRepr {
    fn from(n: Necklace) -> Self {
        NecklaceRepr {
            k: n.k,
            t: n.t,
            m: n.m,
            beads: n.beads,
        }
    }
}

pub(crate) fn check_params(k: usize, t: usize, m: usize) -> Result<()> {
    if k == 0 || t == 0 || m == 0 {
        return Err(Error::invalid(format!(
            "k, t, m must all be at least 1 (got k={k}, t={t}, m={m})"
        )));
    }
    Ok(())
}

impl Necklace {
    pub fn new(k: usize, t: usize, m: usize, beads: Vec<Bead>) -> Result<Self> {
        check_params(k, t, m)?;
        if beads.len() != k * t * m {
            return Err(Error::invalid(format!(
                "necklace has {} beads, expected k*t*m = {}",
                beads.len(),
                k * t * m
            )));
        }
        let mut seen = vec![0usize; t];
        for &b in &beads {
            let slot = seen
                .get_mut(b as usize)
                .ok_or_else(|| Error::invalid(format!("bead type {b} outside [0, {t})")))?;
            *slot += 1;
        }
        if let Some(ty) = seen.iter().position(|&c| c != k * m) {
            return Err(Error::invalid(format!(
                "type {ty} appears {} times, expected k*m = {}",
                seen[ty],
                k * m
            )));
        }
        Ok(Necklace { k, t, m, beads })
    }

    /// Builds a necklace from a bare bead array: `t` is one more than the largest type id
    /// and `m` follows from the bead count.
    pub fn from_beads(k: usize, beads: Vec<Bead>) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        let t = beads.iter().max().map_or(0, |&b| b as usize + 1);
        if t == 0 {
            return Err(Error::invalid("empty necklace"));
        }
        if !beads.len().is_multiple_of(k * t) {
            return Err(Error::invalid(format!(
                "{} beads cannot hold k*m beads of each of {t} types with k={k}",
                beads.len()
            )));
        }
        let m = beads.len() / (k * t);
        Necklace::new(k, t, m, beads)
    }

    /// Parses letters `A`, `B`, ... as types 0, 1, ...
    pub fn from_letters(k: usize, letters: &str) -> Result<Self> {
        let beads = letters
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                if c.is_ascii_uppercase() {
                    Ok(c as Bead - 'A' as Bead)
                } else {
                    Err(Error::invalid(format!("bad bead letter {c:?}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Necklace::from_beads(k, beads)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.beads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beads.is_empty()
    }

    pub fn beads(&self) -> &[Bead] {
        &self.beads
    }

    /// Beads every thief must own in a balanced partition.
    pub fn share(&self) -> usize {
        self.t * self.m
    }

    /// Prefix-count vector over types `0..t-1` after `prefix` beads.
    pub fn counting_vector(&self, prefix: usize) -> Result<CountingVector> {
        if prefix > self.len() {
            return Err(Error::invalid(format!(
                "prefix {prefix} exceeds necklace length {}",
                self.len()
            )));
        }
        let mut counts = vec![0u32; self.t - 1];
        for &b in &self.beads[..prefix] {
            if let Some(c) = counts.get_mut(b as usize) {
                *c += 1;
            }
        }
        Ok(CountingVector { counts })
    }

    /// Flattened table `prefix[p * t + ty]` = number of type-`ty` beads among the first `p`.
    pub fn prefix_counts(&self) -> Vec<u32> {
        let t = self.t;
        let mut table = vec![0u32; (self.len() + 1) * t];
        for (p, &b) in self.beads.iter().enumerate() {
            let (head, tail) = table.split_at_mut((p + 1) * t);
            tail[..t].copy_from_slice(&head[p * t..]);
            tail[b as usize] += 1;
        }
        table
    }

    /// Necklace obtained by turning every bead into the corresponding letter.
    pub fn to_letters(&self) -> String {
        self.beads
            .iter()
            .map(|&b| {
                char::from_u32('A' as u32 + b).filter(|c| c.is_ascii_uppercase()).unwrap_or('?')
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("necklace serializes")
    }

    pub fn from_json(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::invalid(format!("necklace JSON: {e}")))
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t <= 26 {
            f.write_str(&self.to_letters())
        } else {
            write!(f, "{:?}", self.beads)
        }
    }
}

/// Per-type bead counts (types `0..t-1`, the last type is implied) among a prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountingVector {
    pub counts: Vec<u32>,
}

impl CountingVector {
    pub fn zero(t: usize) -> Self {
        CountingVector {
            counts: vec![0; t.saturating_sub(1)],
        }
    }
}

/// Uniform sample over all arrangements of the multiset with `k·m` beads per type.
pub fn generate_uniform(k: usize, t: usize, m: usize, seed: RngSeed) -> Result<Necklace> {
    check_params(k, t, m)?;
    let mut rng = seed.rng();
    Ok(generate_with(k, t, m, &mut rng))
}

pub(crate) fn generate_with<R: rand::Rng + ?Sized>(
    k: usize,
    t: usize,
    m: usize,
    rng: &mut R,
) -> Necklace {
    let mut beads = sorted_beads(k, t, m);
    beads.shuffle(rng);
    Necklace { k, t, m, beads }
}

fn sorted_beads(k: usize, t: usize, m: usize) -> Vec<Bead> {
    (0..t as Bead)
        .flat_map(|ty| std::iter::repeat_n(ty, k * m))
        .collect()
}

/// Number of distinct necklaces, `(ktm)! / ((km)!)^t`.
pub fn arrangement_count(k: usize, t: usize, m: usize) -> BigUint {
    let n = k * t * m;
    let facts = Factorials::up_to(n);
    facts.get(n) / facts.get(k * m).pow(t as u32)
}

/// Every arrangement, in lexicographic order of the bead sequence.
pub fn enumerate_all(k: usize, t: usize, m: usize) -> Result<AllNecklaces> {
    enumerate_all_capped(k, t, m, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_all_capped(k: usize, t: usize, m: usize, cap: u64) -> Result<AllNecklaces> {
    check_params(k, t, m)?;
    let count = arrangement_count(k, t, m);
    if count > BigUint::from(cap) {
        return Err(Error::too_large("arrangement count", count, cap));
    }
    Ok(AllNecklaces {
        k,
        t,
        m,
        next: Some(sorted_beads(k, t, m)),
    })
}

/// Iterator returned by [`enumerate_all`].
#[derive(Debug, Clone)]
pub struct AllNecklaces {
    k: usize,
    t: usize,
    m: usize,
    next: Option<Vec<Bead>>,
}

impl Iterator for AllNecklaces {
    type Item = Necklace;

    fn next(&mut self) -> Option<Necklace> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Necklace {
            k: self.k,
            t: self.t,
            m: self.m,
            beads: current,
        })
    }
}

/// Advances to the lexicographically next multiset permutation; false at the last one.
fn next_permutation(v: &mut [Bead]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let pivot = i - 1;
    let j = (i..v.len()).rev().find(|&j| v[j] > v[pivot]).expect("suffix has larger element");
    v.swap(pivot, j);
    v[i..].reverse();
    true
}
