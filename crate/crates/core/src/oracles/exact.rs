use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::factorial::{binomial, Factorials};
use crate::error::{Error, Result};
use crate::necklace::check_params;

/// Exact nonnegative rational: a probability, an expectation or an integer count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProbability(BigRational);

impl ExactProbability {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        ExactProbability(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        ExactProbability(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        ExactProbability(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactProbability(BigRational::one())
    }

    pub fn ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `p/q` in lowest terms (integers print without a denominator).
    pub fn to_fraction_string(&self) -> String {
        self.0.to_string()
    }

    /// Decimal rendering rounded half-up to `sig` significant digits, computed exactly.
    pub fn to_decimal_string(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.0.is_zero() {
            return format!("{:.*}", sig - 1, 0.0);
        }
        let negative = self.0.is_negative();
        let v = self.0.abs();
        // decimal exponent e with 10^e <= v < 10^(e+1)
        let digits = |r: &BigRational| -> i64 {
            let int = r.numer() / r.denom();
            if int.is_zero() {
                0
            } else {
                int.to_string().len() as i64
            }
        };
        let mut e = if v >= BigRational::one() {
            digits(&v) - 1
        } else {
            let inv = v.recip();
            // v < 1: e = -ceil(log10(1/v))
            -(digits(&inv))
        };
        let pow = |exp: i64| -> BigRational {
            if exp >= 0 {
                BigRational::from_integer(BigInt::from(10).pow(exp as u32))
            } else {
                BigRational::new(BigInt::one(), BigInt::from(10).pow((-exp) as u32))
            }
        };
        while v < pow(e) {
            e -= 1;
        }
        while v >= pow(e + 1) {
            e += 1;
        }
        let scaled = &v * pow(sig as i64 - 1 - e);
        let two = BigInt::from(2);
        let mut mantissa = (scaled.numer() * &two + scaled.denom()).div_floor(&(scaled.denom() * &two));
        if mantissa >= BigInt::from(10).pow(sig as u32) {
            mantissa /= 10;
            e += 1;
        }
        let m = mantissa.to_string();
        let body = if (-5..12).contains(&e) {
            if e >= 0 {
                let int_len = (e + 1) as usize;
                if int_len >= m.len() {
                    format!("{m}{}", "0".repeat(int_len - m.len()))
                } else {
                    format!("{}.{}", &m[..int_len], &m[int_len..])
                }
            } else {
                format!("0.{}{m}", "0".repeat((-e - 1) as usize))
            }
        } else if m.len() > 1 {
            format!("{}.{}e{e}", &m[..1], &m[1..])
        } else {
            format!("{m}e{e}")
        };
        if negative {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for ExactProbability {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_fraction_string())
    }
}

impl std::ops::Mul for ExactProbability {
    type Output = ExactProbability;

    fn mul(self, rhs: Self) -> Self {
        ExactProbability(self.0 * rhs.0)
    }
}

impl std::ops::Add for ExactProbability {
    type Output = ExactProbability;

    fn add(self, rhs: Self) -> Self {
        ExactProbability(self.0 + rhs.0)
    }
}

impl std::iter::Sum for ExactProbability {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ExactProbability::zero(), |a, b| a + b)
    }
}

impl From<BigUint> for ExactProbability {
    fn from(v: BigUint) -> Self {
        ExactProbability::from_integer(BigInt::from(v))
    }
}

fn rational(numer: BigUint, denom: BigUint) -> ExactProbability {
    ExactProbability::new(BigInt::from(numer), BigInt::from(denom))
}

/// Probability that one fixed balanced partition of a uniform `(k, t, m)` necklace is
/// fair: `((mt)!)^k ((mk)!)^t / ((m!)^(tk) (ktm)!)`.
pub fn fair_probability_exact(k: usize, t: usize, m: usize) -> Result<ExactProbability> {
    check_params(k, t, m)?;
    let f = Factorials::up_to(k * t * m);
    let numer = f.get(m * t).pow(k as u32) * f.get(m * k).pow(t as u32);
    let denom = f.get(m).pow((t * k) as u32) * f.get(k * t * m);
    Ok(rational(numer, denom))
}

/// Number of two-thief balanced partitions needing exactly `s` cuts:
/// `C(tm-1, ceil((s-1)/2)) * C(tm-1, floor((s-1)/2))`.
pub fn s_cut_partition_count(t: usize, m: usize, s: usize) -> Result<ExactProbability> {
    check_params(2, t, m)?;
    if s == 0 {
        return Err(Error::invalid("s-cut partitions need s >= 1"));
    }
    let n = (t * m - 1) as u64;
    let hi = (s as u64 - 1).div_ceil(2);
    let lo = (s as u64 - 1) / 2;
    Ok((binomial(n, hi) * binomial(n, lo)).into())
}

/// Upper bound `k^(s+1) (tm)^(s+1-k)` on balanced partitions reachable with `s` cuts.
pub fn balanced_partition_count_bound(
    s: usize,
    k: usize,
    t: usize,
    m: usize,
) -> Result<ExactProbability> {
    check_params(k, t, m)?;
    if s + 1 < k {
        return Err(Error::invalid(format!(
            "s + 1 = {} is below k = {k}: no balanced partition exists",
            s + 1
        )));
    }
    let v = BigUint::from(k).pow((s + 1) as u32) * BigUint::from(t * m).pow((s + 1 - k) as u32);
    Ok(v.into())
}

/// Expected number of fair `s`-cut partitions for two thieves.
pub fn expected_fair_scut(t: usize, m: usize, s: usize) -> Result<ExactProbability> {
    Ok(s_cut_partition_count(t, m, s)? * fair_probability_exact(2, t, m)?)
}

/// Every `(q_1, ..., q_t)` with `0 <= q_i <= m` and sum `q`, in lexicographic order.
pub fn compositions(t: usize, m: usize, q: usize) -> Vec<Vec<usize>> {
    fn rec(t: usize, m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == t {
            if left <= m {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let rest = t - cur.len() - 1;
        let lo = left.saturating_sub(rest * m);
        for qi in lo..=left.min(m) {
            cur.push(qi);
            rec(t, m, left - qi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if t > 0 && q <= t * m {
        rec(t, m, q, &mut Vec::with_capacity(t), &mut out);
    }
    out
}

/// Multivariate hypergeometric point mass: a uniform `q`-subset of a pool with `m`
/// beads of each of `t` types has composition `parts`.
pub fn composition_probability(
    t: usize,
    m: usize,
    q: usize,
    parts: &[usize],
) -> Result<ExactProbability> {
    check_params(1, t, m)?;
    if parts.len() != t {
        return Err(Error::invalid(format!(
            "composition has {} entries, expected t = {t}",
            parts.len()
        )));
    }
    if parts.iter().sum::<usize>() != q || q > t * m || parts.iter().any(|&p| p > m) {
        return Err(Error::invalid(format!(
            "composition {parts:?} is not a valid split of q = {q} with at most m = {m} per type"
        )));
    }
    let f = Factorials::up_to(t * m);
    Ok(composition_probability_with(&f, t, m, q, parts))
}

fn composition_probability_with(
    f: &Factorials,
    t: usize,
    m: usize,
    q: usize,
    parts: &[usize],
) -> ExactProbability {
    // ((mt - q)! q! / prod((m - q_i)! q_i!)) / ((mt)! / (m!)^t)
    let mut denom = f.get(m * t).clone();
    let mut numer = f.get(m * t - q) * f.get(q) * f.get(m).pow(t as u32);
    for &qi in parts {
        denom *= f.get(m - qi) * f.get(qi);
    }
    let g = numer.gcd(&denom);
    numer /= &g;
    denom /= &g;
    rational(numer, denom)
}

/// Probability that two independent uniform `q`-subsets of the pool have the same
/// type composition.
pub fn collision_probability(t: usize, m: usize, q: usize) -> Result<ExactProbability> {
    check_params(1, t, m)?;
    if q > t * m {
        return Err(Error::invalid(format!("q = {q} exceeds pool size {}", t * m)));
    }
    // sum over compositions of prod C(m, q_i)^2, over C(tm, q)^2
    let f = Factorials::up_to(t * m);
    let mut total = BigUint::ZERO;
    for parts in compositions(t, m, q) {
        let w: BigUint = parts.iter().map(|&qi| f.binomial(m, qi)).product();
        total += &w * &w;
    }
    let all = f.binomial(t * m, q);
    Ok(rational(total, &all * &all))
}

/// Exact probability that two balanced two-thief partitions at distance `q` are both fair.
pub fn pair_fair_probability(t: usize, m: usize, q: usize) -> Result<ExactProbability> {
    check_params(2, t, m)?;
    if q == 0 || 2 * q > t * m {
        return Err(Error::invalid(format!(
            "distance q = {q} outside [1, tm/2] with tm = {}",
            t * m
        )));
    }
    Ok(fair_probability_exact(2, t, m)? * collision_probability(t, m, q)?)
}

/// `(t!)^2 2^t / (2t)!`: fairness probability of a fixed balanced split when `k = 2, m = 1`.
pub fn m1_fair_probability(t: usize) -> Result<ExactProbability> {
    check_params(2, t, 1)?;
    let f = Factorials::up_to(2 * t);
    let numer = f.get(t).pow(2) * (BigUint::one() << t);
    Ok(rational(numer, f.get(2 * t).clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::necklace::enumerate_all;
    use crate::partition::{is_fair, Partition};

    fn q(n: i64, d: i64) -> ExactProbability {
        ExactProbability::new(n, d)
    }

    #[test]
    fn fair_probability_values() {
        for k in 1..4 {
            for m in 1..4 {
                assert_eq!(fair_probability_exact(k, 1, m).unwrap(), q(1, 1));
            }
        }
        assert_eq!(fair_probability_exact(2, 2, 1).unwrap(), q(2, 3));
        assert_eq!(fair_probability_exact(2, 3, 1).unwrap(), q(2, 5));
        assert!(fair_probability_exact(0, 3, 1).is_err());
    }

    /// Oracle: fraction of all necklaces for which the fixed partition "thief j takes
    /// the j-th block of tm beads" is fair.
    fn exhaustive_fair_fraction(k: usize, t: usize, m: usize) -> ExactProbability {
        let n = k * t * m;
        let cuts: Vec<usize> = (1..k).map(|j| j * t * m).collect();
        let owners = (0..k as u32).collect();
        let p = Partition::new(n, cuts, owners).unwrap();
        let (mut fair, mut total) = (0i64, 0i64);
        for nk in enumerate_all(k, t, m).unwrap() {
            total += 1;
            fair += is_fair(&nk, &p).unwrap() as i64;
        }
        q(fair, total)
    }

    #[test]
    fn fair_probability_matches_enumeration() {
        for t in 1..=3 {
            for m in 1..=2 {
                assert_eq!(
                    fair_probability_exact(2, t, m).unwrap(),
                    exhaustive_fair_fraction(2, t, m),
                    "(2,{t},{m})"
                );
            }
        }
        assert_eq!(fair_probability_exact(3, 2, 1).unwrap(), exhaustive_fair_fraction(3, 2, 1));
    }

    #[test]
    fn m1_identity() {
        assert_eq!(m1_fair_probability(1).unwrap(), q(1, 1));
        assert_eq!(m1_fair_probability(2).unwrap(), q(2, 3));
        assert_eq!(m1_fair_probability(3).unwrap(), q(2, 5));
        for t in 1..=12 {
            assert_eq!(m1_fair_probability(t).unwrap(), fair_probability_exact(2, t, 1).unwrap());
        }
    }

    #[test]
    fn s_cut_counts() {
        for t in 1..5 {
            for m in 1..5 {
                assert_eq!(s_cut_partition_count(t, m, 1).unwrap(), q(1, 1));
            }
        }
        assert_eq!(s_cut_partition_count(2, 1, 2).unwrap(), q(1, 1));
        assert_eq!(s_cut_partition_count(3, 1, 2).unwrap(), q(2, 1));
        assert!(s_cut_partition_count(3, 1, 0).is_err());
    }

    #[test]
    fn s_cut_counts_match_enumeration() {
        // count alternating partitions with exactly s cuts, thief 0 first, balanced
        for (t, m) in [(1, 2), (2, 1), (2, 2), (3, 1), (3, 2)] {
            let n = 2 * t * m;
            let mut by_s = vec![0i64; n];
            for mask in 0u32..1 << (n - 1) {
                let cuts: Vec<usize> = (1..n).filter(|c| mask >> (c - 1) & 1 == 1).collect();
                let p = Partition::alternating(n, cuts).unwrap();
                if p.part_sizes(2) == [t * m, t * m] {
                    by_s[p.cut_count()] += 1;
                }
            }
            for s in 1..n {
                assert_eq!(s_cut_partition_count(t, m, s).unwrap(), q(by_s[s], 1), "t={t} m={m} s={s}");
            }
        }
    }

    #[test]
    fn count_bound_values() {
        assert_eq!(balanced_partition_count_bound(1, 2, 3, 5).unwrap(), q(4, 1));
        assert_eq!(balanced_partition_count_bound(3, 2, 3, 2).unwrap(), q(576, 1));
        assert!(balanced_partition_count_bound(1, 3, 3, 2).is_err());
    }

    #[test]
    fn count_bound_dominates_enumeration() {
        // labelled balanced bead-to-thief maps reachable with <= s cuts, (2,2,1)
        let n = 4;
        for s in 1..=2usize {
            let mut maps = std::collections::HashSet::new();
            for mask in 0u32..1 << n {
                let a: Vec<u32> = (0..n).map(|i| mask >> i & 1).collect();
                let p = Partition::from_assignment(&a).unwrap();
                if p.cut_count() <= s && p.part_sizes(2) == [2, 2] {
                    maps.insert(a);
                }
            }
            let bound = balanced_partition_count_bound(s, 2, 2, 1).unwrap();
            assert!(q(maps.len() as i64, 1) <= bound, "s={s}: {} > {bound}", maps.len());
        }
    }

    #[test]
    fn expected_values() {
        assert_eq!(expected_fair_scut(2, 1, 1).unwrap(), q(2, 3));
        assert_eq!(expected_fair_scut(3, 1, 1).unwrap(), q(2, 5));
        assert_eq!(expected_fair_scut(3, 1, 2).unwrap(), q(4, 5));
    }

    #[test]
    fn composition_values() {
        assert_eq!(composition_probability(2, 1, 1, &[1, 0]).unwrap(), q(1, 2));
        for t in 1..4 {
            for m in 1..4 {
                assert_eq!(composition_probability(t, m, 0, &vec![0; t]).unwrap(), q(1, 1));
            }
        }
        assert!(composition_probability(2, 1, 1, &[1, 1]).is_err());
        assert!(composition_probability(2, 1, 2, &[2, 0]).is_err());
        assert!(composition_probability(2, 1, 1, &[1]).is_err());
    }

    #[test]
    fn compositions_normalize() {
        for t in 1..=4 {
            for m in 1..=3 {
                for qq in 0..=t * m {
                    let total: ExactProbability = compositions(t, m, qq)
                        .iter()
                        .map(|p| composition_probability(t, m, qq, p).unwrap())
                        .sum();
                    assert_eq!(total, q(1, 1), "t={t} m={m} q={qq}");
                }
            }
        }
        assert_eq!(compositions(3, 2, 3).len(), 7);
        let c = compositions(3, 2, 3);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn collision_values() {
        for m in 1..4 {
            for qq in 0..=m {
                assert_eq!(collision_probability(1, m, qq).unwrap(), q(1, 1));
            }
        }
        assert_eq!(collision_probability(2, 1, 1).unwrap(), q(1, 2));
        for t in 1..=3 {
            for m in 1..=3 {
                for qq in 0..=t * m {
                    assert_eq!(
                        collision_probability(t, m, qq).unwrap(),
                        collision_probability(t, m, t * m - qq).unwrap()
                    );
                    let direct: ExactProbability = compositions(t, m, qq)
                        .iter()
                        .map(|p| {
                            let x = composition_probability(t, m, qq, p).unwrap();
                            x.clone() * x
                        })
                        .sum();
                    assert_eq!(direct, collision_probability(t, m, qq).unwrap());
                }
            }
        }
        assert!(collision_probability(2, 1, 3).is_err());
    }

    /// Oracle: frequency over all necklaces that two fixed balanced partitions at
    /// distance q are both fair.
    fn exhaustive_pair(t: usize, m: usize, qq: usize) -> ExactProbability {
        let n = 2 * t * m;
        let half = t * m;
        let p1 = Partition::alternating(n, vec![half]).unwrap();
        // thief 0 takes beads qq+1 ..= qq+half (a cyclic shift of the halves)
        let p2 = Partition::new(n, vec![qq, qq + half], vec![1, 0, 1]).unwrap();
        assert_eq!(crate::partition::partition_distance(&p1, &p2, 2).unwrap(), qq);
        let (mut both, mut total) = (0i64, 0i64);
        for nk in enumerate_all(2, t, m).unwrap() {
            total += 1;
            both += (is_fair(&nk, &p1).unwrap() && is_fair(&nk, &p2).unwrap()) as i64;
        }
        q(both, total)
    }

    #[test]
    fn pair_probability_matches_enumeration() {
        assert_eq!(pair_fair_probability(2, 1, 1).unwrap(), q(1, 3));
        assert_eq!(exhaustive_pair(2, 1, 1), q(1, 3));
        for qq in 1..=2 {
            assert_eq!(pair_fair_probability(2, 2, qq).unwrap(), exhaustive_pair(2, 2, qq));
        }
        assert_eq!(pair_fair_probability(3, 2, 2).unwrap(), exhaustive_pair(3, 2, 2));
        for m in 2..5 {
            assert_eq!(pair_fair_probability(1, m, 1).unwrap(), q(1, 1));
        }
        assert!(pair_fair_probability(2, 1, 0).is_err());
        assert!(pair_fair_probability(2, 1, 2).is_err());
    }

    #[test]
    fn collision_scaling_in_q() {
        // q^((t-1)/2) * collision stays within a factor 4 for t = 3, m = 64
        let vals: Vec<f64> = [4usize, 8, 16, 32, 64]
            .iter()
            .map(|&qq| qq as f64 * collision_probability(3, 64, qq).unwrap().to_f64())
            .collect();
        let max = vals.iter().cloned().fold(f64::MIN, f64::max);
        let min = vals.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min <= 4.0, "{vals:?}");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q(2, 5).to_decimal_string(12), "0.400000000000");
        assert_eq!(q(2, 3).to_decimal_string(12), "0.666666666667");
        assert_eq!(q(1, 1).to_decimal_string(12), "1.00000000000");
        assert_eq!(q(576, 1).to_decimal_string(12), "576.000000000");
        assert_eq!(q(1, 3_000_000).to_decimal_string(4), "3.333e-7");
        assert_eq!(q(999_999, 1_000_000).to_decimal_string(3), "1.00");
        assert_eq!(ExactProbability::zero().to_decimal_string(3), "0.00");
        assert_eq!(q(2, 5).to_fraction_string(), "2/5");
        assert_eq!(
            ExactProbability::from_integer(BigInt::from(10).pow(20)).to_decimal_string(3),
            "1.00e20"
        );
    }
}
