use num_bigint::BigUint;
use num_traits::One;

/// Factorials `0!..=n!`, filled once and read-only afterwards.
#[derive(Debug, Clone)]
pub struct Factorials {
    table: Vec<BigUint>,
}

impl Factorials {
    pub fn up_to(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        table.push(BigUint::one());
        for i in 1..=n {
            let next = &table[i - 1] * BigUint::from(i);
            table.push(next);
        }
        Factorials { table }
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    /// `i!`; panics beyond the prefilled range.
    pub fn get(&self, i: usize) -> &BigUint {
        &self.table[i]
    }

    pub fn binomial(&self, n: usize, r: usize) -> BigUint {
        if r > n {
            return BigUint::ZERO;
        }
        self.get(n) / (self.get(r) * self.get(n - r))
    }
}

/// `C(n, r)` by the multiplicative formula, without a factorial table.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::ZERO;
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}
