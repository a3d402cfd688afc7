use crate::scalar::Scalar;

/// Absolute tolerance of the bisection in [`inverse_binary_entropy`].
pub const ENTROPY_TOLERANCE: f64 = 1e-12;

/// `H(x) = -x log2 x - (1 - x) log2 (1 - x)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy<S: Scalar>(x: S) -> S {
    let term = |p: S| if p <= S::zero() { S::zero() } else { -p * p.log2() };
    term(x) + term(S::one() - x)
}

/// Inverse of `H` restricted to `[0, 1/2]`, by bisection.
pub fn inverse_binary_entropy<S: Scalar>(y: S, tol: S) -> S {
    let (mut lo, mut hi) = (S::zero(), S::of(0.5));
    if y <= S::zero() {
        return lo;
    }
    if y >= S::one() {
        return hi;
    }
    while hi - lo > tol {
        let mid = (lo + hi) * S::of(0.5);
        if binary_entropy(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * S::of(0.5)
}

/// `2 H^{-1}(1/2)`: the linear-in-`t` lower bound constant for two thieves with `m = 1`.
pub fn entropy_threshold<S: Scalar>() -> S {
    S::of(2.0) * inverse_binary_entropy(S::of(0.5), S::of(ENTROPY_TOLERANCE))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_value() {
        let c: f64 = entropy_threshold();
        assert!((binary_entropy(c / 2.0) - 0.5).abs() < 1e-10);
        assert!(c.to_string().starts_with("0.220"), "{c}");
    }

    #[test]
    fn inverse_is_monotone() {
        let a: f64 = inverse_binary_entropy(0.4, 1e-12);
        let b: f64 = inverse_binary_entropy(0.5, 1e-12);
        assert!(a < b);
        assert_eq!(binary_entropy(0.5f64), 1.0);
        assert_eq!(binary_entropy(0.0f64), 0.0);
    }
}
