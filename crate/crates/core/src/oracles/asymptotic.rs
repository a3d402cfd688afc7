use crate::error::Result;
use crate::necklace::check_params;
use crate::scalar::Scalar;

/// Stirling approximation of the fairness probability of one balanced partition:
/// `t^((k-1)/2) k^((t-1)/2) / (2 pi m)^((k-1)(t-1)/2)`, without the `1 + o(1)` factor.
pub fn fair_probability_asymptotic<S: Scalar>(k: usize, t: usize, m: usize) -> Result<S> {
    check_params(k, t, m)?;
    let (ks, ts, ms) = (S::of_count(k as u64), S::of_count(t as u64), S::of_count(m as u64));
    let half = S::of(0.5);
    let one = S::one();
    let num = ts.powf((ks - one) * half) * ks.powf((ts - one) * half);
    let den = (S::TAU() * ms).powf((ks - one) * (ts - one) * half);
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::fair_probability_exact;

    #[test]
    fn closed_forms() {
        for m in [1usize, 7, 100] {
            let v: f64 = fair_probability_asymptotic(2, 3, m).unwrap();
            let expect = 3f64.sqrt() / (std::f64::consts::PI * m as f64);
            assert!((v - expect).abs() < 1e-12 * expect);
            assert_eq!(fair_probability_asymptotic::<f64>(2, 1, m).unwrap(), 1.0);
        }
        let v: f64 = fair_probability_asymptotic(2, 2, 100).unwrap();
        assert!((v - 2.0 / (200.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
        let exact = fair_probability_exact(2, 2, 100).unwrap().to_f64();
        assert!((v / exact - 1.0).abs() < 0.01);
        assert!(fair_probability_asymptotic::<f64>(2, 0, 1).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let v: f32 = fair_probability_asymptotic(2, 3, 10).unwrap();
        assert!((v - 0.055_132_89).abs() < 1e-6);
    }

    #[test]
    fn ratio_approaches_one() {
        for t in [2usize, 3] {
            let r50 = fair_probability_asymptotic::<f64>(2, t, 50).unwrap()
                / fair_probability_exact(2, t, 50).unwrap().to_f64();
            assert!((0.9..=1.1).contains(&r50), "t={t}: {r50}");
            let gaps: Vec<f64> = [10usize, 20, 40, 80]
                .iter()
                .map(|&m| {
                    let r = fair_probability_asymptotic::<f64>(2, t, m).unwrap()
                        / fair_probability_exact(2, t, m).unwrap().to_f64();
                    (r - 1.0).abs()
                })
                .collect();
            assert!(gaps.windows(2).all(|w| w[1] < w[0]), "t={t}: {gaps:?}");
        }
    }
}
