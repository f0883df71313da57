//! Log-gamma and friends, used wherever factorials would overflow.

use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of |Γ(x)| via the Lanczos approximation (g = 7, 9 terms).
pub fn ln_gamma<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let pi = T::PI();
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += T::lit(c) / (x + T::from_usize_lossy(i));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    half * T::two_pi().ln() + (x + half) * t.ln() - t + acc.ln()
}

pub fn ln_factorial<T: Real>(n: usize) -> T {
    ln_gamma(T::from_usize_lossy(n) + T::one())
}

pub fn ln_beta<T: Real>(a: T, b: T) -> T {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// ln C(n, k) for 0 ≤ k ≤ n.
pub fn ln_binomial<T: Real>(n: usize, k: usize) -> T {
    debug_assert!(k <= n);
    ln_factorial::<T>(n) - ln_factorial::<T>(k) - ln_factorial::<T>(n - k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ln_factorial_by_summation(n: usize) -> f64 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    }

    #[test]
    fn factorials_match_direct_summation() {
        for n in 0..200 {
            let exact = ln_factorial_by_summation(n);
            let got: f64 = ln_factorial(n);
            assert!(
                (got - exact).abs() <= 1e-13 * exact.max(1.0),
                "n={n}: {got} vs {exact}"
            );
        }
    }

    #[test]
    fn half_integer_values() {
        assert!((ln_gamma(0.5f64) - PI.sqrt().ln()).abs() < 1e-14);
        assert!((ln_gamma(1.5f64) - (PI.sqrt() / 2.0).ln()).abs() < 1e-14);
        // B(3/2, 3/2) = π/8
        assert!((ln_beta(1.5f64, 1.5) - (PI / 8.0).ln()).abs() < 1e-14);
        // B(3/2, 5/2) = π/16
        assert!((ln_beta(1.5f64, 2.5) - (PI / 16.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn reflection_branch() {
        // Γ(0.25) = 3.625609908221908...
        assert!((ln_gamma(0.25f64) - 3.625_609_908_221_908_f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn binomials() {
        assert!((ln_binomial::<f64>(3, 1) - 3f64.ln()).abs() < 1e-14);
        assert!((ln_binomial::<f64>(10, 5) - 252f64.ln()).abs() < 1e-13);
        assert!(ln_binomial::<f64>(7, 0).abs() < 1e-14);
    }

    #[test]
    fn single_precision_is_usable() {
        assert!((ln_factorial::<f32>(10) - 3_628_800f32.ln()).abs() < 1e-5);
    }
}
