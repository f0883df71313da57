//! Shannon entropy and entropic knowledge, all in bits.

use serde::Serialize;

use crate::distributions::{NumberDistribution, PhaseDistribution};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Densities at or below this are treated as exact zeros.
const DENSITY_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    HDiscrete,
    RDiscrete,
    RPhase,
    HPhaseDifferential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyValue<T> {
    pub bits: T,
    pub functional: Functional,
    /// Mass missing from the input before renormalisation.
    pub truncation_loss: T,
}

/// Anything that can be read as a (possibly sub-normalised) probability vector.
pub trait ProbabilityMass<T> {
    fn masses(&self) -> Vec<T>;
    fn loss(&self) -> T;
}

impl<T: Real> ProbabilityMass<T> for [T] {
    fn masses(&self) -> Vec<T> {
        self.iter().map(|&x| x.max(T::zero())).collect()
    }
    fn loss(&self) -> T {
        T::zero()
    }
}

impl<T: Real> ProbabilityMass<T> for Vec<T> {
    fn masses(&self) -> Vec<T> {
        self.as_slice().masses()
    }
    fn loss(&self) -> T {
        T::zero()
    }
}

impl<T: Real> ProbabilityMass<T> for NumberDistribution<T> {
    fn masses(&self) -> Vec<T> {
        self.probabilities()
    }
    fn loss(&self) -> T {
        self.truncation_loss()
    }
}

#[inline]
fn xlog2x<T: Real>(x: T) -> T {
    if x > T::lit(DENSITY_FLOOR) {
        x * x.log2()
    } else {
        T::zero()
    }
}

/// H = −Σ p log2 p with 0·log 0 = 0. A vector with declared loss is
/// renormalised by its actual sum before evaluation.
pub fn shannon_entropy<T: Real, P: ProbabilityMass<T> + ?Sized>(p: &P) -> EntropyValue<T> {
    let masses = p.masses();
    let loss = p.loss();
    let total = masses.iter().fold(T::zero(), |a, &x| a + x);
    let h = if loss > T::zero() && total > T::zero() {
        -masses.iter().fold(T::zero(), |a, &x| a + xlog2x(x / total))
    } else {
        -masses.iter().fold(T::zero(), |a, &x| a + xlog2x(x))
    };
    EntropyValue { bits: snap_zero(h), functional: Functional::HDiscrete, truncation_loss: loss }
}

/// Round-off around a vanishing non-negative functional is reported as +0.
fn snap_zero<T: Real>(x: T) -> T {
    if x.abs() <= T::tol(1e-12) {
        T::zero()
    } else {
        x
    }
}

/// Relative entropy to the uniform distribution on d outcomes:
/// R = Σ p log2(d p) = log2 d − H(p).
pub fn knowledge_discrete<T: Real>(p: &[T], d: usize) -> Result<EntropyValue<T>> {
    if p.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: p.len() });
    }
    if let Some(x) = p.iter().find(|x| !(**x >= T::zero())) {
        return Err(Error::InvalidDistribution(format!("negative entry {x}")));
    }
    let total = p.iter().fold(T::zero(), |a, &x| a + x);
    if (total - T::one()).abs() > T::tol(1e-10) {
        return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
    }
    let dd = T::from_usize_lossy(d);
    let r = p.iter().fold(T::zero(), |a, &x| {
        if x > T::lit(DENSITY_FLOOR) {
            a + x * (dd * x).log2()
        } else {
            a
        }
    });
    Ok(EntropyValue { bits: snap_zero(r), functional: Functional::RDiscrete, truncation_loss: T::zero() })
}

/// R[P] = ∫ P log2(2π P) dθ over one period, by the trapezoid rule on the
/// normalised density.
pub fn knowledge_phase<T: Real>(phase: &PhaseDistribution<T>) -> EntropyValue<T> {
    let two_pi = T::two_pi();
    let sum = phase.normalized().fold(T::zero(), |a, v| {
        if v > T::lit(DENSITY_FLOOR) {
            a + v * (two_pi * v).log2()
        } else {
            a
        }
    });
    let r = sum * phase.step();
    if r < -T::tol(1e-9) {
        log::warn!("phase knowledge {r} < 0: quadrature failure");
    }
    EntropyValue {
        bits: snap_zero(r),
        functional: Functional::RPhase,
        truncation_loss: (T::one() - phase.mass()).max(T::zero()),
    }
}

/// −∫ P log2 P dθ over one period.
pub fn differential_phase_entropy<T: Real>(phase: &PhaseDistribution<T>) -> EntropyValue<T> {
    let sum = phase.normalized().fold(T::zero(), |a, v| a + xlog2x(v));
    EntropyValue {
        bits: -sum * phase.step(),
        functional: Functional::HPhaseDifferential,
        truncation_loss: (T::one() - phase.mass()).max(T::zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{phase_distribution, su2_kernel, PhaseKernel};
    use crate::state::{make_equatorial, make_fock};
    use std::f64::consts::{LN_2, TAU};

    fn binary_entropy(p: f64) -> f64 {
        -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&[0.5f64, 0.5][..]).bits, 1.0);
        assert_eq!(shannon_entropy(&[1.0f64, 0.0][..]).bits, 0.0);
        // Poisson(4) pmf by recurrence, summed until the tail is below 1e-15
        let mut p = vec![(-4.0f64).exp()];
        while p.len() < 12 || *p.last().unwrap() > 1e-17 {
            let m = p.len() as f64;
            let next = p.last().unwrap() * 4.0 / m;
            p.push(next);
        }
        let h = shannon_entropy(&p).bits;
        // frozen from the summation above (scipy.stats.poisson(4).entropy() / ln 2 agrees)
        assert!((h - 3.010_432_356_076_65).abs() < 1e-12, "{h}");
    }

    #[test]
    fn shannon_renormalises_lossy_distributions() {
        let nd = number_distribution_with_loss(vec![0.25, 0.25], 0.5);
        let h = shannon_entropy(&nd);
        assert!((h.bits - 1.0).abs() < 1e-15);
        assert_eq!(h.truncation_loss, 0.5);
    }

    fn number_distribution_with_loss(p: Vec<f64>, loss: f64) -> NumberDistribution<f64> {
        use crate::linalg::CMatrix;
        use crate::state::{QuantumState, StateKind};
        use num_complex::Complex;
        let n = p.len();
        let m = CMatrix::from_fn(n, |i, j| {
            if i == j {
                Complex::new(p[i], 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        let s = QuantumState::new(
            m,
            StateKind::TruncatedOscillator { cutoff: n - 1, declared_mean: 0.0 },
            loss,
        )
        .unwrap();
        crate::distributions::number_distribution(&s)
    }

    #[test]
    fn knowledge_discrete_examples() {
        assert!(knowledge_discrete(&[0.25f64; 4], 4).unwrap().bits.abs() < 1e-15);
        assert_eq!(knowledge_discrete(&[1.0f64, 0.0], 2).unwrap().bits, 1.0);
        let r = knowledge_discrete(&[0.75f64, 0.25], 2).unwrap().bits;
        assert!((r - (1.0 - binary_entropy(0.75))).abs() < 1e-15);
        assert!((r - 0.18872).abs() < 1e-5);
        assert!(knowledge_discrete(&[0.5f64, 0.4], 2).is_err());
        assert!(knowledge_discrete(&[1.5f64, -0.5], 2).is_err());
        assert!(knowledge_discrete(&[1.0f64], 2).is_err());
    }

    #[test]
    fn phase_functionals() {
        let uniform = phase_distribution(&make_fock::<f64>(0, 2).unwrap(), &PhaseKernel::canonical(2), 4096)
            .unwrap();
        assert!(knowledge_phase(&uniform).bits.abs() < 1e-12);
        assert!((differential_phase_entropy(&uniform).bits - TAU.log2()).abs() < 1e-12);

        let eq = make_equatorial::<f64>(0.0);
        let su2 = phase_distribution(&eq, &su2_kernel(2).unwrap(), 4096).unwrap();
        let r = knowledge_phase(&su2).bits;
        assert!((r - 0.2448).abs() < 1e-4, "{r}");
        let hd = differential_phase_entropy(&su2).bits;
        assert!((hd - (TAU.log2() - r)).abs() < 1e-9);
        assert!((hd - 2.4067).abs() < 1e-4);

        // ∫(1+cos x) ln(1+cos x) dx = 2π(1 − ln 2)  ⇒  R = 1/ln2 − 1
        let canon = phase_distribution(&eq, &PhaseKernel::canonical(2), 4096).unwrap();
        let r = knowledge_phase(&canon).bits;
        assert!((r - (1.0 / LN_2 - 1.0)).abs() < 1e-8, "{r}");
        let hd = differential_phase_entropy(&canon).bits;
        assert!((hd - (TAU.log2() - 1.0 / LN_2 + 1.0)).abs() < 1e-8, "{hd}");
        assert!((hd - 2.208_801).abs() < 1e-6);
    }
}
