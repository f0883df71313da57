//! Randomised audits of the entropy-excess inequalities.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complementarity::{
    bialynicki_sum, excess_finite, excess_number_phase, BasisPair, EXACT_SLACK, QUADRATURE_SLACK,
};
use crate::distributions::{
    number_distribution, phase_distribution, su2_kernel, PhaseKernel,
};
use crate::entropy::{knowledge_phase, shannon_entropy};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::{
    haar_vector, make_glauber_coherent, make_pure, make_random_pure, make_random_truncated, mix,
    CutoffPolicy, QuantumState, StateKind,
};

/// Dimension of the random truncated oscillator states in the audits.
pub const RANDOM_OSCILLATOR_DIM: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditSummary<T> {
    pub suite: String,
    pub samples: usize,
    /// Smallest value of (quantity − bound) seen.
    pub min_margin: T,
    pub worst_case: String,
    pub tolerance: T,
    pub violations: usize,
    pub passed: bool,
    /// Suite-specific secondary checks, all of which must hold for `passed`.
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub failures: usize,
}

struct Sample<T> {
    margin: T,
    label: String,
    extra_failures: Vec<usize>,
}

fn summarize<T: Real>(
    suite: &str,
    tolerance: f64,
    check_names: &[&str],
    samples: Vec<Sample<T>>,
) -> AuditSummary<T> {
    let tol = T::tol(tolerance);
    let mut min_margin = T::infinity();
    let mut worst_case = String::new();
    let mut violations = 0;
    let mut check_fail = vec![0usize; check_names.len()];
    for s in &samples {
        if s.margin < min_margin {
            min_margin = s.margin;
            worst_case = s.label.clone();
        }
        if s.margin < -tol {
            violations += 1;
        }
        for (acc, f) in check_fail.iter_mut().zip(&s.extra_failures) {
            *acc += f;
        }
    }
    let checks: Vec<CheckResult> = check_names
        .iter()
        .zip(check_fail)
        .map(|(n, failures)| CheckResult { name: n.to_string(), failures })
        .collect();
    let passed = violations == 0 && checks.iter().all(|c| c.failures == 0);
    AuditSummary {
        suite: suite.to_string(),
        samples: samples.len(),
        min_margin,
        worst_case,
        tolerance: tol,
        violations,
        passed,
        checks,
    }
}

/// X(A,B) ≥ 0 for the computational/Fourier MUB pair over Haar-random
/// pure states, cross-checked against H(A) + H(B) ≥ log2 d.
pub fn audit_theorem1<T: Real>(d: usize, samples: usize, seed: u64) -> Result<AuditSummary<T>> {
    check_samples(samples)?;
    let pair = BasisPair::<T>::computational_fourier(d);
    let log_d = T::from_usize_lossy(d).log2();
    let slack = T::tol(EXACT_SLACK);
    let rows: Result<Vec<Sample<T>>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let s = make_random_pure::<T>(seed.wrapping_add(i), d)?;
            let ex = excess_finite(&s, &pair)?;
            let h_b = log_d - ex.forward.r_b;
            // same inequality, written as an entropy sum
            let sum_ok = ex.forward.h_a + h_b >= log_d - slack;
            let x_ok = ex.forward.x >= ex.forward.bound - slack;
            let symmetric = (ex.forward.x - ex.reverse.x).abs() <= T::tol(1e-12);
            Ok(Sample {
                margin: ex.forward.x - ex.forward.bound,
                label: format!("random_pure seed={} d={d}", seed.wrapping_add(i)),
                extra_failures: vec![usize::from(sum_ok != x_ok), usize::from(!symmetric)],
            })
        })
        .collect();
    Ok(summarize(
        &format!("theorem1_d{d}"),
        EXACT_SLACK,
        &["entropy_sum_agreement", "symmetry"],
        rows?,
    ))
}

/// The oscillator audit set: Glauber states on α ∈ [0, 3] (61 points) and
/// `random` Haar states on the first 32 Fock levels.
pub fn oscillator_audit_states<T: Real>(
    random: usize,
    seed: u64,
    tail_tol: T,
) -> Result<Vec<(String, QuantumState<T>)>> {
    let mut out = Vec::with_capacity(61 + random);
    for i in 0..61 {
        let alpha = T::lit(3.0) * T::from_usize_lossy(i) / T::lit(60.0);
        let s = make_glauber_coherent(Complex::new(alpha, T::zero()), CutoffPolicy::Auto { tail_tol })?;
        out.push((format!("glauber alpha={alpha}"), s));
    }
    for i in 0..random as u64 {
        let seed_i = seed.wrapping_add(i);
        out.push((
            format!("random_truncated seed={seed_i} dim={RANDOM_OSCILLATOR_DIM}"),
            make_random_truncated(seed_i, RANDOM_OSCILLATOR_DIM)?,
        ));
    }
    Ok(out)
}

/// H[m] + h[φ] ≥ log2(2π) over the oscillator set.
pub fn audit_entropy_sum<T: Real>(
    random: usize,
    seed: u64,
    tail_tol: T,
    grid_k: usize,
) -> Result<AuditSummary<T>> {
    let states = oscillator_audit_states(random, seed, tail_tol)?;
    let bound = T::two_pi().log2();
    let rows: Result<Vec<Sample<T>>> = states
        .par_iter()
        .map(|(label, s)| {
            Ok(Sample {
                margin: bialynicki_sum(s, grid_k)? - bound,
                label: label.clone(),
                extra_failures: vec![],
            })
        })
        .collect();
    Ok(summarize("eq6", QUADRATURE_SLACK, &[], rows?))
}

/// H[m] − μ R[φ] ≥ 0 with the canonical phase over the oscillator set.
pub fn audit_oscillator_excess<T: Real>(
    mu: T,
    random: usize,
    seed: u64,
    tail_tol: T,
    grid_k: usize,
) -> Result<AuditSummary<T>> {
    let states = oscillator_audit_states(random, seed, tail_tol)?;
    let rows: Result<Vec<Sample<T>>> = states
        .par_iter()
        .map(|(label, s)| {
            let r = excess_number_phase(s, &PhaseKernel::canonical(s.dim()), mu, grid_k)?;
            Ok(Sample { margin: r.margin(), label: label.clone(), extra_failures: vec![] })
        })
        .collect();
    Ok(summarize("eq7_oscillator", QUADRATURE_SLACK, &[], rows?))
}

/// H[m] − μ R[φ] ≥ 0 over Haar-random pure atomic states.
pub fn audit_atomic_excess<T: Real>(
    kernel: &PhaseKernel<T>,
    mu: T,
    samples: usize,
    seed: u64,
    grid_k: usize,
) -> Result<AuditSummary<T>> {
    check_samples(samples)?;
    let d = kernel.dim();
    let rows: Result<Vec<Sample<T>>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let s = make_random_pure::<T>(seed.wrapping_add(i), d)?;
            let r = excess_number_phase(&s, kernel, mu, grid_k)?;
            Ok(Sample {
                margin: r.margin(),
                label: format!("random_pure seed={} d={d}", seed.wrapping_add(i)),
                extra_failures: vec![],
            })
        })
        .collect();
    Ok(summarize(&format!("eq7_atomic_d{d}"), QUADRATURE_SLACK, &[], rows?))
}

/// Random qubit mixtures λ|ψ1⟩⟨ψ1| + (1−λ)|ψ2⟩⟨ψ2| with the SU(2) kernel:
/// X^μ ≥ 0, H[m] concave and R[φ] convex along the mixture.
pub fn audit_mixed_qubits<T: Real>(
    mu: T,
    samples: usize,
    seed: u64,
    grid_k: usize,
) -> Result<AuditSummary<T>> {
    check_samples(samples)?;
    let kernel = su2_kernel::<T>(2)?;
    let slack = T::tol(EXACT_SLACK);
    let entropies = |s: &QuantumState<T>| -> Result<(T, T)> {
        let h = shannon_entropy(&number_distribution(s)).bits;
        let r = knowledge_phase(&phase_distribution(s, &kernel, grid_k)?).bits;
        Ok((h, r))
    };
    let rows: Result<Vec<Sample<T>>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let kind = StateKind::Atomic { d: 2 };
            let s1 = make_pure(&haar_vector::<T, _>(&mut rng, 2), kind)?;
            let s2 = make_pure(&haar_vector::<T, _>(&mut rng, 2), kind)?;
            let lambda = T::lit(rng.random::<f64>());
            let m = mix(&[s1.clone(), s2.clone()], &[lambda, T::one() - lambda])?;
            let (h1, r1) = entropies(&s1)?;
            let (h2, r2) = entropies(&s2)?;
            let (hm, rm) = entropies(&m)?;
            let concave = hm >= lambda * h1 + (T::one() - lambda) * h2 - slack;
            let convex = rm <= lambda * r1 + (T::one() - lambda) * r2 + slack;
            Ok(Sample {
                margin: hm - mu * rm,
                label: format!("mixed_qubit seed={seed} stream={i} lambda={lambda}"),
                extra_failures: vec![usize::from(!concave), usize::from(!convex)],
            })
        })
        .collect();
    Ok(summarize(
        "mixed_mu",
        QUADRATURE_SLACK,
        &["h_concavity", "r_convexity"],
        rows?,
    ))
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_audits_pass() {
        assert!(audit_theorem1::<f64>(3, 200, 0).unwrap().passed);
        assert!(audit_entropy_sum::<f64>(20, 0, 1e-12, 1024).unwrap().passed);
        assert!(audit_oscillator_excess::<f64>(1.0, 20, 0, 1e-12, 1024).unwrap().passed);
        let mixed = audit_mixed_qubits::<f64>(4.035, 200, 3, 1024).unwrap();
        assert!(mixed.passed, "{mixed:?}");
    }

    #[test]
    fn large_mu_violates_near_the_equator() {
        let g = su2_kernel::<f64>(2).unwrap();
        let a = audit_atomic_excess(&g, 10.0, 200, 0, 1024).unwrap();
        assert!(!a.passed);
        assert!(a.violations > 0);
        assert!(a.min_margin < -0.5);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(check_samples(0).is_err());
    }
}
