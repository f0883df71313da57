//! Search for the largest μ with H[m] − μ R[φ] ≥ 0 over all pure states of
//! a d-level atom.
//!
//! The optimum is the infimum of the ratio H[m]/R[φ]. Near number states
//! both numerator and denominator vanish, but H falls off like −x log x
//! while R falls off like x², so the ratio diverges there and the infimum
//! sits in the interior of state space. States with R[φ] < ε_R are therefore
//! dropped from the ratio (they return +∞).
//!
//! The search runs in three stages:
//! 1. a dense sweep over the atomic coherent family (α', β'),
//! 2. multi-start simplex descent over the full pure-state chart,
//! 3. a polish of the incumbent with a shrinking simplex.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{
    number_distribution, phase_distribution_on, su2_kernel, KernelKind, PhaseGrid, PhaseKernel,
    DEFAULT_GRID_K,
};
use crate::entropy::{knowledge_phase, shannon_entropy};
use crate::error::{Error, Result};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::scalar::Real;
use crate::state::{atomic_coherent_amplitudes, haar_vector, QuantumState};

/// ε_R: phase knowledge below this excludes a state from the ratio.
pub const KNOWLEDGE_FLOOR: f64 = 1e-9;
pub const MIN_BUDGET: usize = 1_000;

/// H[m]/R[φ] for a state, +∞ when R[φ] < ε_R.
pub fn mu_objective<T: Real>(state: &QuantumState<T>, kernel: &PhaseKernel<T>) -> Result<T> {
    let grid = PhaseGrid::for_dim(DEFAULT_GRID_K, state.dim())?;
    mu_objective_on(state, kernel, &grid)
}

pub fn mu_objective_on<T: Real>(
    state: &QuantumState<T>,
    kernel: &PhaseKernel<T>,
    grid: &PhaseGrid<T>,
) -> Result<T> {
    let h = shannon_entropy(&number_distribution(state)).bits;
    let r = knowledge_phase(&phase_distribution_on(state, kernel, grid)?).bits;
    Ok(ratio_or_sentinel(h, r))
}

fn ratio_or_sentinel<T: Real>(h: T, r: T) -> T {
    if r < T::lit(KNOWLEDGE_FLOOR) {
        T::infinity()
    } else {
        h / r
    }
}

/// H[m] and R[φ] straight from pure-state amplitudes, without forming ρ.
#[derive(Debug, Clone)]
pub struct PureRatio<T> {
    kernel: PhaseKernel<T>,
    grid: PhaseGrid<T>,
}

impl<T: Real> PureRatio<T> {
    pub fn new(kernel: PhaseKernel<T>, grid_k: usize) -> Result<Self> {
        let grid = PhaseGrid::for_dim(grid_k, kernel.dim())?;
        Ok(Self { kernel, grid })
    }

    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    pub fn kernel(&self) -> &PhaseKernel<T> {
        &self.kernel
    }

    /// (H[m], R[φ]) in bits; `amps` need not be normalised.
    pub fn entropies(&self, amps: &[Complex<T>]) -> (T, T) {
        let d = self.dim();
        debug_assert_eq!(amps.len(), d);
        let norm2 = amps.iter().fold(T::zero(), |a, z| a + z.norm_sqr());
        let mut h = T::zero();
        for z in amps {
            let p = z.norm_sqr() / norm2;
            if p > T::zero() {
                h -= p * p.log2();
            }
        }
        // c_l = Σ_m G_{m,m+l} a_m conj(a_{m+l}) / |a|²
        let coeffs: Vec<Complex<T>> = (1..d)
            .map(|l| {
                (0..d - l).fold(Complex::new(T::zero(), T::zero()), |acc, m| {
                    acc + (amps[m] * amps[m + l].conj()).scale(self.kernel.weight(m, m + l))
                }) / norm2
            })
            .collect();
        let k = self.grid.len();
        let two = T::lit(2.0);
        let two_pi = T::two_pi();
        let mut sum = T::zero();
        for i in 0..k {
            let mut acc = T::one();
            for (l, c) in coeffs.iter().enumerate() {
                let idx = ((l + 1) * i) % k;
                acc += two * (c.re * self.grid.cos_at(idx) - c.im * self.grid.sin_at(idx));
            }
            // acc = 2π P(θ_i)
            if acc > T::lit(1e-300) {
                sum += acc * acc.log2();
            }
        }
        let r = sum / two_pi * self.grid.step();
        (h, r)
    }

    pub fn ratio(&self, amps: &[Complex<T>]) -> T {
        let (h, r) = self.entropies(amps);
        ratio_or_sentinel(h, r)
    }

}

/// Pure state from 2(d−1) chart coordinates: hyperspherical angles
/// t_1..t_{d−1} for the moduli, then phases φ_1..φ_{d−1} relative to
/// component 0.
pub fn chart_amplitudes<T: Real>(params: &[T], d: usize) -> Vec<Complex<T>> {
    debug_assert_eq!(params.len(), 2 * (d - 1));
    let (angles, phases) = params.split_at(d - 1);
    let mut amps = Vec::with_capacity(d);
    let mut sin_prod = T::one();
    for k in 0..d {
        let modulus = if k + 1 < d { sin_prod * angles[k].cos() } else { sin_prod };
        if k + 1 < d {
            sin_prod *= angles[k].sin();
        }
        let phase = if k == 0 { T::zero() } else { phases[k - 1] };
        amps.push(Complex::from_polar(modulus, phase));
    }
    amps
}

/// Inverse of [`chart_amplitudes`] up to a global phase.
pub fn chart_params<T: Real>(amps: &[Complex<T>]) -> Vec<T> {
    let d = amps.len();
    let norm = amps.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
    let r: Vec<T> = amps.iter().map(|z| z.norm() / norm).collect();
    let mut params = Vec::with_capacity(2 * (d - 1));
    for i in 0..d - 1 {
        let tail = r[i + 1..].iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
        params.push(tail.atan2(r[i]));
    }
    let reference = if r[0] > T::zero() { amps[0].arg() } else { T::zero() };
    for z in &amps[1..] {
        params.push(z.arg() - reference);
    }
    params
}

#[derive(Debug, Clone, Copy)]
pub struct MuSearchOptions {
    pub d: usize,
    pub budget: usize,
    pub seed: u64,
    pub grid_k: usize,
    pub sweep_alpha: usize,
    pub sweep_beta: usize,
    pub starts: usize,
    pub polish_tol: f64,
}

impl MuSearchOptions {
    pub fn new(d: usize, budget: usize, seed: u64) -> Self {
        Self {
            d,
            budget,
            seed,
            grid_k: DEFAULT_GRID_K,
            sweep_alpha: 181,
            sweep_beta: 64,
            starts: 64,
            polish_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageSummary<T> {
    pub method: String,
    pub evaluations: usize,
    pub best_ratio: T,
}

/// Incumbent minimiser, kept in full so it can be re-verified independently.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncumbentState<T> {
    pub params: Vec<T>,
    pub re: Vec<T>,
    pub im: Vec<T>,
}

impl<T: Real> IncumbentState<T> {
    fn from_params(params: Vec<T>, d: usize) -> Self {
        let amps = chart_amplitudes(&params, d);
        Self {
            re: amps.iter().map(|z| z.re).collect(),
            im: amps.iter().map(|z| z.im).collect(),
            params,
        }
    }

    pub fn amplitudes(&self) -> Vec<Complex<T>> {
        self.re.iter().zip(&self.im).map(|(&re, &im)| Complex::new(re, im)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuSearchReport<T> {
    pub d: usize,
    pub kernel: KernelKind,
    pub kernel_note: String,
    pub budget: usize,
    pub seed: u64,
    pub grid_k: usize,
    pub mu_estimate: T,
    /// mu_estimate less the quadrature uncertainty at the incumbent.
    pub certified_floor: T,
    pub tolerance: T,
    pub ratio_samples: usize,
    pub converged: bool,
    pub stages: Vec<StageSummary<T>>,
    pub argmin_state: IncumbentState<T>,
}

impl<T: Real> MuSearchReport<T> {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Search with default options: 181×64 sweep, 64 starts, default grid.
pub fn search_mu<T: Real>(
    d: usize,
    kernel: &PhaseKernel<T>,
    budget: usize,
    seed: u64,
) -> Result<MuSearchReport<T>> {
    search_mu_with(kernel, &MuSearchOptions::new(d, budget, seed))
}

pub fn search_mu_with<T: Real>(
    kernel: &PhaseKernel<T>,
    opts: &MuSearchOptions,
) -> Result<MuSearchReport<T>> {
    let d = opts.d;
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension {d} < 2")));
    }
    if opts.budget < MIN_BUDGET {
        return Err(Error::InvalidParameter(format!(
            "budget {} below minimum {MIN_BUDGET}",
            opts.budget
        )));
    }
    if kernel.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: kernel.dim() });
    }
    let eval = PureRatio::new(kernel.clone(), opts.grid_k)?;
    let n_params = 2 * (d - 1);
    let mut stages = Vec::with_capacity(3);

    // Stage 1: atomic coherent sweep.
    let n_alpha = opts.sweep_alpha.max(2);
    let n_beta = opts.sweep_beta.min((opts.budget / 4 / n_alpha).max(1)).max(1);
    let points: Vec<(T, T)> = (0..n_alpha)
        .flat_map(|i| {
            (0..n_beta).map(move |j| {
                let a = T::PI() * T::from_usize_lossy(i) / T::from_usize_lossy(n_alpha - 1);
                let b = T::two_pi() * T::from_usize_lossy(j) / T::from_usize_lossy(n_beta);
                (a, b)
            })
        })
        .collect();
    let sweep: Vec<T> = points
        .par_iter()
        .map(|&(a, b)| eval.ratio(&atomic_coherent_amplitudes(a, b, d)))
        .collect();
    let (best_idx, best_sweep) = argmin(&sweep);
    let used1 = sweep.len();
    stages.push(StageSummary {
        method: "atomic_coherent_sweep".into(),
        evaluations: used1,
        best_ratio: best_sweep,
    });
    let (a0, b0) = points[best_idx];
    let sweep_start = chart_params(&atomic_coherent_amplitudes(a0, b0, d));

    // Stage 2: multi-start simplex descent over the full chart.
    let remaining = opts.budget - used1;
    let alloc2 = remaining * 3 / 4;
    let starts = opts.starts.min(alloc2 / (20 * n_params)).max(1);
    let per_start = alloc2 / starts;
    let results: Vec<_> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let x0 = if i == 0 {
                sweep_start.clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(i as u64);
                chart_params(&haar_vector::<T, _>(&mut rng, d))
            };
            nelder_mead(
                |x: &[T]| eval.ratio(&chart_amplitudes(x, d)),
                &x0,
                &NelderMeadOptions {
                    initial_step: T::lit(0.3),
                    max_evals: per_start,
                    xtol: T::lit(1e-9),
                    ftol: T::lit(1e-12),
                },
            )
        })
        .collect();
    let used2: usize = results.iter().map(|r| r.evals).sum();
    let values: Vec<T> = results.iter().map(|r| r.f).collect();
    let (best_start, mut best) = argmin(&values);
    let mut x = results[best_start].x.clone();
    if best_sweep < best {
        best = best_sweep;
        x = sweep_start;
    }
    stages.push(StageSummary {
        method: format!("multistart_nelder_mead_x{starts}"),
        evaluations: used2,
        best_ratio: best,
    });

    // Stage 3: polish with a shrinking simplex.
    let budget3 = opts.budget.saturating_sub(used1 + used2);
    let mut used3 = 0;
    let mut step = T::lit(1e-2);
    let mut converged = false;
    let tol = T::lit(opts.polish_tol);
    while used3 < budget3 {
        let r = nelder_mead(
            |p: &[T]| eval.ratio(&chart_amplitudes(p, d)),
            &x,
            &NelderMeadOptions {
                initial_step: step,
                max_evals: budget3 - used3,
                xtol: T::lit(1e-10).min(step),
                ftol: T::lit(1e-12),
            },
        );
        used3 += r.evals;
        let disp = r.x.iter().zip(&x).fold(T::zero(), |a, (&u, &v)| a.max((u - v).abs()));
        if r.f < best {
            best = r.f;
            x = r.x;
        }
        if r.converged && disp < tol {
            converged = true;
            break;
        }
        step = (step * T::lit(0.1)).max(T::lit(1e-9));
    }
    stages.push(StageSummary {
        method: "polish_nelder_mead".into(),
        evaluations: used3,
        best_ratio: best,
    });

    let incumbent = IncumbentState::from_params(x, d);
    let fine = PureRatio::new(kernel.clone(), 2 * eval.grid.len())?;
    let tolerance = (fine.ratio(&incumbent.amplitudes()) - best).abs() + T::lit(1e-9);
    let (kernel_kind, note) = match kernel.kind() {
        KernelKind::Su2 { .. } => (
            kernel.kind(),
            "SU(2) coherent-state phase kernel assumed for atomic dimension d".to_string(),
        ),
        KernelKind::Canonical => (kernel.kind(), "canonical phase kernel".to_string()),
    };
    if best < T::one() {
        log::warn!("mu estimate {best} below 1 for d = {d}");
    }
    if !converged {
        log::warn!("budget exhausted before polish converged (d = {d})");
    }
    Ok(MuSearchReport {
        d,
        kernel: kernel_kind,
        kernel_note: note,
        budget: opts.budget,
        seed: opts.seed,
        grid_k: eval.grid.len(),
        mu_estimate: best,
        certified_floor: best - tolerance,
        tolerance,
        ratio_samples: used1 + used2 + used3,
        converged,
        stages,
        argmin_state: incumbent,
    })
}

/// First index of the smallest value.
fn argmin<T: Real>(values: &[T]) -> (usize, T) {
    let mut best = (0, T::infinity());
    for (i, &v) in values.iter().enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuTrendEntry<T> {
    pub d: usize,
    pub mu_estimate: T,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuTrend<T> {
    pub entries: Vec<MuTrendEntry<T>>,
    /// Reported only: the decrease toward 1 is a conjecture.
    pub monotone_decreasing: bool,
}

/// Runs [`search_mu`] with the SU(2) kernel for each dimension.
pub fn mu_trend<T: Real>(d_list: &[usize], budget: usize, seed: u64) -> Result<MuTrend<T>> {
    if d_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("dimension list must be ascending".into()));
    }
    let mut entries = Vec::with_capacity(d_list.len());
    for &d in d_list {
        let report = search_mu(d, &su2_kernel::<T>(d)?, budget, seed)?;
        entries.push(MuTrendEntry { d, mu_estimate: report.mu_estimate, converged: report.converged });
    }
    let monotone_decreasing = entries.windows(2).all(|w| w[1].mu_estimate < w[0].mu_estimate);
    Ok(MuTrend { entries, monotone_decreasing })
}

/// Smallest ratio over `samples` Haar-random pure states (seeds
/// `seed..seed+samples`), with the seed that attained it.
pub fn sampled_min_ratio<T: Real>(eval: &PureRatio<T>, samples: u64, seed: u64) -> (T, u64) {
    let d = eval.dim();
    (seed..seed + samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (eval.ratio(&haar_vector::<T, _>(&mut rng, d)), s)
        })
        .reduce(
            || (T::infinity(), u64::MAX),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{make_equatorial, make_fock, make_pure, make_random_pure, StateKind};

    #[test]
    fn equatorial_ratio() {
        let g = su2_kernel::<f64>(2).unwrap();
        let r = mu_objective(&make_equatorial(0.3), &g).unwrap();
        assert!((r - 4.085).abs() < 2e-3, "{r}");
    }

    #[test]
    fn fock_state_is_excluded() {
        let g = su2_kernel::<f64>(3).unwrap();
        let mut s = make_fock::<f64>(1, 3).unwrap();
        s = QuantumState::from_parts(s.matrix().clone(), StateKind::Atomic { d: 3 }, 0.0);
        assert_eq!(mu_objective(&s, &g).unwrap(), f64::INFINITY);
    }

    #[test]
    fn fast_path_matches_density_matrix_path() {
        for d in [2, 3, 5] {
            let g = su2_kernel::<f64>(d).unwrap();
            let fast = PureRatio::new(g.clone(), 1024).unwrap();
            let grid = PhaseGrid::new(1024).unwrap();
            for seed in 0..20 {
                let amps = crate::state::random_pure_amplitudes::<f64>(seed, d);
                let s = make_pure(&amps, StateKind::Atomic { d }).unwrap();
                let slow = mu_objective_on(&s, &g, &grid).unwrap();
                assert!((fast.ratio(&amps) - slow).abs() < 1e-11 * slow, "d={d} seed={seed}");
            }
        }
    }

    #[test]
    fn chart_roundtrip() {
        for d in [2, 3, 6] {
            for seed in 0..10 {
                let amps = crate::state::random_pure_amplitudes::<f64>(seed, d);
                let back = chart_amplitudes(&chart_params(&amps), d);
                // equal up to the global phase of component 0
                let phase = amps[0] / amps[0].norm();
                for (a, b) in amps.iter().zip(&back) {
                    assert!((a - b * phase).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn chart_is_always_normalised() {
        let amps = chart_amplitudes(&[0.3, -2.0, 7.0, 1.0, 2.0, 3.0], 4);
        let n: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
    }

    #[test]
    fn qubit_search_finds_the_equator() {
        let g = su2_kernel::<f64>(2).unwrap();
        let rep = search_mu(2, &g, 20_000, 7).unwrap();
        assert!((rep.mu_estimate - 4.085).abs() < 0.05);
        assert!(rep.certified_floor <= rep.mu_estimate);
        let a = rep.argmin_state.amplitudes();
        let overlap = (a[0].norm() + a[1].norm()) / 2f64.sqrt();
        assert!(overlap > 0.999, "{overlap}");
        let again = search_mu(2, &g, 20_000, 7).unwrap();
        assert_eq!(rep, again);
    }

    #[test]
    fn search_preconditions() {
        let g = su2_kernel::<f64>(2).unwrap();
        assert!(search_mu(2, &g, 999, 0).is_err());
        assert!(search_mu(3, &g, 10_000, 0).is_err());
        assert!(mu_trend::<f64>(&[4, 2], 1000, 0).is_err());
    }

    #[test]
    fn small_budget_still_reports() {
        let g = su2_kernel::<f64>(3).unwrap();
        let rep = search_mu(3, &g, 1_000, 1).unwrap();
        assert!(rep.ratio_samples <= 1_100, "{}", rep.ratio_samples);
        assert!(rep.mu_estimate.is_finite());
    }

    #[test]
    fn sampled_minimum_is_reproducible() {
        let eval = PureRatio::new(su2_kernel::<f64>(2).unwrap(), 512).unwrap();
        let a = sampled_min_ratio(&eval, 200, 5);
        let b = sampled_min_ratio(&eval, 200, 5);
        assert_eq!(a, b);
        let s = make_random_pure::<f64>(a.1, 2).unwrap();
        let direct = mu_objective_on(&s, eval.kernel(), &PhaseGrid::new(512).unwrap()).unwrap();
        assert!((direct - a.0).abs() < 1e-10);
    }
}
