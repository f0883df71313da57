//! Single-state evaluation and the coherent-state parameter sweeps.

use std::io::Write;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complementarity::excess_number_phase;
use crate::csv;
use crate::distributions::{
    number_distribution, phase_distribution, su2_kernel, PhaseKernel, DEFAULT_GRID_K, MIN_GRID_K,
};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::{make_atomic_coherent, make_glauber_coherent, CutoffPolicy, QuantumState};

/// μ used for the atomic sweep unless overridden.
pub const DEFAULT_SWEEP_MU: f64 = 4.085;
pub const ATOMIC_COLUMNS: [&str; 6] = ["alpha_p", "H_m", "R_phi", "mu_R_phi", "X", "X_mu"];
pub const OSCILLATOR_COLUMNS: [&str; 4] = ["alpha", "H_m", "R_phi", "X"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelChoice {
    Canonical,
    Su2,
}

impl KernelChoice {
    pub fn build<T: Real>(self, dim: usize) -> Result<PhaseKernel<T>> {
        match self {
            KernelChoice::Canonical => Ok(PhaseKernel::canonical(dim)),
            KernelChoice::Su2 => su2_kernel(dim),
        }
    }

    /// SU(2) for atomic states, canonical for oscillator states.
    pub fn default_for<T: Real>(state: &QuantumState<T>) -> Self {
        if state.is_oscillator() {
            KernelChoice::Canonical
        } else {
            KernelChoice::Su2
        }
    }
}

/// Everything reported for one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation<T> {
    pub dim: usize,
    pub kernel: KernelChoice,
    pub grid_k: usize,
    pub truncation_loss: T,
    pub number: NumberSummary<T>,
    pub phase: PhaseSummary<T>,
    pub h_m: T,
    pub r_phi: T,
    pub x: T,
    pub mu: T,
    pub x_mu: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumberSummary<T> {
    pub mean: T,
    pub p: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseSummary<T> {
    pub min_density: T,
    pub max_density: T,
    pub argmax_theta: T,
    pub integral: T,
}

pub fn evaluate<T: Real>(
    state: &QuantumState<T>,
    kernel: KernelChoice,
    mu: T,
    grid_k: usize,
) -> Result<Evaluation<T>> {
    let g = kernel.build::<T>(state.dim())?;
    let nd = number_distribution(state);
    let pd = phase_distribution(state, &g, grid_k)?;
    let with_mu = excess_number_phase(state, &g, mu, grid_k)?;
    Ok(Evaluation {
        dim: state.dim(),
        kernel,
        grid_k: pd.grid_size(),
        truncation_loss: state.truncation_loss(),
        number: NumberSummary { mean: nd.mean(), p: nd.probabilities() },
        phase: PhaseSummary {
            min_density: pd.min_value(),
            max_density: pd.max_value(),
            argmax_theta: pd.theta(pd.argmax()),
            integral: pd.integral(),
        },
        h_m: with_mu.h_a,
        r_phi: with_mu.r_b,
        x: with_mu.h_a - with_mu.r_b,
        mu,
        x_mu: with_mu.x,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepFamily {
    AtomicCoherent { d: usize, beta_p: f64 },
    Glauber,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: SweepFamily,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub kernel: KernelChoice,
    pub mu: f64,
    pub grid_k: usize,
    pub tail_tol: f64,
}

impl SweepConfig {
    /// α' over [0, π] for a qubit at β' = 0 with the SU(2) kernel and μ = 4.085.
    pub fn atomic_default() -> Self {
        Self {
            family: SweepFamily::AtomicCoherent { d: 2, beta_p: 0.0 },
            start: 0.0,
            stop: std::f64::consts::PI,
            steps: 181,
            kernel: KernelChoice::Su2,
            mu: DEFAULT_SWEEP_MU,
            grid_k: DEFAULT_GRID_K,
            tail_tol: 1e-12,
        }
    }

    /// α over [0, 3] in 61 steps with the canonical kernel.
    pub fn oscillator_default() -> Self {
        Self {
            family: SweepFamily::Glauber,
            start: 0.0,
            stop: 3.0,
            steps: 61,
            kernel: KernelChoice::Canonical,
            mu: 1.0,
            grid_k: DEFAULT_GRID_K,
            tail_tol: 1e-12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidParameter(format!("steps = {} < 2", self.steps)));
        }
        if !(self.start < self.stop) {
            return Err(Error::InvalidParameter(format!(
                "start {} must be below stop {}",
                self.start, self.stop
            )));
        }
        if self.grid_k < MIN_GRID_K || !self.grid_k.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "grid size {} must be even and >= {MIN_GRID_K}",
                self.grid_k
            )));
        }
        if !(self.mu > 0.0) {
            return Err(Error::InvalidParameter(format!("mu = {} must be positive", self.mu)));
        }
        Ok(())
    }

    pub fn parameters(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|i| if i == n { self.stop } else { self.start + (self.stop - self.start) * i as f64 / n as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomicSweepRow<T> {
    pub alpha_p: T,
    pub h_m: T,
    pub r_phi: T,
    pub mu_r_phi: T,
    pub x: T,
    pub x_mu: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorSweepRow<T> {
    pub alpha: T,
    pub h_m: T,
    pub r_phi: T,
    pub x: T,
}

/// Atomic coherent states |α', β'⟩ along a meridian.
pub fn sweep_atomic<T: Real>(cfg: &SweepConfig) -> Result<Vec<AtomicSweepRow<T>>> {
    cfg.validate()?;
    let SweepFamily::AtomicCoherent { d, beta_p } = cfg.family else {
        return Err(Error::InvalidParameter("atomic sweep needs the atomic_coherent family".into()));
    };
    let mu = T::lit(cfg.mu);
    cfg.parameters()
        .into_par_iter()
        .map(|a| {
            let s = make_atomic_coherent(T::lit(a), T::lit(beta_p), d)?;
            let e = evaluate(&s, cfg.kernel, mu, cfg.grid_k)?;
            Ok(AtomicSweepRow {
                alpha_p: T::lit(a),
                h_m: e.h_m,
                r_phi: e.r_phi,
                mu_r_phi: mu * e.r_phi,
                x: e.x,
                x_mu: e.x_mu,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillatorSweep<T> {
    pub rows: Vec<OscillatorSweepRow<T>>,
    /// Strict increase of H[m] between consecutive rows from α = 0.1 on.
    pub h_increasing: bool,
    pub r_increasing: bool,
    pub max_truncation_loss: T,
}

pub const MONOTONE_FROM_ALPHA: f64 = 0.1;

/// Glauber coherent states |α⟩ for real α.
pub fn sweep_oscillator<T: Real>(cfg: &SweepConfig) -> Result<OscillatorSweep<T>> {
    cfg.validate()?;
    if cfg.family != SweepFamily::Glauber {
        return Err(Error::InvalidParameter("oscillator sweep needs the glauber family".into()));
    }
    if cfg.start < 0.0 {
        return Err(Error::InvalidParameter("alpha must be >= 0".into()));
    }
    let policy = CutoffPolicy::Auto { tail_tol: T::lit(cfg.tail_tol) };
    let mu = T::lit(cfg.mu);
    let evaluated: Result<Vec<(OscillatorSweepRow<T>, T)>> = cfg
        .parameters()
        .into_par_iter()
        .map(|a| {
            let s = make_glauber_coherent(Complex::new(T::lit(a), T::zero()), policy)?;
            let e = evaluate(&s, cfg.kernel, mu, cfg.grid_k)?;
            Ok((
                OscillatorSweepRow { alpha: T::lit(a), h_m: e.h_m, r_phi: e.r_phi, x: e.x },
                s.truncation_loss(),
            ))
        })
        .collect();
    let evaluated = evaluated?;
    let max_truncation_loss = evaluated.iter().fold(T::zero(), |a, (_, l)| a.max(*l));
    let rows: Vec<_> = evaluated.into_iter().map(|(r, _)| r).collect();
    let increasing = |f: &dyn Fn(&OscillatorSweepRow<T>) -> T| {
        rows.windows(2)
            .filter(|w| w[0].alpha >= T::lit(MONOTONE_FROM_ALPHA) - T::lit(1e-12))
            .all(|w| f(&w[1]) > f(&w[0]))
    };
    let h_increasing = increasing(&|r| r.h_m);
    let r_increasing = increasing(&|r| r.r_phi);
    Ok(OscillatorSweep { rows, h_increasing, r_increasing, max_truncation_loss })
}

pub fn write_atomic_csv<W: Write, T: Real>(out: &mut W, rows: &[AtomicSweepRow<T>]) -> Result<()> {
    csv::write_header(out, &ATOMIC_COLUMNS)?;
    for r in rows {
        csv::write_row(out, &[r.alpha_p, r.h_m, r.r_phi, r.mu_r_phi, r.x, r.x_mu])?;
    }
    Ok(())
}

pub fn write_oscillator_csv<W: Write, T: Real>(
    out: &mut W,
    rows: &[OscillatorSweepRow<T>],
) -> Result<()> {
    csv::write_header(out, &OSCILLATOR_COLUMNS)?;
    for r in rows {
        csv::write_row(out, &[r.alpha, r.h_m, r.r_phi, r.x])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_sweep_endpoints() {
        let cfg = SweepConfig { steps: 5, ..SweepConfig::atomic_default() };
        let rows = sweep_atomic::<f64>(&cfg).unwrap();
        assert_eq!(rows.len(), 5);
        for r in [&rows[0], &rows[4]] {
            assert!(r.h_m.abs() < 1e-12 && r.r_phi.abs() < 1e-12);
            assert!(r.x.abs() < 1e-12 && r.x_mu.abs() < 1e-12);
        }
        let eq = &rows[2];
        assert!((eq.h_m - 1.0).abs() < 1e-12);
        assert!((eq.r_phi - 0.2448).abs() < 1e-4);
        assert!((eq.x - 0.7552).abs() < 1e-4);
        assert!(eq.x_mu.abs() < 2e-3 && eq.x_mu >= -1e-6);
    }

    #[test]
    fn oscillator_sweep_small() {
        let cfg = SweepConfig { steps: 7, ..SweepConfig::oscillator_default() };
        let sweep = sweep_oscillator::<f64>(&cfg).unwrap();
        assert_eq!(sweep.rows[0].h_m, 0.0);
        assert!(sweep.rows[0].r_phi.abs() < 1e-12);
        assert!(sweep.h_increasing && sweep.r_increasing);
        let at2 = sweep.rows.iter().find(|r| (r.alpha - 2.0).abs() < 1e-12).unwrap();
        assert!((at2.h_m - 3.010_432_356_076_65).abs() < 1e-10);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SweepConfig::oscillator_default();
        cfg.steps = 1;
        assert!(sweep_oscillator::<f64>(&cfg).is_err());
        let mut cfg = SweepConfig::oscillator_default();
        cfg.stop = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = SweepConfig::oscillator_default();
        cfg.grid_k = 63;
        assert!(cfg.validate().is_err());
        assert!(sweep_atomic::<f64>(&SweepConfig::oscillator_default()).is_err());
        assert!(sweep_oscillator::<f64>(&SweepConfig::atomic_default()).is_err());
    }

    #[test]
    fn csv_headers() {
        let cfg = SweepConfig { steps: 3, ..SweepConfig::atomic_default() };
        let rows = sweep_atomic::<f64>(&cfg).unwrap();
        let mut buf = Vec::new();
        write_atomic_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "alpha_p,H_m,R_phi,mu_R_phi,X,X_mu");
        assert_eq!(text.lines().count(), 4);
    }
}
