//! Number and phase distributions of a density matrix.
//!
//! The phase density is
//!
//! ```text
//! P(θ) = (1/2π) Σ_{m,n} G_{mn} ρ_{mn} e^{i(n−m)θ}
//! ```
//!
//! where the kernel `G` is all ones for the canonical (oscillator) phase and
//! the SU(2) coherent-state marginal weights for atomic systems. Densities are
//! sampled on the uniform grid θ_k = 2πk/K and integrated with the periodic
//! trapezoid rule, which is exact for trigonometric polynomials of degree
//! below K/2.

use std::io::Write;

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::csv;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{ln_beta, ln_binomial};
use crate::state::QuantumState;

pub const DEFAULT_GRID_K: usize = 4096;
pub const MIN_GRID_K: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumberDistribution<T> {
    p: Vec<T>,
    truncation_loss: T,
}

impl<T: Real> NumberDistribution<T> {
    /// Raw diagonal, possibly with round-off negatives of order 1e-14.
    pub fn raw(&self) -> &[T] {
        &self.p
    }

    /// Probabilities with negatives clipped to zero.
    pub fn probabilities(&self) -> Vec<T> {
        self.p.iter().map(|&x| x.max(T::zero())).collect()
    }

    pub fn truncation_loss(&self) -> T {
        self.truncation_loss
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn total(&self) -> T {
        self.p.iter().fold(T::zero(), |a, &x| a + x)
    }

    pub fn mean(&self) -> T {
        self.p
            .iter()
            .enumerate()
            .fold(T::zero(), |a, (m, &x)| a + T::from_usize_lossy(m) * x.max(T::zero()))
            / self.total()
    }

    /// Rows `(m, p)`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "m,p")?;
        for (m, &p) in self.p.iter().enumerate() {
            writeln!(out, "{m},{}", csv::sig17(p.max(T::zero())))?;
        }
        Ok(())
    }
}

/// p(m) = ⟨m|ρ|m⟩.
pub fn number_distribution<T: Real>(state: &QuantumState<T>) -> NumberDistribution<T> {
    let m = state.matrix();
    NumberDistribution {
        p: (0..state.dim()).map(|i| m[(i, i)].re).collect(),
        truncation_loss: state.truncation_loss(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KernelKind {
    Canonical,
    /// Spin j = (d − 1)/2, stored as d.
    Su2 { d: usize },
}

/// Weights multiplying ρ_{mn} e^{i(n−m)θ} in the phase density.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseKernel<T> {
    dim: usize,
    weights: Vec<T>,
    kind: KernelKind,
}

impl<T: Real> PhaseKernel<T> {
    pub fn canonical(dim: usize) -> Self {
        Self { dim, weights: vec![T::one(); dim * dim], kind: KernelKind::Canonical }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    #[inline]
    pub fn weight(&self, m: usize, n: usize) -> T {
        self.weights[m * self.dim + n]
    }
}

/// SU(2) kernel for a d-level atom. With j = (d−1)/2 and labels
/// m, n ∈ {−j..j},
///
/// G_{mn} = (2j+1) √(C(2j, j+m) C(2j, j+n)) B(j − (m+n)/2 + 1, j + (m+n)/2 + 1).
///
/// In terms of the row indices a = j+m, b = j+n this is
/// d √(C(d−1,a) C(d−1,b)) B(d − (a+b)/2, (a+b)/2 + 1).
pub fn su2_kernel<T: Real>(d: usize) -> Result<PhaseKernel<T>> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("atomic dimension {d} < 2")));
    }
    let half = T::lit(0.5);
    let ln_d = T::from_usize_lossy(d).ln();
    let mut weights = vec![T::zero(); d * d];
    for a in 0..d {
        for b in a..d {
            let s = T::from_usize_lossy(a + b) * half;
            let ln_g = ln_d
                + half * (ln_binomial::<T>(d - 1, a) + ln_binomial::<T>(d - 1, b))
                + ln_beta(T::from_usize_lossy(d) - s, s + T::one());
            let g = ln_g.exp();
            weights[a * d + b] = g;
            weights[b * d + a] = g;
        }
    }
    Ok(PhaseKernel { dim: d, weights, kind: KernelKind::Su2 { d } })
}

/// Cached cos/sin table for the uniform phase grid θ_k = 2πk/K.
#[derive(Debug, Clone)]
pub struct PhaseGrid<T> {
    k: usize,
    cos: Vec<T>,
    sin: Vec<T>,
}

impl<T: Real> PhaseGrid<T> {
    /// Fails unless `k` is even and at least 64.
    pub fn new(k: usize) -> Result<Self> {
        if k < MIN_GRID_K || !k.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "grid size {k} must be even and >= {MIN_GRID_K}"
            )));
        }
        let step = T::two_pi() / T::from_usize_lossy(k);
        let (sin, cos) = (0..k).map(|i| (step * T::from_usize_lossy(i)).sin_cos()).unzip();
        Ok(Self { k, cos, sin })
    }

    /// Grid with at least `k` nodes that also resolves a `dim`-level state.
    pub fn for_dim(k: usize, dim: usize) -> Result<Self> {
        Self::new(resolve_grid_size(k, dim))
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn theta(&self, i: usize) -> T {
        T::two_pi() * T::from_usize_lossy(i) / T::from_usize_lossy(self.k)
    }

    pub fn step(&self) -> T {
        T::two_pi() / T::from_usize_lossy(self.k)
    }

    #[inline]
    pub(crate) fn cos_at(&self, i: usize) -> T {
        self.cos[i]
    }

    #[inline]
    pub(crate) fn sin_at(&self, i: usize) -> T {
        self.sin[i]
    }
}

/// Raises `k` to the smallest even value ≥ 2·dim when it is too coarse.
pub fn resolve_grid_size(k: usize, dim: usize) -> usize {
    let need = 2 * dim;
    if k < need {
        let raised = need.max(MIN_GRID_K);
        log::warn!("grid size {k} too small for dimension {dim}; using {raised}");
        raised
    } else {
        k
    }
}

/// Phase density sampled on a uniform periodic grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseDistribution<T> {
    values: Vec<T>,
    mass: T,
}

impl<T: Real> PhaseDistribution<T> {
    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn theta(&self, i: usize) -> T {
        T::two_pi() * T::from_usize_lossy(i) / T::from_usize_lossy(self.values.len())
    }

    pub fn step(&self) -> T {
        T::two_pi() / T::from_usize_lossy(self.values.len())
    }

    /// Raw samples, which may carry round-off negatives near zeros.
    pub fn raw(&self) -> &[T] {
        &self.values
    }

    pub fn density(&self, i: usize) -> T {
        self.values[i].max(T::zero())
    }

    /// Clipped density divided by the source trace, so it integrates to one.
    pub fn normalized(&self) -> impl Iterator<Item = T> + '_ {
        let mass = self.mass;
        self.values.iter().map(move |&v| v.max(T::zero()) / mass)
    }

    /// Trace of the source state, 1 − truncation_loss.
    pub fn mass(&self) -> T {
        self.mass
    }

    /// Periodic trapezoid integral of the raw samples.
    pub fn integral(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &v| a + v) * self.step()
    }

    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_value(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        best
    }

    /// Rows `(theta, density)`, theta in radians.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "theta,density")?;
        for i in 0..self.values.len() {
            writeln!(out, "{},{}", csv::sig17(self.theta(i)), csv::sig17(self.density(i)))?;
        }
        Ok(())
    }
}

/// Phase distribution on `k` grid nodes (raised to 2·dim if needed).
pub fn phase_distribution<T: Real>(
    state: &QuantumState<T>,
    kernel: &PhaseKernel<T>,
    k: usize,
) -> Result<PhaseDistribution<T>> {
    let grid = PhaseGrid::for_dim(k, state.dim())?;
    phase_distribution_on(state, kernel, &grid)
}

/// Same as [`phase_distribution`] with a caller-owned grid table.
pub fn phase_distribution_on<T: Real>(
    state: &QuantumState<T>,
    kernel: &PhaseKernel<T>,
    grid: &PhaseGrid<T>,
) -> Result<PhaseDistribution<T>> {
    let d = state.dim();
    if kernel.dim() != d {
        return Err(Error::DimensionMismatch { expected: kernel.dim(), found: d });
    }
    if grid.len() < 2 * d {
        return Err(Error::InvalidParameter(format!(
            "grid size {} below 2 x dimension {d}",
            grid.len()
        )));
    }
    let rho = state.matrix();
    // c[d - 1 + l] = Σ_{n - m = l} G_mn ρ_mn for l in -(d-1)..=(d-1)
    let mut coeffs = vec![Complex::<T>::zero(); 2 * d - 1];
    for m in 0..d {
        for n in 0..d {
            let idx = d - 1 + n - m;
            coeffs[idx] += rho[(m, n)].scale(kernel.weight(m, n));
        }
    }
    let k = grid.len();
    let inv_two_pi = T::one() / T::two_pi();
    let mut values = Vec::with_capacity(k);
    let mut worst_im = T::zero();
    for i in 0..k {
        let mut re = T::zero();
        let mut im = T::zero();
        for (c_idx, c) in coeffs.iter().enumerate() {
            let l = c_idx as isize - (d as isize - 1);
            let phase = (l.rem_euclid(k as isize) as usize * i) % k;
            let (cs, sn) = (grid.cos[phase], grid.sin[phase]);
            re += c.re * cs - c.im * sn;
            im += c.re * sn + c.im * cs;
        }
        worst_im = worst_im.max(im.abs() * inv_two_pi);
        values.push(re * inv_two_pi);
    }
    if worst_im > T::tol(1e-8) {
        return Err(Error::NonHermitian(worst_im.as_f64()));
    }
    if worst_im > T::tol(1e-10) {
        log::debug!("phase density imaginary residue {worst_im:e}");
    }
    Ok(PhaseDistribution { values, mass: state.trace() })
}
