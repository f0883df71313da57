//! Entropy-excess inequalities: finite-dimensional bases, number-phase for
//! atoms and oscillators, and the number-phase entropy sum.

use num_complex::Complex;
use serde::Serialize;

use crate::distributions::{number_distribution, phase_distribution, PhaseKernel};
use crate::entropy::{differential_phase_entropy, knowledge_phase, shannon_entropy};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;
use crate::state::QuantumState;

/// Slack for inequalities between exact finite-dimensional quantities.
pub const EXACT_SLACK: f64 = 1e-9;
/// Slack when a phase integral is involved.
pub const QUADRATURE_SLACK: f64 = 1e-6;

/// Two orthonormal bases of C^d, stored as the columns of unitary matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisPair<T> {
    a: CMatrix<T>,
    b: CMatrix<T>,
}

impl<T: Real> BasisPair<T> {
    pub fn new(a: CMatrix<T>, b: CMatrix<T>) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        for (name, m) in [("A", &a), ("B", &b)] {
            let defect = m.adjoint().matmul(m).identity_defect();
            if defect > T::tol(1e-12) {
                return Err(Error::InvalidBasis(format!(
                    "basis {name} not orthonormal (defect {defect:e})"
                )));
            }
        }
        Ok(Self { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn a(&self) -> &CMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &CMatrix<T> {
        &self.b
    }

    pub fn swapped(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone() }
    }

    /// Computational basis against the discrete Fourier basis, a MUB pair.
    pub fn computational_fourier(d: usize) -> Self {
        Self { a: CMatrix::identity(d), b: fourier_basis(d) }
    }
}

/// F_{jk} = ω^{jk}/√d with ω = e^{2πi/d}.
pub fn fourier_basis<T: Real>(d: usize) -> CMatrix<T> {
    let norm = T::one() / T::from_usize_lossy(d).sqrt();
    CMatrix::from_fn(d, |j, k| {
        let angle = T::two_pi() * T::from_usize_lossy((j * k) % d) / T::from_usize_lossy(d);
        Complex::from_polar(norm, angle)
    })
}

/// Real rotation [[c, −s], [s, c]] of the qubit computational basis.
pub fn rotated_qubit_basis<T: Real>(angle: T) -> CMatrix<T> {
    let (s, c) = angle.sin_cos();
    let z = T::zero();
    CMatrix::from_row_major(
        2,
        vec![Complex::new(c, z), Complex::new(-s, z), Complex::new(s, z), Complex::new(c, z)],
    )
    .expect("2x2")
}

/// f(A, B) = max_{a,b} |⟨a|b⟩|.
pub fn overlap_f<T: Real>(pair: &BasisPair<T>) -> T {
    let inner = pair.a.adjoint().matmul(&pair.b);
    inner.as_slice().iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
}

/// X_min = 2 log2(1/f) − log2 d.
pub fn x_min<T: Real>(pair: &BasisPair<T>) -> T {
    let f = overlap_f(pair);
    T::lit(2.0) * (T::one() / f).log2() - T::from_usize_lossy(pair.dim()).log2()
}

/// Outcome probabilities ⟨v_j|ρ|v_j⟩ for the columns v_j of `basis`.
pub fn measure<T: Real>(state: &QuantumState<T>, basis: &CMatrix<T>) -> Vec<T> {
    (0..basis.dim()).map(|j| state.matrix().expectation(&basis.column(j)).re).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExcessReport<T> {
    pub h_a: T,
    pub r_b: T,
    pub x: T,
    pub bound: T,
    pub mu: T,
    pub satisfied: bool,
}

impl<T: Real> ExcessReport<T> {
    fn new(h_a: T, r_b: T, mu: T, bound: T, slack: f64) -> Self {
        let x = h_a - mu * r_b;
        Self { h_a, r_b, x, bound, mu, satisfied: x >= bound - T::tol(slack) }
    }

    /// Distance above the bound (negative on violation).
    pub fn margin(&self) -> T {
        self.x - self.bound
    }
}

/// X(A,B) together with its symmetry partner X(B,A).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiniteExcess<T> {
    pub forward: ExcessReport<T>,
    pub reverse: ExcessReport<T>,
}

fn excess_from_probs<T: Real>(p_a: &[T], p_b: &[T], bound: T) -> ExcessReport<T> {
    let d = T::from_usize_lossy(p_a.len());
    let h_a = shannon_entropy(p_a).bits;
    let r_b = d.log2() - shannon_entropy(p_b).bits;
    ExcessReport::new(h_a, r_b, T::one(), bound, EXACT_SLACK)
}

/// X(A,B) = H(A) − R(B) for projective measurements in the two bases.
pub fn excess_finite<T: Real>(state: &QuantumState<T>, pair: &BasisPair<T>) -> Result<FiniteExcess<T>> {
    if state.dim() != pair.dim() {
        return Err(Error::DimensionMismatch { expected: pair.dim(), found: state.dim() });
    }
    let p_a = measure(state, &pair.a);
    let p_b = measure(state, &pair.b);
    let bound = x_min(pair);
    Ok(FiniteExcess {
        forward: excess_from_probs(&p_a, &p_b, bound),
        reverse: excess_from_probs(&p_b, &p_a, bound),
    })
}

/// X^μ[m, φ] = H[m] − μ R[φ], bound 0.
pub fn excess_number_phase<T: Real>(
    state: &QuantumState<T>,
    kernel: &PhaseKernel<T>,
    mu: T,
    grid_k: usize,
) -> Result<ExcessReport<T>> {
    if !(mu > T::zero()) {
        return Err(Error::InvalidParameter(format!("mu = {mu} must be positive")));
    }
    let h = shannon_entropy(&number_distribution(state)).bits;
    let r = knowledge_phase(&phase_distribution(state, kernel, grid_k)?).bits;
    Ok(ExcessReport::new(h, r, mu, T::zero(), QUADRATURE_SLACK))
}

/// H[m] + h[φ] for the canonical phase; bounded below by log2(2π).
pub fn bialynicki_sum<T: Real>(state: &QuantumState<T>, grid_k: usize) -> Result<T> {
    if !state.is_oscillator() {
        return Err(Error::NotOscillator);
    }
    let kernel = PhaseKernel::canonical(state.dim());
    let h = shannon_entropy(&number_distribution(state)).bits;
    let hd = differential_phase_entropy(&phase_distribution(state, &kernel, grid_k)?).bits;
    Ok(h + hd)
}
