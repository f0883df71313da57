//! Number and phase distributions of atomic and oscillator states, their
//! entropies and entropic knowledge, and the entropy-excess inequalities
//! linking them.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`). The
//! aliases at the bottom of this file fix the scalar to `f64`, which is
//! what the stated tolerances assume.

// `!(x > 0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod complementarity;
pub mod csv;
pub mod distributions;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod mu_search;
pub mod optimize;
pub mod scalar;
pub mod special;
pub mod state;
pub mod sweep;

pub use complementarity::{
    bialynicki_sum, excess_finite, excess_number_phase, overlap_f, x_min, BasisPair,
    ExcessReport, FiniteExcess,
};
pub use distributions::{
    number_distribution, phase_distribution, su2_kernel, NumberDistribution, PhaseDistribution,
    PhaseKernel, DEFAULT_GRID_K,
};
pub use entropy::{
    differential_phase_entropy, knowledge_discrete, knowledge_phase, shannon_entropy,
    EntropyValue,
};
pub use error::{Error, Result};
pub use mu_search::{mu_objective, mu_trend, search_mu, MuSearchReport};
pub use scalar::Real;
pub use state::{
    make_atomic_coherent, make_equatorial, make_fock, make_glauber_coherent, make_random_pure,
    mix, CutoffPolicy, QuantumState, StateKind, StateSpec,
};

pub type Complex64 = num_complex::Complex<f64>;

pub type State = QuantumState<f64>;
pub type Kernel = PhaseKernel<f64>;
pub type NumberDist = NumberDistribution<f64>;
pub type PhaseDist = PhaseDistribution<f64>;
pub type Entropy = EntropyValue<f64>;
pub type Pair = BasisPair<f64>;
pub type Excess = ExcessReport<f64>;
pub type MuReport = MuSearchReport<f64>;
pub type Audit = audit::AuditSummary<f64>;

pub type StateF32 = QuantumState<f32>;
pub type KernelF32 = PhaseKernel<f32>;
