//! Density matrices for atomic (Wigner-Dicke basis) and truncated oscillator
//! (Fock basis) systems, together with the named state families.

use num_complex::Complex;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;
use crate::special::{ln_binomial, ln_factorial};

/// Which physical system a density matrix describes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum StateKind<T> {
    Atomic { d: usize },
    TruncatedOscillator { cutoff: usize, declared_mean: T },
}

/// A density operator in the number (or Wigner-Dicke) basis.
///
/// For truncated oscillator states `truncation_loss` holds the probability
/// mass that fell above the cutoff, so `trace = 1 - truncation_loss`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState<T> {
    matrix: CMatrix<T>,
    kind: StateKind<T>,
    truncation_loss: T,
}

impl<T: Real> QuantumState<T> {
    /// Validating constructor.
    pub fn new(matrix: CMatrix<T>, kind: StateKind<T>, truncation_loss: T) -> Result<Self> {
        let s = Self { matrix, kind, truncation_loss };
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn from_parts(matrix: CMatrix<T>, kind: StateKind<T>, truncation_loss: T) -> Self {
        Self { matrix, kind, truncation_loss }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn kind(&self) -> StateKind<T> {
        self.kind
    }

    pub fn truncation_loss(&self) -> T {
        self.truncation_loss
    }

    pub fn is_oscillator(&self) -> bool {
        matches!(self.kind, StateKind::TruncatedOscillator { .. })
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    /// trace(ρ²), using hermiticity: Σ |ρ_ij|².
    pub fn purity(&self) -> T {
        self.matrix.as_slice().iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// Same matrix reinterpreted as a truncated oscillator state.
    pub fn into_oscillator(self) -> Self {
        let cutoff = self.dim() - 1;
        let declared_mean = mean_number(&self.matrix);
        Self {
            kind: StateKind::TruncatedOscillator { cutoff, declared_mean },
            ..self
        }
    }

    /// U ρ U† with U = diag(e^{imδ}); shifts the phase distribution by δ.
    pub fn rotate_phase(&self, delta: T) -> Self {
        let m = CMatrix::from_fn(self.dim(), |i, j| {
            let k = T::from_usize_lossy(i) - T::from_usize_lossy(j);
            self.matrix[(i, j)] * Complex::from_polar(T::one(), k * delta)
        });
        Self { matrix: m, ..self.clone() }
    }

    /// Checks hermiticity, trace, positivity and kind consistency.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if n == 0 {
            return Err(Error::InvalidState("empty matrix".into()));
        }
        if self.matrix.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let loss = self.truncation_loss;
        if !(loss >= T::zero()) || loss > T::one() {
            return Err(Error::InvalidState(format!("truncation loss {loss} outside [0, 1]")));
        }
        match self.kind {
            StateKind::Atomic { d } => {
                if d != n {
                    return Err(Error::DimensionMismatch { expected: d, found: n });
                }
                if loss != T::zero() {
                    return Err(Error::InvalidState("atomic state with truncation loss".into()));
                }
            }
            StateKind::TruncatedOscillator { cutoff, .. } => {
                if cutoff + 1 != n {
                    return Err(Error::DimensionMismatch { expected: cutoff + 1, found: n });
                }
            }
        }
        let herm = self.matrix.hermitian_defect();
        if herm > T::tol(1e-12) {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = self.trace();
        let tol = T::tol(1e-12);
        if tr < T::one() - loss - tol || tr > T::one() + tol {
            return Err(Error::InvalidState(format!(
                "trace {tr} outside [1 - {loss} - tol, 1 + tol]"
            )));
        }
        if !self.matrix.is_psd_within(T::tol(1e-10)) {
            return Err(Error::InvalidState("eigenvalue below -1e-10".into()));
        }
        Ok(())
    }
}

fn mean_number<T: Real>(m: &CMatrix<T>) -> T {
    (0..m.dim()).fold(T::zero(), |acc, i| acc + T::from_usize_lossy(i) * m[(i, i)].re)
}

fn pure_state<T: Real>(amplitudes: &[Complex<T>], kind: StateKind<T>, loss: T) -> QuantumState<T> {
    QuantumState::from_parts(CMatrix::outer(amplitudes), kind, loss)
}

/// Number state |m⟩⟨m| in a Fock space of dimension `dim`.
pub fn make_fock<T: Real>(m: usize, dim: usize) -> Result<QuantumState<T>> {
    if m >= dim {
        return Err(Error::IndexOutOfRange { index: m, dim });
    }
    let mut v = vec![Complex::zero(); dim];
    v[m] = Complex::new(T::one(), T::zero());
    let kind = StateKind::TruncatedOscillator {
        cutoff: dim - 1,
        declared_mean: T::from_usize_lossy(m),
    };
    Ok(pure_state(&v, kind, T::zero()))
}

/// How the Fock basis is truncated for a Glauber coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutoffPolicy<T> {
    /// Smallest cutoff whose discarded Poisson tail is at most `tail_tol`.
    Auto { tail_tol: T },
    Fixed(usize),
}

impl<T: Real> Default for CutoffPolicy<T> {
    fn default() -> Self {
        CutoffPolicy::Auto { tail_tol: T::lit(1e-12) }
    }
}

/// Hard ceiling on the automatic cutoff: ⌈|α|² + 12√(|α|²+1) + 20⌉.
pub fn default_cutoff_ceiling<T: Real>(mean: T) -> usize {
    let c = mean + T::lit(12.0) * (mean + T::one()).sqrt() + T::lit(20.0);
    c.ceil().to_usize().expect("cutoff ceiling fits in usize")
}

/// ln of the Poisson pmf with mean `mean` at `m`.
fn poisson_ln_pmf<T: Real>(mean: T, m: usize) -> T {
    if mean.is_zero() {
        return if m == 0 { T::zero() } else { T::neg_infinity() };
    }
    -mean + T::from_usize_lossy(m) * mean.ln() - ln_factorial::<T>(m)
}

/// tails[n] = Σ_{m > n} pmf(m) for n in 0..=upto, summed from the far tail inward.
fn poisson_tails<T: Real>(mean: T, upto: usize) -> Vec<T> {
    let far = upto.max(default_cutoff_ceiling(mean)) + 200;
    let mut tails = vec![T::zero(); upto + 1];
    let mut acc = T::zero();
    for m in (1..=far).rev() {
        acc += poisson_ln_pmf(mean, m).exp();
        if m - 1 <= upto {
            tails[m - 1] = acc;
        }
    }
    tails
}

/// Glauber coherent state |α⟩ truncated in the Fock basis.
pub fn make_glauber_coherent<T: Real>(
    alpha: Complex<T>,
    policy: CutoffPolicy<T>,
) -> Result<QuantumState<T>> {
    let mean = alpha.norm_sqr();
    let ceiling = default_cutoff_ceiling(mean);
    let (cutoff, loss) = match policy {
        CutoffPolicy::Fixed(n) => {
            if n < 1 {
                return Err(Error::InvalidParameter("fixed cutoff must be >= 1".into()));
            }
            (n, poisson_tails(mean, n)[n])
        }
        CutoffPolicy::Auto { tail_tol } => {
            if !(tail_tol > T::zero() && tail_tol <= T::lit(1e-3)) {
                return Err(Error::InvalidParameter(format!(
                    "tail tolerance {tail_tol} outside (0, 1e-3]"
                )));
            }
            let tails = poisson_tails(mean, ceiling);
            match tails.iter().position(|&t| t <= tail_tol) {
                Some(n) => (n, tails[n]),
                None => {
                    log::warn!(
                        "cutoff ceiling {ceiling} reached for |alpha|^2 = {mean}; tail {}",
                        tails[ceiling]
                    );
                    (ceiling, tails[ceiling])
                }
            }
        }
    };
    let phase = alpha.arg();
    let amps: Vec<Complex<T>> = (0..=cutoff)
        .map(|m| {
            let r = (poisson_ln_pmf(mean, m) * T::lit(0.5)).exp();
            Complex::from_polar(r, T::from_usize_lossy(m) * phase)
        })
        .collect();
    let kind = StateKind::TruncatedOscillator { cutoff, declared_mean: mean };
    Ok(pure_state(&amps, kind, loss))
}

/// SU(2) coherent-state amplitudes
/// c_k = √C(d−1,k) cos^{d−1−k}(α'/2) sin^k(α'/2) e^{ikβ'}.
pub fn atomic_coherent_amplitudes<T: Real>(alpha_p: T, beta_p: T, d: usize) -> Vec<Complex<T>> {
    let half = T::lit(0.5);
    let (s, c) = (alpha_p * half).sin_cos();
    (0..d)
        .map(|k| {
            let binom = (ln_binomial::<T>(d - 1, k) * half).exp();
            let r = binom * c.powi((d - 1 - k) as i32) * s.powi(k as i32);
            Complex::from_polar(r, T::from_usize_lossy(k) * beta_p)
        })
        .collect()
}

/// Atomic coherent state |α', β'⟩ of a d-level system.
pub fn make_atomic_coherent<T: Real>(alpha_p: T, beta_p: T, d: usize) -> Result<QuantumState<T>> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("atomic dimension {d} < 2")));
    }
    let slack = T::tol(1e-12);
    if !(alpha_p >= -slack && alpha_p <= T::PI() + slack) {
        return Err(Error::InvalidParameter(format!("alpha' = {alpha_p} outside [0, pi]")));
    }
    if !(beta_p >= T::zero() && beta_p < T::two_pi()) {
        return Err(Error::InvalidParameter(format!("beta' = {beta_p} outside [0, 2pi)")));
    }
    let amps = atomic_coherent_amplitudes(alpha_p, beta_p, d);
    Ok(pure_state(&amps, StateKind::Atomic { d }, T::zero()))
}

/// Equatorial qubit (|0⟩ + e^{iφ0}|1⟩)/√2.
pub fn make_equatorial<T: Real>(phi0: T) -> QuantumState<T> {
    let beta = phi0 % T::two_pi();
    let beta = if beta < T::zero() { beta + T::two_pi() } else { beta };
    let amps = atomic_coherent_amplitudes(T::FRAC_PI_2(), beta, 2);
    pure_state(&amps, StateKind::Atomic { d: 2 }, T::zero())
}

/// Haar-random unit vector in C^d, deterministic in `seed`.
pub fn random_pure_amplitudes<T: Real>(seed: u64, d: usize) -> Vec<Complex<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_vector(&mut rng, d)
}

pub(crate) fn haar_vector<T: Real, R: rand::Rng>(rng: &mut R, d: usize) -> Vec<Complex<T>> {
    let mut v: Vec<Complex<T>> = (0..d)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(T::lit(re), T::lit(im))
        })
        .collect();
    let norm = v.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
    for z in &mut v {
        *z = z.unscale(norm);
    }
    v
}

/// Haar-random pure state of an atomic system of dimension `d`.
pub fn make_random_pure<T: Real>(seed: u64, d: usize) -> Result<QuantumState<T>> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension {d} < 2")));
    }
    Ok(pure_state(&random_pure_amplitudes(seed, d), StateKind::Atomic { d }, T::zero()))
}

/// Haar-random pure oscillator state supported on the first `dim` Fock states.
pub fn make_random_truncated<T: Real>(seed: u64, dim: usize) -> Result<QuantumState<T>> {
    Ok(make_random_pure(seed, dim)?.into_oscillator())
}

/// Pure state from explicit amplitudes (normalised here).
pub fn make_pure<T: Real>(amplitudes: &[Complex<T>], kind: StateKind<T>) -> Result<QuantumState<T>> {
    let norm = amplitudes.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
    if !(norm > T::zero()) {
        return Err(Error::InvalidState("zero amplitude vector".into()));
    }
    let v: Vec<_> = amplitudes.iter().map(|z| z.unscale(norm)).collect();
    QuantumState::new(CMatrix::outer(&v), kind, T::zero())
}

/// Convex combination Σ w_i ρ_i.
pub fn mix<T: Real>(states: &[QuantumState<T>], weights: &[T]) -> Result<QuantumState<T>> {
    let first = states
        .first()
        .ok_or_else(|| Error::InvalidWeights("no states to mix".into()))?;
    if states.len() != weights.len() {
        return Err(Error::InvalidWeights(format!(
            "{} states but {} weights",
            states.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= T::zero())) {
        return Err(Error::InvalidWeights(format!("negative weight {w}")));
    }
    let total = weights.iter().fold(T::zero(), |a, &w| a + w);
    if (total - T::one()).abs() > T::tol(1e-12) {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    let n = first.dim();
    let mut matrix = CMatrix::zeros(n);
    let mut loss = T::zero();
    let mut mean = T::zero();
    let mut atomic = true;
    for (s, &w) in states.iter().zip(weights) {
        if s.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.dim() });
        }
        matrix.add_assign_scaled(&s.matrix, w);
        loss += w * s.truncation_loss;
        match s.kind {
            StateKind::Atomic { .. } => mean += w * mean_number(&s.matrix),
            StateKind::TruncatedOscillator { declared_mean, .. } => {
                atomic = false;
                mean += w * declared_mean;
            }
        }
    }
    let kind = if atomic {
        StateKind::Atomic { d: n }
    } else {
        StateKind::TruncatedOscillator { cutoff: n - 1, declared_mean: mean }
    };
    Ok(QuantumState::from_parts(matrix, kind, if atomic { T::zero() } else { loss }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExplicitKind {
    Atomic,
    Oscillator,
}

/// JSON document `{"dim", "re", "im", "kind"}` describing a density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplicitMatrix {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    pub kind: ExplicitKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_loss: Option<f64>,
}

impl ExplicitMatrix {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_state<T: Real>(&self) -> Result<QuantumState<T>> {
        let n = self.dim;
        let rows_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !rows_ok(&self.re) || !rows_ok(&self.im) {
            return Err(Error::InvalidState(format!("re/im must both be {n}x{n}")));
        }
        let matrix =
            CMatrix::from_fn(n, |i, j| Complex::new(T::lit(self.re[i][j]), T::lit(self.im[i][j])));
        let (kind, loss) = match self.kind {
            ExplicitKind::Atomic => (StateKind::Atomic { d: n }, T::zero()),
            ExplicitKind::Oscillator => (
                StateKind::TruncatedOscillator {
                    cutoff: n.saturating_sub(1),
                    declared_mean: mean_number(&matrix),
                },
                T::lit(self.truncation_loss.unwrap_or(0.0)),
            ),
        };
        QuantumState::new(matrix, kind, loss)
    }

    pub fn from_state<T: Real>(state: &QuantumState<T>) -> Self {
        let n = state.dim();
        let m = state.matrix();
        let grab = |f: &dyn Fn(Complex<T>) -> T| -> Vec<Vec<f64>> {
            (0..n).map(|i| (0..n).map(|j| f(m[(i, j)]).as_f64()).collect()).collect()
        };
        let (kind, loss) = match state.kind() {
            StateKind::Atomic { .. } => (ExplicitKind::Atomic, None),
            StateKind::TruncatedOscillator { .. } => {
                (ExplicitKind::Oscillator, Some(state.truncation_loss().as_f64()))
            }
        };
        Self { dim: n, re: grab(&|z| z.re), im: grab(&|z| z.im), kind, truncation_loss: loss }
    }
}

/// Declarative description of a state, as accepted on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpec {
    Fock {
        m: usize,
        dim: usize,
    },
    GlauberCoherent {
        re: f64,
        #[serde(default)]
        im: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cutoff: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail_tol: Option<f64>,
    },
    AtomicCoherent {
        alpha_p: f64,
        beta_p: f64,
        d: usize,
    },
    Equatorial {
        phi0: f64,
    },
    RandomPure {
        seed: u64,
        d: usize,
    },
    ExplicitMatrix(ExplicitMatrix),
}

impl StateSpec {
    pub fn build<T: Real>(&self) -> Result<QuantumState<T>> {
        match self {
            StateSpec::Fock { m, dim } => make_fock(*m, *dim),
            StateSpec::GlauberCoherent { re, im, cutoff, tail_tol } => {
                let policy = match cutoff {
                    Some(n) => CutoffPolicy::Fixed(*n),
                    None => CutoffPolicy::Auto { tail_tol: T::lit(tail_tol.unwrap_or(1e-12)) },
                };
                make_glauber_coherent(Complex::new(T::lit(*re), T::lit(*im)), policy)
            }
            StateSpec::AtomicCoherent { alpha_p, beta_p, d } => {
                make_atomic_coherent(T::lit(*alpha_p), T::lit(*beta_p), *d)
            }
            StateSpec::Equatorial { phi0 } => Ok(make_equatorial(T::lit(*phi0))),
            StateSpec::RandomPure { seed, d } => make_random_pure(*seed, *d),
            StateSpec::ExplicitMatrix(m) => m.to_state(),
        }
    }
}
