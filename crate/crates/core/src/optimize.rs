//! Derivative-free simplex descent (Nelder-Mead).

use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions<T> {
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: T,
    pub max_evals: usize,
    /// Stop once every vertex lies within `xtol` (max-norm) of the best one...
    pub xtol: T,
    /// ...and the objective spread across the simplex is at most `ftol`.
    pub ftol: T,
}

impl<T: Real> Default for NelderMeadOptions<T> {
    fn default() -> Self {
        Self {
            initial_step: T::lit(0.1),
            max_evals: 10_000,
            xtol: T::lit(1e-10),
            ftol: T::lit(1e-14),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult<T> {
    pub x: Vec<T>,
    pub f: T,
    pub evals: usize,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimises `f` from `x0`. NaN objective values rank as +∞.
pub fn nelder_mead<T, F>(mut f: F, x0: &[T], opts: &NelderMeadOptions<T>) -> NelderMeadResult<T>
where
    T: Real,
    F: FnMut(&[T]) -> T,
{
    let n = x0.len();
    assert!(n >= 1, "nelder_mead needs at least one parameter");
    let mut evals = 0usize;
    let mut eval = |x: &[T], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
    let f0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let fx = eval(&x, &mut evals);
        simplex.push((x, fx));
    }

    let lerp = |from: &[T], to: &[T], t: T| -> Vec<T> {
        from.iter().zip(to).map(|(&a, &b)| a + t * (b - a)).collect()
    };

    let mut iterations = 0;
    let mut converged = false;
    while evals < opts.max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let (best_x, best_f) = (&simplex[0].0, simplex[0].1);
        let spread_x = simplex[1..].iter().fold(T::zero(), |acc, (x, _)| {
            x.iter().zip(best_x).fold(acc, |a, (&u, &v)| a.max((u - v).abs()))
        });
        let spread_f = (simplex[n].1 - best_f).abs();
        if spread_x <= opts.xtol && (spread_f <= opts.ftol || !spread_f.is_finite()) {
            converged = true;
            break;
        }
        iterations += 1;

        let inv_n = T::one() / T::from_usize_lossy(n);
        let mut centroid = vec![T::zero(); n];
        for (x, _) in &simplex[..n] {
            for (c, &v) in centroid.iter_mut().zip(x) {
                *c += v * inv_n;
            }
        }
        let worst = simplex[n].clone();
        let second_worst_f = simplex[n - 1].1;

        let xr = lerp(&centroid, &worst.0, -T::lit(REFLECT));
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = lerp(&centroid, &worst.0, -T::lit(EXPAND));
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < second_worst_f {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = lerp(&centroid, &xr, T::lit(CONTRACT));
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = lerp(&centroid, &worst.0, T::lit(CONTRACT));
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < fr.min(worst.1) {
            simplex[n] = (xc, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = lerp(&anchor, &vertex.0, T::lit(SHRINK));
            let fx = eval(&x, &mut evals);
            *vertex = (x, fx);
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let (x, f) = simplex.swap_remove(0);
    NelderMeadResult { x, f, evals, iterations, converged }
}
