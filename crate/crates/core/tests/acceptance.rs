//! Exit criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p numphase --test acceptance -- --nocapture --test-threads=1`
//! to see them in order.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::{Duration, Instant};

use numphase::audit::{
    audit_entropy_sum, audit_mixed_qubits, audit_oscillator_excess, audit_theorem1,
    oscillator_audit_states,
};
use numphase::distributions::{phase_distribution, su2_kernel, PhaseKernel};
use numphase::entropy::{differential_phase_entropy, knowledge_discrete, knowledge_phase, shannon_entropy};
use numphase::mu_search::{mu_trend, search_mu};
use numphase::state::{make_atomic_coherent, make_glauber_coherent, make_random_pure, CutoffPolicy};
use numphase::sweep::{
    sweep_atomic, sweep_oscillator, write_oscillator_csv, SweepConfig, MONOTONE_FROM_ALPHA,
};
use numphase::{bialynicki_sum, excess_number_phase, Complex64, State, DEFAULT_GRID_K};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const K: usize = DEFAULT_GRID_K;

fn report(id: u32, name: &str, ok: bool, detail: String) {
    println!("[{}] {id:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

#[test]
fn c01_equatorial_anchor() {
    let t = Instant::now();
    let s: State = make_atomic_coherent(FRAC_PI_2, 0.0, 2).unwrap();
    let p = phase_distribution(&s, &su2_kernel(2).unwrap(), K).unwrap();
    let r = knowledge_phase(&p).bits;
    let elapsed = t.elapsed();
    let ok = (r - 0.245).abs() <= 0.005 && elapsed < Duration::from_secs(1);
    report(1, "equatorial anchor R = 0.245 ± 0.005", ok, format!("R = {r:.6} bits in {elapsed:?}"));
}

fn mu_case(d: usize, target: f64) -> (bool, String) {
    let t = Instant::now();
    let rep = search_mu(d, &su2_kernel::<f64>(d).unwrap(), 100_000, 7).unwrap();
    let elapsed = t.elapsed();
    let ok = (rep.mu_estimate - target).abs() <= 0.05 && elapsed < Duration::from_secs(300);
    (
        ok,
        format!(
            "d={d}: mu = {:.5} (target {target} ± 0.05), converged = {}, {elapsed:?}",
            rep.mu_estimate, rep.converged
        ),
    )
}

#[test]
fn c02_mu_reproduction() {
    let (ok2, m2) = mu_case(2, 4.085);
    let (ok4, m4) = mu_case(4, 1.973);
    report(2, "mu reproduction", ok2 && ok4, format!("{m2}; {m4}"));
}

#[test]
fn c03_theorem1_audit() {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in 2..=5 {
        let a = audit_theorem1::<f64>(d, 10_000, 0).unwrap();
        // passed also requires the entropy-sum form to agree on every sample
        ok &= a.passed && a.min_margin >= -1e-9;
        parts.push(format!("d={d} min X = {:.3e}", a.min_margin));
    }
    report(3, "finite-dimensional excess audit over MUB pairs", ok, parts.join(", "));
}

#[test]
fn c04_entropy_sum_audit() {
    let vac: State = make_glauber_coherent(Complex64::new(0.0, 0.0), CutoffPolicy::default()).unwrap();
    let sum_vac = bialynicki_sum(&vac, K).unwrap();
    let vac_ok = (sum_vac - TAU.log2()).abs() <= 1e-9;
    let a = audit_entropy_sum::<f64>(1_000, 0, 1e-12, K).unwrap();
    let ok = vac_ok && a.passed && a.min_margin >= -1e-6 && a.samples == 1_061;
    report(
        4,
        "entropy-sum audit",
        ok,
        format!(
            "vacuum sum - log2(2pi) = {:.2e}; min margin {:.3e} over {} states",
            sum_vac - TAU.log2(),
            a.min_margin,
            a.samples
        ),
    );
}

#[test]
fn c05_oscillator_excess_audit() {
    let a = audit_oscillator_excess::<f64>(1.0, 1_000, 0, 1e-12, K).unwrap();
    let vac: State = make_glauber_coherent(Complex64::new(0.0, 0.0), CutoffPolicy::default()).unwrap();
    let x0 = excess_number_phase(&vac, &PhaseKernel::canonical(vac.dim()), 1.0, K).unwrap().x;
    let ok = a.passed && a.min_margin >= -1e-6 && x0.abs() <= 1e-9;
    report(
        5,
        "oscillator entropy-excess audit",
        ok,
        format!("min X = {:.3e} over {} states; X(alpha=0) = {x0:.1e}", a.min_margin, a.samples),
    );
}

#[test]
fn c06_oscillator_sweep() {
    let t = Instant::now();
    let cfg = SweepConfig::oscillator_default();
    let sweep = sweep_oscillator::<f64>(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("oscillator.csv");
    let mut f = std::io::BufWriter::new(std::fs::File::create(&path).unwrap());
    write_oscillator_csv(&mut f, &sweep.rows).unwrap();
    drop(f);
    let elapsed = t.elapsed();
    let lines = std::fs::read_to_string(&path).unwrap().lines().count();
    let ok = sweep.h_increasing
        && sweep.r_increasing
        && sweep.rows.len() == 61
        && lines == 62
        && (sweep.rows[0].alpha, sweep.rows[60].alpha) == (0.0, 3.0)
        && elapsed < Duration::from_secs(30);
    report(
        6,
        "Figure 2 qualitative reproduction",
        ok,
        format!(
            "H increasing from alpha={MONOTONE_FROM_ALPHA}: {}, R increasing: {}, csv {lines} lines in {elapsed:?}",
            sweep.h_increasing, sweep.r_increasing
        ),
    );
}

#[test]
fn c07_atomic_sweep() {
    let cfg = SweepConfig { mu: 4.085, ..SweepConfig::atomic_default() };
    let rows = sweep_atomic::<f64>(&cfg).unwrap();
    let first = rows.first().unwrap();
    let last = rows.last().unwrap();
    let equator = rows.iter().find(|r| (r.alpha_p - FRAC_PI_2).abs() < 1e-9).unwrap();
    let min = rows.iter().map(|r| r.x_mu).fold(f64::INFINITY, f64::min);
    let ok = first.x_mu.abs() <= 2e-3
        && last.x_mu.abs() <= 2e-3
        && equator.x_mu.abs() <= 2e-3
        && min >= -1e-6
        && (last.alpha_p - PI).abs() < 1e-15;
    report(
        7,
        "Figure 1 qualitative reproduction",
        ok,
        format!(
            "X_mu at poles {:.1e}, {:.1e}; at equator {:.3e}; min {min:.3e}",
            first.x_mu, last.x_mu, equator.x_mu
        ),
    );
}

#[test]
fn c08_analytic_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_discrete = 0.0f64;
    for d in 2..=16 {
        for _ in 0..1_000 {
            let mut p: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
            let s: f64 = p.iter().sum();
            p.iter_mut().for_each(|x| *x /= s);
            let r = knowledge_discrete(&p, d).unwrap().bits;
            let h = shannon_entropy(&p[..]).bits;
            worst_discrete = worst_discrete.max((r - ((d as f64).log2() - h)).abs());
        }
    }

    // every phase distribution computed by the other criteria's state families
    let mut worst_phase = 0.0f64;
    let mut check = |s: &State, g: &PhaseKernel<f64>| {
        let p = phase_distribution(s, g, K).unwrap();
        let lhs = knowledge_phase(&p).bits;
        let rhs = TAU.log2() - differential_phase_entropy(&p).bits;
        worst_phase = worst_phase.max((lhs - rhs).abs());
    };
    for (_, s) in oscillator_audit_states::<f64>(200, 0, 1e-12).unwrap() {
        check(&s, &PhaseKernel::canonical(s.dim()));
    }
    for i in 0..=180 {
        let s = make_atomic_coherent(PI * i as f64 / 180.0, 0.0, 2).unwrap();
        check(&s, &su2_kernel(2).unwrap());
    }
    for d in [2, 3, 4, 6, 8] {
        let g = su2_kernel(d).unwrap();
        for seed in 0..100 {
            check(&make_random_pure(seed, d).unwrap(), &g);
        }
    }

    let mut worst_diag = 0.0f64;
    for d in 2..=64 {
        let g = su2_kernel::<f64>(d).unwrap();
        for m in 0..d {
            worst_diag = worst_diag.max((g.weight(m, m) - 1.0).abs());
        }
    }
    let ok = worst_discrete <= 1e-12 && worst_phase <= 1e-9 && worst_diag <= 1e-12;
    report(
        8,
        "analytic identities",
        ok,
        format!(
            "discrete {worst_discrete:.1e}, phase {worst_phase:.1e}, SU2 diagonal {worst_diag:.1e}"
        ),
    );
}

#[test]
fn c09_convexity_suite() {
    let a = audit_mixed_qubits::<f64>(4.035, 10_000, 9, K).unwrap();
    let concave = a.checks.iter().find(|c| c.name == "h_concavity").unwrap().failures;
    let convex = a.checks.iter().find(|c| c.name == "r_convexity").unwrap().failures;
    let ok = a.samples == 10_000 && concave == 0 && convex == 0 && a.min_margin >= -1e-6;
    report(
        9,
        "convexity suite and mixed-state closure at mu = 4.035",
        ok,
        format!(
            "concavity failures {concave}, convexity failures {convex}, min X_mu {:.3e}",
            a.min_margin
        ),
    );
}

#[test]
fn c10_mu_trend() {
    let trend = mu_trend::<f64>(&[2, 3, 4, 6, 8], 100_000, 7).unwrap();
    let mus: Vec<f64> = trend.entries.iter().map(|e| e.mu_estimate).collect();
    let last = *mus.last().unwrap();
    let anchors = mus[0] > mus[2] && (mus[0] - 4.085).abs() <= 0.05 && (mus[2] - 1.973).abs() <= 0.05;
    let ok = anchors && trend.monotone_decreasing && last > 1.0 && last < 2.1;
    let listing: Vec<String> =
        trend.entries.iter().map(|e| format!("d={}: {:.4}", e.d, e.mu_estimate)).collect();
    report(
        10,
        "mu trend (reported)",
        ok,
        format!("{} (monotone: {})", listing.join(", "), trend.monotone_decreasing),
    );
}
