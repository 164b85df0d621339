//! Acceptance suite: one test per certification guarantee, each printing a
//! PASS/FAIL line (visible with `cargo test -- --nocapture`).
//!
//! The shared population is 200 seeded sectorial systems with dimensions
//! cycling through 1..=30 and sector caps cycling through
//! {0, 0.25, 0.5, 1}; criterion 9 checks the two quoted weaker inclusion
//! regions as printed and is expected to fail on the quotient-form region,
//! which is falsified by overdamped systems (see the sharp product-form
//! diagnostic it also reports).

use std::process::Command;
use std::time::Instant;

use nalgebra::Complex;

use decay_cert_core::constants::{compute_constants, ConstantSet};
use decay_cert_core::hilbert_scale::SystemPair;
use decay_cert_core::linalg::{hermitian_eigenvalues, spectral_norm, C64};
use decay_cert_core::models::{random_sectorial, scalar, scalar_roots};
use decay_cert_core::rate_bounds::{
    certify, damping_bound_region_margin, m_theta_b, min_m_over_theta, remark_regions_contain,
    theta_star,
};
use decay_cert_core::sampling::SamplingRng;
use decay_cert_core::semigroup::{
    decay_curve, default_time_grid, form_margins_batch, solve_cauchy, theta_metric,
    ENVELOPE_SLACK,
};
use decay_cert_core::spectrum::{
    build_linearization, build_qt, eigenvalues, pencil_residual, pencil_scale,
};

const POPULATION: u64 = 200;

fn acceptance_system(seed: u64) -> SystemPair {
    let n = ((seed - 1) % 30 + 1) as usize;
    let nu_cap = [0.0, 0.25, 0.5, 1.0][(seed % 4) as usize];
    random_sectorial(n, seed, 0.1, nu_cap).expect("generator produces valid systems")
}

fn random_constants(rng: &mut SamplingRng) -> ConstantSet {
    let log_uniform = |rng: &mut SamplingRng| 10f64.powf(rng.normal());
    let a0 = log_uniform(rng);
    let delta = log_uniform(rng);
    let beta = a0 * delta * (1.0 + rng.normal().abs());
    let alpha = a0 * beta * (1.0 + rng.normal().abs());
    let nu = rng.normal().abs();
    let norm_d = delta * (1.0 + rng.normal().abs());
    ConstantSet::from_values(a0, alpha, beta, delta, nu, norm_d)
}

#[test]
fn c01_constants_chain() {
    let started = Instant::now();
    let mut worst = f64::INFINITY;
    for seed in 1..=POPULATION {
        let sys = acceptance_system(seed);
        let k = compute_constants(&sys);
        assert!(k.delta > 0.0, "seed {seed}: delta = {}", k.delta);
        let upper = (k.alpha - k.a0 * k.beta) / (k.a0 * k.beta);
        let lower = (k.a0 * k.beta - k.a0 * k.a0 * k.delta) / (k.a0 * k.a0 * k.delta);
        worst = worst.min(upper).min(lower);
        assert!(upper >= -1e-10, "seed {seed}: alpha >= a0 beta violated by {upper:e}");
        assert!(lower >= -1e-10, "seed {seed}: a0 beta >= a0^2 delta violated by {lower:e}");
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "constants chain took {elapsed:.1} s");
    println!(
        "criterion 01 (constants chain, 200 systems): PASS — worst relative slack {worst:.3e}, {elapsed:.2} s"
    );
}

#[test]
fn c02_proposition1_forms() {
    let mut worst_re = f64::INFINITY;
    let mut worst_im = f64::INFINITY;
    for seed in 1..=20u64 {
        let sys = acceptance_system(seed);
        let consts = compute_constants(&sys);
        let ts = theta_star(&consts).unwrap();
        for theta in [ts / 4.0, ts, 4.0 * ts] {
            let bs = [0.0, theta.sqrt() / 2.0, theta.sqrt()];
            let checks =
                form_margins_batch(&sys, &consts, theta, &bs, 10_000, 1000 + seed).unwrap();
            for check in checks {
                worst_re = worst_re.min(check.worst_re_margin);
                worst_im = worst_im.min(check.worst_im_margin);
                assert!(
                    check.passes(1e-9),
                    "seed {seed}, theta {theta}, b {}: margins ({:e}, {:e})",
                    check.b,
                    check.worst_re_margin,
                    check.worst_im_margin
                );
            }
        }
    }
    println!(
        "criterion 02 (form inequalities, 20 x 10^4 vectors): PASS — worst margins ({worst_re:.3e}, {worst_im:.3e})"
    );
}

#[test]
fn c03_spectral_inclusion() {
    let mut worst = f64::INFINITY;
    for seed in 1..=POPULATION {
        let sys = acceptance_system(seed);
        let consts = compute_constants(&sys);
        let ts = theta_star(&consts).unwrap();
        let omega = decay_cert_core::rate_bounds::omega_theta(ts, &consts).unwrap();
        let cert = certify(&consts, &[0.0, omega]).unwrap();
        let eigs = eigenvalues(&build_linearization(&sys)).unwrap();
        for entry in &cert.mb {
            for &l in &eigs {
                let slack = 1e-8 * (1.0 + l.norm());
                let margin_re = -cert.omega - l.re;
                let margin_im = entry.m * l.re.abs() + entry.b - l.im.abs();
                worst = worst.min(margin_re / (1.0 + l.norm())).min(margin_im / (1.0 + l.norm()));
                assert!(
                    margin_re >= -slack && margin_im >= -slack,
                    "seed {seed}, b = {}: eigenvalue {l} outside (margins {margin_re:e}, {margin_im:e})",
                    entry.b
                );
            }
        }
    }
    println!(
        "criterion 03 (spectral inclusion, 200 systems, b in {{0, omega}}): PASS — worst normalized margin {worst:.3e}"
    );
}

#[test]
fn c04_pencil_equivalence() {
    let mut worst_ratio = 0.0f64;
    for seed in 1..=POPULATION {
        let sys = acceptance_system(seed);
        let norm_a = spectral_norm(sys.a());
        let norm_d = spectral_norm(sys.d());
        let eigs = eigenvalues(&build_linearization(&sys)).unwrap();
        for &l in &eigs {
            let resid = pencil_residual(&sys, l);
            let bound = 1e-8 * pencil_scale(l, norm_d, norm_a);
            worst_ratio = worst_ratio.max(resid / bound);
            assert!(
                resid <= bound,
                "seed {seed}: sigma_min(L({l})) = {resid:e} exceeds {bound:e}"
            );
        }
    }
    println!(
        "criterion 04 (pencil residuals, 200 systems): PASS — worst residual at {:.3e} of the bound",
        worst_ratio
    );
}

#[test]
fn c05_linearization_identity() {
    let mut worst = 0.0f64;
    for seed in 1..=20u64 {
        let sys = acceptance_system(seed);
        for theta in [0.1, 1.0, 10.0] {
            let qt = build_qt(&sys, theta);
            let rel = qt.identity_residual / qt.t.norm();
            worst = worst.max(rel);
            assert!(
                rel <= 1e-10,
                "seed {seed}, theta {theta}: ||T - Q T_block|| = {rel:e} ||T||"
            );
            let evals = hermitian_eigenvalues(&qt.q);
            assert!(
                qt.hermiticity_residual <= 1e-10 * qt.q.norm() && evals[0] > 0.0,
                "seed {seed}, theta {theta}: Q not Hermitian positive definite"
            );
        }
    }
    println!(
        "criterion 05 (lambda Q - T identity, 20 systems x 3 thetas): PASS — worst relative residual {worst:.3e}"
    );
}

#[test]
fn c06_corollary_consistency() {
    let mut rng = SamplingRng::seed_from(606);
    let mut worst_min = 0.0f64;
    let mut worst_formula = 0.0f64;
    for _ in 0..50 {
        let consts = random_constants(&mut rng);
        let entry = min_m_over_theta(0.0, &consts).unwrap();
        let oracle = consts.nu.unwrap() + 2.0 / (consts.delta * consts.beta).sqrt();
        let rel = ((entry.m - oracle) / oracle).abs();
        worst_min = worst_min.max(rel);
        assert!(rel <= 1e-9, "minimized M_0 off by {rel:e}");

        let theta = 10f64.powf(rng.normal());
        let lhs = m_theta_b(theta, 0.0, &consts).unwrap();
        let rhs = consts.nu.unwrap() + 1.0 / (consts.delta * theta.sqrt()) + theta.sqrt() / consts.beta;
        let rel = ((lhs - rhs) / rhs).abs();
        worst_formula = worst_formula.max(rel);
        assert!(rel <= 1e-12, "M(theta, 0) formula off by {rel:e}");
    }
    println!(
        "criterion 06 (b = 0 corollaries, 50 constant sets): PASS — worst rel errors {worst_min:.3e} / {worst_formula:.3e}"
    );
}

#[test]
fn c07_omega_optimality_and_misprint_audit() {
    let mut worst = 0.0f64;
    for seed in 1..=50u64 {
        let sys = acceptance_system(seed);
        let consts = compute_constants(&sys);
        let cert = certify(&consts, &[]).unwrap();
        let grid_max = cert
            .grid
            .iter()
            .map(|p| p.omega_theta)
            .fold(f64::NEG_INFINITY, f64::max);
        let rel = ((grid_max - cert.omega) / cert.omega).abs();
        worst = worst.max(rel);
        assert!(rel <= 1e-9, "seed {seed}: grid max differs from omega by {rel:e}");
        assert!(grid_max <= cert.omega * (1.0 + 1e-12), "omega is not the grid maximum");
    }

    // scalar family a = 16, d = 64 has delta = 4, separating the two
    // readings of the closed form
    let sys = scalar(16.0, 64.0, 0.0).unwrap();
    let consts = compute_constants(&sys);
    assert_eq!(consts.delta, 4.0);
    let cert = certify(&consts, &[]).unwrap();
    let rel2 = ((cert.omega_paper_delta2 - cert.omega) / cert.omega).abs();
    let rel4 = ((cert.omega_paper_delta4 - cert.omega) / cert.omega).abs();
    assert!(rel2 <= 1e-9, "delta^2 reading differs from omega by {rel2:e}");
    assert!(rel4 > 1e-3, "delta^4 reading unexpectedly matches: {rel4:e}");
    println!(
        "criterion 07 (omega optimality + closed-form audit): PASS — worst grid deviation {worst:.3e}; delta^2 reading matches ({rel2:.1e}), delta^4 reading differs ({rel4:.3})"
    );
}

#[test]
fn c08_semigroup_envelope() {
    let started = Instant::now();
    let mut worst_theta_margin = f64::INFINITY;
    let mut worst_energy_margin = f64::INFINITY;
    for seed in 1..=20u64 {
        let sys = acceptance_system(seed);
        let consts = compute_constants(&sys);
        let cert = certify(&consts, &[]).unwrap();
        let times = default_time_grid(cert.omega);
        assert_eq!(times.len(), 64);
        // decay_curve errors out if the theta-metric envelope is violated
        let curve = decay_curve(&sys, &consts, cert.theta_star, &times)
            .unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        for i in 0..times.len() {
            worst_theta_margin = worst_theta_margin
                .min((1.0 + ENVELOPE_SLACK) * curve.envelope[i] - curve.theta_norm[i]);
            let energy_margin = curve.kappa * curve.envelope[i] - curve.energy_norm[i];
            worst_energy_margin = worst_energy_margin.min(energy_margin);
            assert!(
                energy_margin >= 0.0,
                "seed {seed}, t = {}: energy norm {} above kappa envelope {}",
                times[i],
                curve.energy_norm[i],
                curve.kappa * curve.envelope[i]
            );
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "semigroup envelope took {elapsed:.1} s");
    println!(
        "criterion 08 (semigroup envelopes, 20 systems x 64 times): PASS — worst margins {worst_theta_margin:.3e} (theta) / {worst_energy_margin:.3e} (energy), {elapsed:.2} s"
    );
}

#[test]
fn c09_remark_regions_cross_check() {
    let mut first_violations = 0usize;
    let mut second_violations = 0usize;
    let mut sharp_violations = 0usize;
    let mut eigen_count = 0usize;
    let mut example = None;
    for seed in 1..=POPULATION {
        let sys = acceptance_system(seed);
        let consts = compute_constants(&sys);
        let eigs = eigenvalues(&build_linearization(&sys)).unwrap();
        for &l in &eigs {
            eigen_count += 1;
            let slack = 1e-8 * (1.0 + l.norm());
            let check = remark_regions_contain(l, &consts).unwrap();
            if check.first_margin_re.min(check.first_margin_im) < -slack {
                first_violations += 1;
            }
            if check.second_margin < -slack {
                second_violations += 1;
                example.get_or_insert((seed, l, check.second_margin, consts.delta, consts.a0));
            }
            if damping_bound_region_margin(l, &consts).unwrap() < -slack {
                sharp_violations += 1;
            }
        }
    }
    println!(
        "criterion 09 (quoted weaker regions, 200 systems): region 1 violations {first_violations}/{eigen_count}; \
         quotient-form region 2 violations {second_violations}/{eigen_count}; \
         sharp product-form region violations {sharp_violations}/{eigen_count}"
    );
    assert_eq!(first_violations, 0, "region 1 must contain the whole spectrum");
    assert_eq!(sharp_violations, 0, "sharp damping-bound region must contain the whole spectrum");
    assert_eq!(
        second_violations, 0,
        "quotient-form region 2 excludes {second_violations} of {eigen_count} eigenvalues \
         (first example: seed {}, lambda = {}, margin {:.3e}, delta = {:.3}, a0 = {:.3}); \
         the region as printed is not implied by the damping bound — the sharp form \
         |Re l| (1/a0 + 1/|l|^2) >= delta holds with zero violations — so this check \
         fails as specified; see the decisions ledger",
        example.map(|e| e.0).unwrap_or_default(),
        example.map(|e| e.1).unwrap_or_default(),
        example.map(|e| e.2).unwrap_or_default(),
        example.map(|e| e.3).unwrap_or_default(),
        example.map(|e| e.4).unwrap_or_default(),
    );
}

#[test]
fn c10_scalar_closed_forms() {
    for (a, d) in [(4.0, 4.0), (1.0, 2.0), (1.0, 1.0)] {
        let sys = scalar(a, d, 0.0).unwrap();
        let eigs = eigenvalues(&build_linearization(&sys)).unwrap();
        for root in scalar_roots(a, d, 0.0) {
            let dist = eigs.iter().map(|&l| (l - root).norm()).fold(f64::INFINITY, f64::min);
            assert!(
                dist <= 1e-12,
                "(a, d) = ({a}, {d}): root {root} missed by {dist:e}"
            );
        }
    }

    // critically damped trajectory: u(t) = (1 + 2t) e^{-2t}
    let sys = scalar(4.0, 4.0, 0.0).unwrap();
    let consts = compute_constants(&sys);
    let times: Vec<f64> = (0..=100).map(|k| 0.05 * k as f64).collect();
    let u0 = nalgebra::DVector::from_element(1, Complex::new(1.0, 0.0));
    let u1 = nalgebra::DVector::from_element(1, Complex::new(0.0, 0.0));
    let traj = solve_cauchy(&sys, &consts, &u0, &u1, &times).unwrap();
    let mut worst = 0.0f64;
    for (k, &t) in times.iter().enumerate() {
        let expected = (1.0 + 2.0 * t) * (-2.0 * t).exp();
        let err = (traj.positions[k][0] - Complex::new(expected, 0.0)).norm();
        worst = worst.max(err);
        assert!(err <= 1e-9, "t = {t}: |u - closed form| = {err:e}");
    }
    println!(
        "criterion 10 (scalar closed forms): PASS — roots to 1e-12, trajectory error <= {worst:.3e}"
    );
}

#[test]
fn c11_cli_determinism() {
    let args = [
        "certify",
        "--model",
        "random_sectorial:8,42,0.1,0.5",
        "--no-timestamp",
        "--seed",
        "3",
    ];
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_decay-cert"))
            .args(args)
            .output()
            .expect("binary runs")
    };
    let first = run();
    let second = run();
    assert_eq!(first.status.code(), Some(0), "certify failed: {:?}", first);
    assert_eq!(
        first.stdout, second.stdout,
        "reports differ between identical runs"
    );
    println!(
        "criterion 11 (CLI determinism): PASS — byte-identical {}-byte reports",
        first.stdout.len()
    );
}

/// The theta metric at theta = 0 must coincide with the energy metric; this
/// anchors the envelope checks above.
#[test]
fn theta_metric_zero_anchor() {
    let sys = acceptance_system(12);
    let metric = theta_metric(&sys, 0.0).unwrap();
    assert_eq!(metric.gram(), &sys.energy_gram());
}
