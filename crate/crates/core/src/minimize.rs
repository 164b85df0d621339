//! One-dimensional minimization: coarse bracket scan followed by
//! golden-section refinement.

const INV_GOLD: f64 = 0.381_966_011_250_105_2; // 2 - phi

/// Minimize `f` over `[lo, hi]` (requires `lo < hi`).
///
/// A `coarse`-point uniform scan locates the best sample, golden-section
/// search then refines inside the bracketing pair of neighbours until the
/// interval width drops below `tol`. Returns `(x_min, f_min)`.
pub fn minimize_scan_golden(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    coarse: usize,
    tol: f64,
) -> (f64, f64) {
    assert!(lo < hi, "invalid interval [{lo}, {hi}]");
    let coarse = coarse.max(3);
    let step = (hi - lo) / (coarse - 1) as f64;
    let mut best_i = 0;
    let mut best_f = f64::INFINITY;
    let samples: Vec<f64> = (0..coarse).map(|i| lo + step * i as f64).collect();
    for (i, &x) in samples.iter().enumerate() {
        let fx = f(x);
        if fx < best_f {
            best_f = fx;
            best_i = i;
        }
    }
    let mut a = samples[best_i.saturating_sub(1)];
    let mut b = samples[(best_i + 1).min(coarse - 1)];

    let mut x1 = a + INV_GOLD * (b - a);
    let mut x2 = b - INV_GOLD * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + INV_GOLD * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - INV_GOLD * (b - a);
            f2 = f(x2);
        }
    }
    let (x, fx) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
    if best_f < fx {
        (samples[best_i], best_f)
    } else {
        (x, fx)
    }
}

/// Minimize `g(theta)` over the positive interval `[theta_lo, theta_hi]` by
/// golden-section search on log(theta); `rel_tol` bounds the relative
/// uncertainty of the returned argmin.
pub fn minimize_log_axis(
    g: impl Fn(f64) -> f64,
    theta_lo: f64,
    theta_hi: f64,
    coarse: usize,
    rel_tol: f64,
) -> (f64, f64) {
    assert!(theta_lo > 0.0 && theta_hi > theta_lo);
    let (s, fs) = minimize_scan_golden(
        |s| g(s.exp()),
        theta_lo.ln(),
        theta_hi.ln(),
        coarse,
        rel_tol,
    );
    (s.exp(), fs)
}
