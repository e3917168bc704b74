//! Derivative-free maximization: a dense scan plus golden-section polish on
//! one axis, and coordinate-wise golden sweeps for several parameters.

/// Scan points used on `[0, 1]` before golden refinement.
pub const SCAN_POINTS: usize = 10_001;
/// Final bracket width of the golden-section polish.
pub const GOLDEN_TOL: f64 = 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of `f` on `[a, b]`. Returns the best
/// point evaluated, endpoints included.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let (fa, fb) = (f(a), f(b));
    let (mut best_x, mut best_f) = if fb > fa { (b, fb) } else { (a, fa) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best_f {
            best_x = x;
            best_f = v;
        }
    }
    (best_x, best_f)
}

/// Global maximum of a continuous function on `[0, 1]`: uniform scan with
/// [`SCAN_POINTS`] points, then golden polish on the bracket around the best
/// sample. Returns `(argmax, max)`.
pub fn maximize_unit<F: Fn(f64) -> f64>(f: F) -> (f64, f64) {
    let n = SCAN_POINTS - 1;
    let mut best_i = 0;
    let mut best_f = f(0.0);
    for i in 1..=n {
        let v = f(i as f64 / n as f64);
        if v > best_f {
            best_i = i;
            best_f = v;
        }
    }
    let lo = best_i.saturating_sub(1) as f64 / n as f64;
    let hi = (best_i + 1).min(n) as f64 / n as f64;
    let (x, v) = golden_max(&f, lo, hi, GOLDEN_TOL);
    if v > best_f {
        (x, v)
    } else {
        (best_i as f64 / n as f64, best_f)
    }
}

/// Coordinate-wise golden sweeps with a pattern move along the last sweep's
/// displacement. `width` is the initial half-window per coordinate; windows
/// shrink when a sweep gains less than `tol`, and the search stops once they
/// are all below `min_width`. Returns the final value.
pub fn coordinate_ascent<F: Fn(&[f64]) -> f64>(
    f: F,
    x: &mut [f64],
    width: &[f64],
    tol: f64,
    min_width: f64,
) -> f64 {
    const MAX_SWEEPS: usize = 500;
    let n = x.len();
    let mut h = width.to_vec();
    let mut fx = f(x);
    let mut trial = x.to_vec();
    for _ in 0..MAX_SWEEPS {
        let start = fx;
        let before = x.to_vec();
        for i in 0..n {
            trial.copy_from_slice(x);
            let xi = x[i];
            let (t, v) = golden_max(
                |t| {
                    let mut y = trial.clone();
                    y[i] = t;
                    f(&y)
                },
                xi - h[i],
                xi + h[i],
                (h[i] * 1e-4).max(1e-13),
            );
            if v > fx {
                x[i] = t;
                fx = v;
            }
        }
        let dir: Vec<f64> = x.iter().zip(&before).map(|(a, b)| a - b).collect();
        if dir.iter().any(|d| *d != 0.0) {
            let along = |t: f64| {
                let y: Vec<f64> = before.iter().zip(&dir).map(|(b, d)| b + t * d).collect();
                f(&y)
            };
            let (t, v) = golden_max(along, 1.0, 3.0, 1e-6);
            if v > fx {
                for (xi, (b, d)) in x.iter_mut().zip(before.iter().zip(&dir)) {
                    *xi = b + t * d;
                }
                fx = v;
            }
        }
        if fx - start < tol {
            if h.iter().all(|w| *w < min_width) {
                break;
            }
            for w in h.iter_mut() {
                *w *= 0.25;
            }
        }
    }
    fx
}
