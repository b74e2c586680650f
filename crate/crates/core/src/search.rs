//! Bracketed one-dimensional minimizers used by the greedy step.

/// Outcome of a bracketed search.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Minimum {
    pub x: f64,
    pub evaluations: u64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search on `[a, b]` down to a bracket of width `coarse`,
/// then bisection on the sign of `slope` down to `tol` when the final
/// bracket straddles a sign change.
pub(crate) fn golden_then_slope(
    value: impl Fn(f64) -> f64,
    slope: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    coarse: f64,
    tol: f64,
) -> Minimum {
    let (mut lo, mut hi) = (a, b);
    let mut evaluations = 0u64;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = value(x1);
    let mut f2 = value(x2);
    evaluations += 2;
    for _ in 0..200 {
        if hi - lo <= coarse {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = value(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = value(x2);
        }
        evaluations += 1;
    }
    let golden = if f1 <= f2 { x1 } else { x2 };

    let (slo, shi) = (slope(lo), slope(hi));
    evaluations += 2;
    if !(slo < 0.0 && shi > 0.0) {
        // boundary minimum or a flat bracket
        let mut best = golden;
        let mut best_val = value(golden);
        for c in [lo, hi] {
            let v = value(c);
            if v < best_val {
                best = c;
                best_val = v;
            }
        }
        evaluations += 3;
        return Minimum { x: best, evaluations };
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = slope(mid);
        evaluations += 1;
        if s < 0.0 {
            lo = mid;
        } else if s > 0.0 {
            hi = mid;
        } else {
            return Minimum { x: mid, evaluations };
        }
    }
    Minimum { x: 0.5 * (lo + hi), evaluations }
}

/// Minimum of a strictly convex function on `[a, b]` from its slope and
/// curvature: safeguarded Newton iteration on the slope, falling back to
/// bisection whenever the Newton step leaves the current bracket.
pub(crate) fn convex_by_slope(
    slope_curvature: impl Fn(f64) -> (f64, f64),
    a: f64,
    b: f64,
    tol: f64,
) -> Minimum {
    let mut evaluations = 2u64;
    let (sa, _) = slope_curvature(a);
    if sa >= 0.0 {
        return Minimum { x: a, evaluations };
    }
    let (sb, _) = slope_curvature(b);
    if sb <= 0.0 {
        return Minimum { x: b, evaluations };
    }
    let (mut lo, mut hi) = (a, b);
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let (s, c) = slope_curvature(x);
        evaluations += 1;
        if s == 0.0 {
            break;
        }
        if s < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - s / c;
        if newton.is_finite() && (newton - x).abs() <= 0.5 * tol && newton >= lo && newton <= hi {
            x = newton;
            break;
        }
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= 0.5 * tol || hi - lo <= tol {
            break;
        }
    }
    Minimum { x, evaluations }
}
