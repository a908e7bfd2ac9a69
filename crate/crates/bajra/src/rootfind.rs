//! Bracketed inversion of strictly monotone scalar functions.
//!
//! The solver first expands a seed bracket toward the (possibly infinite)
//! interval endpoints until the target value is enclosed, then shrinks the
//! bracket with an Illinois-damped secant/bisection hybrid.

use crate::error::{Error, Result};

/// Stopping parameters for [`invert_monotone`].
#[derive(Clone, Copy, Debug)]
pub struct RootConfig {
    /// Absolute tolerance on the argument; tapers off below unit scale so
    /// that roots near zero are still resolved to relative precision.
    pub tol_abs: f64,
    /// Relative tolerance on the argument.
    pub tol_rel: f64,
    /// Iteration cap for the shrink phase.
    pub max_iter: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            tol_abs: 1e-12,
            tol_rel: 1e-12,
            max_iter: 200,
        }
    }
}

impl RootConfig {
    /// Tightest practical setting, used to polish a solution whose residual
    /// is not yet acceptable.
    pub fn machine() -> Self {
        RootConfig {
            tol_abs: 1e-15,
            tol_rel: 4.0 * f64::EPSILON,
            max_iter: 200,
        }
    }
}

const EXPANSION_STEPS: usize = 256;

/// Solves `f(u) = target` for a strictly monotone `f` on the open interval
/// `(lo, hi)` (endpoints may be infinite). `seed` is a finite subinterval
/// used to start bracket expansion.
///
/// Fails with [`Error::RootNotBracketed`] when the target provably lies
/// outside the reachable range of `f`. Once a bracket exists the hybrid
/// returns its best enclosed point even if the iteration budget runs out;
/// callers that need a residual guarantee check it on the returned value.
pub fn invert_monotone(
    f: impl Fn(f64) -> f64,
    target: f64,
    seed: (f64, f64),
    interval: (f64, f64),
    cfg: RootConfig,
) -> Result<f64> {
    if !target.is_finite() {
        return Err(Error::RootNotBracketed { target });
    }
    let (lo_bound, hi_bound) = interval;
    let (mut a, mut b) = seed;
    debug_assert!(a < b && a.is_finite() && b.is_finite());

    let g = |u: f64| f(u) - target;
    let mut ga = g(a);
    let mut gb = g(b);
    if !ga.is_finite() || !gb.is_finite() {
        return Err(Error::ConvergenceFailure);
    }

    // Expand the edge that moves the function toward the target (for a
    // monotone g that is the edge with the smaller |g|). Overshoots into
    // non-finite territory retreat toward the last good point on the same
    // side; a direction is abandoned once it cannot move any further.
    let mut lower_open = true;
    let mut upper_open = true;
    let mut steps = 0;
    while ga * gb > 0.0 && steps < EXPANSION_STEPS && (lower_open || upper_open) {
        steps += 1;
        // Head for the edge with the smaller |g|; when float absorption
        // makes the sides indistinguishable, alternate.
        let prefer_lower = if ga.abs() != gb.abs() {
            ga.abs() < gb.abs()
        } else {
            steps % 2 == 1
        };
        let go_lower = (prefer_lower && lower_open) || !upper_open;
        if go_lower && lower_open {
            if !can_extend_lower(a, lo_bound) {
                lower_open = false;
                continue;
            }
            let prev = a;
            let mut next = extend_lower(a, lo_bound);
            if next >= prev {
                lower_open = false;
                continue;
            }
            let mut value = g(next);
            if !value.is_finite() {
                match retreat(next, prev, &g) {
                    Some((x, v)) => {
                        next = x;
                        value = v;
                    }
                    None => {
                        lower_open = false;
                        continue;
                    }
                }
            }
            a = next;
            ga = value;
        } else if upper_open {
            if !can_extend_upper(b, hi_bound) {
                upper_open = false;
                continue;
            }
            let prev = b;
            let mut next = extend_upper(b, hi_bound);
            if next <= prev {
                upper_open = false;
                continue;
            }
            let mut value = g(next);
            if !value.is_finite() {
                match retreat(next, prev, &g) {
                    Some((x, v)) => {
                        next = x;
                        value = v;
                    }
                    None => {
                        upper_open = false;
                        continue;
                    }
                }
            }
            b = next;
            gb = value;
        } else {
            break;
        }
    }

    if ga == 0.0 {
        return Ok(a);
    }
    if gb == 0.0 {
        return Ok(b);
    }
    if ga * gb > 0.0 {
        return Err(Error::RootNotBracketed { target });
    }

    // Illinois-damped regula falsi with bisection safeguards.
    let mut fa = ga;
    let mut fb = gb;
    let mut last_side = 0i8;
    for _ in 0..cfg.max_iter {
        let width = b - a;
        let mid = 0.5 * (a + b);
        let scale = a.abs().max(b.abs());
        let threshold =
            8.0 * f64::MIN_POSITIVE + cfg.tol_abs * scale.min(1.0) + cfg.tol_rel * scale;
        if width <= threshold {
            return Ok(pick_best(a, fa, b, fb, mid, &g));
        }
        // secant point, safeguarded into the open bracket
        let mut c = if (fb - fa).abs() > f64::MIN_POSITIVE {
            b - fb * (b - a) / (fb - fa)
        } else {
            mid
        };
        if !(c > a && c < b) {
            c = mid;
        }
        let fc = g(c);
        if fc == 0.0 {
            return Ok(c);
        }
        if !fc.is_finite() {
            return Err(Error::ConvergenceFailure);
        }
        if fa * fc < 0.0 {
            b = c;
            fb = fc;
            if last_side == -1 {
                fa *= 0.5; // Illinois damping against one-sided stalls
            }
            last_side = -1;
        } else {
            a = c;
            fa = fc;
            if last_side == 1 {
                fb *= 0.5;
            }
            last_side = 1;
        }
    }
    // Budget exhausted with a valid bracket: hand back the best enclosed
    // point and let the caller's residual check arbitrate.
    Ok(pick_best(a, fa, b, fb, 0.5 * (a + b), &g))
}

fn can_extend_lower(a: f64, lo: f64) -> bool {
    if lo.is_finite() {
        a - lo > f64::MIN_POSITIVE && (a - lo) > (a.abs() + lo.abs()) * f64::EPSILON
    } else {
        a > f64::MIN / 8.0
    }
}

fn can_extend_upper(b: f64, hi: f64) -> bool {
    if hi.is_finite() {
        hi - b > f64::MIN_POSITIVE && (hi - b) > (b.abs() + hi.abs()) * f64::EPSILON
    } else {
        b < f64::MAX / 8.0
    }
}

fn extend_lower(a: f64, lo: f64) -> f64 {
    if lo.is_finite() {
        // approach the open endpoint geometrically
        lo + (a - lo) * 0.25
    } else {
        a - (1.0 + a.abs())
    }
}

fn extend_upper(b: f64, hi: f64) -> f64 {
    if hi.is_finite() {
        hi - (hi - b) * 0.25
    } else {
        b + (1.0 + b.abs())
    }
}

/// Walks back from a non-finite overshoot toward the last good point until
/// the evaluation is finite again; returns the recovered point and value.
fn retreat(bad: f64, good: f64, g: &impl Fn(f64) -> f64) -> Option<(f64, f64)> {
    let mut x = bad;
    for _ in 0..128 {
        x += (good - x) * 0.5;
        let v = g(x);
        if v.is_finite() {
            return Some((x, v));
        }
    }
    None
}

fn pick_best(a: f64, fa: f64, b: f64, fb: f64, mid: f64, g: &impl Fn(f64) -> f64) -> f64 {
    let fm = g(mid).abs();
    let mut best = (mid, fm);
    if fa.abs() < best.1 {
        best = (a, fa.abs());
    }
    if fb.abs() < best.1 {
        best = (b, fb.abs());
    }
    best.0
}
