//! Bracketed scalar root refinement: bisection with secant acceleration.

use crate::error::{KgError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    /// Final bracket; always contains a sign change or an exact zero.
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Convergence requires `|f(x)| <= f_tol` ...
    pub f_tol: f64,
    /// ... and a bracket no wider than `x_tol`.
    pub x_tol: f64,
    pub max_iterations: usize,
}

/// Refines a sign change of `f` on `[lo, hi]`.
///
/// Each step tries the secant point of the current bracket; it falls back to
/// the midpoint when the secant point lands outside the bracket interior or the
/// previous step failed to halve the bracket.
pub fn refine<F>(mut f: F, lo: f64, hi: f64, tol: Tolerances) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(Root { x: a, fx: 0.0, lo: a, hi: a, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: 0.0, lo: b, hi: b, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(KgError::Domain(format!(
            "no sign change on [{a}, {b}] (f={fa:e}, {fb:e})"
        )));
    }

    let mut last_width = b - a;
    let mut force_bisect = false;

    for it in 1..=tol.max_iterations {
        let width = b - a;
        let mid = a + 0.5 * width;
        let x = if force_bisect {
            mid
        } else {
            let s = b - fb * (b - a) / (fb - fa);
            // stay clear of the endpoints so the bracket actually shrinks
            let guard = 1e-3 * width;
            if s.is_finite() && s > a + guard && s < b - guard {
                s
            } else {
                mid
            }
        };
        let fx = f(x);
        if fx == 0.0 {
            return Ok(Root { x, fx, lo: x, hi: x, iterations: it });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }

        let new_width = b - a;
        force_bisect = new_width > 0.5 * last_width;
        last_width = new_width;

        let (bx, bfx) = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
        // no representable point left strictly inside the bracket
        let mid = a + 0.5 * new_width;
        let exhausted = mid <= a || mid >= b;
        if (bfx.abs() <= tol.f_tol && new_width <= tol.x_tol) || exhausted {
            return Ok(Root { x: bx, fx: bfx, lo: a, hi: b, iterations: it });
        }
    }
    Err(KgError::Convergence {
        lo: a,
        hi: b,
        iterations: tol.max_iterations,
    })
}
