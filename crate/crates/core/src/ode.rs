//! Adaptive Dormand-Prince 5(4) integration of `ψ'' = U(r) ψ`.
//!
//! The state `(ψ, ψ')` is rescaled whenever it grows past [`RESCALE_AT`], so
//! exponentially growing shooting solutions never overflow. Rescaling is by a
//! positive factor and therefore leaves node counts and Wronskian signs intact.

use crate::error::{KgError, Result};

const RESCALE_AT: f64 = 1e100;
const MAX_STEPS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub psi: f64,
    pub dpsi: f64,
    /// Strict sign changes of ψ between accepted steps.
    pub nodes: usize,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub tolerance: f64,
    pub max_step: f64,
    /// Squared inverse length added to `|U|` when forming the local phase-space
    /// scale `ℓ = 1/√(|U| + floor)`.
    pub floor: f64,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates from `r0` to `r1` (either direction) starting at `(psi0, dpsi0)`.
pub fn integrate<U>(u: &U, r0: f64, r1: f64, psi0: f64, dpsi0: f64, ctl: StepControl) -> Result<Endpoint>
where
    U: Fn(f64) -> f64,
{
    let span = r1 - r0;
    let dir = span.signum();
    let length = |r: f64| 1.0 / (u(r).abs() + ctl.floor).sqrt();

    let mut r = r0;
    let mut y = [psi0, dpsi0];
    let mut h = dir * (0.01 * length(r0)).min(ctl.max_step).min(span.abs());
    let mut last_sign = psi0.signum();
    let mut nodes = 0;
    let mut accepted = 0;
    let mut rejected = 0;

    while (r1 - r) * dir > 0.0 {
        if accepted + rejected > MAX_STEPS {
            return Err(KgError::Convergence { lo: r0, hi: r1, iterations: MAX_STEPS });
        }
        if (r + h - r1) * dir > 0.0 {
            h = r1 - r;
        }

        let mut k = [[0.0_f64; 2]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys[0] += h * A[s][j] * kj[0];
                ys[1] += h * A[s][j] * kj[1];
            }
            k[s] = [ys[1], u(r + C[s] * h) * ys[0]];
        }
        let mut y_new = y;
        let mut err = [0.0; 2];
        for s in 0..6 {
            y_new[0] += h * A[6][s] * k[s][0];
            y_new[1] += h * A[6][s] * k[s][1];
        }
        for s in 0..7 {
            err[0] += h * E[s] * k[s][0];
            err[1] += h * E[s] * k[s][1];
        }

        let ell = length(r + h);
        let scale = (y[0].abs() + ell * y[1].abs()).max(y_new[0].abs() + ell * y_new[1].abs());
        let ratio = (err[0].abs().max(ell * err[1].abs()) / (ctl.tolerance * scale)).max(1e-300);

        if ratio <= 1.0 && y_new[0].is_finite() && y_new[1].is_finite() {
            r += h;
            y = y_new;
            accepted += 1;
            let sign = y[0].signum();
            if y[0] != 0.0 {
                if last_sign != 0.0 && sign != last_sign {
                    nodes += 1;
                }
                last_sign = sign;
            }
            let size = y[0].abs() + ell * y[1].abs();
            if size > RESCALE_AT {
                y[0] /= RESCALE_AT;
                y[1] /= RESCALE_AT;
            } else if size == 0.0 || !size.is_finite() {
                return Err(KgError::Overflow { r });
            }
        } else {
            rejected += 1;
        }

        let factor = if ratio.is_finite() { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) } else { 0.2 };
        h *= factor;
        if h.abs() > ctl.max_step {
            h = dir * ctl.max_step;
        }
        if h.abs() < 1e-14 * r.abs().max(f64::MIN_POSITIVE) {
            return Err(KgError::Convergence { lo: r0, hi: r1, iterations: accepted + rejected });
        }
    }

    Ok(Endpoint {
        psi: y[0],
        dpsi: y[1],
        nodes,
        accepted_steps: accepted,
        rejected_steps: rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl(max_step: f64) -> StepControl {
        StepControl { tolerance: 1e-11, max_step, floor: 1.0 }
    }

    #[test]
    fn harmonic_oscillation_and_nodes() {
        // ψ'' = −ψ from ψ(0)=0, ψ'(0)=1: sin r; zeros at π, 2π, 3π
        let end = integrate(&|_| -1.0, 0.0, 10.0, 0.0, 1.0, ctl(0.1)).unwrap();
        assert!((end.psi - 10f64.sin()).abs() < 1e-9);
        assert!((end.dpsi - 10f64.cos()).abs() < 1e-9);
        assert_eq!(end.nodes, 3);
    }

    #[test]
    fn backward_integration() {
        let end = integrate(&|_| -1.0, 10.0, 0.5, 10f64.sin(), 10f64.cos(), ctl(0.1)).unwrap();
        assert!((end.psi - 0.5f64.sin()).abs() < 1e-9);
        assert!((end.dpsi - 0.5f64.cos()).abs() < 1e-9);
        assert_eq!(end.nodes, 3);
    }

    #[test]
    fn growth_is_rescaled_not_overflowed() {
        // e^{r} over r ∈ [0, 1000] would overflow without rescaling
        let end = integrate(&|_| 1.0, 0.0, 1000.0, 1.0, 1.0, ctl(1.0)).unwrap();
        assert!(end.psi.is_finite() && end.psi > 0.0);
        assert!((end.dpsi / end.psi - 1.0).abs() < 1e-9);
        assert_eq!(end.nodes, 0);
    }

    #[test]
    fn airy_like_variable_coefficient() {
        // ψ = r² solves ψ'' = (2/r²) ψ
        let end = integrate(&|r| 2.0 / (r * r), 0.1, 5.0, 0.01, 0.2, ctl(0.05)).unwrap();
        assert!((end.psi - 25.0).abs() < 1e-8);
        assert!((end.dpsi - 10.0).abs() < 1e-8);
    }
}
