//! Analytic ground state of the separated ansatz and the residuals of the
//! decomposition identities.
//!
//! The ground state factorizes as `ψ = χ·φ` with
//!
//! ```text
//! χ(r) = r^{c+1} exp(−k r / (2(c+1)))      φ(r) = exp(−a/r)
//! ```
//!
//! All derivatives are taken analytically through logarithmic derivatives:
//! `χ'/χ = (c+1)/r − k/(2(c+1))`, `φ'/φ = a/r²`.
//!
//! The χ-identity holds for every parameter set. The φ-identity leaves a
//! remainder `M3/r³ + M2/r²`, so the product is an exact eigenfunction of the
//! Klein-Gordon equation only where both coefficients vanish.

use statrs::function::gamma::ln_gamma;

use crate::error::{KgError, Result};
use crate::model::{nonrel_epsilon_from, PotentialParams};
use crate::quadrature::{integrate, integrate_to_infinity};

/// Shape parameters `(a, c, k)` of the ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState {
    pub a: f64,
    pub c: f64,
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateEval {
    pub r: f64,
    pub chi: f64,
    pub phi: f64,
    pub psi: f64,
    /// `−χ'/χ`.
    pub w: f64,
    /// `−φ'/φ`.
    pub dw: f64,
    pub w_susy: f64,
}

impl GroundState {
    /// Coefficients at energy `e`; fails where `a` or `c` is not real.
    pub fn from_params(params: &PotentialParams, e: f64) -> Result<Self> {
        let a = params
            .a()
            .ok_or_else(|| KgError::Domain(format!("a imaginary for {params}")))?;
        let c = params
            .c(e)
            .ok_or_else(|| KgError::Domain(format!("index c undefined at E = {e}")))?;
        Ok(Self { a, c, k: params.k(e) })
    }

    pub fn from_shape(a: f64, c: f64, k: f64) -> Result<Self> {
        if !(a.is_finite() && c.is_finite() && k.is_finite()) {
            return Err(KgError::Domain("shape parameters must be finite".into()));
        }
        if a < 0.0 {
            return Err(KgError::Domain(format!("a = {a} < 0")));
        }
        if c <= -1.0 {
            return Err(KgError::Domain(format!("c = {c} <= -1")));
        }
        Ok(Self { a, c, k })
    }

    /// Square-integrability on `(0, ∞)`: `c ≥ 0`, `k > 0`, `a ≥ 0`.
    pub fn require_normalizable(&self) -> Result<()> {
        if self.c >= 0.0 && self.k > 0.0 && self.a >= 0.0 {
            Ok(())
        } else {
            Err(KgError::NotIntegrable(format!(
                "need c >= 0, k > 0, a >= 0 (a={}, c={}, k={})",
                self.a, self.c, self.k
            )))
        }
    }

    /// `k / (2(c+1))`, the asymptotic decay rate of χ.
    pub fn decay(&self) -> f64 {
        self.k / (2.0 * (self.c + 1.0))
    }

    /// `χ'/χ`
    pub fn chi_log_derivative(&self, r: f64) -> f64 {
        (self.c + 1.0) / r - self.decay()
    }

    /// `φ'/φ`
    pub fn phi_log_derivative(&self, r: f64) -> f64 {
        self.a / (r * r)
    }

    pub fn psi_log_derivative(&self, r: f64) -> f64 {
        self.chi_log_derivative(r) + self.phi_log_derivative(r)
    }

    /// `ψ''/ψ`
    pub fn psi_curvature(&self, r: f64) -> f64 {
        let l = self.psi_log_derivative(r);
        l * l - (self.c + 1.0) / (r * r) - 2.0 * self.a / (r * r * r)
    }

    /// `ln ψ(r)`; finite for every `r > 0`.
    pub fn ln_psi(&self, r: f64) -> f64 {
        (self.c + 1.0) * r.ln() - self.a / r - self.decay() * r
    }

    pub fn eval(&self, r: f64) -> Result<GroundStateEval> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(KgError::Domain(format!("radius must be positive, got {r}")));
        }
        let chi = r.powf(self.c + 1.0) * (-self.decay() * r).exp();
        let phi = if self.a == 0.0 { 1.0 } else { (-self.a / r).exp() };
        let w = -self.chi_log_derivative(r);
        let dw = -self.phi_log_derivative(r);
        Ok(GroundStateEval {
            r,
            chi,
            phi,
            psi: chi * phi,
            w,
            dw,
            w_susy: w + dw,
        })
    }

    /// Radius where `ψ²` peaks: the positive root of `κr² − (c+1)r − a = 0`.
    pub fn peak_radius(&self) -> f64 {
        let kappa = self.decay();
        let c1 = self.c + 1.0;
        (c1 + (c1 * c1 + 4.0 * kappa * self.a).sqrt()) / (2.0 * kappa)
    }

    /// `Γ(2c+3) ((c+1)/k)^{2c+3}`, the norm integral when `a = 0`.
    pub fn gamma_norm_integral(&self) -> f64 {
        let s = 2.0 * self.c + 3.0;
        (ln_gamma(s) + s * ((self.c + 1.0) / self.k).ln()).exp()
    }

    pub fn normalization(&self, cfg: &QuadConfig) -> Result<Normalization> {
        self.require_normalizable()?;
        let peak = self.peak_radius();
        let ln_peak = 2.0 * self.ln_psi(peak);
        let g = |r: f64| {
            if r <= 0.0 {
                0.0
            } else {
                (2.0 * self.ln_psi(r) - ln_peak).exp()
            }
        };
        // width of the peak from the second derivative of ln ψ²
        let curvature = 2.0 * ((self.c + 1.0) / (peak * peak) + 2.0 * self.a / peak.powi(3));
        let width = 1.0 / curvature.sqrt();

        let run = |tol: f64| -> Result<f64> {
            let left = integrate(g, 0.0, peak, tol, 0.0, cfg.max_intervals)?;
            let right = integrate_to_infinity(g, peak, width, tol, 0.0, cfg.max_intervals)?;
            Ok(left.value + right.value)
        };
        let coarse = run(cfg.rel_tol)?;
        let fine = run(cfg.rel_tol * 1e-2)?;
        let agreement = ((coarse - fine) / fine).abs();
        if agreement > cfg.refinement_agreement {
            return Err(KgError::Quadrature { estimate: agreement });
        }

        let ln_integral = fine.ln() + ln_peak;
        let integral = ln_integral.exp();
        let gamma_closed_form = (self.a == 0.0).then(|| self.gamma_norm_integral());
        if let Some(exact) = gamma_closed_form {
            let rel = ((integral - exact) / exact).abs();
            if rel > cfg.gamma_agreement {
                return Err(KgError::Quadrature { estimate: rel });
            }
        }
        Ok(Normalization {
            integral,
            constant: (-0.5 * ln_integral).exp(),
            refinement_agreement: agreement,
            gamma_closed_form,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub max_intervals: usize,
    /// Required agreement between the `rel_tol` and `rel_tol/100` passes.
    pub refinement_agreement: f64,
    /// Required agreement with the Γ closed form when `a = 0`.
    pub gamma_agreement: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-11,
            max_intervals: 500,
            refinement_agreement: 1e-8,
            gamma_agreement: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    /// `∫₀^∞ ψ² dr`
    pub integral: f64,
    /// `N = 1/√integral`
    pub constant: f64,
    pub refinement_agreement: f64,
    pub gamma_closed_form: Option<f64>,
}

pub fn eval_ground_state(params: &PotentialParams, e: f64, r: f64) -> Result<GroundStateEval> {
    let gs = GroundState::from_params(params, e)?;
    gs.require_normalizable()?;
    gs.eval(r)
}

pub fn normalization(params: &PotentialParams, e: f64, cfg: &QuadConfig) -> Result<Normalization> {
    GroundState::from_params(params, e)?.normalization(cfg)
}

/// One sampled residual together with the value the algebra predicts for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSample {
    pub r: f64,
    pub residual: f64,
    pub predicted: f64,
    /// Largest-magnitude individual term entering the residual at `r`.
    pub scale: f64,
}

impl ResidualSample {
    /// `|residual − predicted| / scale`
    pub fn mismatch(&self) -> f64 {
        if self.scale == 0.0 {
            (self.residual - self.predicted).abs()
        } else {
            ((self.residual - self.predicted) / self.scale).abs()
        }
    }

    /// `|residual| / scale`
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual.abs()
        } else {
            (self.residual / self.scale).abs()
        }
    }
}

fn max_abs(terms: &[f64]) -> f64 {
    terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub energy: f64,
    pub shape: GroundState,
    /// `2ac + 2(A₁B₁ − A₂B₂)`
    pub m3: f64,
    /// `−ak/(c+1) − (B₁² − B₂²)`
    pub m2: f64,
    /// Relative mismatch `|a² − (A₁² − A₂²)|`, the r⁻⁴ remainder.
    pub r4_cancellation: f64,
    pub eq3_samples: Vec<ResidualSample>,
    pub eq4_samples: Vec<ResidualSample>,
    pub eq1_samples: Vec<ResidualSample>,
    pub on_exact_manifold: bool,
    /// The rejected `(A₁B₁ − A₂B₂)/a` value, and the `(A₂B₂ − A₁B₁)/a` value
    /// that `M3 = 0` actually requires.
    pub c_diagnostic: Option<f64>,
    pub c_consistent: Option<f64>,
}

impl ResidualReport {
    pub fn max_eq3(&self) -> f64 {
        self.eq3_samples.iter().map(ResidualSample::relative).fold(0.0, f64::max)
    }

    pub fn max_eq4_mismatch(&self) -> f64 {
        self.eq4_samples.iter().map(ResidualSample::mismatch).fold(0.0, f64::max)
    }

    pub fn max_eq1_mismatch(&self) -> f64 {
        self.eq1_samples.iter().map(ResidualSample::mismatch).fold(0.0, f64::max)
    }
}

/// Relative tolerance for declaring `M3 = M2 = 0`.
pub const MANIFOLD_TOLERANCE: f64 = 1e-12;

/// Residuals of the χ-identity, the φ-identity (with zero energy correction)
/// and the full Klein-Gordon operator applied to `ψ = χφ`.
///
/// The composite residual matches `−(M3/r³ + M2/r²)ψ` only when `e` is a
/// ground-state zero of the spectrum equation.
pub fn residual_report(params: &PotentialParams, e: f64, sample_radii: &[f64]) -> Result<ResidualReport> {
    params.validate()?;
    let gs = GroundState::from_params(params, e)?;
    let GroundState { a, c, k } = gs;
    let (m, a1, b1, a2, b2) = (params.m, params.a1, params.b1, params.a2, params.b2);

    let cross = a1 * b1 - a2 * b2;
    let bdiff = b1 * b1 - b2 * b2;
    let m3 = 2.0 * a * c + 2.0 * cross;
    let m2 = -a * k / (c + 1.0) - bdiff;
    let m3_scale = max_abs(&[2.0 * a * c, 2.0 * a1 * b1, 2.0 * a2 * b2]);
    let m2_scale = max_abs(&[a * k / (c + 1.0), b1 * b1, b2 * b2]);
    let zero = |v: f64, s: f64| v.abs() <= MANIFOLD_TOLERANCE * s.max(f64::MIN_POSITIVE) || v == 0.0;
    let on_exact_manifold = zero(m3, m3_scale) && zero(m2, m2_scale);

    let d4 = a1 * a1 - a2 * a2;
    let r4_cancellation = if d4 == 0.0 {
        (a * a).abs()
    } else {
        ((a * a - d4) / d4).abs()
    };

    let epsilon = nonrel_epsilon_from(c, k, 0);
    let mut eq3 = Vec::with_capacity(sample_radii.len());
    let mut eq4 = Vec::with_capacity(sample_radii.len());
    let mut eq1 = Vec::with_capacity(sample_radii.len());
    for &r in sample_radii {
        let v = params.potentials_at(e, r)?;
        let (vs, vv) = (v.scalar, v.vector);
        let lc = gs.chi_log_derivative(r);
        let lc_prime = -(c + 1.0) / (r * r);
        let lp = gs.phi_log_derivative(r);
        let lp_prime = -2.0 * a / (r * r * r);

        // χ''/χ = 2(mV_S + EV_V) − ε
        let r3 = lc * lc + lc_prime - (2.0 * (m * vs + e * vv) - epsilon);
        eq3.push(ResidualSample {
            r,
            residual: r3,
            predicted: 0.0,
            scale: max_abs(&[lc * lc, lc_prime, 2.0 * m * vs, 2.0 * e * vv, epsilon]),
        });

        // φ''/φ + 2(χ'/χ)(φ'/φ) = V_S² − V_V²
        let r4 = lp * lp + lp_prime + 2.0 * lc * lp - (vs * vs - vv * vv);
        let inv = 1.0 / r;
        let m_poly = (m3 * inv + m2) * inv * inv;
        eq4.push(ResidualSample {
            r,
            residual: r4,
            predicted: m_poly,
            scale: max_abs(&[lp * lp, lp_prime, 2.0 * lc * lp, vs * vs, vv * vv]),
        });

        // −ψ'' + [(m + V_S)² − (E − V_V)²]ψ
        let psi = gs.eval(r)?.psi;
        let curv = gs.psi_curvature(r);
        let mass = (m + vs) * (m + vs);
        let energy = (e - vv) * (e - vv);
        let r1 = -curv * psi + (mass - energy) * psi;
        eq1.push(ResidualSample {
            r,
            residual: r1,
            predicted: -m_poly * psi,
            scale: max_abs(&[curv * psi, mass * psi, energy * psi]),
        });
    }

    Ok(ResidualReport {
        energy: e,
        shape: gs,
        m3,
        m2,
        r4_cancellation,
        eq3_samples: eq3,
        eq4_samples: eq4,
        eq1_samples: eq1,
        on_exact_manifold,
        c_diagnostic: params.c_diagnostic(),
        c_consistent: params.c_consistent(),
    })
}

/// Residuals of the first-order (Riccati) form with unit prefactor, computed
/// from `W`, `ΔW` and their derivatives rather than from χ and φ.
///
/// Returns `(W² − W' − [2(mV_S + EV_V) − ε], ΔW² − ΔW' + 2WΔW − (V_S² − V_V²))`.
pub fn riccati_residuals(params: &PotentialParams, e: f64, r: f64) -> Result<(f64, f64)> {
    let gs = GroundState::from_params(params, e)?;
    let v = params.potentials_at(e, r)?;
    let ev = gs.eval(r)?;
    let w_prime = (gs.c + 1.0) / (r * r);
    let dw_prime = 2.0 * gs.a / (r * r * r);
    let epsilon = nonrel_epsilon_from(gs.c, gs.k, 0);
    let first = ev.w * ev.w - w_prime - (2.0 * (params.m * v.scalar + e * v.vector) - epsilon);
    let second = ev.dw * ev.dw - dw_prime + 2.0 * ev.w * ev.dw - (v.scalar * v.scalar - v.vector * v.vector);
    Ok((first, second))
}

/// `n` radii spaced logarithmically between `lo` and `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(m: f64, a1: f64, b1: f64, a2: f64, b2: f64) -> PotentialParams {
        PotentialParams::new(m, a1, b1, a2, b2).unwrap()
    }

    #[test]
    fn hydrogen_like_values() {
        let gs = GroundState::from_shape(0.0, 0.0, 2.0).unwrap();
        let v = gs.eval(1.0).unwrap();
        assert_relative_eq!(v.chi, (-1.0f64).exp(), max_relative = 1e-15);
        assert_eq!(v.phi, 1.0);
        assert_eq!(v.psi, v.chi);
        assert_eq!(v.w, 0.0);
        // W vanishes at r = 2(c+1)²/k
        let gs = GroundState::from_shape(0.0, 0.5, 3.0).unwrap();
        assert!(gs.eval(1.5).unwrap().w.abs() < 1e-15);
    }

    #[test]
    fn correction_factor_values() {
        let gs = GroundState::from_shape(1.0, 1.0, 1.0).unwrap();
        let v = gs.eval(1.0).unwrap();
        assert_relative_eq!(v.psi, (-1.25f64).exp(), max_relative = 1e-15);
        assert_relative_eq!(v.psi, 0.286_504_796_860_190_1, max_relative = 1e-15);
        assert_eq!(v.dw, -1.0);
        assert_eq!(v.psi, v.chi * v.phi);
    }

    #[test]
    fn vanishes_at_both_ends() {
        let gs = GroundState::from_shape(0.3, 0.2, 1.1).unwrap();
        assert!(gs.eval(1e-3).unwrap().psi < 1e-100);
        assert!(gs.eval(1e4).unwrap().psi < 1e-100);
        let gs = GroundState::from_shape(0.0, 0.0, 1.1).unwrap();
        assert!(gs.eval(1e-12).unwrap().psi < 1e-11);
    }

    #[test]
    fn w_susy_is_minus_log_derivative() {
        let gs = GroundState::from_shape(0.7, 1.3, 0.9).unwrap();
        for r in [0.2, 1.0, 3.0, 11.0] {
            let v = gs.eval(r).unwrap();
            // central difference of ln ψ as an independent check
            let h = 1e-5 * r;
            let fd = (gs.eval(r + h).unwrap().psi.ln() - gs.eval(r - h).unwrap().psi.ln()) / (2.0 * h);
            assert_relative_eq!(-v.w_susy, fd, max_relative = 1e-8);
            assert!((v.w_susy + gs.psi_log_derivative(r)).abs() <= 1e-12 * v.w_susy.abs().max(1.0));
        }
    }

    #[test]
    fn eval_preconditions() {
        assert!(eval_ground_state(&p(1.0, 0.0, -1.0, 0.0, 0.0), 0.5, 1.0).is_err());
        assert!(eval_ground_state(&p(1.0, 0.0, 1.0, 1.0, 0.0), 0.5, 1.0).is_err());
        assert!(eval_ground_state(&p(1.0, 0.0, 1.0, 0.0, 0.0), 0.5, 0.0).is_err());
        assert!(eval_ground_state(&p(1.0, 0.0, 1.0, 0.0, 0.0), 0.5, 1.0).is_ok());
    }

    #[test]
    fn gamma_normalization() {
        let n = GroundState::from_shape(0.0, 0.0, 2.0).unwrap().normalization(&QuadConfig::default()).unwrap();
        assert_relative_eq!(n.integral, 0.25, max_relative = 1e-12);
        assert_relative_eq!(n.constant, 2.0, max_relative = 1e-12);

        let n = GroundState::from_shape(0.0, 1.0, 2.0).unwrap().normalization(&QuadConfig::default()).unwrap();
        assert_relative_eq!(n.integral, 24.0, max_relative = 1e-10);
        assert_relative_eq!(n.constant, 0.204_124_145_231_931_5, max_relative = 1e-10);
        assert_relative_eq!(n.gamma_closed_form.unwrap(), 24.0, max_relative = 1e-12);
    }

    #[test]
    fn essential_singularity_normalization() {
        // mpmath: ∫₀^∞ (r² e^{−1/r − r/4})² dr
        let n = GroundState::from_shape(1.0, 1.0, 1.0).unwrap().normalization(&QuadConfig::default()).unwrap();
        assert_relative_eq!(n.integral, 603.587_142_438_173_9, max_relative = 1e-9);
        assert!(n.refinement_agreement < 1e-8);
        assert_eq!(n.gamma_closed_form, None);
    }

    #[test]
    fn not_integrable() {
        let gs = GroundState::from_shape(0.0, 0.0, -1.0).unwrap();
        assert!(matches!(gs.normalization(&QuadConfig::default()), Err(KgError::NotIntegrable(_))));
    }

    #[test]
    fn equal_manifold_residuals_vanish() {
        let pp = p(1.0, 0.0, 0.5, 0.0, 0.5);
        let rep = residual_report(&pp, 0.6, &[0.5, 1.0, 2.0, 7.0]).unwrap();
        assert_eq!(rep.m3, 0.0);
        assert_eq!(rep.m2, 0.0);
        assert!(rep.on_exact_manifold);
        for s in rep.eq3_samples.iter().chain(&rep.eq4_samples).chain(&rep.eq1_samples) {
            assert!(s.relative() < 1e-10, "{s:?}");
        }
    }

    #[test]
    fn three_four_five_coefficients() {
        let pp = p(1.0, 5.0, 0.5, 3.0, 0.25);
        let radii = [0.5, 1.0, 2.0];
        let rep = residual_report(&pp, 0.8, &radii).unwrap();
        let c = rep.shape.c;
        assert_relative_eq!(rep.m3, 8.0 * c + 3.5, max_relative = 1e-14);
        assert_relative_eq!(rep.m3, 30.535_463_586_033_317, max_relative = 1e-13);
        assert!(!rep.on_exact_manifold);
        assert!(rep.max_eq3() < 1e-9);
        assert!(rep.max_eq4_mismatch() < 1e-10);

        // recover M3, M2 from two sampled R4 values: R4·r³ = M3 + M2·r
        let (s1, s2) = (rep.eq4_samples[0], rep.eq4_samples[2]);
        let (y1, y2) = (s1.residual * s1.r.powi(3), s2.residual * s2.r.powi(3));
        let m2 = (y2 - y1) / (s2.r - s1.r);
        let m3 = y1 - m2 * s1.r;
        assert_relative_eq!(m3, rep.m3, max_relative = 1e-10);
        assert_relative_eq!(m2, rep.m2, max_relative = 1e-10);
        assert_eq!(rep.c_consistent, Some(-0.4375));
    }

    #[test]
    fn riccati_form_matches_log_derivative_form() {
        let pp = p(1.3, 1.2, 0.4, -0.7, 0.6);
        let e = 0.5;
        let radii = log_grid(0.05, 20.0, 9);
        let rep = residual_report(&pp, e, &radii).unwrap();
        for (i, &r) in radii.iter().enumerate() {
            let (q5, q6) = riccati_residuals(&pp, e, r).unwrap();
            let (s3, s4) = (rep.eq3_samples[i], rep.eq4_samples[i]);
            assert!(((q5 - s3.residual) / s3.scale).abs() < 1e-13);
            assert!(((q6 - s4.residual) / s4.scale).abs() < 1e-13);
        }
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(1e-2, 1e2, 50);
        assert_eq!(g.len(), 50);
        assert_relative_eq!(g[0], 1e-2, max_relative = 1e-15);
        assert_relative_eq!(g[49], 1e2, max_relative = 1e-14);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
