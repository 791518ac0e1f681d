//! Physical parameters of the mixed scalar/vector Kratzer problem, the
//! energy-dependent coefficients of the ground-state ansatz, and the
//! bound-state admissibility rules.
//!
//! Natural units (ħ = c = 1) throughout.

use std::fmt;

use crate::error::{KgError, Result};

/// Rest mass and the four Kratzer couplings.
///
/// `V_S = a1/r² − b1/r` couples to the mass, `V_V = a2/r² − b2/r` to the energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub m: f64,
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
}

impl PotentialParams {
    pub fn new(m: f64, a1: f64, b1: f64, a2: f64, b2: f64) -> Result<Self> {
        let p = Self { m, a1, b1, a2, b2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("m", self.m),
            ("a1", self.a1),
            ("b1", self.b1),
            ("a2", self.a2),
            ("b2", self.b2),
        ] {
            if !v.is_finite() {
                return Err(KgError::InvalidParameter {
                    name,
                    reason: format!("must be finite, got {v}"),
                });
            }
        }
        if self.m <= 0.0 {
            return Err(KgError::InvalidParameter {
                name: "m",
                reason: format!("rest mass must be positive, got {}", self.m),
            });
        }
        Ok(())
    }

    /// `√(A₁² − A₂²)`, or `None` when the vector inverse-square term dominates.
    pub fn a(&self) -> Option<f64> {
        let d = self.a1 * self.a1 - self.a2 * self.a2;
        (d >= 0.0).then(|| d.sqrt())
    }

    /// Effective Coulomb strength `k = 2mB₁ + 2EB₂`.
    pub fn k(&self, e: f64) -> f64 {
        2.0 * (self.m * self.b1 + e * self.b2)
    }

    /// `mA₁ + EA₂`, the combination that fixes the centrifugal index.
    pub fn inverse_square_coupling(&self, e: f64) -> f64 {
        self.m * self.a1 + e * self.a2
    }

    /// `1 + 8(mA₁ + EA₂)`; the index is real only when this is nonnegative.
    pub fn index_radicand(&self, e: f64) -> f64 {
        1.0 + 8.0 * self.inverse_square_coupling(e)
    }

    /// Physically acceptable root of `c(c+1) = 2(mA₁ + EA₂)`.
    pub fn c(&self, e: f64) -> Option<f64> {
        let rad = 0.25 + 2.0 * self.inverse_square_coupling(e);
        (rad >= 0.0).then(|| -0.5 + rad.sqrt())
    }

    /// The rejected alternative `(A₁B₁ − A₂B₂)/a`. Diagnostic only.
    pub fn c_diagnostic(&self) -> Option<f64> {
        match self.a() {
            Some(a) if a > 0.0 => Some((self.a1 * self.b1 - self.a2 * self.b2) / a),
            _ => None,
        }
    }

    /// Index that would make the r⁻³ mismatch vanish, `(A₂B₂ − A₁B₁)/a`.
    /// Opposite in sign to [`c_diagnostic`](Self::c_diagnostic).
    pub fn c_consistent(&self) -> Option<f64> {
        self.c_diagnostic().map(|c| -c)
    }

    pub fn potentials_at(&self, e: f64, r: f64) -> Result<Potentials> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(KgError::Domain(format!("radius must be positive, got {r}")));
        }
        let inv = 1.0 / r;
        let vs = self.a1 * inv * inv - self.b1 * inv;
        let vv = self.a2 * inv * inv - self.b2 * inv;
        Ok(Potentials {
            scalar: vs,
            vector: vv,
            effective: 2.0 * self.m * vs + 2.0 * e * vv + vs * vs - vv * vv,
        })
    }

    /// Coefficients of r⁻⁴, r⁻³ and r⁻² in `V_S² − V_V²`.
    pub fn square_difference_coefficients(&self) -> (f64, f64, f64) {
        (
            self.a1 * self.a1 - self.a2 * self.a2,
            -2.0 * (self.a1 * self.b1 - self.a2 * self.b2),
            self.b1 * self.b1 - self.b2 * self.b2,
        )
    }

    pub fn derived_coefficients(&self, e: f64, n: usize) -> DerivedCoefficients {
        let a = self.a();
        let c = self.c(e);
        let k = self.k(e);
        DerivedCoefficients {
            a,
            c,
            k,
            c_diagnostic: self.c_diagnostic(),
            epsilon_n: c.map(|c| nonrel_epsilon_from(c, k, n)),
            index_domain_ok: c.is_some(),
        }
    }

    pub fn admissibility(&self, e: f64) -> AdmissibilityReport {
        AdmissibilityReport::evaluate(self, e)
    }
}

impl fmt::Display for PotentialParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m={} A1={} B1={} A2={} B2={}",
            self.m, self.a1, self.b1, self.a2, self.b2
        )
    }
}

/// `(V_S, V_V, V_eff)` at one radius, with `V_eff = 2mV_S + 2EV_V + V_S² − V_V²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potentials {
    pub scalar: f64,
    pub vector: f64,
    pub effective: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCoefficients {
    pub a: Option<f64>,
    pub c: Option<f64>,
    pub k: f64,
    pub c_diagnostic: Option<f64>,
    pub epsilon_n: Option<f64>,
    pub index_domain_ok: bool,
}

pub(crate) fn nonrel_epsilon_from(c: f64, k: f64, n: usize) -> f64 {
    let d = n as f64 + c + 1.0;
    -k * k / (4.0 * d * d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Admissible,
    Boundary,
    Inadmissible,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Admissible => "admissible",
            Verdict::Boundary => "boundary",
            Verdict::Inadmissible => "inadmissible",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub a_real: bool,
    pub c_value: Option<f64>,
    pub c_nonnegative: bool,
    pub k_positive: bool,
    pub energy_subluminal: bool,
    pub sqrt_domain_ok: bool,
    /// `A₁ > A₂` and `|B₁| < |B₂|`. Advisory: never affects the verdict.
    pub scalar_dominance: bool,
    pub overall: Verdict,
    pub reasons: Vec<String>,
    pub warnings: Vec<String>,
}

impl AdmissibilityReport {
    fn evaluate(p: &PotentialParams, e: f64) -> Self {
        let mut reasons = Vec::new();
        let mut warnings = Vec::new();
        if p.validate().is_err() || !e.is_finite() {
            reasons.push("parameters or energy not finite / mass not positive".to_string());
        }

        let a = p.a();
        let c = p.c(e);
        let k = p.k(e);
        let a_real = a.is_some();
        let sqrt_domain_ok = p.index_radicand(e) >= 0.0;
        let c_nonnegative = c.is_some_and(|c| c >= 0.0);
        let k_positive = k > 0.0;
        let energy_subluminal = e * e < p.m * p.m;
        let scalar_dominance = p.a1 > p.a2 && p.b1.abs() < p.b2.abs();

        if !a_real {
            reasons.push(format!("a imaginary: A1^2 < A2^2 ({} < {})", p.a1 * p.a1, p.a2 * p.a2));
        }
        if !sqrt_domain_ok {
            reasons.push(format!("index radicand 1+8(mA1+EA2) = {} < 0", p.index_radicand(e)));
        }
        if !k_positive {
            reasons.push(format!("k = 2(mB1+EB2) = {k} is not positive"));
        }
        if !energy_subluminal {
            reasons.push(format!("E^2 >= m^2 (E={e}, m={})", p.m));
        }
        if !scalar_dominance {
            warnings.push("A1 > A2 and |B1| < |B2| does not hold".to_string());
        }

        let overall = if !reasons.is_empty() {
            Verdict::Inadmissible
        } else {
            // c ≥ −1/2 holds whenever the radicand is nonnegative.
            let c = c.unwrap_or_default();
            let mut boundary = Vec::new();
            if c < 0.0 {
                boundary.push(format!("c = {c} lies in [-1/2, 0)"));
            } else if c == 0.0 {
                boundary.push("c = 0".to_string());
            }
            if a == Some(0.0) {
                boundary.push("a = 0".to_string());
            }
            if boundary.is_empty() {
                Verdict::Admissible
            } else {
                reasons.extend(boundary);
                Verdict::Boundary
            }
        };

        Self {
            a_real,
            c_value: c,
            c_nonnegative,
            k_positive,
            energy_subluminal,
            sqrt_domain_ok,
            scalar_dominance,
            overall,
            reasons,
            warnings,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(m: f64, a1: f64, b1: f64, a2: f64, b2: f64) -> PotentialParams {
        PotentialParams::new(m, a1, b1, a2, b2).unwrap()
    }

    #[test]
    fn rejects_bad_mass_and_nonfinite() {
        assert!(PotentialParams::new(0.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(PotentialParams::new(-1.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(PotentialParams::new(1.0, f64::NAN, 0.0, 0.0, 0.0).is_err());
        assert!(PotentialParams::new(1.0, 0.0, f64::INFINITY, 0.0, 0.0).is_err());
    }

    #[test]
    fn coulomb_reduction() {
        let d = p(1.0, 0.0, 1.0, 0.0, 0.0).derived_coefficients(1.0, 0);
        assert_eq!(d.a, Some(0.0));
        assert_eq!(d.c, Some(0.0));
        assert_eq!(d.k, 2.0);
        assert_eq!(d.epsilon_n, Some(-1.0));
        assert_eq!(d.c_diagnostic, None);
    }

    #[test]
    fn perfect_square_radicand() {
        let d = p(1.0, 1.0, 0.5, 0.0, 0.0).derived_coefficients(0.5, 0);
        assert_eq!(d.a, Some(1.0));
        assert_eq!(d.c, Some(1.0));
        assert_eq!(d.k, 1.0);
    }

    #[test]
    fn three_four_five() {
        let pp = p(1.0, 5.0, 0.5, 3.0, 0.25);
        let d = pp.derived_coefficients(0.8, 0);
        assert_eq!(d.a, Some(4.0));
        assert_relative_eq!(d.c.unwrap(), 3.379_432_948_254_164_6, max_relative = 1e-14);
        assert_relative_eq!(d.k, 1.4, max_relative = 1e-15);
        let c = d.c.unwrap();
        assert_relative_eq!(c * (c + 1.0), 14.8, max_relative = 1e-12);
        // (A1B1 − A2B2)/a = (2.5 − 0.75)/4
        assert_relative_eq!(d.c_diagnostic.unwrap(), 0.4375, max_relative = 1e-15);
    }

    #[test]
    fn index_domain_flagged() {
        let d = p(1.0, -1.0, 0.0, 0.0, 0.0).derived_coefficients(0.0, 0);
        assert!(!d.index_domain_ok);
        assert_eq!(d.c, None);
        assert_eq!(d.epsilon_n, None);
    }

    #[test]
    fn potentials_examples() {
        let v = p(1.0, 1.0, 2.0, 0.0, 0.0).potentials_at(0.0, 1.0).unwrap();
        assert_eq!(v.scalar, -1.0);
        let v = p(1.0, 1.0, 1.0, 0.0, 0.0).potentials_at(0.0, 2.0).unwrap();
        assert_eq!(v.scalar, -0.25);
        let v = p(1.0, 0.0, 0.5, 0.0, 0.5).potentials_at(0.6, 1.0).unwrap();
        assert_relative_eq!(v.effective, -1.6, max_relative = 1e-15);
        assert!(p(1.0, 0.0, 0.0, 0.0, 0.0).potentials_at(0.0, 0.0).is_err());
        assert!(p(1.0, 0.0, 0.0, 0.0, 0.0).potentials_at(0.0, -1.0).is_err());
    }

    #[test]
    fn admissibility_examples() {
        let r = p(1.0, 0.0, 0.0, 1.0, 0.0).admissibility(0.3);
        assert!(!r.a_real);
        assert_eq!(r.overall, Verdict::Inadmissible);

        let r = p(1.0, 0.5, 0.5, 0.0, 0.0).admissibility(1.2);
        assert!(!r.energy_subluminal);
        assert_eq!(r.overall, Verdict::Inadmissible);

        let pp = p(1.0, 0.0, 0.5, 0.0, 0.5);
        let r = pp.admissibility(0.6);
        assert_relative_eq!(pp.k(0.6), 1.6, max_relative = 1e-15);
        assert_eq!(r.c_value, Some(0.0));
        assert_eq!(r.overall, Verdict::Boundary);
        assert!(r.reasons.iter().any(|s| s == "c = 0"));
        assert!(r.reasons.iter().any(|s| s == "a = 0"));
    }

    #[test]
    fn negative_index_is_boundary() {
        // mA1 + EA2 = -0.05 → c = -0.5 + √0.15 < 0
        let r = p(1.0, -0.05, 0.5, 0.05, 0.0).admissibility(0.0);
        assert!(r.a_real);
        assert_eq!(r.overall, Verdict::Boundary);
        assert!(!r.c_nonnegative);
    }

    #[test]
    fn pure_scalar_is_only_a_warning() {
        let r = p(1.0, 1.0, 0.5, 0.0, 0.0).admissibility(0.5);
        assert!(!r.scalar_dominance);
        assert_eq!(r.overall, Verdict::Admissible);
        assert_eq!(r.warnings.len(), 1);
    }
}
