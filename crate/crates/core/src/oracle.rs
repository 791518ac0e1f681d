//! Direct shooting solver for the radial Klein-Gordon equation
//!
//! ```text
//! ψ'' = U(r) ψ,   U(r) = (m + V_S)² − (E − V_V)²
//! ```
//!
//! This module deliberately ignores the separated ansatz: the behaviour at the
//! origin, the seeds and all indices are recomputed from the Laurent expansion
//! of `U` itself, so the oracle can disagree with the closed forms. The only
//! thing it takes from the implicit spectrum is an optional bracket hint.

use std::cell::RefCell;

use crate::error::{KgError, Result};
use crate::model::PotentialParams;
use crate::ode::{self, StepControl};
use crate::roots::{refine, Tolerances};
use crate::spectrum::{solve_levels, Branch, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusRule {
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    /// Auto: `α/30` for an `e^{−α/r}` origin, `g₃/900` for `e^{−2√(g₃/r)}`,
    /// otherwise `10⁻⁴` of the shortest Coulomb/decay length.
    pub r_min: RadiusRule,
    /// Auto: `max(50/κ, 10 r_turn)`.
    pub r_max: RadiusRule,
    /// Auto: interior minimum of `U`, else the outer classical turning point.
    pub match_radius: RadiusRule,
    /// The step size never exceeds `(r_max − r_min)/steps`.
    pub steps: usize,
    pub integrator_tolerance: f64,
    /// Largest accepted `|defect|` at a returned eigenvalue.
    pub defect_tolerance: f64,
    /// Initial number of trial energies when scanning a bracket.
    pub scan_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            r_min: RadiusRule::Auto,
            r_max: RadiusRule::Auto,
            match_radius: RadiusRule::Auto,
            steps: 2000,
            integrator_tolerance: 1e-10,
            defect_tolerance: 1e-4,
            scan_points: 48,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: String| Err(KgError::InvalidParameter { name, reason });
        if self.steps < 1000 {
            return bad("steps", format!("must be at least 1000, got {}", self.steps));
        }
        if !(self.integrator_tolerance > 0.0) || !(self.defect_tolerance > 0.0) {
            return bad("integrator_tolerance", "tolerances must be positive".into());
        }
        if self.scan_points < 4 {
            return bad("scan_points", "must be at least 4".into());
        }
        for (name, rule) in [("r_min", self.r_min), ("r_max", self.r_max), ("match_radius", self.match_radius)] {
            if let RadiusRule::Fixed(r) = rule {
                if !(r > 0.0 && r.is_finite()) {
                    return bad(name, format!("fixed radius must be positive, got {r}"));
                }
            }
        }
        Ok(())
    }
}

/// Leading behaviour of the regular solution as `r → 0⁺`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OriginBehavior {
    /// `ψ'/ψ ≈ α/r² + β/r + γ` (repulsive r⁻⁴ term).
    Quartic { alpha: f64, beta: f64, gamma: f64 },
    /// `ψ'/ψ ≈ α r^{−3/2} + 3/(4r)` (repulsive r⁻³ term, no r⁻⁴).
    Cubic { alpha: f64 },
    /// `ψ ≈ r^{s+1}`, `s(s+1) = g₂`.
    Power { s: f64 },
}

/// `U(r)` for one energy, as the product of two quadratics in `x = 1/r`:
///
/// `(m − E − (B₁+B₂)x + (A₁+A₂)x²) · (m + E − (B₁−B₂)x + (A₁−A₂)x²)`.
///
/// The factored form keeps `U` free of cancellation when `V_V = ±V_S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KleinGordonOperator {
    pub energy: f64,
    minus: [f64; 3],
    plus: [f64; 3],
    /// Laurent coefficients `u[j]` of `r^{−j}`.
    pub laurent: [f64; 5],
}

impl KleinGordonOperator {
    pub fn new(p: &PotentialParams, e: f64) -> Self {
        let minus = [p.m - e, -(p.b1 + p.b2), p.a1 + p.a2];
        let plus = [p.m + e, -(p.b1 - p.b2), p.a1 - p.a2];
        let mut laurent = [0.0; 5];
        for (i, x) in minus.iter().enumerate() {
            for (j, y) in plus.iter().enumerate() {
                laurent[i + j] += x * y;
            }
        }
        Self { energy: e, minus, plus, laurent }
    }

    pub fn u(&self, r: f64) -> f64 {
        let x = 1.0 / r;
        let q = |c: &[f64; 3]| c[0] + x * (c[1] + x * c[2]);
        q(&self.minus) * q(&self.plus)
    }

    /// `κ² = m² − E²`
    pub fn kappa_squared(&self) -> f64 {
        self.laurent[0]
    }

    pub fn origin(&self) -> Result<OriginBehavior> {
        let [_, _, g2, g3, g4] = self.laurent;
        if g4 < 0.0 {
            return Err(KgError::FallToCenter(format!(
                "attractive r^-4 term (coefficient {g4})"
            )));
        }
        if g4 > 0.0 {
            let alpha = g4.sqrt();
            let beta = 1.0 + g3 / (2.0 * alpha);
            let gamma = (g2 - beta * beta + beta) / (2.0 * alpha);
            return Ok(OriginBehavior::Quartic { alpha, beta, gamma });
        }
        if g3 < 0.0 {
            return Err(KgError::FallToCenter(format!(
                "attractive r^-3 term (coefficient {g3})"
            )));
        }
        if g3 > 0.0 {
            return Ok(OriginBehavior::Cubic { alpha: g3.sqrt() });
        }
        if g2 <= -0.25 {
            return Err(KgError::FallToCenter(format!(
                "r^-2 coefficient {g2} <= -1/4"
            )));
        }
        Ok(OriginBehavior::Power { s: -0.5 + (0.25 + g2).sqrt() })
    }

    fn auto_r_min(&self) -> Result<f64> {
        Ok(match self.origin()? {
            OriginBehavior::Quartic { alpha, .. } => alpha / 30.0,
            OriginBehavior::Cubic { alpha } => alpha * alpha / 900.0,
            OriginBehavior::Power { .. } => {
                let scale = self.laurent[1].abs().max(self.kappa_squared().abs().sqrt());
                if scale > 0.0 {
                    1e-4 / scale
                } else {
                    1e-4
                }
            }
        })
    }

    /// `ψ'/ψ` of the solution regular at the origin, evaluated at `r`.
    fn origin_log_derivative(&self, r: f64) -> Result<f64> {
        Ok(match self.origin()? {
            OriginBehavior::Quartic { alpha, beta, gamma } => alpha / (r * r) + beta / r + gamma,
            OriginBehavior::Cubic { alpha } => alpha * r.powf(-1.5) + 0.75 / r,
            OriginBehavior::Power { s } => {
                // Frobenius series ψ = r^{s+1} Σ d_j r^j
                let (u0, u1) = (self.laurent[0], self.laurent[1]);
                let (mut d_prev2, mut d_prev) = (0.0, 1.0);
                let (mut sum, mut dsum) = (1.0, 0.0);
                let mut rp = 1.0;
                for j in 1..200 {
                    let jf = j as f64;
                    let d = (u1 * d_prev + u0 * d_prev2) / (jf * (jf + 2.0 * s + 1.0));
                    dsum += jf * d * rp;
                    rp *= r;
                    let term = d * rp;
                    sum += term;
                    d_prev2 = d_prev;
                    d_prev = d;
                    if term.abs() < 1e-18 * sum.abs() && j > 2 {
                        break;
                    }
                }
                (s + 1.0) / r + dsum / sum
            }
        })
    }

    /// Largest radius below `r_hi` where `U` changes sign from negative to positive.
    fn outer_turning_point(&self, r_lo: f64, r_hi: f64) -> Option<f64> {
        let grid = log_space(r_lo, r_hi, 800);
        let last_negative = grid.iter().rposition(|&r| self.u(r) < 0.0)?;
        if last_negative + 1 == grid.len() {
            return Some(r_hi);
        }
        let (mut a, mut b) = (grid[last_negative], grid[last_negative + 1]);
        for _ in 0..100 {
            let mid = 0.5 * (a + b);
            if self.u(mid) < 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        Some(0.5 * (a + b))
    }

    /// Interior minimum of `U` on `(r_lo, r_hi)`, if the minimum is not at an end.
    fn interior_minimum(&self, r_lo: f64, r_hi: f64) -> Option<f64> {
        let grid = log_space(r_lo, r_hi, 800);
        let (i, _) = grid
            .iter()
            .map(|&r| self.u(r))
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        if i == 0 || i + 1 == grid.len() {
            return None;
        }
        // golden-section on the neighbouring cells
        let (mut a, mut b) = (grid[i - 1], grid[i + 1]);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let x1 = b - g * (b - a);
            let x2 = a + g * (b - a);
            if self.u(x1) < self.u(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        Some(0.5 * (a + b))
    }
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub r_min: f64,
    pub r_max: f64,
    pub r_match: f64,
}

/// Resolves the radial grid: origin and matching point at `e_center`, outer
/// boundary at `e_edge` (the trial energy with the slowest decay).
fn resolve_geometry(p: &PotentialParams, e_center: f64, e_edge: f64, grid: &GridConfig) -> Result<Geometry> {
    let center = KleinGordonOperator::new(p, e_center);
    let edge = KleinGordonOperator::new(p, e_edge);
    let r_min = match grid.r_min {
        RadiusRule::Fixed(r) => r,
        RadiusRule::Auto => center.auto_r_min()?,
    };
    let r_max = match grid.r_max {
        RadiusRule::Fixed(r) => r,
        RadiusRule::Auto => {
            let kappa = edge.kappa_squared().sqrt();
            let reach = 50.0 / kappa;
            let turn = edge.outer_turning_point(r_min, 20.0 * reach).unwrap_or(0.0);
            reach.max(10.0 * turn)
        }
    };
    if !(r_max > r_min) {
        return Err(KgError::Domain(format!("r_max = {r_max} not above r_min = {r_min}")));
    }
    let r_match = match grid.match_radius {
        RadiusRule::Fixed(r) => r,
        RadiusRule::Auto => center
            .interior_minimum(r_min, r_max)
            .or_else(|| center.outer_turning_point(r_min, r_max))
            .unwrap_or_else(|| (r_min * r_max).sqrt()),
    };
    if !(r_match > r_min && r_match < r_max) {
        return Err(KgError::Domain(format!(
            "match radius {r_match} outside ({r_min}, {r_max})"
        )));
    }
    Ok(Geometry { r_min, r_max, r_match })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchDefect {
    /// Wronskian of the outward and inward solutions at the match radius,
    /// divided by the product of their phase-space magnitudes; lies in [−1, 1].
    pub defect: f64,
    /// Nodes of the outward solution on `(r_min, r_match)` plus nodes of the
    /// inward solution on `(r_match, r_max)`.
    pub node_count: usize,
    pub geometry: Geometry,
    pub origin: OriginBehavior,
}

fn shoot(p: &PotentialParams, e: f64, geo: &Geometry, grid: &GridConfig) -> Result<MatchDefect> {
    if !(e * e < p.m * p.m) {
        return Err(KgError::Domain(format!("E = {e} must satisfy E^2 < m^2")));
    }
    let op = KleinGordonOperator::new(p, e);
    let origin = op.origin()?;
    let kappa2 = op.kappa_squared();
    let ctl = StepControl {
        tolerance: grid.integrator_tolerance,
        max_step: (geo.r_max - geo.r_min) / grid.steps as f64,
        floor: kappa2,
    };
    let u = |r: f64| op.u(r);

    let seed_out = op.origin_log_derivative(geo.r_min)?;
    let out = ode::integrate(&u, geo.r_min, geo.r_match, 1.0, seed_out, ctl)?;

    let u_edge = op.u(geo.r_max);
    let seed_in = -(if u_edge > 0.0 { u_edge } else { kappa2 }).sqrt();
    let inw = ode::integrate(&u, geo.r_max, geo.r_match, 1.0, seed_in, ctl)?;

    let q = (op.u(geo.r_match).abs() + kappa2).sqrt();
    let rho = |psi: f64, dpsi: f64| (psi * psi + (dpsi / q) * (dpsi / q)).sqrt();
    let wronskian = out.psi * inw.dpsi - out.dpsi * inw.psi;
    let defect = wronskian / (q * rho(out.psi, out.dpsi) * rho(inw.psi, inw.dpsi));
    Ok(MatchDefect {
        defect,
        node_count: out.nodes + inw.nodes,
        geometry: *geo,
        origin,
    })
}

/// Matching defect at a single trial energy, with the grid resolved at `e`.
pub fn kg_match_defect(params: &PotentialParams, e: f64, grid: &GridConfig) -> Result<MatchDefect> {
    params.validate()?;
    grid.validate()?;
    let geo = resolve_geometry(params, e, e, grid)?;
    shoot(params, e, &geo, grid)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingResult {
    pub energy: f64,
    pub node_count: usize,
    pub match_defect: f64,
    /// Final refinement bracket.
    pub bracket: (f64, f64),
    pub grid: GridConfig,
    pub geometry: Geometry,
    pub origin: OriginBehavior,
    pub evaluations: usize,
}

/// Eigenvalue with exactly `n` nodes inside `bracket`.
///
/// The radial grid is fixed once for the whole bracket so the defect is a
/// continuous function of the trial energy.
pub fn kg_eigensolve(params: &PotentialParams, n: usize, bracket: (f64, f64), grid: &GridConfig) -> Result<ShootingResult> {
    params.validate()?;
    grid.validate()?;
    let m = params.m;
    let (lo, hi) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    if !(lo > -m && hi < m && lo < hi) {
        return Err(KgError::Domain(format!(
            "bracket [{lo}, {hi}] must be a nonempty subinterval of (-m, m)"
        )));
    }
    let e_edge = if hi.abs() > lo.abs() { hi } else { lo };
    let geo = resolve_geometry(params, 0.5 * (lo + hi), e_edge, grid)?;

    let evaluations = RefCell::new(0usize);
    let eval = |e: f64| {
        *evaluations.borrow_mut() += 1;
        shoot(params, e, &geo, grid)
    };

    let mut points = grid.scan_points;
    let mut found = None;
    for _ in 0..4 {
        let energies: Vec<f64> = (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect();
        let samples = energies
            .iter()
            .map(|&e| eval(e).map(|d| (e, d)))
            .collect::<Result<Vec<_>>>()?;
        let mut fallback = None;
        for w in samples.windows(2) {
            let ((e0, d0), (e1, d1)) = (w[0], w[1]);
            if d0.defect.signum() == d1.defect.signum() && d0.defect != 0.0 && d1.defect != 0.0 {
                continue;
            }
            if d0.node_count == n && d1.node_count == n {
                found = Some((e0, e1));
                break;
            }
            if fallback.is_none() && (d0.node_count == n || d1.node_count == n) {
                fallback = Some((e0, e1));
            }
        }
        found = found.or(fallback);
        if found.is_some() {
            break;
        }
        points = 2 * points - 1;
    }
    let Some((a, b)) = found else {
        return Err(KgError::NoEigenvalue { nodes: n, lo, hi });
    };

    let failure = RefCell::new(None);
    let defect = |e: f64| match eval(e) {
        Ok(d) => d.defect,
        Err(err) => {
            failure.borrow_mut().get_or_insert(err);
            0.0
        }
    };
    let root = refine(
        defect,
        a,
        b,
        Tolerances {
            f_tol: f64::INFINITY,
            x_tol: 1e-8 * m,
            max_iterations: 200,
        },
    )?;
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }

    let fin = eval(root.x)?;
    if fin.node_count != n {
        return Err(KgError::NoEigenvalue { nodes: n, lo: a, hi: b });
    }
    if fin.defect.abs() > grid.defect_tolerance {
        return Err(KgError::Convergence {
            lo: root.lo,
            hi: root.hi,
            iterations: root.iterations,
        });
    }
    let evaluations = evaluations.into_inner();
    Ok(ShootingResult {
        energy: root.x,
        node_count: fin.node_count,
        match_defect: fin.defect,
        bracket: (root.lo, root.hi),
        grid: *grid,
        geometry: geo,
        origin: fin.origin,
        evaluations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub e_implicit: f64,
    pub e_oracle: f64,
    pub deviation: f64,
    pub shooting: ShootingResult,
}

/// Compares the implicit-spectrum root of level `n` on `branch` with the
/// shooting eigenvalue found near it.
///
/// When the branch holds more than one root the one farthest from the
/// opposite continuum is used (largest E for particles, smallest for
/// antiparticles).
pub fn deviation_report(
    params: &PotentialParams,
    n: usize,
    branch: Branch,
    grid: &GridConfig,
    cfg: &SolverConfig,
) -> Result<Deviation> {
    let stage = |stage: &'static str| move |e: KgError| KgError::Stage { stage, source: Box::new(e) };
    let levels = solve_levels(params, n, cfg).map_err(stage("implicit"))?;
    let candidates = levels.iter().filter(|l| l.branch == branch).map(|l| l.energy);
    let e_implicit = match branch {
        Branch::Particle => candidates.fold(None, |acc: Option<f64>, e| Some(acc.map_or(e, |a| a.max(e)))),
        Branch::Antiparticle => candidates.fold(None, |acc: Option<f64>, e| Some(acc.map_or(e, |a| a.min(e)))),
    }
    .ok_or_else(|| {
        stage("implicit")(KgError::NoEigenvalue {
            nodes: n,
            lo: -params.m,
            hi: params.m,
        })
    })?;

    match eigensolve_near(params, n, e_implicit, grid) {
        Ok(shooting) => Ok(Deviation {
            e_implicit,
            e_oracle: shooting.energy,
            deviation: (e_implicit - shooting.energy).abs(),
            shooting,
        }),
        Err(e) => Err(stage("oracle")(e)),
    }
}

/// Shooting eigenvalue with `n` nodes near `e_hint`.
///
/// The search bracket is `e_hint ± (m − |e_hint|)/2`, clipped to the mass
/// shell and doubled up to three times while no eigenvalue is found.
pub fn eigensolve_near(params: &PotentialParams, n: usize, e_hint: f64, grid: &GridConfig) -> Result<ShootingResult> {
    params.validate()?;
    let m = params.m;
    if !(e_hint.abs() < m) {
        return Err(KgError::Domain(format!("hint E = {e_hint} outside (-m, m)")));
    }
    let limit = m * (1.0 - 1e-6);
    let mut half_width = 0.5 * (m - e_hint.abs());
    let mut last_err = None;
    for _ in 0..4 {
        let lo = (e_hint - half_width).max(-limit);
        let hi = (e_hint + half_width).min(limit);
        match kg_eigensolve(params, n, (lo, hi), grid) {
            Ok(shooting) => return Ok(shooting),
            Err(e @ KgError::NoEigenvalue { .. }) => {
                last_err = Some(e);
                half_width *= 2.0;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: f64, a1: f64, b1: f64, a2: f64, b2: f64) -> PotentialParams {
        PotentialParams::new(m, a1, b1, a2, b2).unwrap()
    }

    #[test]
    fn laurent_coefficients_match_direct_expansion() {
        let pp = p(1.3, 0.7, 0.4, -0.2, 0.9);
        let e = 0.35;
        let op = KleinGordonOperator::new(&pp, e);
        let [u0, u1, u2, u3, u4] = op.laurent;
        assert!((u0 - (1.3f64 * 1.3 - e * e)).abs() < 1e-15);
        assert!((u1 + 2.0 * (1.3 * 0.4 + e * 0.9)).abs() < 1e-15);
        let g2 = 2.0 * (1.3 * 0.7 + e * -0.2) + 0.4 * 0.4 - 0.9 * 0.9;
        assert!((u2 - g2).abs() < 1e-15);
        assert!((u3 + 2.0 * (0.7 * 0.4 - -0.2 * 0.9)).abs() < 1e-15);
        assert!((u4 - (0.49 - 0.04)).abs() < 1e-15);
        for r in [0.1, 1.0, 10.0] {
            let v = pp.potentials_at(e, r).unwrap();
            let direct = (1.3 + v.scalar).powi(2) - (e - v.vector).powi(2);
            assert!((op.u(r) - direct).abs() <= 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn fall_to_center_guard() {
        let op = KleinGordonOperator::new(&p(1.0, 0.0, 0.0, 0.0, 0.5), 0.5);
        assert!(matches!(op.origin(), Err(KgError::FallToCenter(_))));
        let op = KleinGordonOperator::new(&p(1.0, 0.0, 0.0, 0.0, 0.49), 0.5);
        assert!(matches!(op.origin(), Ok(OriginBehavior::Power { .. })));
        let op = KleinGordonOperator::new(&p(1.0, 0.1, 0.0, 0.3, 0.0), 0.5);
        assert!(matches!(op.origin(), Err(KgError::FallToCenter(_))));
        assert!(kg_match_defect(&p(1.0, 0.0, 0.0, 0.0, 0.7), 0.5, &GridConfig::default()).is_err());
    }

    #[test]
    fn quartic_origin_seed_is_wkb_consistent() {
        // residual of y' + y² = U for the three-term seed must be O(1/r) smaller
        // than the individual terms near the origin
        let pp = p(1.0, 1.0, 0.5, 0.3, 0.2);
        let op = KleinGordonOperator::new(&pp, 0.4);
        let r = 1e-3;
        let h = 1e-9;
        let y = |r| op.origin_log_derivative(r).unwrap();
        let dy = (y(r + h) - y(r - h)) / (2.0 * h);
        let lhs = dy + y(r) * y(r);
        assert!(((lhs - op.u(r)) / op.u(r)).abs() < 1e-2);
    }

    #[test]
    fn grid_validation() {
        let g = GridConfig { steps: 10, ..Default::default() };
        assert!(g.validate().is_err());
        let g = GridConfig { match_radius: RadiusRule::Fixed(-1.0), ..Default::default() };
        assert!(g.validate().is_err());
    }

    #[test]
    fn defect_brackets_equal_manifold_eigenvalue() {
        let pp = p(1.0, 0.0, 0.5, 0.0, 0.5);
        let g = GridConfig::default();
        let d = kg_match_defect(&pp, 0.6, &g).unwrap();
        assert!(d.defect.abs() < 1e-6, "{d:?}");
        assert_eq!(d.node_count, 0);
        let lo = kg_match_defect(&pp, 0.55, &g).unwrap();
        let hi = kg_match_defect(&pp, 0.65, &g).unwrap();
        assert!(lo.defect * hi.defect < 0.0, "{lo:?} {hi:?}");
    }

    #[test]
    fn equal_and_opposite_manifold_ground_states() {
        let g = GridConfig::default();
        let r = kg_eigensolve(&p(1.0, 0.0, 0.5, 0.0, 0.5), 0, (0.3, 0.8), &g).unwrap();
        assert!((r.energy - 0.6).abs() < 1e-6, "{r:?}");
        assert_eq!(r.node_count, 0);
        assert!(r.bracket.1 - r.bracket.0 < 2e-8);

        let r = kg_eigensolve(&p(1.0, 0.0, 0.5, 0.0, -0.5), 0, (-0.8, -0.3), &g).unwrap();
        assert!((r.energy + 0.6).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn bracket_outside_mass_shell() {
        let g = GridConfig::default();
        assert!(kg_eigensolve(&p(1.0, 0.0, 0.5, 0.0, 0.5), 0, (0.5, 1.0), &g).is_err());
    }

    #[test]
    fn empty_bracket_is_distinguishable() {
        let g = GridConfig::default();
        let err = kg_eigensolve(&p(1.0, 0.0, 0.5, 0.0, 0.5), 0, (0.7, 0.8), &g).unwrap_err();
        assert!(matches!(err, KgError::NoEigenvalue { nodes: 0, .. }), "{err:?}");
    }
}
