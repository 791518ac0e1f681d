//! Bound-state energies: the implicit spectrum equation solved by scan and
//! bracketed refinement, the exact closed forms of its special cases, and the
//! truncated-series approximations.

use std::fmt;
use std::str::FromStr;

use crate::error::{KgError, Result};
use crate::model::{nonrel_epsilon_from, AdmissibilityReport, PotentialParams};
use crate::roots::{refine, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Particle,
    Antiparticle,
}

impl Branch {
    /// Particle iff `k(E) = 2(mB₁ + EB₂) > 0`.
    pub fn classify(params: &PotentialParams, e: f64) -> Self {
        if params.k(e) > 0.0 {
            Branch::Particle
        } else {
            Branch::Antiparticle
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Particle => "particle",
            Branch::Antiparticle => "antiparticle",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ImplicitRoot,
    ClosedForm,
    SeriesApprox,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ImplicitRoot => "implicit_root",
            Method::ClosedForm => "closed_form",
            Method::SeriesApprox => "series_approx",
            Method::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLevel {
    pub n: usize,
    pub energy: f64,
    pub branch: Branch,
    pub admissibility: AdmissibilityReport,
    pub method: Method,
    /// `|f(E)|` of the spectrum equation at `energy`.
    pub residual: f64,
    pub iterations: usize,
}

impl EnergyLevel {
    fn new(params: &PotentialParams, n: usize, e: f64, method: Method, iterations: usize) -> Self {
        let residual = spectrum_residual(params, n, e).map(f64::abs).unwrap_or(f64::INFINITY);
        Self {
            n,
            energy: e,
            branch: Branch::classify(params, e),
            admissibility: params.admissibility(e),
            method,
            residual,
            iterations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub scan_points: usize,
    /// Tolerance on `|f(E)|`, in units of m².
    pub root_tolerance: f64,
    /// Final bracket width, in units of m.
    pub bracket_tolerance: f64,
    pub max_iterations: usize,
    /// Exclusion margin at `E = ±m`, in units of m.
    pub energy_margin: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            scan_points: 2000,
            root_tolerance: 1e-12,
            bracket_tolerance: 1e-13,
            max_iterations: 200,
            energy_margin: 1e-9,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: &str| {
            Err(KgError::InvalidParameter {
                name,
                reason: reason.to_string(),
            })
        };
        if self.scan_points < 100 {
            return bad("scan_points", "must be at least 100");
        }
        if !(self.root_tolerance > 0.0) || !(self.bracket_tolerance > 0.0) {
            return bad("root_tolerance", "tolerances must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations", "must be positive");
        }
        if !(self.energy_margin > 0.0 && self.energy_margin < 1.0) {
            return bad("energy_margin", "must lie in (0, 1)");
        }
        Ok(())
    }
}

/// `f(E) = E² − m² + 4(mB₁ + EB₂)² / [2n + 1 + √(1 + 8(mA₁ + EA₂))]²`.
///
/// Zeros on `(−m, m)` are the bound-state energies of level `n`.
pub fn spectrum_residual(params: &PotentialParams, n: usize, e: f64) -> Result<f64> {
    let rad = params.index_radicand(e);
    if rad < 0.0 {
        return Err(KgError::Domain(format!(
            "1 + 8(mA1 + EA2) = {rad} < 0 at E = {e}"
        )));
    }
    Ok(residual_unchecked(params, n, e, rad))
}

fn residual_unchecked(p: &PotentialParams, n: usize, e: f64, rad: f64) -> f64 {
    let num = p.m * p.b1 + e * p.b2;
    let den = 2.0 * n as f64 + 1.0 + rad.sqrt();
    e * e - p.m * p.m + 4.0 * num * num / (den * den)
}

/// The part of `(−m+δ, m−δ)` where the index radicand is nonnegative.
fn search_interval(p: &PotentialParams, cfg: &SolverConfig) -> Option<(f64, f64)> {
    let mut lo = -p.m * (1.0 - cfg.energy_margin);
    let mut hi = p.m * (1.0 - cfg.energy_margin);
    let base = 1.0 + 8.0 * p.m * p.a1;
    if p.a2 == 0.0 {
        if base < 0.0 {
            return None;
        }
    } else {
        let crossing = -base / (8.0 * p.a2);
        if p.a2 > 0.0 {
            lo = lo.max(crossing);
        } else {
            hi = hi.min(crossing);
        }
    }
    (lo < hi).then_some((lo, hi))
}

fn scan_roots(
    p: &PotentialParams,
    n: usize,
    cfg: &SolverConfig,
    points: usize,
    (lo, hi): (f64, f64),
) -> Result<Vec<(f64, usize)>> {
    // inside the search interval the radicand can only be negative by roundoff
    let f = |e: f64| residual_unchecked(p, n, e, p.index_radicand(e).max(0.0));
    let tol = Tolerances {
        f_tol: cfg.root_tolerance * p.m * p.m,
        x_tol: cfg.bracket_tolerance * p.m,
        max_iterations: cfg.max_iterations,
    };

    let step = (hi - lo) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points)
        .map(|i| if i + 1 == points { hi } else { lo + step * i as f64 })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&e| f(e)).collect();

    let mut roots = Vec::new();
    for i in 0..points {
        if values[i] == 0.0 {
            roots.push((grid[i], 0));
            continue;
        }
        if i + 1 < points && values[i + 1] != 0.0 && values[i].signum() != values[i + 1].signum() {
            let r = refine(f, grid[i], grid[i + 1], tol)?;
            if r.fx.abs() > tol.f_tol {
                return Err(KgError::Convergence {
                    lo: r.lo,
                    hi: r.hi,
                    iterations: r.iterations,
                });
            }
            roots.push((r.x, r.iterations));
        }
    }
    Ok(roots)
}

/// All zeros of the spectrum equation for level `n` inside `(−m, m)`.
pub fn solve_levels(params: &PotentialParams, n: usize, cfg: &SolverConfig) -> Result<Vec<EnergyLevel>> {
    params.validate()?;
    cfg.validate()?;
    let Some(interval) = search_interval(params, cfg) else {
        return Ok(Vec::new());
    };

    let merge = 10.0 * cfg.root_tolerance * params.m;
    let mut points = cfg.scan_points;
    let mut roots = scan_roots(params, n, cfg, points, interval)?;
    for _ in 0..3 {
        let merged = roots.windows(2).any(|w| (w[1].0 - w[0].0).abs() <= merge);
        if !merged {
            break;
        }
        points *= 2;
        roots = scan_roots(params, n, cfg, points, interval)?;
    }
    roots.dedup_by(|b, a| (b.0 - a.0).abs() <= merge);

    Ok(roots
        .into_iter()
        .map(|(e, it)| EnergyLevel::new(params, n, e, Method::ImplicitRoot, it))
        .collect())
}

#[derive(Debug, Clone, Default)]
pub struct SpectrumTable {
    /// Ordered by `(n, branch, E)`.
    pub levels: Vec<EnergyLevel>,
    pub failures: Vec<(usize, KgError)>,
}

impl SpectrumTable {
    pub fn branch(&self, branch: Branch) -> impl Iterator<Item = &EnergyLevel> {
        self.levels.iter().filter(move |l| l.branch == branch)
    }
}

pub fn solve_spectrum(params: &PotentialParams, n_max: usize, cfg: &SolverConfig) -> SpectrumTable {
    let mut table = SpectrumTable::default();
    for n in 0..=n_max {
        match solve_levels(params, n, cfg) {
            Ok(levels) => table.levels.extend(levels),
            Err(e) => table.failures.push((n, e)),
        }
    }
    table.levels.sort_by(|x, y| {
        (x.n, x.branch)
            .cmp(&(y.n, y.branch))
            .then(x.energy.total_cmp(&y.energy))
    });
    table
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedFormCase {
    /// `A₁ = A₂ = 0`, both signs of the quadratic.
    CoulombGeneral,
    /// `A₂ = B₂ = 0`, symmetric pair.
    PureScalar,
    /// `A₁ = B₁ = A₂ = 0`.
    PureVectorCoulomb,
    /// `V_V = V_S` with `A₁ = 0`.
    Equal,
    /// `V_V = −V_S` with `A₁ = 0`.
    Opposite,
}

impl ClosedFormCase {
    pub const ALL: [ClosedFormCase; 5] = [
        ClosedFormCase::CoulombGeneral,
        ClosedFormCase::PureScalar,
        ClosedFormCase::PureVectorCoulomb,
        ClosedFormCase::Equal,
        ClosedFormCase::Opposite,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClosedFormCase::CoulombGeneral => "coulomb_general",
            ClosedFormCase::PureScalar => "pure_scalar",
            ClosedFormCase::PureVectorCoulomb => "pure_vector_coulomb",
            ClosedFormCase::Equal => "equal",
            ClosedFormCase::Opposite => "opposite",
        }
    }

    pub fn check(self, p: &PotentialParams) -> Result<()> {
        let case = self.as_str();
        let fail = |constraint| Err(KgError::StructuralConstraint { case, constraint });
        match self {
            ClosedFormCase::CoulombGeneral => {
                if p.a1 != 0.0 || p.a2 != 0.0 {
                    return fail("A1 = A2 = 0");
                }
            }
            ClosedFormCase::PureScalar => {
                if p.a2 != 0.0 || p.b2 != 0.0 {
                    return fail("A2 = B2 = 0");
                }
            }
            ClosedFormCase::PureVectorCoulomb => {
                if p.a1 != 0.0 || p.b1 != 0.0 || p.a2 != 0.0 {
                    return fail("A1 = B1 = A2 = 0");
                }
            }
            ClosedFormCase::Equal => {
                if p.a2 != p.a1 || p.b2 != p.b1 {
                    return fail("A2 = A1, B2 = B1");
                }
                if p.a1 != 0.0 {
                    return fail("A1 = 0");
                }
            }
            ClosedFormCase::Opposite => {
                if p.a2 != -p.a1 || p.b2 != -p.b1 {
                    return fail("A2 = -A1, B2 = -B1");
                }
                if p.a1 != 0.0 {
                    return fail("A1 = 0");
                }
            }
        }
        Ok(())
    }
}

impl FromStr for ClosedFormCase {
    type Err = KgError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| KgError::InvalidParameter {
                name: "case",
                reason: format!("unknown closed-form case {s:?}"),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClosedForm {
    /// Real energies strictly inside `(−m, m)`.
    pub energies: Vec<f64>,
    /// One entry per value dropped as complex or outside `(−m, m)`.
    pub notes: Vec<String>,
}

impl ClosedForm {
    fn push(&mut self, m: f64, label: &str, e: f64) {
        if !e.is_finite() {
            self.notes.push(format!("{label}: complex or undefined value dropped"));
        } else if e.abs() >= m {
            self.notes.push(format!("{label}: E = {e} outside (-m, m) dropped"));
        } else {
            self.energies.push(e);
        }
    }
}

/// Exact special-case energies of the spectrum equation.
pub fn closed_form(params: &PotentialParams, n: usize, case: ClosedFormCase) -> Result<ClosedForm> {
    params.validate()?;
    case.check(params)?;
    let m = params.m;
    let nu = n as f64 + 1.0;
    let nu2 = nu * nu;
    let mut out = ClosedForm::default();
    match case {
        ClosedFormCase::CoulombGeneral => {
            let (b1, b2) = (params.b1, params.b2);
            let disc = 1.0 - (b1 * b1 - b2 * b2) / nu2;
            let den = 1.0 + b2 * b2 / nu2;
            if disc < 0.0 {
                out.notes.push(format!("discriminant {disc} < 0: no real energies"));
            } else {
                let s = disc.sqrt();
                out.push(m, "+ root", m * (-b1 * b2 / nu2 + s) / den);
                out.push(m, "- root", m * (-b1 * b2 / nu2 - s) / den);
            }
        }
        ClosedFormCase::PureScalar => {
            let rad = 1.0 + 8.0 * m * params.a1;
            if rad < 0.0 {
                out.notes.push(format!("1 + 8mA1 = {rad} < 0: no real energies"));
            } else {
                let d = 2.0 * n as f64 + 1.0 + rad.sqrt();
                let inner = 1.0 - 4.0 * params.b1 * params.b1 / (d * d);
                if inner < 0.0 {
                    out.notes.push(format!("1 - 4B1^2/d^2 = {inner} < 0: no real energies"));
                } else {
                    let e = m * inner.sqrt();
                    out.push(m, "+ root", e);
                    out.push(m, "- root", -e);
                }
            }
        }
        ClosedFormCase::PureVectorCoulomb => {
            let e = m / (1.0 + params.b2 * params.b2 / nu2).sqrt();
            out.push(m, "+ root", e);
            out.push(m, "- root", -e);
        }
        ClosedFormCase::Equal => {
            let b = params.b1 * params.b1;
            out.push(m, "particle", m * (nu2 - b) / (nu2 + b));
        }
        ClosedFormCase::Opposite => {
            let b = params.b1 * params.b1;
            out.push(m, "antiparticle", -m * (nu2 - b) / (nu2 + b));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesCase {
    /// `A₁ = B₁ = 0`.
    PureVectorSeries,
    /// `V_V = V_S`.
    EqualSeries,
    /// `V_V = −V_S`; reproduced verbatim, including its divergence as B₁ → 0.
    OppositeSeries,
}

impl SeriesCase {
    pub const ALL: [SeriesCase; 3] = [
        SeriesCase::PureVectorSeries,
        SeriesCase::EqualSeries,
        SeriesCase::OppositeSeries,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SeriesCase::PureVectorSeries => "pure_vector_series",
            SeriesCase::EqualSeries => "equal_series",
            SeriesCase::OppositeSeries => "opposite_series",
        }
    }
}

impl FromStr for SeriesCase {
    type Err = KgError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| KgError::InvalidParameter {
                name: "case",
                reason: format!("unknown series case {s:?}"),
            })
    }
}

/// Truncated power-series energies, evaluated exactly as reported.
///
/// These are approximations; the opposite-potential series in particular does
/// not approach `−m` as B₁ → 0.
pub fn approx_energy(params: &PotentialParams, n: usize, case: SeriesCase) -> Result<f64> {
    params.validate()?;
    let p = params;
    let m = p.m;
    let nu = n as f64 + 1.0;
    let fail = |constraint| {
        Err(KgError::StructuralConstraint {
            case: case.as_str(),
            constraint,
        })
    };
    match case {
        SeriesCase::PureVectorSeries => {
            if p.a1 != 0.0 || p.b1 != 0.0 {
                return fail("A1 = B1 = 0");
            }
            let d = nu + 2.0 * m * p.a2;
            if d == 0.0 {
                return Err(KgError::Domain("n + 1 + 2mA2 = 0".into()));
            }
            Ok(m * (1.0 - p.b2 * p.b2 / (2.0 * d * d)))
        }
        SeriesCase::EqualSeries => {
            if p.a2 != p.a1 || p.b2 != p.b1 {
                return fail("A2 = A1, B2 = B1");
            }
            let rad = 1.0 + 16.0 * m * p.a1;
            if rad < 0.0 {
                return Err(KgError::Domain(format!("1 + 16mA1 = {rad} < 0")));
            }
            let d = 2.0 * n as f64 + 1.0 + rad.sqrt();
            Ok(m - 8.0 * m * p.b1 * p.b1 / (d * d))
        }
        SeriesCase::OppositeSeries => {
            if p.a2 != -p.a1 || p.b2 != -p.b1 {
                return fail("A2 = -A1, B2 = -B1");
            }
            if p.b1 == 0.0 {
                return Err(KgError::Domain("division by zero: B1 = 0".into()));
            }
            Ok(-m * (2.0 * nu * nu / (p.b1 * p.b1) - 1.0))
        }
    }
}

/// Nonrelativistic binding energy `ε_n = −k²/(4(n + c + 1)²)` at energy `e`.
pub fn nonrel_epsilon(params: &PotentialParams, e: f64, n: usize) -> Result<f64> {
    let c = params
        .c(e)
        .ok_or_else(|| KgError::Domain(format!("index c undefined at E = {e}")))?;
    Ok(nonrel_epsilon_from(c, params.k(e), n))
}

/// `ε_n` from an explicit index and Coulomb strength.
pub fn epsilon_from_index(c: f64, k: f64, n: usize) -> f64 {
    nonrel_epsilon_from(c, k, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(m: f64, a1: f64, b1: f64, a2: f64, b2: f64) -> PotentialParams {
        PotentialParams::new(m, a1, b1, a2, b2).unwrap()
    }

    fn energies(levels: &[EnergyLevel]) -> Vec<f64> {
        levels.iter().map(|l| l.energy).collect()
    }

    #[test]
    fn residual_examples() {
        let pv = p(1.0, 0.0, 0.0, 0.0, 1.0);
        assert_eq!(spectrum_residual(&pv, 0, 0.0).unwrap(), -1.0);
        assert!(spectrum_residual(&pv, 0, 0.5f64.sqrt()).unwrap().abs() < 1e-12);
        for q in [p(1.0, 0.3, 0.2, -0.1, 0.7), p(1.0, 2.0, -0.9, 1.0, 0.9)] {
            assert!(spectrum_residual(&q, 0, 1.0).unwrap() >= 0.0);
        }
        assert!(spectrum_residual(&p(1.0, 0.0, 0.0, 1.0, 0.0), 0, -0.5).is_err());
    }

    #[test]
    fn pure_vector_coulomb_pair() {
        let pv = p(1.0, 0.0, 0.0, 0.0, 1.0);
        let levels = solve_levels(&pv, 0, &SolverConfig::default()).unwrap();
        let e = energies(&levels);
        assert_eq!(e.len(), 2);
        let r = 0.5f64.sqrt();
        assert_relative_eq!(e[0], -r, max_relative = 1e-12);
        assert_relative_eq!(e[1], r, max_relative = 1e-12);
        assert_eq!(levels[1].branch, Branch::Particle);
        assert!(levels[1].admissibility.k_positive);
        assert_eq!(levels[0].branch, Branch::Antiparticle);
    }

    #[test]
    fn mixed_coulomb_branches() {
        let pp = p(1.0, 0.0, 0.6, 0.0, 0.8);
        let levels = solve_levels(&pp, 0, &SolverConfig::default()).unwrap();
        assert_eq!(levels.len(), 2);
        // quadratic formula: (−0.48 ± √1.28)/1.64
        let plus = (-0.48 + 1.28f64.sqrt()) / 1.64;
        let minus = (-0.48 - 1.28f64.sqrt()) / 1.64;
        assert_relative_eq!(levels[0].energy, minus, max_relative = 1e-12);
        assert_relative_eq!(levels[1].energy, plus, max_relative = 1e-12);
        assert_relative_eq!(levels[0].energy, -0.982543, epsilon = 1e-6);
        assert_relative_eq!(levels[1].energy, 0.397178, epsilon = 1e-6);
        assert_eq!(levels[0].branch, Branch::Antiparticle);
        assert_relative_eq!(pp.k(levels[0].energy), -0.372, epsilon = 1e-3);
        assert_eq!(levels[1].branch, Branch::Particle);
    }

    #[test]
    fn equal_potentials_single_root() {
        let pp = p(1.0, 0.0, 0.5, 0.0, 0.5);
        let levels = solve_levels(&pp, 0, &SolverConfig::default()).unwrap();
        assert_eq!(levels.len(), 1);
        assert_relative_eq!(levels[0].energy, 0.6, max_relative = 1e-12);
        assert!(levels[0].residual < 1e-12);
    }

    #[test]
    fn spectrum_table_examples() {
        let cfg = SolverConfig::default();
        let t = solve_spectrum(&p(1.0, 0.0, 0.5, 0.0, 0.5), 2, &cfg);
        assert!(t.failures.is_empty());
        let e: Vec<f64> = t.levels.iter().map(|l| l.energy).collect();
        let expect = [0.6, 3.75 / 4.25, 8.75 / 9.25];
        assert_eq!(e.len(), 3);
        for (x, y) in e.iter().zip(expect) {
            assert_relative_eq!(*x, y, max_relative = 1e-12);
        }

        for a in [0.0, 0.7, 2.0] {
            let t = solve_spectrum(&p(1.0, a, 0.0, a / 2.0, 0.0), 3, &cfg);
            assert!(t.levels.is_empty());
        }

        let t = solve_spectrum(&p(1.0, 0.0, 0.5, 0.0, 0.0), 0, &cfg);
        let e: Vec<f64> = t.levels.iter().map(|l| l.energy).collect();
        assert_eq!(e.len(), 2);
        let s = 0.75f64.sqrt();
        assert_relative_eq!(e[0], -s, max_relative = 1e-12);
        assert_relative_eq!(e[1], s, max_relative = 1e-12);
        // k = 2mB1 does not depend on E, so both roots carry the same label
        assert!(t.levels.iter().all(|l| l.branch == Branch::Particle));
    }

    #[test]
    fn radicand_split_interval() {
        // 1 + 8(mA1 + EA2) = 0.5 + 4E crosses zero at E = -0.125
        let pp = p(1.0, -0.0625, 0.4, 0.5, 0.3);
        let (lo, hi) = search_interval(&pp, &SolverConfig::default()).unwrap();
        assert_eq!(lo, -0.125);
        assert!(hi < 1.0);
        for l in solve_levels(&pp, 0, &SolverConfig::default()).unwrap() {
            assert!(l.energy >= lo);
            assert!(pp.index_radicand(l.energy) >= 0.0);
        }
    }

    #[test]
    fn empty_domain() {
        let pp = p(1.0, -1.0, 0.5, 0.0, 0.5);
        assert!(solve_levels(&pp, 0, &SolverConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn bad_config() {
        let cfg = SolverConfig { scan_points: 10, ..Default::default() };
        assert!(solve_levels(&p(1.0, 0.0, 0.5, 0.0, 0.5), 0, &cfg).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let c = closed_form(&p(1.0, 0.0, 0.5, 0.0, 0.0), 0, ClosedFormCase::PureScalar).unwrap();
        let s = 0.75f64.sqrt();
        assert_eq!(c.energies, vec![s, -s]);

        let c = closed_form(&p(1.0, 0.0, 0.5, 0.0, -0.5), 0, ClosedFormCase::Opposite).unwrap();
        assert_relative_eq!(c.energies[0], -0.6, max_relative = 1e-15);

        let c = closed_form(&p(1.0, 0.0, 0.6, 0.0, 0.8), 0, ClosedFormCase::CoulombGeneral).unwrap();
        assert_relative_eq!(c.energies[0], 0.397178, epsilon = 1e-6);
        assert_relative_eq!(c.energies[1], -0.982543, epsilon = 1e-6);

        let c = closed_form(&p(1.0, 0.0, 0.0, 0.0, 1.0), 0, ClosedFormCase::PureVectorCoulomb).unwrap();
        assert_relative_eq!(c.energies[0], 0.5f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn closed_form_filters_with_note() {
        // B1 = 0: equal-case energy is exactly m
        let c = closed_form(&p(1.0, 0.0, 0.0, 0.0, 0.0), 0, ClosedFormCase::Equal).unwrap();
        assert!(c.energies.is_empty());
        assert_eq!(c.notes.len(), 1);
        // |B1| > ν with B2 = 0: negative discriminant
        let c = closed_form(&p(1.0, 0.0, 1.5, 0.0, 0.0), 0, ClosedFormCase::CoulombGeneral).unwrap();
        assert!(c.energies.is_empty());
        assert!(!c.notes.is_empty());
    }

    #[test]
    fn closed_form_constraints() {
        let err = closed_form(&p(1.0, 0.1, 0.5, 0.1, 0.5), 0, ClosedFormCase::Equal).unwrap_err();
        assert!(matches!(err, KgError::StructuralConstraint { constraint: "A1 = 0", .. }));
        let err = closed_form(&p(1.0, 0.1, 0.5, 0.0, 0.0), 0, ClosedFormCase::CoulombGeneral).unwrap_err();
        assert!(matches!(err, KgError::StructuralConstraint { .. }));
        assert!(closed_form(&p(1.0, 0.0, 0.5, 0.0, 0.4), 0, ClosedFormCase::Opposite).is_err());
        assert!(closed_form(&p(1.0, 0.0, 0.1, 0.0, 0.4), 0, ClosedFormCase::PureVectorCoulomb).is_err());
        assert!(closed_form(&p(1.0, 0.0, 0.1, 0.0, 0.4), 0, ClosedFormCase::PureScalar).is_err());
    }

    #[test]
    fn series_examples() {
        let e = approx_energy(&p(1.0, 0.0, 0.0, 0.1, 0.2), 0, SeriesCase::PureVectorSeries).unwrap();
        assert_relative_eq!(e, 1.0 - 0.04 / 2.88, max_relative = 1e-15);
        assert_relative_eq!(e, 0.9861111, epsilon = 1e-7);

        let e = approx_energy(&p(1.0, 0.0, 0.1, 0.0, 0.1), 0, SeriesCase::EqualSeries).unwrap();
        assert_relative_eq!(e, 0.98, max_relative = 1e-15);
        let exact = closed_form(&p(1.0, 0.0, 0.1, 0.0, 0.1), 0, ClosedFormCase::Equal).unwrap();
        assert_relative_eq!(exact.energies[0], 0.99 / 1.01, max_relative = 1e-15);

        let b = 2f64.sqrt();
        let e = approx_energy(&p(1.0, 0.0, b, 0.0, -b), 0, SeriesCase::OppositeSeries).unwrap();
        assert!(e.abs() < 1e-15);
        let exact = closed_form(&p(1.0, 0.0, b, 0.0, -b), 0, ClosedFormCase::Opposite).unwrap();
        assert_relative_eq!(exact.energies[0], 1.0 / 3.0, max_relative = 1e-15);

        assert!(approx_energy(&p(1.0, 0.0, 0.0, 0.0, 0.0), 0, SeriesCase::OppositeSeries).is_err());
        assert!(approx_energy(&p(1.0, 0.1, 0.0, 0.0, 0.2), 0, SeriesCase::PureVectorSeries).is_err());
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_from_index(0.0, 2.0, 0), -1.0);
        assert_eq!(epsilon_from_index(1.0, 1.0, 0), -0.0625);
        let mut prev = epsilon_from_index(0.7, 1.3, 0);
        for n in 1..200 {
            let e = epsilon_from_index(0.7, 1.3, n);
            assert!(e > prev && e < 0.0);
            prev = e;
        }
        assert_eq!(nonrel_epsilon(&p(1.0, 0.0, 1.0, 0.0, 0.0), 1.0, 0).unwrap(), -1.0);
        assert!(nonrel_epsilon(&p(1.0, -1.0, 1.0, 0.0, 0.0), 0.0, 0).is_err());
    }

    #[test]
    fn case_names_round_trip() {
        for c in ClosedFormCase::ALL {
            assert_eq!(c.as_str().parse::<ClosedFormCase>().unwrap(), c);
        }
        for c in SeriesCase::ALL {
            assert_eq!(c.as_str().parse::<SeriesCase>().unwrap(), c);
        }
        assert!("bogus".parse::<SeriesCase>().is_err());
    }
}
