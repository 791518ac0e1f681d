//! Seeded verification suites.
//!
//! * `residuals`: random admissible couplings, ground-state residual algebra;
//! * `manifolds`: shooting oracle against the implicit spectrum where the
//!   ansatz is exact (`V_V = ±V_S`);
//! * `limits`: closed forms, series, symmetry, normalization and the
//!   Coulomb deviation trend.
//!
//! Every suite is deterministic for a given seed and case count.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{KgError, Result};
use crate::model::{PotentialParams, Verdict};
use crate::oracle::{deviation_report, GridConfig};
use crate::spectrum::{
    approx_energy, closed_form, solve_levels, spectrum_residual, Branch, ClosedFormCase, SeriesCase,
    SolverConfig,
};
use crate::wavefunction::{log_grid, residual_report, GroundState, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Residuals,
    Manifolds,
    Limits,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Residuals, Suite::Manifolds, Suite::Limits];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Residuals => "residuals",
            Suite::Manifolds => "manifolds",
            Suite::Limits => "limits",
        }
    }

    pub fn default_cases(self) -> usize {
        match self {
            Suite::Residuals => 200,
            Suite::Manifolds => 2,
            Suite::Limits => 20,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = KgError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| KgError::InvalidParameter {
                name: "suite",
                reason: format!("unknown suite {s:?}"),
            })
    }
}

/// One pass/fail line: the worst observed value against its threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub worst: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    fn below(name: &'static str, worst: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed: worst < threshold,
            worst,
            threshold,
            detail: detail.into(),
        }
    }

    fn flag(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed,
            worst: if passed { 0.0 } else { 1.0 },
            threshold: 1.0,
            detail: detail.into(),
        }
    }
}

/// Residual diagnostics of one sampled parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct AtlasEntry {
    pub params: PotentialParams,
    pub energy: f64,
    pub a: f64,
    pub c: f64,
    pub k: f64,
    pub m3: f64,
    pub m2: f64,
    pub on_exact_manifold: bool,
    pub c_diagnostic: Option<f64>,
    pub c_consistent: Option<f64>,
    pub max_eq3: f64,
    pub max_eq4_mismatch: f64,
    pub max_eq1_mismatch: f64,
    pub r4_cancellation: f64,
}

/// A reference value against a computed one.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub label: String,
    pub n: usize,
    pub expected: f64,
    pub observed: f64,
    pub difference: f64,
}

impl Comparison {
    fn new(label: impl Into<String>, n: usize, expected: f64, observed: f64) -> Self {
        Self {
            label: label.into(),
            n,
            expected,
            observed,
            difference: (observed - expected).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub cases: usize,
    pub checks: Vec<Check>,
    pub atlas: Vec<AtlasEntry>,
    pub comparisons: Vec<Comparison>,
    pub warnings: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn run(suite: Suite, seed: u64, cases: usize) -> Result<SuiteReport> {
    match suite {
        Suite::Residuals => residuals(seed, cases),
        Suite::Manifolds => manifolds(seed, cases),
        Suite::Limits => limits(seed, cases),
    }
}

const MAX_DRAWS_PER_CASE: usize = 1000;

/// Largest ground-state energy on the particle branch with a normalizable
/// wavefunction (`a = 0` manifolds are boundary cases and are kept).
fn admissible_ground_state(p: &PotentialParams, cfg: &SolverConfig) -> Option<f64> {
    solve_levels(p, 0, cfg)
        .ok()?
        .into_iter()
        .filter(|l| {
            l.branch == Branch::Particle
                && l.admissibility.overall != Verdict::Inadmissible
                && l.admissibility.c_value.is_some_and(|c| c >= 0.0)
        })
        .map(|l| l.energy)
        .reduce(f64::max)
}

fn draw_params(rng: &mut ChaCha8Rng, index: usize) -> PotentialParams {
    let m = rng.gen_range(0.5..2.0);
    let a1: f64 = rng.gen_range(0.0..2.0);
    let b1: f64 = rng.gen_range(0.0..1.0);
    let (a2, b2) = match index % 10 {
        // every tenth draw lies on one of the exactly solvable manifolds
        9 if index % 20 == 9 => (a1, b1),
        9 => (-a1, -b1),
        _ => (a1 * rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    };
    PotentialParams { m, a1, b1, a2, b2 }
}

/// Ground-state residual algebra over `cases` random admissible couplings,
/// each sampled on 50 log-spaced radii spanning `[10⁻², 10²]` times the
/// peak of χ.
pub fn residuals(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = SolverConfig::default();
    let mut atlas = Vec::with_capacity(cases);
    let mut warnings = Vec::new();
    let mut draws = 0usize;
    let mut errors = Vec::new();

    while atlas.len() < cases {
        if draws >= MAX_DRAWS_PER_CASE * cases.max(1) {
            return Err(KgError::Convergence {
                lo: 0.0,
                hi: draws as f64,
                iterations: draws,
            });
        }
        let p = draw_params(&mut rng, atlas.len());
        draws += 1;
        let Some(e) = admissible_ground_state(&p, &cfg) else {
            continue;
        };
        let gs = GroundState::from_params(&p, e)?;
        let peak = 2.0 * (gs.c + 1.0) * (gs.c + 1.0) / gs.k;
        let radii = log_grid(1e-2 * peak, 1e2 * peak, 50);
        match residual_report(&p, e, &radii) {
            Ok(rep) => atlas.push(AtlasEntry {
                params: p,
                energy: e,
                a: gs.a,
                c: gs.c,
                k: gs.k,
                m3: rep.m3,
                m2: rep.m2,
                on_exact_manifold: rep.on_exact_manifold,
                c_diagnostic: rep.c_diagnostic,
                c_consistent: rep.c_consistent,
                max_eq3: rep.max_eq3(),
                max_eq4_mismatch: rep.max_eq4_mismatch(),
                max_eq1_mismatch: rep.max_eq1_mismatch(),
                r4_cancellation: rep.r4_cancellation,
            }),
            Err(err) => {
                errors.push(format!("{p:?} at E={e}: {err}"));
                break;
            }
        }
    }
    if draws > cases {
        warnings.push(format!("{} inadmissible draws rejected", draws - cases));
    }

    let worst = |f: fn(&AtlasEntry) -> f64| atlas.iter().map(f).fold(0.0, f64::max);
    let manifold_cases = atlas.iter().filter(|x| x.on_exact_manifold).count();
    let mut checks = vec![
        Check::below("chi_identity", worst(|x| x.max_eq3), 1e-9, "max relative R3"),
        Check::below(
            "phi_structure",
            worst(|x| x.max_eq4_mismatch),
            1e-10,
            "max relative |R4 - (M3/r^3 + M2/r^2)|",
        ),
        Check::below(
            "r4_cancellation",
            worst(|x| x.r4_cancellation),
            1e-12,
            "max relative |a^2 - (A1^2 - A2^2)|",
        ),
        Check::below(
            "composite_factorization",
            worst(|x| x.max_eq1_mismatch),
            1e-8,
            "max relative |R1 + (M3/r^3 + M2/r^2) psi|",
        ),
        Check::flag(
            "manifold_flag",
            atlas
                .iter()
                .filter(|x| x.params.a2.abs() == x.params.a1.abs() && x.params.b2.abs() == x.params.b1.abs())
                .all(|x| x.on_exact_manifold),
            format!("{manifold_cases} of {} cases on an exact manifold", atlas.len()),
        ),
    ];
    if !errors.is_empty() {
        checks.push(Check::flag("evaluation", false, errors.join("; ")));
    }

    Ok(SuiteReport {
        suite: Suite::Residuals,
        seed,
        cases,
        checks,
        atlas,
        comparisons: Vec::new(),
        warnings,
    })
}

/// Shooting eigenvalues against the implicit spectrum on `V_V = V_S` and
/// `V_V = −V_S` for levels 0 to 3: four fixed couplings plus `cases`
/// random ones.
pub fn manifolds(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut couplings = Vec::new();
    for sign in [1.0, -1.0] {
        for a in [0.0, 0.5] {
            couplings.push(PotentialParams { m: 1.0, a1: a, b1: 0.5, a2: sign * a, b2: sign * 0.5 });
        }
    }
    for i in 0..cases {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let m = rng.gen_range(0.5..2.0);
        let a = rng.gen_range(0.0..1.0);
        let b = rng.gen_range(0.2..0.8);
        couplings.push(PotentialParams { m, a1: a, b1: b, a2: sign * a, b2: sign * b });
    }

    let grid = GridConfig::default();
    let cfg = SolverConfig::default();
    let mut comparisons = Vec::new();
    let mut worst_dev = 0.0_f64;
    let mut worst_width = 0.0_f64;
    let mut node_failures = Vec::new();
    let mut ordering_failures = Vec::new();
    let mut errors = Vec::new();

    for p in &couplings {
        let label = format!(
            "{} m={:.6} A={:.6} B={:.6}",
            if p.b2 == p.b1 { "equal" } else { "opposite" },
            p.m,
            p.a1,
            p.b1
        );
        let mut previous: Option<f64> = None;
        for n in 0..=3 {
            match deviation_report(p, n, Branch::Particle, &grid, &cfg) {
                Ok(d) => {
                    worst_dev = worst_dev.max(d.deviation / p.m);
                    let (lo, hi) = d.shooting.bracket;
                    worst_width = worst_width.max((hi - lo) / p.m);
                    if d.shooting.node_count != n {
                        node_failures.push(format!("{label} n={n}: {} nodes", d.shooting.node_count));
                    }
                    // the sign of E tracks the manifold, |E| grows with n on both
                    if let Some(prev) = previous {
                        if d.e_oracle.abs() <= prev.abs() {
                            ordering_failures.push(format!("{label} n={n}"));
                        }
                    }
                    previous = Some(d.e_oracle);
                    comparisons.push(Comparison::new(label.clone(), n, d.e_implicit, d.e_oracle));
                }
                Err(err) => errors.push(format!("{label} n={n}: {err}")),
            }
        }
    }

    let total = couplings.len() * 4;
    let mut checks = vec![
        Check::below("oracle_exactness", worst_dev, 1e-5, "max |E_oracle - E_implicit| / m"),
        Check::flag(
            "node_counts",
            node_failures.is_empty() && errors.is_empty(),
            if node_failures.is_empty() {
                format!("{} eigenfunctions with exactly n nodes", comparisons.len())
            } else {
                node_failures.join("; ")
            },
        ),
        Check::flag(
            "level_ordering",
            ordering_failures.is_empty(),
            if ordering_failures.is_empty() {
                "|E| strictly increasing in n".to_string()
            } else {
                ordering_failures.join("; ")
            },
        ),
        Check::below("bracket_width", worst_width, 2e-8, "max final bracket width / m"),
    ];
    checks.push(Check::flag(
        "solved",
        errors.is_empty(),
        if errors.is_empty() {
            format!("{total} eigensolves converged")
        } else {
            errors.join("; ")
        },
    ));

    Ok(SuiteReport {
        suite: Suite::Manifolds,
        seed,
        cases,
        checks,
        atlas: Vec::new(),
        comparisons,
        warnings: Vec::new(),
    })
}

const COUPLING_GRID: [f64; 7] = [-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9];
const A_GRID: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 2.0];

/// Worst `|f(E)|/m²` over the closed-form energies on the coupling grids.
fn closed_form_equivalence(masses: &[f64]) -> Result<(f64, usize)> {
    let mut worst = 0.0_f64;
    let mut count = 0;
    let mut probe = |p: PotentialParams, case: ClosedFormCase| -> Result<()> {
        for n in 0..=3 {
            for e in closed_form(&p, n, case)?.energies {
                worst = worst.max(spectrum_residual(&p, n, e)?.abs() / (p.m * p.m));
                count += 1;
            }
        }
        Ok(())
    };
    for &m in masses {
        for &b1 in &COUPLING_GRID {
            for &b2 in &COUPLING_GRID {
                probe(PotentialParams { m, a1: 0.0, b1, a2: 0.0, b2 }, ClosedFormCase::CoulombGeneral)?;
            }
            for &a1 in &A_GRID {
                probe(PotentialParams { m, a1, b1, a2: 0.0, b2: 0.0 }, ClosedFormCase::PureScalar)?;
            }
            probe(PotentialParams { m, a1: 0.0, b1: 0.0, a2: 0.0, b2: b1 }, ClosedFormCase::PureVectorCoulomb)?;
            probe(PotentialParams { m, a1: 0.0, b1, a2: 0.0, b2: b1 }, ClosedFormCase::Equal)?;
            probe(PotentialParams { m, a1: 0.0, b1, a2: 0.0, b2: -b1 }, ClosedFormCase::Opposite)?;
        }
    }
    Ok((worst, count))
}

fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

fn particle_root(p: &PotentialParams, n: usize, cfg: &SolverConfig) -> Result<f64> {
    solve_levels(p, n, cfg)?
        .into_iter()
        .filter(|l| l.branch == Branch::Particle)
        .map(|l| l.energy)
        .reduce(f64::max)
        .ok_or(KgError::NoEigenvalue { nodes: n, lo: -p.m, hi: p.m })
}

/// Closed forms, series limits, pure-scalar symmetry, normalization and the
/// Coulomb deviation trend. `cases` random couplings are drawn for the
/// symmetry and normalization checks.
pub fn limits(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = SolverConfig::default();
    let mut checks = Vec::new();
    let mut comparisons = Vec::new();

    let (worst_f, count) = closed_form_equivalence(&[1.0, 2.5])?;
    checks.push(Check::below(
        "closed_form_equivalence",
        worst_f,
        1e-10,
        format!("max |f(E)|/m^2 over {count} closed-form energies"),
    ));

    // pure scalar: the root set is symmetric under E -> -E
    let mut worst_sym = 0.0_f64;
    let mut sym_detail = Vec::new();
    for i in 0..cases.max(1) {
        let m = rng.gen_range(0.5..2.0);
        let a1 = if i == 0 { 0.0 } else { rng.gen_range(0.0..2.0) };
        let b1 = rng.gen_range(0.05..0.9);
        let p = PotentialParams { m, a1, b1, a2: 0.0, b2: 0.0 };
        for n in 0..=3 {
            let mut roots: Vec<f64> = solve_levels(&p, n, &cfg)?.iter().map(|l| l.energy).collect();
            roots.sort_by(f64::total_cmp);
            if roots.len() % 2 == 1 {
                sym_detail.push(format!("odd root count {} at {p:?} n={n}", roots.len()));
                worst_sym = f64::INFINITY;
            }
            for (x, y) in roots.iter().zip(roots.iter().rev()) {
                worst_sym = worst_sym.max((x + y).abs() / m);
            }
        }
    }
    checks.push(Check::below(
        "pure_scalar_symmetry",
        worst_sym,
        1e-12,
        if sym_detail.is_empty() {
            "max |E_i + E_(N-1-i)| / m".to_string()
        } else {
            sym_detail.join("; ")
        },
    ));

    // normalization against the Gamma closed form (a = 0)
    let quad = QuadConfig::default();
    let mut worst_norm = 0.0_f64;
    let mut shapes = vec![(0.0, 2.0), (1.0, 2.0)];
    for _ in 0..cases {
        shapes.push((rng.gen_range(0.0..3.0), rng.gen_range(0.2..5.0)));
    }
    for &(c, k) in &shapes {
        let gs = GroundState::from_shape(0.0, c, k)?;
        let norm = gs.normalization(&quad)?;
        let exact = gs.gamma_norm_integral();
        worst_norm = worst_norm.max(((norm.integral - exact) / exact).abs());
    }
    let base = GroundState::from_shape(0.0, 0.0, 2.0)?.normalization(&quad)?.integral;
    comparisons.push(Comparison::new("normalization a=0 c=0 k=2", 0, 0.25, base));
    checks.push(Check::below(
        "normalization_gamma",
        worst_norm,
        1e-8,
        format!("max relative quadrature error over {} a=0 shapes", shapes.len()),
    ));

    // equal-potential series against the exact closed form, halving B1
    let mut eq_devs = Vec::new();
    for b in [0.1, 0.05, 0.025] {
        let p = PotentialParams { m: 1.0, a1: 0.0, b1: b, a2: 0.0, b2: b };
        let exact = closed_form(&p, 0, ClosedFormCase::Equal)?.energies[0];
        let series = approx_energy(&p, 0, SeriesCase::EqualSeries)?;
        comparisons.push(Comparison::new(format!("equal series B={b}"), 0, exact, series));
        eq_devs.push((series - exact).abs());
    }
    checks.push(Check::below(
        "equal_series_accuracy",
        eq_devs[0],
        3e-4,
        "|series - exact| / m at B1=0.1",
    ));
    checks.push(Check::flag(
        "equal_series_convergence",
        strictly_decreasing(&eq_devs),
        "deviation decreases as B1 halves",
    ));

    // pure-vector series against the implicit root
    let mut pv_devs = Vec::new();
    for b in [0.4, 0.2, 0.1, 0.05] {
        let p = PotentialParams { m: 1.0, a1: 0.0, b1: 0.0, a2: 0.1, b2: b };
        let implicit = particle_root(&p, 0, &cfg)?;
        let series = approx_energy(&p, 0, SeriesCase::PureVectorSeries)?;
        comparisons.push(Comparison::new(format!("pure vector series A2=0.1 B2={b}"), 0, implicit, series));
        pv_devs.push((series - implicit).abs());
    }
    checks.push(Check::flag(
        "pure_vector_series_convergence",
        strictly_decreasing(&pv_devs),
        "deviation decreases with B2",
    ));

    // no couplings, no bound states
    let free = PotentialParams { m: 1.0, a1: 0.0, b1: 0.0, a2: 0.0, b2: 0.0 };
    let mut free_roots = 0;
    for n in 0..=3 {
        free_roots += solve_levels(&free, n, &cfg)?.len();
    }
    checks.push(Check::flag(
        "free_particle_empty",
        free_roots == 0,
        format!("{free_roots} roots with all couplings zero"),
    ));

    // pure-vector Coulomb: closed form against the shooting oracle
    let grid = GridConfig::default();
    let mut coulomb = Vec::new();
    let mut oracle_err = None;
    for b in [0.3, 0.2, 0.1] {
        let p = PotentialParams { m: 1.0, a1: 0.0, b1: 0.0, a2: 0.0, b2: b };
        match deviation_report(&p, 0, Branch::Particle, &grid, &cfg) {
            Ok(d) => {
                comparisons.push(Comparison::new(format!("coulomb oracle B2={b}"), 0, d.e_oracle, d.e_implicit));
                coulomb.push(d.deviation);
            }
            Err(err) => {
                oracle_err.get_or_insert(format!("B2={b}: {err}"));
            }
        }
    }
    let coulomb_ok = oracle_err.is_none() && strictly_decreasing(&coulomb);
    checks.push(Check::flag(
        "coulomb_deviation_trend",
        coulomb_ok,
        oracle_err.unwrap_or_else(|| "deviation decreases for B2 = 0.3, 0.2, 0.1".to_string()),
    ));
    checks.push(Check::below(
        "coulomb_deviation_small",
        coulomb.get(2).copied().unwrap_or(f64::INFINITY),
        2e-4,
        "|E_oracle - E_closed| / m at B2=0.1",
    ));

    Ok(SuiteReport {
        suite: Suite::Limits,
        seed,
        cases,
        checks,
        atlas: Vec::new(),
        comparisons,
        warnings: Vec::new(),
    })
}
