use kgk::oracle::{eigensolve_near, kg_eigensolve, GridConfig, ShootingResult};
use kgk::spectrum::{approx_energy, closed_form, solve_levels, spectrum_residual};
use kgk::verify::{self, SuiteReport};
use kgk::wavefunction::{GroundState, QuadConfig};
use kgk::{Branch, EnergyLevel, KgError, PotentialParams, Result, SolverConfig, Verdict};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::args::{BranchFilter, ScanParam};
use crate::report::{num, opt_num, Cell, Document, Table};
use crate::request::{Command, EnergyMethod, EnergySpec, RunRequest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Success = 0,
    Failure = 1,
    Invalid = 2,
    NoBoundState = 3,
    Convergence = 4,
}

impl Exit {
    pub fn of(err: &KgError) -> Self {
        match err.root_cause() {
            KgError::InvalidParameter { .. }
            | KgError::Domain(_)
            | KgError::StructuralConstraint { .. }
            | KgError::NotIntegrable(_) => Exit::Invalid,
            KgError::NoEigenvalue { .. } | KgError::FallToCenter(_) => Exit::NoBoundState,
            KgError::Convergence { .. } | KgError::Overflow { .. } | KgError::Quadrature { .. } => Exit::Convergence,
            KgError::Stage { .. } => unreachable!("root_cause strips stage labels"),
        }
    }
}

pub fn error_kind(err: &KgError) -> &'static str {
    match err.root_cause() {
        KgError::InvalidParameter { .. } => "invalid_parameter",
        KgError::Domain(_) => "domain",
        KgError::StructuralConstraint { .. } => "structural_constraint",
        KgError::Convergence { .. } => "convergence",
        KgError::NoEigenvalue { .. } => "no_bound_state",
        KgError::FallToCenter(_) => "fall_to_center",
        KgError::Overflow { .. } => "overflow",
        KgError::NotIntegrable(_) => "not_integrable",
        KgError::Quadrature { .. } => "quadrature",
        KgError::Stage { .. } => unreachable!("root_cause strips stage labels"),
    }
}

pub struct Outcome {
    pub document: Document,
    pub exit: Exit,
}

pub fn run(req: &RunRequest) -> Result<Outcome> {
    let params = req.params;
    match &req.command {
        Command::Spectrum { nmax, branch } => spectrum(req, need(params)?, *nmax, *branch),
        Command::Energy { n, method, branch, compare_oracle } => {
            energy(req, need(params)?, *n, *method, *branch, *compare_oracle)
        }
        Command::Wavefunction { energy, rmin, rmax, points, normalize } => {
            wavefunction(req, need(params)?, *energy, *rmin, *rmax, *points, *normalize)
        }
        Command::Verify { suite, seed, cases } => verify_suite(req, verify::run(*suite, *seed, *cases)?),
        Command::Scan { param, from, to, steps, n, branch } => {
            scan(req, need(params)?, *param, *from, *to, *steps, *n, *branch)
        }
    }
}

fn need(p: Option<PotentialParams>) -> Result<PotentialParams> {
    p.ok_or_else(|| KgError::InvalidParameter { name: "m", reason: "couplings are required".into() })
}

fn require_real_a(p: &PotentialParams) -> Result<()> {
    if p.a().is_none() {
        return Err(KgError::InvalidParameter {
            name: "a2",
            reason: format!("a is imaginary: A1^2 = {} < A2^2 = {}", p.a1 * p.a1, p.a2 * p.a2),
        });
    }
    Ok(())
}

fn keeps(filter: BranchFilter, branch: Branch) -> bool {
    match filter {
        BranchFilter::All => true,
        BranchFilter::Particle => branch == Branch::Particle,
        BranchFilter::Antiparticle => branch == Branch::Antiparticle,
    }
}

/// Particle levels take the largest root, antiparticle levels the smallest.
fn pick(filter: BranchFilter, energies: impl Iterator<Item = f64>) -> Option<f64> {
    match filter {
        BranchFilter::Antiparticle => energies.reduce(f64::min),
        _ => energies.reduce(f64::max),
    }
}

fn level_warnings(doc: &mut Document, level: &EnergyLevel) {
    for w in &level.admissibility.warnings {
        doc.warn(format!("n={} E={}: {w}", level.n, level.energy));
    }
    for r in &level.admissibility.reasons {
        doc.warn(format!("n={} E={}: {r}", level.n, level.energy));
    }
}

const LEVEL_HEADER: [&str; 9] = ["n", "branch", "energy", "method", "residual", "verdict", "c", "k", "iterations"];

fn level_row(p: &PotentialParams, l: &EnergyLevel) -> Vec<Cell> {
    vec![
        l.n.into(),
        l.branch.as_str().into(),
        l.energy.into(),
        l.method.as_str().into(),
        l.residual.into(),
        l.admissibility.overall.as_str().into(),
        l.admissibility.c_value.into(),
        p.k(l.energy).into(),
        l.iterations.into(),
    ]
}

fn spectrum(req: &RunRequest, p: PotentialParams, nmax: usize, branch: BranchFilter) -> Result<Outcome> {
    require_real_a(&p)?;
    let cfg = SolverConfig::default();
    let per_level: Vec<Result<Vec<EnergyLevel>>> = (0..=nmax).into_par_iter().map(|n| solve_levels(&p, n, &cfg)).collect();

    let mut doc = Document::new(req.to_json(), Table::new(&LEVEL_HEADER));
    let mut exit = Exit::Success;
    for (n, res) in per_level.into_iter().enumerate() {
        match res {
            Ok(mut levels) => {
                levels.retain(|l| keeps(branch, l.branch));
                levels.sort_by(|x, y| x.branch.cmp(&y.branch).then(x.energy.total_cmp(&y.energy)));
                for l in &levels {
                    level_warnings(&mut doc, l);
                    doc.table.push(level_row(&p, l));
                }
            }
            Err(e) => {
                doc.error(format!("{}: n={n}: {e}", error_kind(&e)));
                exit = exit.max(Exit::of(&e));
            }
        }
    }
    if doc.table.rows.is_empty() && exit == Exit::Success {
        doc.error(format!("no_bound_state: no roots for n <= {nmax} on branch {}", branch.as_str()));
        exit = Exit::NoBoundState;
    }
    Ok(Outcome { document: doc, exit })
}

fn oracle_fallback(p: &PotentialParams, n: usize, grid: &GridConfig) -> Result<ShootingResult> {
    let limit = p.m * (1.0 - 1e-6);
    kg_eigensolve(p, n, (-limit, limit), grid)
}

fn energy(
    req: &RunRequest,
    p: PotentialParams,
    n: usize,
    method: EnergyMethod,
    branch: BranchFilter,
    compare_oracle: bool,
) -> Result<Outcome> {
    require_real_a(&p)?;
    let cfg = SolverConfig::default();
    let grid = GridConfig::default();
    let mut doc = Document::new(
        req.to_json(),
        Table::new(&[
            "n", "branch", "energy", "method", "residual", "verdict", "oracle_energy", "deviation", "node_count",
            "match_defect",
        ]),
    );
    let no_root = || KgError::NoEigenvalue { nodes: n, lo: -p.m, hi: p.m };
    let implicit = |filter| -> Result<Option<f64>> {
        let levels = solve_levels(&p, n, &cfg)?;
        Ok(pick(filter, levels.iter().filter(|l| keeps(filter, l.branch)).map(|l| l.energy)))
    };

    let mut shooting = None;
    let e = match method {
        EnergyMethod::Implicit => implicit(branch)?.ok_or_else(no_root)?,
        EnergyMethod::Closed(case) => {
            let cf = closed_form(&p, n, case)?;
            for note in &cf.notes {
                doc.warn(format!("{}: {note}", case.as_str()));
            }
            let chosen = cf.energies.iter().copied().filter(|&e| keeps(branch, Branch::classify(&p, e)));
            pick(branch, chosen).ok_or_else(no_root)?
        }
        EnergyMethod::Approx(case) => {
            let e = approx_energy(&p, n, case)?;
            if !(e.abs() < p.m) {
                doc.warn(format!("{}: E = {e} lies outside (-m, m)", case.as_str()));
            }
            e
        }
        EnergyMethod::Oracle => {
            let s = match implicit(branch)? {
                Some(hint) => eigensolve_near(&p, n, hint, &grid)?,
                None => oracle_fallback(&p, n, &grid)?,
            };
            let e = s.energy;
            shooting = Some(s);
            e
        }
    };
    if compare_oracle && shooting.is_none() {
        if !(e.abs() < p.m) {
            return Err(KgError::Domain(format!("cannot compare: E = {e} outside (-m, m)")));
        }
        shooting = Some(eigensolve_near(&p, n, e, &grid)?);
    }

    let admissibility = p.admissibility(e);
    for w in admissibility.warnings.iter().chain(&admissibility.reasons) {
        doc.warn(w.clone());
    }
    let residual = spectrum_residual(&p, n, e).ok();
    doc.table.push(vec![
        n.into(),
        Branch::classify(&p, e).as_str().into(),
        e.into(),
        method.label().into(),
        residual.into(),
        admissibility.overall.as_str().into(),
        shooting.as_ref().map(|s| s.energy).into(),
        shooting.as_ref().map(|s| (s.energy - e).abs()).into(),
        shooting.as_ref().map_or(Cell::Null, |s| s.node_count.into()),
        shooting.as_ref().map(|s| s.match_defect).into(),
    ]);
    Ok(Outcome { document: doc, exit: Exit::Success })
}

fn ground_state_energy(p: &PotentialParams) -> Result<f64> {
    let levels = solve_levels(p, 0, &SolverConfig::default())?;
    levels
        .iter()
        .filter(|l| {
            l.branch == Branch::Particle
                && l.admissibility.overall != Verdict::Inadmissible
                && l.admissibility.c_value.is_some_and(|c| c >= 0.0)
        })
        .map(|l| l.energy)
        .reduce(f64::max)
        .ok_or(KgError::NoEigenvalue { nodes: 0, lo: -p.m, hi: p.m })
}

fn wavefunction(
    req: &RunRequest,
    p: PotentialParams,
    spec: EnergySpec,
    rmin: f64,
    rmax: f64,
    points: usize,
    normalize: bool,
) -> Result<Outcome> {
    require_real_a(&p)?;
    let e = match spec {
        EnergySpec::Auto => ground_state_energy(&p)?,
        EnergySpec::Value(e) => e,
    };
    if !(e.abs() < p.m) {
        return Err(KgError::Domain(format!("E = {e} must satisfy |E| < m")));
    }
    let gs = GroundState::from_params(&p, e)?;
    gs.require_normalizable()?;
    let norm = if normalize { Some(gs.normalization(&QuadConfig::default())?) } else { None };

    let mut header = vec!["r", "chi", "phi", "psi", "W", "dW", "W_susy"];
    if normalize {
        header.push("psi_normalized");
    }
    let mut doc = Document::new(req.to_json(), Table::new(&header));
    for i in 0..points {
        let r = if i + 1 == points { rmax } else { rmin + (rmax - rmin) * i as f64 / (points - 1) as f64 };
        let ev = gs.eval(r)?;
        let mut row: Vec<Cell> = vec![
            r.into(),
            ev.chi.into(),
            ev.phi.into(),
            ev.psi.into(),
            ev.w.into(),
            ev.dw.into(),
            ev.w_susy.into(),
        ];
        if let Some(nm) = &norm {
            row.push((nm.constant * ev.psi).into());
        }
        doc.table.push(row);
    }
    let residual = spectrum_residual(&p, 0, e)?;
    if residual.abs() > 1e-8 * p.m * p.m {
        doc.warn(format!("E = {e} is not a ground-state root (f(E) = {residual})"));
    }

    let mut results = Map::new();
    results.insert("energy".into(), num(e));
    results.insert("a".into(), num(gs.a));
    results.insert("c".into(), num(gs.c));
    results.insert("k".into(), num(gs.k));
    results.insert(
        "normalization".into(),
        norm.map_or(Value::Null, |nm| {
            let mut m = Map::new();
            m.insert("integral".into(), num(nm.integral));
            m.insert("constant".into(), num(nm.constant));
            m.insert("refinement_agreement".into(), num(nm.refinement_agreement));
            m.insert("gamma_closed_form".into(), opt_num(nm.gamma_closed_form));
            Value::Object(m)
        }),
    );
    results.insert("rows".into(), doc.table.to_json());
    doc.results = Some(Value::Object(results));
    Ok(Outcome { document: doc, exit: Exit::Success })
}

fn verify_suite(req: &RunRequest, rep: SuiteReport) -> Result<Outcome> {
    let mut doc = Document::new(req.to_json(), Table::new(&["check", "passed", "worst", "threshold", "detail"]));
    for c in &rep.checks {
        doc.table.push(vec![c.name.into(), c.passed.into(), c.worst.into(), c.threshold.into(), c.detail.clone().into()]);
        if !c.passed {
            doc.error(format!("check_failed: {}: worst {} vs threshold {} ({})", c.name, c.worst, c.threshold, c.detail));
        }
    }
    for w in &rep.warnings {
        doc.warn(w.clone());
    }

    let atlas: Vec<Value> = rep
        .atlas
        .iter()
        .map(|x| {
            let mut m = Map::new();
            m.insert("m".into(), num(x.params.m));
            m.insert("a1".into(), num(x.params.a1));
            m.insert("b1".into(), num(x.params.b1));
            m.insert("a2".into(), num(x.params.a2));
            m.insert("b2".into(), num(x.params.b2));
            m.insert("energy".into(), num(x.energy));
            m.insert("a".into(), num(x.a));
            m.insert("c".into(), num(x.c));
            m.insert("k".into(), num(x.k));
            m.insert("M3".into(), num(x.m3));
            m.insert("M2".into(), num(x.m2));
            m.insert("on_exact_manifold".into(), x.on_exact_manifold.into());
            m.insert("c_diagnostic".into(), opt_num(x.c_diagnostic));
            m.insert("c_consistent".into(), opt_num(x.c_consistent));
            m.insert("max_eq3".into(), num(x.max_eq3));
            m.insert("max_eq4_mismatch".into(), num(x.max_eq4_mismatch));
            m.insert("max_eq1_mismatch".into(), num(x.max_eq1_mismatch));
            m.insert("r4_cancellation".into(), num(x.r4_cancellation));
            Value::Object(m)
        })
        .collect();
    let comparisons: Vec<Value> = rep
        .comparisons
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("label".into(), c.label.clone().into());
            m.insert("n".into(), c.n.into());
            m.insert("expected".into(), num(c.expected));
            m.insert("observed".into(), num(c.observed));
            m.insert("difference".into(), num(c.difference));
            Value::Object(m)
        })
        .collect();

    let mut results = Map::new();
    results.insert("suite".into(), rep.suite.as_str().into());
    results.insert("seed".into(), rep.seed.into());
    results.insert("cases".into(), rep.cases.into());
    results.insert("passed".into(), rep.passed().into());
    results.insert("checks".into(), doc.table.to_json());
    results.insert("atlas".into(), Value::Array(atlas));
    results.insert("comparisons".into(), Value::Array(comparisons));
    doc.results = Some(Value::Object(results));
    let exit = if rep.passed() { Exit::Success } else { Exit::Failure };
    Ok(Outcome { document: doc, exit })
}

fn with_param(p: PotentialParams, param: ScanParam, v: f64) -> PotentialParams {
    let mut q = p;
    match param {
        ScanParam::M => q.m = v,
        ScanParam::A1 => q.a1 = v,
        ScanParam::B1 => q.b1 = v,
        ScanParam::A2 => q.a2 = v,
        ScanParam::B2 => q.b2 = v,
    }
    q
}

enum PointResult {
    Levels(Vec<EnergyLevel>),
    Failed(KgError),
}

#[allow(clippy::too_many_arguments)]
fn scan(
    req: &RunRequest,
    p: PotentialParams,
    param: ScanParam,
    from: f64,
    to: f64,
    steps: usize,
    n: usize,
    branch: BranchFilter,
) -> Result<Outcome> {
    let cfg = SolverConfig::default();
    let values: Vec<f64> = (0..=steps)
        .map(|i| if i == steps { to } else { from + (to - from) * i as f64 / steps as f64 })
        .collect();
    let results: Vec<PointResult> = values
        .par_iter()
        .map(|&v| {
            let q = with_param(p, param, v);
            let solved = q.validate().and_then(|_| require_real_a(&q)).and_then(|_| solve_levels(&q, n, &cfg));
            match solved {
                Ok(mut levels) => {
                    levels.retain(|l| keeps(branch, l.branch));
                    if branch != BranchFilter::All {
                        let best = pick(branch, levels.iter().map(|l| l.energy));
                        levels.retain(|l| Some(l.energy) == best);
                    }
                    PointResult::Levels(levels)
                }
                Err(e) => PointResult::Failed(e),
            }
        })
        .collect();

    let mut doc = Document::new(
        req.to_json(),
        Table::new(&["index", "value", "n", "branch", "energy", "verdict", "status"]),
    );
    let mut exit = Exit::Success;
    let mut found = 0;
    for (i, (v, res)) in values.iter().zip(results).enumerate() {
        match res {
            PointResult::Levels(levels) if levels.is_empty() => {
                doc.table.push(vec![i.into(), (*v).into(), n.into(), Cell::Null, Cell::Null, Cell::Null, "no_bound_state".into()]);
            }
            PointResult::Levels(levels) => {
                for l in &levels {
                    found += 1;
                    doc.table.push(vec![
                        i.into(),
                        (*v).into(),
                        n.into(),
                        l.branch.as_str().into(),
                        l.energy.into(),
                        l.admissibility.overall.as_str().into(),
                        "ok".into(),
                    ]);
                }
            }
            PointResult::Failed(e) => {
                let kind = error_kind(&e);
                let code = Exit::of(&e);
                if code == Exit::Convergence {
                    doc.error(format!("{kind}: {}={v}: {e}", param.as_str()));
                    exit = exit.max(code);
                } else {
                    doc.warn(format!("{kind}: {}={v}: {e}", param.as_str()));
                }
                doc.table.push(vec![i.into(), (*v).into(), n.into(), Cell::Null, Cell::Null, Cell::Null, kind.into()]);
            }
        }
    }
    if found == 0 && exit == Exit::Success {
        doc.error("no_bound_state: no level found at any scan point");
        exit = Exit::NoBoundState;
    }
    Ok(Outcome { document: doc, exit })
}
