//! Resolution of flags and `--config` values into a typed request.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use kgk::verify::Suite;
use kgk::{ClosedFormCase, KgError, PotentialParams, Result, SeriesCase};
use serde_json::{Map, Value};

use crate::args::{BranchFilter, Cli, CommandArgs, Compare, Format, ParamArgs, ScanParam};
use crate::report::num;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyMethod {
    Implicit,
    Closed(ClosedFormCase),
    Approx(SeriesCase),
    Oracle,
}

impl EnergyMethod {
    pub fn label(self) -> String {
        match self {
            EnergyMethod::Implicit => "implicit".into(),
            EnergyMethod::Closed(c) => format!("closed:{}", c.as_str()),
            EnergyMethod::Approx(c) => format!("approx:{}", c.as_str()),
            EnergyMethod::Oracle => "oracle".into(),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "implicit" => Ok(EnergyMethod::Implicit),
            None if s == "oracle" => Ok(EnergyMethod::Oracle),
            Some(("closed", case)) => Ok(EnergyMethod::Closed(case.parse()?)),
            Some(("approx", case)) => Ok(EnergyMethod::Approx(case.parse()?)),
            _ => Err(invalid("method", format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergySpec {
    Auto,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Spectrum {
        nmax: usize,
        branch: BranchFilter,
    },
    Energy {
        n: usize,
        method: EnergyMethod,
        branch: BranchFilter,
        compare_oracle: bool,
    },
    Wavefunction {
        energy: EnergySpec,
        rmin: f64,
        rmax: f64,
        points: usize,
        normalize: bool,
    },
    Verify {
        suite: Suite,
        seed: u64,
        cases: usize,
    },
    Scan {
        param: ScanParam,
        from: f64,
        to: f64,
        steps: usize,
        n: usize,
        branch: BranchFilter,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum { .. } => "spectrum",
            Command::Energy { .. } => "energy",
            Command::Wavefunction { .. } => "wavefunction",
            Command::Verify { .. } => "verify",
            Command::Scan { .. } => "scan",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRequest {
    pub command: Command,
    /// Absent only for `verify`.
    pub params: Option<PotentialParams>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunRequest {
    /// Echo for the output document. Output location is not part of it so
    /// the same computation always produces the same bytes.
    pub fn to_json(&self) -> Value {
        let mut options = Map::new();
        let mut put = |k: &str, v: Value| {
            options.insert(k.to_string(), v);
        };
        match &self.command {
            Command::Spectrum { nmax, branch } => {
                put("nmax", (*nmax).into());
                put("branch", branch.as_str().into());
            }
            Command::Energy { n, method, branch, compare_oracle } => {
                put("n", (*n).into());
                put("method", method.label().into());
                put("branch", branch.as_str().into());
                put("compare", if *compare_oracle { "oracle".into() } else { Value::Null });
            }
            Command::Wavefunction { energy, rmin, rmax, points, normalize } => {
                put(
                    "e",
                    match energy {
                        EnergySpec::Auto => "auto".into(),
                        EnergySpec::Value(e) => num(*e),
                    },
                );
                put("rmin", num(*rmin));
                put("rmax", num(*rmax));
                put("points", (*points).into());
                put("normalize", (*normalize).into());
            }
            Command::Verify { suite, seed, cases } => {
                put("suite", suite.as_str().into());
                put("seed", (*seed).into());
                put("cases", (*cases).into());
            }
            Command::Scan { param, from, to, steps, n, branch } => {
                put("param", param.as_str().into());
                put("from", num(*from));
                put("to", num(*to));
                put("steps", (*steps).into());
                put("n", (*n).into());
                put("branch", branch.as_str().into());
            }
        }
        let mut out = Map::new();
        out.insert("subcommand".into(), self.command.name().into());
        out.insert("format".into(), self.format.as_str().into());
        out.insert(
            "params".into(),
            self.params.map_or(Value::Null, |p| {
                let mut m = Map::new();
                m.insert("m".into(), num(p.m));
                m.insert("a1".into(), num(p.a1));
                m.insert("b1".into(), num(p.b1));
                m.insert("a2".into(), num(p.a2));
                m.insert("b2".into(), num(p.b2));
                Value::Object(m)
            }),
        );
        out.insert("options".into(), Value::Object(options));
        Value::Object(out)
    }
}

fn invalid(name: &'static str, reason: impl Into<String>) -> KgError {
    KgError::InvalidParameter { name, reason: reason.into() }
}

const KNOWN_KEYS: &[&str] = &[
    "format", "output", "m", "a1", "b1", "a2", "b2", "nmax", "branch", "n", "method", "compare", "e",
    "rmin", "rmax", "points", "normalize", "suite", "seed", "cases", "param", "from", "to", "steps",
];

/// Values from the `--config` file; every lookup is typed and reports the key
/// on mismatch.
struct Config(Map<String, Value>);

impl Config {
    fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Config(Map::new()));
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid("config", format!("cannot read {}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| invalid("config", format!("{}: {e}", path.display())))?;
        let Value::Object(map) = value else {
            return Err(invalid("config", "top level must be a JSON object"));
        };
        if let Some(k) = map.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(invalid("config", format!("unknown key {k:?}")));
        }
        Ok(Config(map))
    }

    fn f64(&self, flag: Option<f64>, key: &'static str) -> Result<Option<f64>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Number(n)) => Ok(n.as_f64()),
            Some(Value::String(s)) => s
                .parse()
                .map(Some)
                .map_err(|_| invalid(key, format!("not a number: {s:?}"))),
            Some(v) => Err(invalid(key, format!("expected a number, got {v}"))),
        }
    }

    fn u64(&self, flag: Option<u64>, key: &'static str) -> Result<Option<u64>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| invalid(key, format!("expected a nonnegative integer, got {v}"))),
        }
    }

    fn usize(&self, flag: Option<usize>, key: &'static str) -> Result<Option<usize>> {
        Ok(self.u64(flag.map(|v| v as u64), key)?.map(|v| v as usize))
    }

    fn string(&self, flag: Option<String>, key: &'static str) -> Result<Option<String>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(Value::Number(n)) => Ok(Some(n.to_string())),
            Some(v) => Err(invalid(key, format!("expected a string, got {v}"))),
        }
    }

    fn bool(&self, flag: bool, key: &'static str) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(false),
            Some(Value::Bool(b)) => Ok(*b),
            Some(v) => Err(invalid(key, format!("expected a boolean, got {v}"))),
        }
    }

    fn choice<T: ValueEnum>(&self, flag: Option<T>, key: &'static str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.string(None, key)? {
            None => Ok(None),
            Some(s) => T::from_str(&s, false)
                .map(Some)
                .map_err(|_| invalid(key, format!("invalid value {s:?}"))),
        }
    }
}

fn finite(key: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(key, format!("must be finite, got {v}")))
    }
}

fn required<T>(key: &'static str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| invalid(key, format!("--{key} is required")))
}

fn resolve_params(cfg: &Config, p: ParamArgs) -> Result<PotentialParams> {
    let m = finite("m", required("m", cfg.f64(p.m, "m")?)?)?;
    let get = |flag, key| -> Result<f64> { finite(key, cfg.f64(flag, key)?.unwrap_or(0.0)) };
    PotentialParams::new(m, get(p.a1, "a1")?, get(p.b1, "b1")?, get(p.a2, "a2")?, get(p.b2, "b2")?)
}

pub fn resolve(cli: Cli) -> Result<RunRequest> {
    let cfg = Config::load(cli.config.as_deref())?;
    let format = cfg.choice(cli.format, "format")?.unwrap_or(Format::Json);
    let output = cfg.string(cli.output.map(|p| p.to_string_lossy().into_owned()), "output")?.map(PathBuf::from);

    let (command, params) = match cli.command {
        CommandArgs::Spectrum { params, nmax, branch } => {
            let p = resolve_params(&cfg, params)?;
            let nmax = required("nmax", cfg.usize(nmax, "nmax")?)?;
            let branch = cfg.choice(branch, "branch")?.unwrap_or(BranchFilter::All);
            (Command::Spectrum { nmax, branch }, Some(p))
        }
        CommandArgs::Energy { params, n, method, branch, compare } => {
            let p = resolve_params(&cfg, params)?;
            let n = required("n", cfg.usize(n, "n")?)?;
            let method = EnergyMethod::parse(&cfg.string(method, "method")?.unwrap_or_else(|| "implicit".into()))?;
            let branch = cfg.choice(branch, "branch")?.unwrap_or(BranchFilter::Particle);
            if branch == BranchFilter::All {
                return Err(invalid("branch", "energy needs particle or antiparticle"));
            }
            let compare_oracle = cfg.choice(compare, "compare")? == Some(Compare::Oracle);
            (Command::Energy { n, method, branch, compare_oracle }, Some(p))
        }
        CommandArgs::Wavefunction { params, energy, rmin, rmax, points, normalize } => {
            let p = resolve_params(&cfg, params)?;
            let energy = match cfg.string(energy, "e")?.as_deref() {
                None | Some("auto") => EnergySpec::Auto,
                Some(s) => EnergySpec::Value(finite(
                    "e",
                    s.parse().map_err(|_| invalid("e", format!("not a number or auto: {s:?}")))?,
                )?),
            };
            let rmin = finite("rmin", cfg.f64(rmin, "rmin")?.unwrap_or(0.01))?;
            let rmax = finite("rmax", cfg.f64(rmax, "rmax")?.unwrap_or(20.0))?;
            let points = cfg.usize(points, "points")?.unwrap_or(200);
            if !(rmin > 0.0 && rmax > rmin) {
                return Err(invalid("rmin", format!("need 0 < rmin < rmax, got {rmin}, {rmax}")));
            }
            if points < 2 {
                return Err(invalid("points", "need at least 2 points"));
            }
            let normalize = cfg.bool(normalize, "normalize")?;
            (Command::Wavefunction { energy, rmin, rmax, points, normalize }, Some(p))
        }
        CommandArgs::Verify { suite, seed, cases } => {
            let suite: Suite = required("suite", cfg.string(suite, "suite")?)?.parse()?;
            let seed = cfg.u64(seed, "seed")?.unwrap_or(0);
            let cases = cfg.usize(cases, "cases")?.unwrap_or_else(|| suite.default_cases());
            (Command::Verify { suite, seed, cases }, None)
        }
        CommandArgs::Scan { params, param, from, to, steps, n, branch } => {
            let p = resolve_params(&cfg, params)?;
            let param = required("param", cfg.choice(param, "param")?)?;
            let from = finite("from", required("from", cfg.f64(from, "from")?)?)?;
            let to = finite("to", required("to", cfg.f64(to, "to")?)?)?;
            let steps = cfg.usize(steps, "steps")?.unwrap_or(20);
            if steps < 1 {
                return Err(invalid("steps", "need at least 1 step"));
            }
            let n = cfg.usize(n, "n")?.unwrap_or(0);
            let branch = cfg.choice(branch, "branch")?.unwrap_or(BranchFilter::Particle);
            (Command::Scan { param, from, to, steps, n, branch }, Some(p))
        }
    };
    Ok(RunRequest { command, params, format, output })
}
