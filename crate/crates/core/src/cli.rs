//! Run configurations and the `geomech run` driver.
//!
//! Config files are line-oriented `key = value` with `#` comments:
//!
//! ```text
//! system = pendulum
//! mode = simulate            # simulate | bvp | euler-top
//! integrator = verlet
//! h = 0.01
//! t_final = 10
//! param.m = 1
//! param.l = 1
//! param.g = 9.81
//! initial.q0 = 0.1
//! initial.p0 = 0             # or initial.v0, converted via p = M(q) v
//! output = pendulum.csv
//! format = csv               # csv | json
//! tolerance.H = 1e-3
//! ```
//!
//! `bvp` mode reads the far endpoint from `final.q<i>` and uses
//! `N = t_final / h` segments. `euler-top` mode takes `system = euler-top`,
//! inertias `param.i1..i3` and `Π0` from `initial.p0..p2`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{integrate, legendre, Method, PhaseState};
use crate::lagrangian::{action_gradient, solve_bvp};
use crate::manifold::{max_abs, Manifold, ManifoldPoint, TangentValue};
use crate::output::{euler_top_table, path_table, trajectory_table, Table};
use crate::sweep::Execution;
use crate::symmetry::{
    casimir, integrate_euler_top, is_invariant, momentum_map, rotational_energy, BodyAngularMomentum, GroupAction,
};
use crate::systems::{build_system, MechanicalSystem, SystemConfig, CATALOG};

pub const EULER_TOP: &str = "euler-top";
pub const DEFAULT_TOLERANCE: f64 = 1e-3;
pub const DEFAULT_STATIONARITY_TOLERANCE: f64 = 1e-8;
const INVARIANCE_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Simulate,
    Bvp,
    EulerTop,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::Bvp => "bvp",
            Mode::EulerTop => "euler-top",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "simulate" => Ok(Mode::Simulate),
            "bvp" => Ok(Mode::Bvp),
            "euler-top" => Ok(Mode::EulerTop),
            _ => Err(format!("unknown mode `{s}` (simulate, bvp, euler-top)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(format!("unknown format `{s}` (csv, json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub mode: Mode,
    pub integrator: Method,
    pub h: f64,
    pub t_final: f64,
    /// Initial configuration (chart coordinates).
    pub initial_q: Vec<f64>,
    /// Initial momentum; velocities in the file are converted on parse.
    pub initial_p: Vec<f64>,
    /// Far endpoint for `bvp` mode.
    pub final_q: Option<Vec<f64>>,
    pub output_path: String,
    pub output_format: OutputFormat,
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    /// Number of steps (or BVP segments), `t_final / h`.
    pub fn steps(&self) -> usize {
        (self.t_final / self.h).round() as usize
    }

    pub fn tolerance(&self, quantity: &str) -> f64 {
        self.tolerances.get(quantity).copied().unwrap_or(match quantity {
            "action_gradient" => DEFAULT_STATIONARITY_TOLERANCE,
            _ => DEFAULT_TOLERANCE,
        })
    }

    pub fn report_path(&self) -> PathBuf {
        PathBuf::from(format!("{}.report.json", self.output_path))
    }
}

struct Entry {
    line: usize,
    value: String,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Split `key = value` lines, rejecting duplicates. Returns entries keyed by
/// name, in key order.
fn collect_entries(text: &str, first_line: usize, allow_replace: bool, into: &mut BTreeMap<String, Entry>) -> Result<()> {
    for (i, raw) in text.lines().enumerate() {
        let line = first_line + i;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(parse_err(line, format!("empty key or value in `{content}`")));
        }
        check_key(key).map_err(|m| parse_err(line, m))?;
        check_scalar(key, value).map_err(|m| parse_err(line, m))?;
        if !allow_replace && into.contains_key(key) {
            return Err(parse_err(
                line,
                format!("duplicate key `{key}` (first set on line {})", into[key].line),
            ));
        }
        into.insert(
            key.to_string(),
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }
    Ok(())
}

fn indexed_key<'a>(key: &'a str, prefix: &str) -> Option<&'a str> {
    key.strip_prefix(prefix)
        .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

fn check_key(key: &str) -> std::result::Result<(), String> {
    let known = matches!(key, "system" | "mode" | "integrator" | "h" | "t_final" | "output" | "format")
        || key.strip_prefix("param.").is_some_and(|n| !n.is_empty())
        || key.strip_prefix("tolerance.").is_some_and(|n| !n.is_empty())
        || ["initial.q", "initial.p", "initial.v", "final.q"]
            .iter()
            .any(|p| indexed_key(key, p).is_some());
    if known {
        Ok(())
    } else {
        Err(format!("unknown key `{key}`"))
    }
}

fn parse_number(key: &str, value: &str) -> std::result::Result<f64, String> {
    let x: f64 = value
        .parse()
        .map_err(|_| format!("`{key}` expects a number, got `{value}`"))?;
    if !x.is_finite() {
        return Err(format!("`{key}` must be finite"));
    }
    Ok(x)
}

/// Per-line type and range checks.
fn check_scalar(key: &str, value: &str) -> std::result::Result<(), String> {
    match key {
        "system" | "output" => Ok(()),
        "mode" => value.parse::<Mode>().map(|_| ()),
        "format" => value.parse::<OutputFormat>().map(|_| ()),
        "integrator" => value.parse::<Method>().map(|_| ()).map_err(|e| e.to_string()),
        "h" | "t_final" => {
            let x = parse_number(key, value)?;
            if x > 0.0 {
                Ok(())
            } else {
                Err(format!("`{key}` must be positive, got {x}"))
            }
        }
        k if k.starts_with("tolerance.") => {
            let x = parse_number(key, value)?;
            if x >= 0.0 {
                Ok(())
            } else {
                Err(format!("`{key}` must be non-negative"))
            }
        }
        _ => parse_number(key, value).map(|_| ()),
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with_overrides(text, &[])
}

/// Parse `text`, then apply `key=value` overrides (reported as lines after
/// the end of the file). An override replaces a key set in the file.
pub fn parse_config_with_overrides(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut entries = BTreeMap::new();
    collect_entries(text, 1, false, &mut entries)?;
    let mut next_line = text.lines().count() + 1;
    let mut seen = BTreeMap::new();
    for o in overrides {
        collect_entries(o, next_line, false, &mut seen)?;
        next_line += 1;
    }
    entries.extend(seen);
    assemble(entries, next_line)
}

fn assemble(entries: BTreeMap<String, Entry>, end_line: usize) -> Result<RunConfig> {
    let get = |k: &str| entries.get(k);
    let number = |k: &str| -> Result<Option<f64>> {
        get(k)
            .map(|e| parse_number(k, &e.value).map_err(|m| parse_err(e.line, m)))
            .transpose()
    };
    let line_of = |k: &str| get(k).map(|e| e.line).unwrap_or(end_line);

    let system_entry = get("system").ok_or_else(|| parse_err(end_line, "missing `system`"))?;
    let mode: Mode = match get("mode") {
        Some(e) => e.value.parse().map_err(|m: String| parse_err(e.line, m))?,
        None => Mode::Simulate,
    };
    let h = number("h")?.ok_or_else(|| parse_err(end_line, "missing `h`"))?;
    let t_final = number("t_final")?.ok_or_else(|| parse_err(end_line, "missing `t_final`"))?;
    let steps = (t_final / h).round();
    if steps < 1.0 || (steps * h - t_final).abs() > 1e-9 * t_final {
        return Err(parse_err(
            line_of("t_final"),
            format!("t_final = {t_final} is not a whole number of steps h = {h}"),
        ));
    }

    let mut params = BTreeMap::new();
    for (k, e) in &entries {
        if let Some(name) = k.strip_prefix("param.") {
            params.insert(name.to_string(), parse_number(k, &e.value).map_err(|m| parse_err(e.line, m))?);
        }
    }
    let system = SystemConfig {
        name: system_entry.value.clone(),
        parameters: params,
    };
    let config_error = |e: Error| match e {
        Error::Config { parameter, message } => {
            let line = get(&format!("param.{parameter}")).map(|e| e.line).unwrap_or(system_entry.line);
            parse_err(line, format!("`{parameter}`: {message}"))
        }
        other => other,
    };

    let integrator: Method = match get("integrator") {
        Some(e) => e.value.parse().map_err(|err: Error| parse_err(e.line, err.to_string()))?,
        None => Method::ImplicitMidpoint,
    };

    let (dim, built) = if mode == Mode::EulerTop {
        if system.name != EULER_TOP {
            return Err(parse_err(system_entry.line, "euler-top mode needs `system = euler-top`"));
        }
        if integrator != Method::ImplicitMidpoint {
            return Err(parse_err(line_of("integrator"), "the reduced Euler top is integrated with implicit-midpoint only"));
        }
        euler_top_inertia(&system).map_err(config_error)?;
        (3, None)
    } else {
        let sys = build_system(&system).map_err(config_error)?;
        (sys.dim(), Some(sys))
    };
    let coord_len = built.as_ref().map(|s| s.manifold().coord_len()).unwrap_or(3);

    let vector = |prefix: &str, len: usize| -> Result<Option<Vec<f64>>> {
        let mut out = vec![0.0; len];
        let mut any = false;
        for (k, e) in &entries {
            if let Some(idx) = indexed_key(k, prefix) {
                let i: usize = idx.parse().map_err(|_| parse_err(e.line, "bad index"))?;
                if i >= len {
                    return Err(parse_err(e.line, format!("`{k}` is out of range for dimension {len}")));
                }
                out[i] = parse_number(k, &e.value).map_err(|m| parse_err(e.line, m))?;
                any = true;
            }
        }
        Ok(any.then_some(out))
    };
    let initial_q = vector("initial.q", coord_len)?.unwrap_or_else(|| match &built {
        Some(sys) => ManifoldPoint::origin(sys.manifold().clone()).coords().to_vec(),
        None => vec![0.0; coord_len],
    });
    let p = vector("initial.p", dim)?;
    let v = vector("initial.v", dim)?;
    let initial_p = match (p, v, &built) {
        (Some(_), Some(_), _) => {
            return Err(parse_err(line_of("initial.v0").min(end_line), "give either initial.p* or initial.v*, not both"))
        }
        (Some(p), None, _) => p,
        (None, Some(v), Some(sys)) => {
            let q = ManifoldPoint::new(sys.manifold().clone(), initial_q.clone())
                .map_err(|e| parse_err(end_line, e.to_string()))?;
            let v = TangentValue::new(q.clone(), v).map_err(|e| parse_err(end_line, e.to_string()))?;
            legendre(sys, &q, &v)
                .map_err(|e| parse_err(end_line, e.to_string()))?
                .p()
                .components()
                .to_vec()
        }
        (None, Some(_), None) => return Err(parse_err(end_line, "euler-top takes initial.p* (body angular momentum)")),
        (None, None, _) => vec![0.0; dim],
    };
    let final_q = vector("final.q", coord_len)?;
    match mode {
        Mode::Bvp => {
            if final_q.is_none() {
                return Err(parse_err(end_line, "bvp mode needs final.q* endpoint coordinates"));
            }
            if steps < 2.0 {
                return Err(parse_err(line_of("h"), "bvp mode needs at least two segments"));
            }
        }
        _ => {
            if let Some(e) = entries.iter().find(|(k, _)| k.starts_with("final.q")).map(|(_, e)| e) {
                return Err(parse_err(e.line, "final.q* is only used in bvp mode"));
            }
        }
    }

    let output_format: OutputFormat = match get("format") {
        Some(e) => e.value.parse().map_err(|m: String| parse_err(e.line, m))?,
        None => OutputFormat::Csv,
    };
    let output_path = get("output")
        .map(|e| e.value.clone())
        .unwrap_or_else(|| format!("geomech-out.{}", output_format.as_str()));
    let mut tolerances = BTreeMap::new();
    for (k, e) in &entries {
        if let Some(name) = k.strip_prefix("tolerance.") {
            tolerances.insert(name.to_string(), parse_number(k, &e.value).map_err(|m| parse_err(e.line, m))?);
        }
    }

    Ok(RunConfig {
        system,
        mode,
        integrator,
        h,
        t_final,
        initial_q,
        initial_p,
        final_q,
        output_path,
        output_format,
        tolerances,
    })
}

fn euler_top_inertia(system: &SystemConfig) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for key in system.parameters.keys() {
        if !["i1", "i2", "i3"].contains(&key.as_str()) {
            return Err(Error::Config {
                parameter: key.clone(),
                message: "not a parameter of `euler-top`".into(),
            });
        }
    }
    for (slot, name) in out.iter_mut().zip(["i1", "i2", "i3"]) {
        let v = *system.parameters.get(name).ok_or_else(|| Error::Config {
            parameter: name.into(),
            message: "required by `euler-top`".into(),
        })?;
        if v.is_nan() || v <= 0.0 {
            return Err(Error::Config {
                parameter: name.into(),
                message: format!("invalid value {v}"),
            });
        }
        *slot = v;
    }
    Ok(out)
}

/// Emit the config in the grammar [`parse_config`] reads. Momenta are
/// written as `initial.p*`.
pub fn render_config(config: &RunConfig) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    };
    let num = |x: f64| format!("{x:?}");
    line("system", config.system.name.clone());
    line("mode", config.mode.as_str().into());
    line("integrator", config.integrator.as_str().into());
    line("h", num(config.h));
    line("t_final", num(config.t_final));
    for (k, v) in &config.system.parameters {
        line(&format!("param.{k}"), num(*v));
    }
    for (i, q) in config.initial_q.iter().enumerate() {
        line(&format!("initial.q{i}"), num(*q));
    }
    for (i, p) in config.initial_p.iter().enumerate() {
        line(&format!("initial.p{i}"), num(*p));
    }
    if let Some(f) = &config.final_q {
        for (i, q) in f.iter().enumerate() {
            line(&format!("final.q{i}"), num(*q));
        }
    }
    line("output", config.output_path.clone());
    line("format", config.output_format.as_str().into());
    for (k, v) in &config.tolerances {
        line(&format!("tolerance.{k}"), num(*v));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantityReport {
    pub name: String,
    pub initial: f64,
    pub max_abs_drift: f64,
    /// `max_abs_drift / |initial|`, or the absolute drift when
    /// `|initial| ≤ 1e-12`.
    pub relative_drift: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl QuantityReport {
    pub fn from_series(name: &str, series: &[f64], tolerance: f64) -> Self {
        let initial = series.first().copied().unwrap_or(0.0);
        let max_abs_drift = series.iter().fold(0.0f64, |m, x| m.max((x - initial).abs()));
        Self::from_drift(name, initial, max_abs_drift, tolerance)
    }

    fn from_drift(name: &str, initial: f64, max_abs_drift: f64, tolerance: f64) -> Self {
        let relative_drift = if initial.abs() > 1e-12 {
            max_abs_drift / initial.abs()
        } else {
            max_abs_drift
        };
        QuantityReport {
            name: name.to_string(),
            initial,
            max_abs_drift,
            relative_drift,
            tolerance,
            pass: relative_drift <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConservationReport {
    pub system: String,
    pub mode: Mode,
    pub method: String,
    pub h: f64,
    pub steps: usize,
    pub quantities: Vec<QuantityReport>,
}

impl ConservationReport {
    pub fn all_pass(&self) -> bool {
        self.quantities.iter().all(|q| q.pass)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite report serializes");
        s.push('\n');
        s
    }
}

/// Exit status: 0 when every check passes, 2 on a conservation failure,
/// 1 on an execution error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    Error = 1,
    CheckFailed = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct RunOutput {
    pub table: Table,
    pub report: ConservationReport,
}

impl fmt::Display for ConservationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in &self.quantities {
            writeln!(
                f,
                "{:<16} initial {:>24} drift {:.3e} (rel {:.3e}, tol {:.1e}) {}",
                q.name,
                format!("{:.12e}", q.initial),
                q.max_abs_drift,
                q.relative_drift,
                q.tolerance,
                if q.pass { "ok" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

/// Named symmetry candidates for a configuration space.
fn symmetry_candidates(manifold: &Manifold) -> Vec<(String, GroupAction, usize)> {
    let mut out = Vec::new();
    if manifold == &Manifold::Euclidean(3) {
        let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for (k, name) in ["x", "y", "z"].iter().enumerate() {
            out.push((format!("p_{name}"), GroupAction::translation(axes[k]).expect("unit axis"), 0));
        }
        for (k, name) in ["x", "y", "z"].iter().enumerate() {
            out.push((format!("L_{name}"), GroupAction::rotation(axes[k]).expect("unit axis"), k));
        }
    }
    for i in manifold.circle_components() {
        out.push((format!("p_q{i}"), GroupAction::phase_rotation(i), 0));
    }
    out
}

/// Execute a configuration in memory.
pub fn execute(config: &RunConfig) -> Result<RunOutput> {
    let n = config.steps();
    match config.mode {
        Mode::Simulate => {
            let sys = build_system(&config.system)?;
            let s0 = PhaseState::from_coords(sys.manifold(), config.initial_q.clone(), config.initial_p.clone())?;
            let traj = integrate(&sys, &s0, config.h, n, config.integrator)?;
            let table = trajectory_table(&sys, &traj)?;
            let energies: Vec<f64> = table.rows.iter().map(|r| *r.last().expect("H column")).collect();
            let mut quantities = vec![QuantityReport::from_series("H", &energies, config.tolerance("H"))];
            quantities.extend(noether_reports(config, &sys, &traj.states)?);
            Ok(RunOutput {
                table,
                report: ConservationReport {
                    system: sys.name().into(),
                    mode: config.mode,
                    method: config.integrator.as_str().into(),
                    h: config.h,
                    steps: n,
                    quantities,
                },
            })
        }
        Mode::Bvp => {
            let sys = build_system(&config.system)?;
            let qa = ManifoldPoint::new(sys.manifold().clone(), config.initial_q.clone())?;
            let qb = ManifoldPoint::new(
                sys.manifold().clone(),
                config.final_q.clone().ok_or_else(|| Error::invalid("bvp mode needs final.q"))?,
            )?;
            let path = solve_bvp(&sys, &qa, &qb, config.t_final, n, None)?;
            let grad: Vec<f64> = action_gradient(&sys, &path)?.into_iter().flatten().collect();
            let residual = max_abs(&grad);
            Ok(RunOutput {
                table: path_table(&path),
                report: ConservationReport {
                    system: sys.name().into(),
                    mode: config.mode,
                    method: "newton-midpoint-action".into(),
                    h: config.h,
                    steps: n,
                    quantities: vec![QuantityReport::from_drift(
                        "action_gradient",
                        0.0,
                        residual,
                        config.tolerance("action_gradient"),
                    )],
                },
            })
        }
        Mode::EulerTop => {
            let inertia = euler_top_inertia(&config.system)?;
            let pi: [f64; 3] = config
                .initial_p
                .clone()
                .try_into()
                .map_err(|_| Error::invalid("euler-top needs three momentum components"))?;
            let b0 = BodyAngularMomentum::new(pi, inertia)?;
            let samples = integrate_euler_top(&b0, config.h, n)?;
            let table = euler_top_table(&b0, config.h, &samples);
            let series = |f: fn(&BodyAngularMomentum) -> f64| -> Vec<f64> {
                samples.iter().map(|p| f(&b0.with_pi(*p))).collect()
            };
            Ok(RunOutput {
                table,
                report: ConservationReport {
                    system: EULER_TOP.into(),
                    mode: config.mode,
                    method: Method::ImplicitMidpoint.as_str().into(),
                    h: config.h,
                    steps: n,
                    quantities: vec![
                        QuantityReport::from_series("casimir", &series(casimir), config.tolerance("casimir")),
                        QuantityReport::from_series("energy", &series(rotational_energy), config.tolerance("energy")),
                    ],
                },
            })
        }
    }
}

fn noether_reports(config: &RunConfig, sys: &MechanicalSystem, states: &[PhaseState]) -> Result<Vec<QuantityReport>> {
    let mut out = Vec::new();
    for (name, action, component) in symmetry_candidates(sys.manifold()) {
        if !is_invariant(Execution::Sequential, sys, &action, INVARIANCE_SEED)? {
            continue;
        }
        let series = states
            .iter()
            .map(|s| Ok(momentum_map(&action, s)?.charge[component]))
            .collect::<Result<Vec<f64>>>()?;
        out.push(QuantityReport::from_series(&name, &series, config.tolerance(&name)));
    }
    Ok(out)
}

/// Execute and write the data file and `<output>.report.json`.
pub fn run(config: &RunConfig) -> Result<(ExitStatus, ConservationReport)> {
    let out = execute(config)?;
    let data = match config.output_format {
        OutputFormat::Csv => out.table.to_csv_string(),
        OutputFormat::Json => out.table.to_json_string(),
    };
    write_file(Path::new(&config.output_path), &data)?;
    write_file(&config.report_path(), &out.report.to_json_string())?;
    let status = if out.report.all_pass() {
        ExitStatus::Pass
    } else {
        ExitStatus::CheckFailed
    };
    Ok((status, out.report))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

/// `geomech systems` listing.
pub fn systems_listing() -> String {
    let mut s = String::new();
    for e in CATALOG {
        s.push_str(&format!(
            "{:<18} {:<24} params: {:<18} {}\n",
            e.name,
            e.manifold,
            e.parameters.join(","),
            e.summary
        ));
    }
    s.push_str(&format!(
        "{:<18} {:<24} params: {:<18} {}\n",
        EULER_TOP, "reduced (body frame)", "i1,i2,i3", "free rigid body, mode = euler-top"
    ));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const PENDULUM: &str = "system = pendulum\nmode = simulate\nintegrator = verlet\nh = 0.01\nt_final = 10\nparam.m = 1\nparam.l = 1\nparam.g = 9.81\ninitial.q0 = 0.1\ninitial.p0 = 0";

    #[test]
    fn parses_the_pendulum_example() {
        let c = parse_config(PENDULUM).unwrap();
        assert_eq!(c.system.name, "pendulum");
        assert_eq!(c.mode, Mode::Simulate);
        assert_eq!(c.integrator, Method::Verlet);
        assert_eq!(c.h, 0.01);
        assert_eq!(c.steps(), 1000);
        assert_eq!(c.initial_q, vec![0.1]);
        assert_eq!(c.initial_p, vec![0.0]);
        assert_eq!(c.system.parameters["g"], 9.81);
    }

    #[test]
    fn negative_step_names_h_and_line() {
        let err = parse_config("h = -1").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 1);
                assert!(message.contains('h'), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn velocity_is_converted_to_momentum() {
        let text = PENDULUM.replace("initial.p0 = 0", "initial.v0 = 2");
        assert_eq!(parse_config(&text).unwrap().initial_p, vec![2.0]);
        let heavy = text.replace("param.m = 1", "param.m = 3").replace("param.l = 1", "param.l = 2");
        assert_eq!(parse_config(&heavy).unwrap().initial_p, vec![24.0]);
    }

    #[test]
    fn rejects_unknown_duplicate_and_mistyped_keys() {
        let e = parse_config(&format!("{PENDULUM}\ncolour = red")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 11, .. }), "{e:?}");
        let e = parse_config(&format!("{PENDULUM}\nh = 0.02")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 11, .. }), "{e:?}");
        let e = parse_config(&PENDULUM.replace("h = 0.01", "h = fast")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }), "{e:?}");
        let e = parse_config(&PENDULUM.replace("param.g = 9.81", "param.q = 9.81")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 8, .. }), "{e:?}");
        let e = parse_config(&format!("{PENDULUM}\ninitial.q3 = 1")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 11, .. }), "{e:?}");
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = format!("# header\n\n{}\n   # trailing", PENDULUM.replace("h = 0.01", "h = 0.01  # step"));
        assert_eq!(parse_config(&text).unwrap().h, 0.01);
    }

    #[test]
    fn overrides_replace_file_values() {
        let c = parse_config_with_overrides(PENDULUM, &["h=0.02".into(), "integrator = implicit-midpoint".into()]).unwrap();
        assert_eq!(c.h, 0.02);
        assert_eq!(c.steps(), 500);
        assert_eq!(c.integrator, Method::ImplicitMidpoint);
        let e = parse_config_with_overrides(PENDULUM, &["h=0.02".into(), "h=0.03".into()]).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 12, .. }), "{e:?}");
    }

    #[test]
    fn render_round_trip() {
        let texts = [
            PENDULUM.to_string(),
            "system = euler-top\nmode = euler-top\nh = 0.001\nt_final = 1\nparam.i1 = 1\nparam.i2 = 2\nparam.i3 = 3\ninitial.p1 = 1\nformat = json\ntolerance.casimir = 1e-9".to_string(),
            "system = free-particle\nmode = bvp\nh = 0.125\nt_final = 1\nparam.m = 1\nfinal.q0 = 1\n".to_string(),
        ];
        for t in texts {
            let c = parse_config(&t).unwrap();
            assert_eq!(parse_config(&render_config(&c)).unwrap(), c);
        }
    }

    #[test]
    fn mode_requirements() {
        let e = parse_config("system = free-particle\nmode = bvp\nh = 0.125\nt_final = 1\nparam.m = 1").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        let e = parse_config("system = pendulum\nmode = euler-top\nh = 0.1\nt_final = 1").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e:?}");
        let e = parse_config(&PENDULUM.replace("t_final = 10", "t_final = 10.005")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 5, .. }), "{e:?}");
    }

    #[test]
    fn simulate_pendulum_report() {
        let out = execute(&parse_config(PENDULUM).unwrap()).unwrap();
        assert_eq!(out.table.rows.len(), 1001);
        let h = &out.report.quantities[0];
        assert_eq!(h.name, "H");
        assert!(h.max_abs_drift <= 1e-4);
        assert!(out.report.all_pass());
        // gravity breaks the phase-rotation symmetry, so only H is reported
        assert_eq!(out.report.quantities.len(), 1);
    }

    #[test]
    fn free_particle_reports_momentum_and_angular_momentum() {
        let text = "system = free-particle\nh = 0.1\nt_final = 1\nparam.m = 2\ninitial.q0 = 1\ninitial.p1 = 0.5";
        let out = execute(&parse_config(text).unwrap()).unwrap();
        let names: Vec<&str> = out.report.quantities.iter().map(|q| q.name.as_str()).collect();
        assert_eq!(names, ["H", "p_x", "p_y", "p_z", "L_x", "L_y", "L_z"]);
        assert!(out.report.all_pass());
    }

    #[test]
    fn euler_top_equilibrium_is_constant() {
        let text = "system = euler-top\nmode = euler-top\nh = 0.01\nt_final = 1\nparam.i1 = 1\nparam.i2 = 2\nparam.i3 = 3\ninitial.p0 = 1";
        let out = execute(&parse_config(text).unwrap()).unwrap();
        assert!(out.table.rows.iter().all(|r| r[1..4] == [1.0, 0.0, 0.0]));
        assert!(out.report.all_pass());
    }

    #[test]
    fn bvp_free_particle_path() {
        let text = "system = free-particle\nmode = bvp\nh = 0.125\nt_final = 1\nparam.m = 1\nfinal.q0 = 1";
        let out = execute(&parse_config(text).unwrap()).unwrap();
        assert_eq!(out.table.columns, ["t", "q0", "q1", "q2"]);
        for (i, row) in out.table.rows.iter().enumerate() {
            assert!((row[1] - i as f64 / 8.0).abs() < 1e-12);
        }
        assert!(out.report.all_pass());
    }

    #[test]
    fn tight_tolerance_fails_the_check() {
        let text = format!("{}\ntolerance.H = 1e-9", PENDULUM.replace("verlet", "symplectic-euler"));
        let out = execute(&parse_config(&text).unwrap()).unwrap();
        assert!(!out.report.all_pass());
    }
}
