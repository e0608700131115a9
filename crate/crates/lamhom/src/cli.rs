//! Command-line drivers.  Every analysis is configured by a JSON input file
//! with a strict schema (unknown fields rejected) and answers with a JSON
//! report carrying the input hash and the tolerance set, so a finding can be
//! reproduced from the report alone.
//!
//! Exit codes: `0` success, `2` invalid input (unreadable file, schema
//! violation, bad flags), `3` analysis completed but the verdict is
//! infeasible, inconclusive or a discrepancy.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cell::CellOperator;
use crate::coercivity::{
    lambda_per_sufficient, CoercivityVerdict, GeometryCase, PerCoercivityVerdict,
};
use crate::ellipticity::{
    alpha_se_isotropic, alpha_se_numeric, alpha_vse_isotropic, alpha_vse_numeric, EllipticityReport,
};
use crate::gutierrez::{
    select_parameters, verify_construction, ConstructionVerdict, RefinementStrategy, SeedModuli,
    ALL_STRATEGIES,
};
use crate::lamination::laminate_general;
use crate::report::{format_float, sha256_hex, to_json_string, Tolerances};
use crate::tensors::{Axis, IsotropicPhase, LaminateProfile, Layer, TensorSpec};
use crate::translation::{
    certify_weak_coercivity, scalar_interval, search_translation, CertificateOutcome,
    ScalarInterval, TranslationSearch,
};
use crate::Error;

/// Upper bound on the number of runs a single sweep may expand to.
const MAX_SWEEP_RUNS: usize = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "lamhom",
    version,
    about = "Homogenized elasticity of periodic laminates: effective tensors, \
             ellipticity constants, translation certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Strong and very strong ellipticity constants of a stiffness tensor
    Ellipticity(CommonArgs),
    /// Effective tensor of a layered profile (averaged lamination relations)
    Laminate(CommonArgs),
    /// Discrete periodic cell solve: energy, corrector, homogenized tensor
    Cell(CommonArgs),
    /// Translation certificate of weak coercivity for a layered profile
    Translate(CommonArgs),
    /// Sufficient conditions for positive periodic coercivity of an
    /// isotropic multiphase laminate
    Percoercivity(CommonArgs),
    /// Audit of the rank-two construction that drives the strong-ellipticity
    /// constant of the homogenized tensor to zero
    Gutierrez(CommonArgs),
    /// Cartesian parameter sweep of any other analysis
    Sweep(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Input JSON file
    #[arg(long)]
    input: PathBuf,
    /// Write the JSON report here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Additionally write CSV rows next to the report (sweep only; requires
    /// --output)
    #[arg(long)]
    csv: bool,
    /// Tolerance override, repeatable: --tol zero=1e-9
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
    /// Worker threads for sweep runs (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
}

/// Parses `argv` and executes the selected analysis, returning the process
/// exit code.  Diagnostics go to the error stream; reports go to `--output`
/// or standard output.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AnalysisKind {
    Ellipticity,
    Laminate,
    Cell,
    Translate,
    Percoercivity,
    Gutierrez,
}

impl AnalysisKind {
    fn from_name(name: &str) -> Option<Self> {
        match name {
            "ellipticity" => Some(Self::Ellipticity),
            "laminate" => Some(Self::Laminate),
            "cell" => Some(Self::Cell),
            "translate" => Some(Self::Translate),
            "percoercivity" => Some(Self::Percoercivity),
            "gutierrez" => Some(Self::Gutierrez),
            _ => None,
        }
    }
}

struct Analyzed {
    result: Value,
    exit: i32,
}

#[derive(Serialize)]
struct Envelope<'a> {
    analysis: &'a str,
    input_sha256: String,
    tolerances: &'a Tolerances,
    result: Value,
}

fn execute(cli: Cli) -> Result<i32, String> {
    let (name, args) = match cli.command {
        Command::Ellipticity(a) => ("ellipticity", a),
        Command::Laminate(a) => ("laminate", a),
        Command::Cell(a) => ("cell", a),
        Command::Translate(a) => ("translate", a),
        Command::Percoercivity(a) => ("percoercivity", a),
        Command::Gutierrez(a) => ("gutierrez", a),
        Command::Sweep(a) => ("sweep", a),
    };

    let bytes =
        fs::read(&args.input).map_err(|e| format!("cannot read {}: {e}", args.input.display()))?;
    let input_sha256 = sha256_hex(&bytes);
    let value: Value = serde_json::from_slice(&bytes)
        .map_err(|e| format!("{} is not valid JSON: {e}", args.input.display()))?;

    let mut tol = Tolerances::default();
    for spec in &args.tol {
        let (k, v) = spec
            .split_once('=')
            .ok_or_else(|| format!("--tol expects NAME=VALUE, got `{spec}`"))?;
        let v: f64 = v
            .parse()
            .map_err(|_| format!("--tol {k}: `{v}` is not a number"))?;
        tol.set(k, v).map_err(|e| e.to_string())?;
    }

    if args.csv && name != "sweep" {
        return Err("--csv applies only to the sweep subcommand".into());
    }
    if args.csv && args.output.is_none() {
        return Err("--csv needs --output to name the CSV destination".into());
    }
    if args.jobs == Some(0) {
        return Err("--jobs must be at least 1".into());
    }

    let analyzed = match AnalysisKind::from_name(name) {
        Some(kind) => run_analysis(kind, &value, &tol)?,
        None => run_sweep(&value, &tol, args.jobs, args.csv, args.output.as_deref())?,
    };

    let envelope = Envelope {
        analysis: name,
        input_sha256,
        tolerances: &tol,
        result: analyzed.result,
    };
    let text = to_json_string(&envelope).map_err(|e| e.to_string())?;
    match &args.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(analyzed.exit)
}

// ---------------------------------------------------------------------------
// input schemas
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerSpec {
    tensor: TensorSpec,
    fraction: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileSpec {
    axis: Axis,
    layers: Vec<LayerSpec>,
}

impl ProfileSpec {
    fn build(&self) -> crate::Result<LaminateProfile> {
        let mut layers = Vec::with_capacity(self.layers.len());
        for spec in &self.layers {
            let tensor = spec.tensor.to_tensor()?;
            layers.push(match spec.tensor.phase() {
                Some(phase) => Layer::isotropic(phase, spec.fraction),
                None => Layer::new(tensor, spec.fraction),
            });
        }
        LaminateProfile::new(self.axis, layers)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellInput {
    profile: ProfileSpec,
    #[serde(default)]
    m: Option<[[f64; 3]; 3]>,
    n_elems: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TranslateInput {
    profile: ProfileSpec,
    #[serde(default)]
    d: Option<[[f64; 3]; 3]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PercoercivityInput {
    phases: Vec<IsotropicPhase>,
    #[serde(default)]
    d: Option<f64>,
    #[serde(default = "GeometryCase::default_none")]
    geometry: GeometryCase,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GutierrezInput {
    lambda_a: f64,
    mu_a: f64,
    #[serde(default)]
    mu_b: Option<f64>,
    #[serde(default)]
    lambda_b: Option<f64>,
    #[serde(default)]
    alpha_c: Option<f64>,
    /// Run only this refinement strategy; omitted means all of them.
    #[serde(default)]
    strategy: Option<RefinementStrategy>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepInput {
    analysis: String,
    base: Value,
    /// Dotted JSON paths into `base`, each with the list of values to try.
    grid: BTreeMap<String, Vec<Value>>,
}

// ---------------------------------------------------------------------------
// result schemas
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct EllipticityResult {
    alpha_se: f64,
    alpha_vse: f64,
    alpha_se_closed: Option<f64>,
    alpha_vse_closed: Option<f64>,
    alpha_vse_numeric: f64,
    numeric: EllipticityReport,
}

#[derive(Serialize)]
struct LaminateResult {
    tensor: TensorSpec,
    alpha_se: f64,
}

#[derive(Serialize)]
struct CellResult {
    verdict: &'static str,
    n_elems: usize,
    rayleigh: Option<f64>,
    tensor: Option<TensorSpec>,
    energy: Option<f64>,
    corrector_max: Option<f64>,
}

#[derive(Serialize)]
struct TranslateResult {
    scalar_interval: Option<ScalarInterval>,
    certificate: Option<CertificateOutcome>,
    search: Option<TranslationSearch>,
    feasible: bool,
}

#[derive(Serialize)]
struct PercoercivityResult {
    scalar_interval: ScalarInterval,
    verdict: PerCoercivityVerdict,
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, String> {
    serde_json::to_value(v).map_err(|e| e.to_string())
}

fn parse_input<T: for<'de> Deserialize<'de>>(value: &Value) -> Result<T, String> {
    serde_json::from_value(value.clone()).map_err(|e| format!("invalid input: {e}"))
}

fn run_analysis(kind: AnalysisKind, value: &Value, tol: &Tolerances) -> Result<Analyzed, String> {
    match kind {
        AnalysisKind::Ellipticity => {
            let spec: TensorSpec = parse_input(value)?;
            let tensor = spec.to_tensor().map_err(|e| e.to_string())?;
            let numeric = alpha_se_numeric(&tensor);
            let vse_numeric = alpha_vse_numeric(&tensor);
            let closed = spec
                .phase()
                .map(|p| (alpha_se_isotropic(&p), alpha_vse_isotropic(&p)));
            let result = EllipticityResult {
                alpha_se: closed.map_or(numeric.alpha_se, |c| c.0),
                alpha_vse: closed.map_or(vse_numeric, |c| c.1),
                alpha_se_closed: closed.map(|c| c.0),
                alpha_vse_closed: closed.map(|c| c.1),
                alpha_vse_numeric: vse_numeric,
                numeric,
            };
            Ok(Analyzed {
                result: to_value(&result)?,
                exit: 0,
            })
        }
        AnalysisKind::Laminate => {
            let spec: ProfileSpec = parse_input(value)?;
            let profile = spec.build().map_err(|e| e.to_string())?;
            let tensor = laminate_general(&profile).map_err(|e| e.to_string())?;
            let result = LaminateResult {
                tensor: TensorSpec::of_tensor(&tensor),
                alpha_se: alpha_se_numeric(&tensor).alpha_se,
            };
            Ok(Analyzed {
                result: to_value(&result)?,
                exit: 0,
            })
        }
        AnalysisKind::Cell => {
            let input: CellInput = parse_input(value)?;
            let profile = input.profile.build().map_err(|e| e.to_string())?;
            match CellOperator::new(&profile, input.n_elems) {
                Ok(op) => {
                    let tensor = op.homogenize().map_err(|e| e.to_string())?;
                    let (energy, corrector_max) = match input.m {
                        Some(rows) => {
                            let m = Matrix3::from_fn(|i, j| rows[i][j]);
                            let sol = op.solve(&m);
                            let cmax = sol
                                .corrector
                                .iter()
                                .flat_map(|c| c.iter())
                                .fold(0.0f64, |acc, v| acc.max(v.abs()));
                            (Some(sol.energy), Some(cmax))
                        }
                        None => (None, None),
                    };
                    let result = CellResult {
                        verdict: "solved",
                        n_elems: op.element_count(),
                        rayleigh: None,
                        tensor: Some(TensorSpec::of_tensor(&tensor)),
                        energy,
                        corrector_max,
                    };
                    Ok(Analyzed {
                        result: to_value(&result)?,
                        exit: 0,
                    })
                }
                Err(Error::UnboundedBelow { rayleigh }) => {
                    let result = CellResult {
                        verdict: "unbounded_below",
                        n_elems: input.n_elems,
                        rayleigh: Some(rayleigh),
                        tensor: None,
                        energy: None,
                        corrector_max: None,
                    };
                    Ok(Analyzed {
                        result: to_value(&result)?,
                        exit: 3,
                    })
                }
                Err(e) => Err(e.to_string()),
            }
        }
        AnalysisKind::Translate => {
            let input: TranslateInput = parse_input(value)?;
            let profile = input.profile.build().map_err(|e| e.to_string())?;
            let interval = profile
                .isotropic_phases()
                .map(|phases| scalar_interval(&phases));
            let (certificate, search) = match input.d {
                Some(rows) => {
                    let d = Matrix3::from_fn(|i, j| rows[i][j]);
                    (Some(certify_weak_coercivity(&profile, &d, tol.psd)), None)
                }
                None => (None, Some(search_translation(&profile, tol.psd))),
            };
            let feasible = certificate.as_ref().is_some_and(|c| c.feasible)
                || search.as_ref().is_some_and(|s| s.feasible);
            let result = TranslateResult {
                scalar_interval: interval,
                certificate,
                search,
                feasible,
            };
            Ok(Analyzed {
                result: to_value(&result)?,
                exit: if feasible { 0 } else { 3 },
            })
        }
        AnalysisKind::Percoercivity => {
            let input: PercoercivityInput = parse_input(value)?;
            if input.phases.is_empty() {
                return Err("invalid input: need at least one phase".into());
            }
            for p in &input.phases {
                IsotropicPhase::new(p.lambda, p.mu).map_err(|e| e.to_string())?;
            }
            let interval = scalar_interval(&input.phases);
            let d = input.d.unwrap_or_else(|| {
                if interval.is_empty() {
                    interval.lo
                } else {
                    0.5 * (interval.lo + interval.hi)
                }
            });
            let verdict = lambda_per_sufficient(&input.phases, d, input.geometry);
            let exit = if verdict.verdict == CoercivityVerdict::GuaranteedPositive {
                0
            } else {
                3
            };
            let result = PercoercivityResult {
                scalar_interval: interval,
                verdict,
            };
            Ok(Analyzed {
                result: to_value(&result)?,
                exit,
            })
        }
        AnalysisKind::Gutierrez => {
            let input: GutierrezInput = parse_input(value)?;
            let seed = SeedModuli {
                lambda_a: input.lambda_a,
                mu_a: input.mu_a,
                mu_b: input.mu_b,
                lambda_b: input.lambda_b,
                alpha_c: input.alpha_c,
            };
            let params = select_parameters(&seed).map_err(|e| e.to_string())?;
            let strategies: Vec<RefinementStrategy> = match input.strategy {
                Some(s) => vec![s],
                None => ALL_STRATEGIES.to_vec(),
            };
            let report =
                verify_construction(&params, &strategies, tol).map_err(|e| e.to_string())?;
            let exit = if report.overall == ConstructionVerdict::LambdaZeroVerified {
                0
            } else {
                3
            };
            Ok(Analyzed {
                result: to_value(&report)?,
                exit,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RunRecord {
    params: BTreeMap<String, Value>,
    result: Option<Value>,
    exit: Option<i32>,
    error: Option<String>,
}

#[derive(Serialize)]
struct SweepResult {
    analysis: String,
    runs: Vec<RunRecord>,
}

/// Sets `path` (dot-separated; numeric segments index arrays) inside `root`,
/// creating intermediate objects as needed.  Typos survive only until the
/// per-run schema check, which rejects unknown fields.
fn set_path(root: &mut Value, path: &str, new: &Value) -> Result<(), String> {
    let mut cursor = root;
    let segments: Vec<&str> = path.split('.').collect();
    if segments.iter().any(|s| s.is_empty()) {
        return Err(format!("grid path `{path}` has an empty segment"));
    }
    for (k, seg) in segments.iter().enumerate() {
        let last = k + 1 == segments.len();
        let index = seg.parse::<usize>().ok();
        match cursor {
            Value::Array(items) if index.is_some() => {
                let idx = index.unwrap();
                let len = items.len();
                let slot = items.get_mut(idx).ok_or_else(|| {
                    format!("grid path `{path}`: index {idx} out of range (len {len})")
                })?;
                if last {
                    *slot = new.clone();
                    return Ok(());
                }
                cursor = slot;
            }
            Value::Object(map) => {
                if last {
                    map.insert((*seg).to_string(), new.clone());
                    return Ok(());
                }
                cursor = map
                    .entry((*seg).to_string())
                    .or_insert_with(|| Value::Object(Default::default()));
            }
            _ => {
                return Err(format!(
                    "grid path `{path}`: segment `{seg}` does not address an object or array"
                ));
            }
        }
    }
    Ok(())
}

fn run_sweep(
    value: &Value,
    tol: &Tolerances,
    jobs: Option<usize>,
    csv: bool,
    output: Option<&Path>,
) -> Result<Analyzed, String> {
    let input: SweepInput = parse_input(value)?;
    let kind = AnalysisKind::from_name(&input.analysis)
        .ok_or_else(|| format!("cannot sweep over analysis `{}`", input.analysis))?;

    let paths: Vec<&String> = input.grid.keys().collect();
    let axes: Vec<&Vec<Value>> = input.grid.values().collect();
    for (p, vals) in paths.iter().zip(&axes) {
        if vals.is_empty() {
            return Err(format!("grid axis `{p}` has no values"));
        }
    }
    let total = axes
        .iter()
        .fold(1usize, |acc, vals| acc.saturating_mul(vals.len()));
    if total == 0 || total > MAX_SWEEP_RUNS {
        return Err(format!(
            "sweep expands to {total} runs (limit {MAX_SWEEP_RUNS})"
        ));
    }

    // Expand the cartesian product; the last listed path varies fastest.
    let mut inputs = Vec::with_capacity(total);
    for run in 0..total {
        let mut rem = run;
        let mut indices = vec![0usize; axes.len()];
        for (k, vals) in axes.iter().enumerate().rev() {
            indices[k] = rem % vals.len();
            rem /= vals.len();
        }
        let mut patched = input.base.clone();
        let mut params = BTreeMap::new();
        for ((path, vals), &idx) in paths.iter().zip(&axes).zip(&indices) {
            set_path(&mut patched, path, &vals[idx])?;
            params.insert((*path).clone(), vals[idx].clone());
        }
        inputs.push((patched, params));
    }

    let run_one = |(patched, params): &(Value, BTreeMap<String, Value>)| -> RunRecord {
        match run_analysis(kind, patched, tol) {
            Ok(analyzed) => RunRecord {
                params: params.clone(),
                result: Some(analyzed.result),
                exit: Some(analyzed.exit),
                error: None,
            },
            Err(msg) => RunRecord {
                params: params.clone(),
                result: None,
                exit: None,
                error: Some(msg),
            },
        }
    };
    let records: Vec<RunRecord> = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| e.to_string())?
            .install(|| inputs.par_iter().map(run_one).collect()),
        None => inputs.par_iter().map(run_one).collect(),
    };

    if csv {
        let path = output.ok_or("--csv needs --output")?.with_extension("csv");
        let text = render_csv(&records);
        fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }

    let failed = records.iter().filter(|r| r.error.is_some()).count();
    if let Some(first) = records.iter().find_map(|r| r.error.as_ref()) {
        eprintln!("sweep: {failed}/{total} runs failed; first error: {first}");
    }
    let exit = if failed > 0 { 2 } else { 0 };
    let result = SweepResult {
        analysis: input.analysis,
        runs: records,
    };
    Ok(Analyzed {
        result: to_value(&result)?,
        exit,
    })
}

// ---------------------------------------------------------------------------
// CSV rendering
// ---------------------------------------------------------------------------

fn scalar_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.to_string(),
            None => n
                .as_f64()
                .map(format_float)
                .unwrap_or_else(|| n.to_string()),
        },
        Value::String(s) => s.clone(),
        other => serde_json::to_string(other).unwrap_or_default(),
    }
}

fn flatten_into(prefix: &str, v: &Value, out: &mut BTreeMap<String, String>) {
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_into(&key, item, out);
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten_into(&format!("{prefix}.{i}"), item, out);
            }
        }
        scalar => {
            out.insert(prefix.to_string(), scalar_cell(scalar));
        }
    }
}

fn csv_escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Fixed column order: parameter paths (sorted) first, then the union of
/// flattened output paths (sorted), then exit and error.
fn render_csv(records: &[RunRecord]) -> String {
    let mut param_cols: Vec<String> = Vec::new();
    let mut flattened: Vec<BTreeMap<String, String>> = Vec::new();
    let mut out_cols: std::collections::BTreeSet<String> = Default::default();
    for rec in records {
        for k in rec.params.keys() {
            if !param_cols.contains(k) {
                param_cols.push(k.clone());
            }
        }
        let mut flat = BTreeMap::new();
        if let Some(result) = &rec.result {
            flatten_into("", result, &mut flat);
        }
        out_cols.extend(flat.keys().cloned());
        flattened.push(flat);
    }
    param_cols.sort();

    let mut text = String::new();
    let header: Vec<String> = param_cols
        .iter()
        .chain(out_cols.iter())
        .map(|c| csv_escape(c))
        .chain(["exit".to_string(), "error".to_string()])
        .collect();
    text.push_str(&header.join(","));
    text.push('\n');
    for (rec, flat) in records.iter().zip(&flattened) {
        let mut row: Vec<String> = Vec::with_capacity(header.len());
        for col in &param_cols {
            row.push(csv_escape(
                &rec.params.get(col).map(scalar_cell).unwrap_or_default(),
            ));
        }
        for col in &out_cols {
            row.push(csv_escape(flat.get(col).map(String::as_str).unwrap_or("")));
        }
        row.push(rec.exit.map(|e| e.to_string()).unwrap_or_default());
        row.push(csv_escape(rec.error.as_deref().unwrap_or("")));
        text.push_str(&row.join(","));
        text.push('\n');
    }
    text
}
