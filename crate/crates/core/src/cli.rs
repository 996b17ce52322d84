//! Command-line front end: configuration (flags over an optional TOML
//! file), grid evaluation, and CSV/JSON output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary_energy::{anomaly_report, b_sphere, BoundaryParams, Direction};
use crate::bulk_energy::{
    delta_e_continued, delta_e_defining, delta_e_renormalized, renormalization_pipeline, PipelineOptions,
};
use crate::heat_kernel::{diagonal_relative, free_kernel, kernel, ModelParams, RadialGeometry};
use crate::quadrature::QuadratureSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Relative accuracy assigned to closed-form values (the special-function budget).
const CLOSED_FORM_REL_ERROR: f64 = 1e-13;

#[derive(Debug, Parser)]
#[command(name = "delta-casimir", version, about = "Casimir energy with a point interaction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Heat kernel on the diagonal over grids `r`, `t`.
    Kernel(CommonArgs),
    /// Continued (and, for u > 1, defining) relative bulk energy over `u`.
    Bulk(CommonArgs),
    /// Renormalized bulk energy; the `eps` grid is the cutoff sequence of the pipeline.
    Renorm(CommonArgs),
    /// Sphere functionals B_out and B_in over `r`.
    Boundary(CommonArgs),
    /// Small-radius anomaly report; the `r` grid is the fit grid.
    Anomaly(CommonArgs),
    /// Renormalized energy vs lambda for each kappa, plus two-column data files.
    Sweep(CommonArgs),
    /// Run the acceptance suite.
    Verify(CommonArgs),
}

impl Command {
    fn parts(&self) -> (SubcommandKind, &CommonArgs) {
        match self {
            Command::Kernel(a) => (SubcommandKind::Kernel, a),
            Command::Bulk(a) => (SubcommandKind::Bulk, a),
            Command::Renorm(a) => (SubcommandKind::Renorm, a),
            Command::Boundary(a) => (SubcommandKind::Boundary, a),
            Command::Anomaly(a) => (SubcommandKind::Anomaly, a),
            Command::Sweep(a) => (SubcommandKind::Sweep, a),
            Command::Verify(a) => (SubcommandKind::Verify, a),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub u: Option<f64>,
    /// `name=start:stop:count[:log]`, repeatable.
    #[arg(long = "grid", value_parser = parse_grid_arg)]
    pub grids: Vec<(String, Vec<f64>)>,
    /// TOML file with the same keys; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long = "rel-tol")]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubcommandKind {
    Kernel,
    Bulk,
    Renorm,
    Boundary,
    Anomaly,
    Sweep,
    Verify,
}

impl SubcommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            SubcommandKind::Kernel => "kernel",
            SubcommandKind::Bulk => "bulk",
            SubcommandKind::Renorm => "renorm",
            SubcommandKind::Boundary => "boundary",
            SubcommandKind::Anomaly => "anomaly",
            SubcommandKind::Sweep => "sweep",
            SubcommandKind::Verify => "verify",
        }
    }

    /// Grid names this subcommand accepts.
    fn grid_names(&self) -> &'static [&'static str] {
        match self {
            SubcommandKind::Kernel => &["lambda", "kappa", "eps", "r", "t"],
            SubcommandKind::Bulk => &["lambda", "kappa", "eps", "u"],
            SubcommandKind::Renorm => &["lambda", "kappa", "eps"],
            SubcommandKind::Boundary => &["lambda", "kappa", "eps", "u", "r"],
            SubcommandKind::Anomaly => &["lambda", "kappa", "eps", "u", "r"],
            SubcommandKind::Sweep => &["lambda", "kappa"],
            SubcommandKind::Verify => &[],
        }
    }
}

/// Error raised while building a configuration; maps to exit code 2.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

/// Expands `start:stop:count[:log]` into grid values.
pub fn parse_grid_spec(spec: &str) -> Result<Vec<f64>, UsageError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(usage(format!("grid `{spec}`: expected start:stop:count[:log]")));
    }
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| usage(format!("grid `{spec}`: `{s}` is not a finite number")))
    };
    let (start, stop) = (num(parts[0])?, num(parts[1])?);
    let count: usize = parts[2]
        .trim()
        .parse()
        .ok()
        .filter(|c| *c >= 1)
        .ok_or_else(|| usage(format!("grid `{spec}`: count must be a positive integer")))?;
    let log = match parts.get(3).map(|s| s.trim()) {
        None => false,
        Some("log") => true,
        Some(other) => return Err(usage(format!("grid `{spec}`: unknown spacing `{other}`"))),
    };
    if log && !(start > 0.0 && stop > 0.0) {
        return Err(usage(format!("grid `{spec}`: log spacing needs positive ends")));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let f = i as f64 / last;
            if i == count - 1 {
                stop
            } else if log {
                (start.ln() + f * (stop.ln() - start.ln())).exp()
            } else {
                start + f * (stop - start)
            }
        })
        .collect())
}

fn parse_grid_arg(arg: &str) -> Result<(String, Vec<f64>), String> {
    let (name, spec) = arg
        .split_once('=')
        .ok_or_else(|| format!("`{arg}`: expected name=start:stop:count[:log]"))?;
    let values = parse_grid_spec(spec).map_err(|e| e.0)?;
    Ok((name.trim().to_string(), values))
}

/// A grid in the config file: an explicit list or a `start:stop:count[:log]` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum FileGrid {
    Values(Vec<f64>),
    Spec(String),
}

/// Config-file schema; every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    lambda: Option<f64>,
    kappa: Option<f64>,
    eps: Option<f64>,
    xi: Option<f64>,
    u: Option<f64>,
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    max_subdivisions: Option<usize>,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    #[serde(default)]
    grids: IndexMap<String, FileGrid>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        Self {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_subdivisions: q.max_subdivisions,
        }
    }
}

impl QuadSettings {
    pub fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            ..QuadratureSpec::default()
        }
    }
}

/// Fully resolved run configuration, echoed into JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: SubcommandKind,
    pub model: ModelParams,
    pub xi: f64,
    pub u: f64,
    pub grids: IndexMap<String, Vec<f64>>,
    pub quadrature: QuadSettings,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

impl RunConfig {
    pub fn from_args(subcommand: SubcommandKind, args: &CommonArgs) -> Result<Self, UsageError> {
        let file = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let defaults = QuadSettings::default();
        let model = ModelParams {
            lambda: args.lambda.or(file.lambda).unwrap_or(1.0),
            kappa: args.kappa.or(file.kappa).unwrap_or(1.0),
            epsilon: args.eps.or(file.eps).unwrap_or(1.0),
        };
        let mut grids = IndexMap::new();
        for (name, grid) in file.grids {
            let values = match grid {
                FileGrid::Values(v) => v,
                FileGrid::Spec(s) => parse_grid_spec(&s)?,
            };
            grids.insert(name, values);
        }
        for (name, values) in &args.grids {
            grids.insert(name.clone(), values.clone());
        }
        let config = Self {
            subcommand,
            model,
            xi: args.xi.or(file.xi).unwrap_or(0.0),
            u: args.u.or(file.u).unwrap_or(1.0),
            grids,
            quadrature: QuadSettings {
                rel_tol: args.rel_tol.or(file.rel_tol).unwrap_or(defaults.rel_tol),
                abs_tol: file.abs_tol.unwrap_or(defaults.abs_tol),
                max_subdivisions: file.max_subdivisions.unwrap_or(defaults.max_subdivisions),
            },
            output_path: args.out.clone().or(file.out),
            output_format: args.format.or(file.format).unwrap_or_default(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        self.model.validate().map_err(|e| usage(e.to_string()))?;
        self.quadrature.spec().validate().map_err(|e| usage(e.to_string()))?;
        if !self.xi.is_finite() || !self.u.is_finite() {
            return Err(usage("xi and u must be finite"));
        }
        let allowed = self.subcommand.grid_names();
        for (name, values) in &self.grids {
            if !allowed.contains(&name.as_str()) {
                return Err(usage(format!(
                    "grid `{name}` is not used by `{}` (accepted: {})",
                    self.subcommand.name(),
                    if allowed.is_empty() { "none".to_string() } else { allowed.join(", ") }
                )));
            }
            if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
                return Err(usage(format!("grid `{name}` must be non-empty and finite")));
            }
        }
        Ok(())
    }

    /// Grid values for `name`, defaulting to the scalar setting.
    fn axis(&self, name: &str) -> Vec<f64> {
        if let Some(values) = self.grids.get(name) {
            return values.clone();
        }
        match name {
            "lambda" => vec![self.model.lambda],
            "kappa" => vec![self.model.kappa],
            "eps" => vec![self.model.epsilon],
            "u" => vec![self.u],
            _ => vec![1.0],
        }
    }
}

/// One cell of an output row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Missing,
    Flag(bool),
    Number(f64),
    Text(String),
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Missing => String::new(),
            Cell::Flag(b) => b.to_string(),
            Cell::Number(v) => format_number(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Cell::Number(v)
        } else {
            Cell::Missing
        }
    }
}

/// 17 significant digits.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// Output row; columns end with `value`, `error_estimate`, `status`.
pub type Record = IndexMap<String, Cell>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Output {
    pub config: RunConfig,
    pub records: Vec<Record>,
}

impl Output {
    pub fn failed_rows(&self) -> usize {
        self.records
            .iter()
            .filter(|r| matches!(r.get("status"), Some(Cell::Text(s)) if s.starts_with("error")))
            .count()
    }
}

/// Values computed for one row, before the trailing columns.
struct RowValues {
    columns: Vec<(&'static str, Cell)>,
    value: f64,
    error_estimate: f64,
    converged: bool,
}

fn build_record(
    keys: Vec<(&'static str, Cell)>,
    computed: crate::Result<RowValues>,
    extra_columns: &[&'static str],
) -> Record {
    let mut record: Record = keys.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    match computed {
        Ok(row) => {
            for (k, v) in row.columns {
                record.insert(k.to_string(), v);
            }
            record.insert("value".into(), row.value.into());
            record.insert("error_estimate".into(), row.error_estimate.into());
            let status = if row.converged { "ok" } else { "unconverged" };
            record.insert("status".into(), Cell::Text(status.into()));
        }
        Err(e) => {
            for k in extra_columns {
                record.insert(k.to_string(), Cell::Missing);
            }
            record.insert("value".into(), Cell::Missing);
            record.insert("error_estimate".into(), Cell::Missing);
            record.insert("status".into(), Cell::Text(format!("error: {e}")));
        }
    }
    record
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(*v);
                    p
                })
            })
            .collect()
    })
}

fn model_of(lambda: f64, kappa: f64, eps: f64) -> crate::Result<ModelParams> {
    ModelParams::new(lambda, kappa, eps)
}

fn kernel_records(cfg: &RunConfig) -> Vec<Record> {
    let points = cartesian(&["lambda", "kappa", "eps", "r", "t"].map(|n| cfg.axis(n)));
    points
        .par_iter()
        .map(|p| {
            let (lambda, kappa, eps, r, t) = (p[0], p[1], p[2], p[3], p[4]);
            let computed = (|| {
                let m = model_of(lambda, kappa, eps)?;
                let geom = RadialGeometry::diagonal(r)?;
                let value = kernel(&geom, t, &m)?;
                Ok(RowValues {
                    columns: vec![
                        ("free_kernel", free_kernel(&geom, t, &m)?.into()),
                        ("relative", diagonal_relative(r, t, &m)?.into()),
                    ],
                    value,
                    error_estimate: CLOSED_FORM_REL_ERROR * value.abs(),
                    converged: true,
                })
            })();
            let keys = vec![
                ("lambda", lambda.into()),
                ("kappa", kappa.into()),
                ("epsilon", eps.into()),
                ("r", r.into()),
                ("t", t.into()),
            ];
            build_record(keys, computed, &["free_kernel", "relative"])
        })
        .collect()
}

fn bulk_records(cfg: &RunConfig) -> Vec<Record> {
    let quad = cfg.quadrature.spec();
    let points = cartesian(&["lambda", "kappa", "eps", "u"].map(|n| cfg.axis(n)));
    let jobs: Vec<(Vec<f64>, &'static str)> = points
        .into_iter()
        .flat_map(|p| {
            let defining = p[3] > 1.0 && p[2] > 0.0;
            let mut v = vec![(p.clone(), "continued")];
            if defining {
                v.push((p, "defining"));
            }
            v
        })
        .collect();
    jobs.par_iter()
        .map(|(p, repr)| {
            let (lambda, kappa, eps, u) = (p[0], p[1], p[2], p[3]);
            let computed = (|| {
                let m = model_of(lambda, kappa, eps)?;
                let e = if *repr == "defining" {
                    delta_e_defining(u, &m, &quad)?
                } else {
                    delta_e_continued(u, &m, &quad)?
                };
                Ok(RowValues {
                    columns: vec![],
                    value: e.value,
                    error_estimate: e.error,
                    converged: true,
                })
            })();
            let keys = vec![
                ("lambda", lambda.into()),
                ("kappa", kappa.into()),
                ("epsilon", eps.into()),
                ("u", u.into()),
                ("representation", Cell::Text(repr.to_string())),
            ];
            build_record(keys, computed, &[])
        })
        .collect()
}

const DEFAULT_CUTOFFS: [f64; 3] = [0.1, 0.05, 0.025];

fn renorm_record(lambda: f64, kappa: f64, cutoffs: &[f64], quad: &QuadratureSpec) -> Record {
    let computed = (|| {
        let m = model_of(lambda, kappa, cutoffs[0])?;
        let r = delta_e_renormalized(&m, quad)?;
        let options = PipelineOptions {
            quadrature: quad.with_rel_tol(quad.rel_tol.min(1e-12)).with_abs_tol(1e-300),
            ..PipelineOptions::default()
        };
        let pipe = renormalization_pipeline(&m, cutoffs, &options)?;
        Ok(RowValues {
            columns: vec![
                ("numeric", r.numeric.into()),
                ("difference", r.difference.into()),
                ("pipeline", pipe.extrapolated.into()),
                ("order_gap", pipe.order_gap().into()),
            ],
            value: r.closed_form,
            error_estimate: r.numeric_error.max(r.difference.abs()),
            converged: pipe.converged,
        })
    })();
    let keys = vec![("lambda", lambda.into()), ("kappa", kappa.into())];
    build_record(keys, computed, &["numeric", "difference", "pipeline", "order_gap"])
}

fn renorm_records(cfg: &RunConfig) -> Vec<Record> {
    let quad = cfg.quadrature.spec();
    let cutoffs = cfg.grids.get("eps").cloned().unwrap_or_else(|| DEFAULT_CUTOFFS.to_vec());
    let points = cartesian(&["lambda", "kappa"].map(|n| cfg.axis(n)));
    points
        .par_iter()
        .map(|p| renorm_record(p[0], p[1], &cutoffs, &quad))
        .collect()
}

fn boundary_records(cfg: &RunConfig) -> Vec<Record> {
    let quad = cfg.quadrature.spec();
    let points = cartesian(&["lambda", "kappa", "eps", "u", "r"].map(|n| cfg.axis(n)));
    let jobs: Vec<(Vec<f64>, Direction)> = points
        .into_iter()
        .flat_map(|p| [(p.clone(), Direction::Out), (p, Direction::In)])
        .collect();
    jobs.par_iter()
        .map(|(p, dir)| {
            let (lambda, kappa, eps, u, r) = (p[0], p[1], p[2], p[3], p[4]);
            let computed = (|| {
                let bp = BoundaryParams::new(cfg.xi, model_of(lambda, kappa, eps)?, u)?;
                let e = b_sphere(r, *dir, &bp, &quad)?;
                Ok(RowValues {
                    columns: vec![],
                    value: e.value,
                    error_estimate: e.error,
                    converged: true,
                })
            })();
            let direction = match dir {
                Direction::Out => "out",
                Direction::In => "in",
            };
            let keys = vec![
                ("lambda", lambda.into()),
                ("kappa", kappa.into()),
                ("epsilon", eps.into()),
                ("u", u.into()),
                ("xi", cfg.xi.into()),
                ("r", r.into()),
                ("direction", Cell::Text(direction.into())),
            ];
            build_record(keys, computed, &[])
        })
        .collect()
}

fn default_fit_grid() -> Vec<f64> {
    (0..4).map(|k| 10f64.powf(-1.5 - 0.5 * k as f64)).collect()
}

fn anomaly_records(cfg: &RunConfig) -> Vec<Record> {
    let quad = cfg.quadrature.spec();
    let fit_grid = cfg.grids.get("r").cloned().unwrap_or_else(default_fit_grid);
    let points = cartesian(&["lambda", "kappa", "eps", "u"].map(|n| cfg.axis(n)));
    let extra = [
        "prefactor",
        "small_r_limit",
        "fitted_constant",
        "inverse_only_coefficient",
        "fit_residual",
        "anomaly_detected",
        "narrative",
    ];
    points
        .par_iter()
        .map(|p| {
            let (lambda, kappa, eps, u) = (p[0], p[1], p[2], p[3]);
            let computed = (|| {
                let bp = BoundaryParams::new(cfg.xi, model_of(lambda, kappa, eps)?, u)?;
                let rep = anomaly_report(&bp, &fit_grid, &quad)?;
                Ok(RowValues {
                    columns: vec![
                        ("prefactor", rep.prefactor.into()),
                        ("small_r_limit", rep.small_r_limit.into()),
                        ("fitted_constant", rep.fitted_constant.into()),
                        ("inverse_only_coefficient", rep.inverse_only_coefficient.into()),
                        ("fit_residual", rep.fit_residual.into()),
                        ("anomaly_detected", Cell::Flag(rep.anomaly_detected)),
                        ("narrative", Cell::Text(rep.narrative)),
                    ],
                    value: rep.fitted_coefficient,
                    error_estimate: (rep.fitted_coefficient - rep.small_r_limit).abs(),
                    converged: true,
                })
            })();
            let keys = vec![
                ("lambda", lambda.into()),
                ("kappa", kappa.into()),
                ("epsilon", eps.into()),
                ("u", u.into()),
                ("xi", cfg.xi.into()),
            ];
            build_record(keys, computed, &extra)
        })
        .collect()
}

fn sweep_records(cfg: &RunConfig) -> Vec<Record> {
    let quad = cfg.quadrature.spec();
    let points = cartesian(&["kappa", "lambda"].map(|n| cfg.axis(n)));
    points
        .par_iter()
        .map(|p| renorm_record(p[1], p[0], &DEFAULT_CUTOFFS, &quad))
        .collect()
}

/// Evaluates every grid point of a non-`verify` subcommand.
pub fn evaluate(cfg: &RunConfig) -> Output {
    let records = match cfg.subcommand {
        SubcommandKind::Kernel => kernel_records(cfg),
        SubcommandKind::Bulk => bulk_records(cfg),
        SubcommandKind::Renorm => renorm_records(cfg),
        SubcommandKind::Boundary => boundary_records(cfg),
        SubcommandKind::Anomaly => anomaly_records(cfg),
        SubcommandKind::Sweep => sweep_records(cfg),
        SubcommandKind::Verify => Vec::new(),
    };
    Output {
        config: cfg.clone(),
        records,
    }
}

/// CSV with `#` comment header, one header row, RFC 4180 quoting.
pub fn render_csv(output: &Output) -> String {
    let cfg = &output.config;
    let mut text = String::new();
    let _ = writeln!(text, "# delta-casimir {} {}", env!("CARGO_PKG_VERSION"), cfg.subcommand.name());
    let _ = writeln!(
        text,
        "# lambda={} kappa={} eps={} xi={} u={}",
        format_number(cfg.model.lambda),
        format_number(cfg.model.kappa),
        format_number(cfg.model.epsilon),
        format_number(cfg.xi),
        format_number(cfg.u)
    );
    let _ = writeln!(
        text,
        "# rel_tol={} abs_tol={} max_subdivisions={}",
        format_number(cfg.quadrature.rel_tol),
        format_number(cfg.quadrature.abs_tol),
        cfg.quadrature.max_subdivisions
    );
    for (name, values) in &cfg.grids {
        let _ = writeln!(text, "# grid {name}: {} points", values.len());
    }
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    if let Some(first) = output.records.first() {
        let _ = writer.write_record(first.keys());
    }
    for record in &output.records {
        let _ = writer.write_record(record.values().map(Cell::csv_text));
    }
    let body = writer.into_inner().unwrap_or_default();
    text.push_str(&String::from_utf8_lossy(&body));
    text
}

pub fn render_json(output: &Output) -> String {
    let mut s = serde_json::to_string_pretty(output).expect("output is serializable");
    s.push('\n');
    s
}

pub fn render(output: &Output) -> String {
    match output.config.output_format {
        OutputFormat::Csv => render_csv(output),
        OutputFormat::Json => render_json(output),
    }
}

fn dat_paths(cfg: &RunConfig, count: usize) -> Vec<PathBuf> {
    let (dir, stem) = match &cfg.output_path {
        Some(p) => (
            p.parent().map(Path::to_path_buf).unwrap_or_default(),
            p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "sweep".into()),
        ),
        None => (PathBuf::new(), "sweep".to_string()),
    };
    (0..count).map(|i| dir.join(format!("{stem}.kappa{i}.dat"))).collect()
}

/// Two-column `lambda energy` data files, one per kappa.
pub fn sweep_data_files(output: &Output) -> Vec<(PathBuf, String)> {
    let cfg = &output.config;
    let kappas = cfg.axis("kappa");
    let lambdas = cfg.axis("lambda");
    dat_paths(cfg, kappas.len())
        .into_iter()
        .zip(kappas.iter())
        .enumerate()
        .map(|(i, (path, kappa))| {
            let mut text = format!(
                "# renormalized relative bulk energy vs lambda at kappa = {}\n# lambda energy\n",
                format_number(*kappa)
            );
            for (j, lambda) in lambdas.iter().enumerate() {
                let value = match output.records[i * lambdas.len() + j].get("value") {
                    Some(Cell::Number(v)) => format_number(*v),
                    _ => "nan".to_string(),
                };
                let _ = writeln!(text, "{} {value}", format_number(*lambda));
            }
            (path, text)
        })
        .collect()
}

fn write_text(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn run_verify(cfg: &RunConfig) -> i32 {
    let outcomes = crate::acceptance::run_all();
    let mut text = String::new();
    for o in &outcomes {
        let _ = writeln!(text, "{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let _ = writeln!(text, "{} passed, {failed} failed", outcomes.len() - failed);
    if let Err(e) = write_text(cfg.output_path.as_deref(), &text) {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_NUMERICAL
    }
}

/// Runs a resolved configuration and returns the process exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    if cfg.subcommand == SubcommandKind::Verify {
        return run_verify(cfg);
    }
    let output = evaluate(cfg);
    let mut files = vec![(cfg.output_path.clone(), render(&output))];
    if cfg.subcommand == SubcommandKind::Sweep {
        files.extend(sweep_data_files(&output).into_iter().map(|(p, t)| (Some(p), t)));
    }
    for (path, text) in files {
        if let Err(e) = write_text(path.as_deref(), &text) {
            eprintln!("error: cannot write output: {e}");
            return EXIT_USAGE;
        }
    }
    let failed = output.failed_rows();
    if failed > 0 {
        eprintln!("{failed} of {} rows failed", output.records.len());
        EXIT_NUMERICAL
    } else {
        EXIT_OK
    }
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (kind, common) = cli.command.parts();
    match RunConfig::from_args(kind, common) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(kind: SubcommandKind, args: CommonArgs) -> RunConfig {
        RunConfig::from_args(kind, &args).unwrap()
    }

    #[test]
    fn grid_specs() {
        assert_eq!(parse_grid_spec("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        let g = parse_grid_spec("1:100:3:log").unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12 && g[2] == 100.0);
        assert_eq!(parse_grid_spec("2:5:1").unwrap(), vec![2.0]);
        for bad in ["1:2", "a:2:3", "1:2:0", "0:1:3:log", "1:2:3:cubic", "1:2:3:log:x"] {
            assert!(parse_grid_spec(bad).is_err(), "{bad}");
        }
        assert_eq!(parse_grid_arg("u=1:2:2").unwrap(), ("u".to_string(), vec![1.0, 2.0]));
        assert!(parse_grid_arg("u1:2:2").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(
            &path,
            "lambda = 2.0\nkappa = 3.0\nrel_tol = 1e-9\nformat = \"json\"\n[grids]\nu = [1.5, 2.5]\nr = \"0.1:1:2\"\n",
        )
        .unwrap();
        let args = CommonArgs {
            config: Some(path),
            kappa: Some(0.5),
            grids: vec![("u".into(), vec![3.0])],
            ..Default::default()
        };
        let cfg = config(SubcommandKind::Boundary, args);
        assert_eq!(cfg.model.lambda, 2.0);
        assert_eq!(cfg.model.kappa, 0.5);
        assert_eq!(cfg.quadrature.rel_tol, 1e-9);
        assert_eq!(cfg.output_format, OutputFormat::Json);
        assert_eq!(cfg.grids["u"], vec![3.0]);
        assert_eq!(cfg.grids["r"], vec![0.1, 1.0]);
    }

    #[test]
    fn config_errors() {
        let bad_grid = CommonArgs {
            grids: vec![("t".into(), vec![1.0])],
            ..Default::default()
        };
        assert!(RunConfig::from_args(SubcommandKind::Renorm, &bad_grid).is_err());
        let bad_model = CommonArgs {
            kappa: Some(-1.0),
            ..Default::default()
        };
        assert!(RunConfig::from_args(SubcommandKind::Bulk, &bad_model).is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        fs::write(&path, "lamda = 1.0\n").unwrap();
        let unknown_key = CommonArgs {
            config: Some(path),
            ..Default::default()
        };
        assert!(RunConfig::from_args(SubcommandKind::Bulk, &unknown_key).is_err());
    }

    #[test]
    fn renorm_row_at_unit_coupling() {
        let cfg = config(SubcommandKind::Renorm, CommonArgs::default());
        let out = evaluate(&cfg);
        assert_eq!(out.records.len(), 1);
        let row = &out.records[0];
        assert_eq!(row["value"], Cell::Number(0.0));
        match row["error_estimate"] {
            Cell::Number(e) => assert!(e <= 1e-8),
            ref other => panic!("{other:?}"),
        }
        assert_eq!(row["status"], Cell::Text("ok".into()));
        let keys: Vec<&str> = row.keys().map(String::as_str).collect();
        assert_eq!(&keys[keys.len() - 3..], ["value", "error_estimate", "status"]);
    }

    #[test]
    fn failing_rows_are_recorded() {
        let args = CommonArgs {
            grids: vec![("u".into(), vec![0.5, -2.0])],
            ..Default::default()
        };
        let out = evaluate(&config(SubcommandKind::Bulk, args));
        assert_eq!(out.failed_rows(), 1);
        assert_eq!(out.records[1]["value"], Cell::Missing);
        let csv = render_csv(&out);
        assert!(csv.lines().any(|l| l.ends_with(",,,error: domain error in delta_e_continued: u = -2 must exceed -1")));
    }

    #[test]
    fn csv_layout() {
        let args = CommonArgs {
            grids: vec![("r".into(), vec![0.5, 1.0])],
            ..Default::default()
        };
        let out = evaluate(&config(SubcommandKind::Boundary, args));
        let csv = render_csv(&out);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# delta-casimir"));
        let header = lines.iter().find(|l| !l.starts_with('#')).unwrap();
        assert!(header.ends_with("value,error_estimate,status"));
        assert_eq!(lines.iter().filter(|l| !l.starts_with('#')).count(), 1 + 4);
        let row = lines.last().unwrap();
        let value = row.split(',').nth(7).unwrap();
        // 17 significant digits
        assert_eq!(value.trim_start_matches('-').split('e').next().unwrap().len(), 18);
    }

    #[test]
    fn narrative_is_quoted() {
        let args = CommonArgs {
            xi: Some(0.25),
            ..Default::default()
        };
        let out = evaluate(&config(SubcommandKind::Anomaly, args));
        assert_eq!(out.records[0]["prefactor"], Cell::Number(0.0));
        let csv = render_csv(&out);
        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(csv.as_bytes());
        let headers = reader.headers().unwrap().clone();
        let row = reader.records().next().unwrap().unwrap();
        let narrative = row.get(headers.iter().position(|h| h == "narrative").unwrap()).unwrap();
        assert!(narrative.contains("conformal") && narrative.contains(','));
    }

    #[test]
    fn sweep_files() {
        let args = CommonArgs {
            grids: vec![("lambda".into(), vec![0.5, 1.0, 2.0]), ("kappa".into(), vec![1.0, 2.0])],
            out: Some(PathBuf::from("/tmp/x/run.csv")),
            ..Default::default()
        };
        let out = evaluate(&config(SubcommandKind::Sweep, args));
        let files = sweep_data_files(&out);
        assert_eq!(files.len(), 2);
        assert_eq!(files[1].0, PathBuf::from("/tmp/x/run.kappa1.dat"));
        let rows: Vec<&str> = files[0].1.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows.len(), 3);
        let cols: Vec<f64> = rows[1].split(' ').map(|s| s.parse().unwrap()).collect();
        assert_eq!(cols, vec![1.0, 0.0]);
    }

    #[test]
    fn deterministic_output() {
        let args = CommonArgs {
            grids: vec![("u".into(), vec![0.5, 1.5, 2.5])],
            format: Some(OutputFormat::Json),
            ..Default::default()
        };
        let cfg = config(SubcommandKind::Bulk, args);
        assert_eq!(render(&evaluate(&cfg)), render(&evaluate(&cfg)));
    }
}
