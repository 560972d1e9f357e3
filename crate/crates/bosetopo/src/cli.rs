//! Configuration-driven runs behind the `bosetopo` binary.
//!
//! A run is described by a TOML document:
//!
//! ```toml
//! task = "sweep"               # optional when a subcommand is given
//! output = "h3.csv"
//! jobs = 4
//!
//! [model]
//! name = "PhotoMagnonicRWA"
//! N = 12
//! n_offset = 3
//! parameters = { omega_a = 0.0, omega_m = 0.0, t = [0.0, 25e6], g = [0.0, 100e6] }
//! perturbations = [{ type = "MagnonHopping", strength = 0.0 }]
//!
//! [sweep]
//! parameter = "perturbations[0].strength"
//! start = 0.0
//! stop = 2e9
//! steps = 41
//!
//! [grid]
//! k = 1024                     # k-points for bands and invariants
//! frequencies = 2001           # points of the S-parameter grid
//!
//! [tolerances]
//! classify = 1e-8              # relative, for symmetry tests
//! # zero_mode = 1e-6           # absolute; default is gap-relative
//!
//! [scattering]
//! start = 9.7e9
//! stop = 10.3e9
//! kappa_c = 0.5e6
//! kappa_m = 10e6
//! ```
//!
//! Every table except `[model]` is optional. Each CSV starts with a `#`
//! line holding the toolkit version and the resolved configuration as
//! JSON, followed by a header row; complex values are split into `_re` and
//! `_im` columns.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::models::ModelSpec;
use crate::qbh::DEFAULT_TOL;
use crate::scattering::{s_parameters, ScatteringSetup};
use crate::spectral::{band_structure, diagonalize, min_abs_eigenvalue, uniform_k_grid, zero_modes_of, Localization};
use crate::topology::{
    boundary_zero_modes, bulk_boundary_check_with, detect_symmetry_class, symbol_invariant, BulkBoundaryOptions,
    InvariantKind, InvariantResult, SymbolInvariant,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Spectrum,
    Bands,
    Classify,
    Invariant,
    Zeromodes,
    Sparams,
    Sweep,
    Bulkboundary,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Spectrum => "spectrum",
            Task::Bands => "bands",
            Task::Classify => "classify",
            Task::Invariant => "invariant",
            Task::Zeromodes => "zeromodes",
            Task::Sparams => "sparams",
            Task::Sweep => "sweep",
            Task::Bulkboundary => "bulkboundary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Path into the model, e.g. `parameters.t1` or `perturbations[0].strength`.
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub k: usize,
    pub frequencies: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { k: 1024, frequencies: 2001 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub classify: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_mode: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { classify: DEFAULT_TOL, zero_mode: None }
    }
}

/// Frequency window and losses for `sparams`. Without explicit `kappa` and
/// `ports`, photo-magnonic chains get `kappa_c` on the boundary photons and
/// `kappa_m` on every magnon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringConfig {
    pub start: f64,
    pub stop: f64,
    #[serde(default = "default_kappa_c")]
    pub kappa_c: f64,
    #[serde(default = "default_kappa_m")]
    pub kappa_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ports: Option<Vec<usize>>,
}

fn default_kappa_c() -> f64 {
    0.5e6
}

fn default_kappa_m() -> f64 {
    10e6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    pub model: ModelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scattering: Option<ScatteringConfig>,
}

impl RunConfig {
    pub fn new(task: Task, model: ModelSpec) -> Self {
        Self {
            task: Some(task),
            output: None,
            jobs: None,
            model,
            sweep: None,
            grid: GridConfig::default(),
            tolerances: Tolerances::default(),
            scattering: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Checks everything that can be checked before computing.
    pub fn validate(&self) -> Result<()> {
        let task = self.task.ok_or_else(|| Error::InvalidParameter("no task given".into()))?;
        self.model.validate()?;
        if self.grid.k < 64 {
            return Err(Error::InvalidParameter(format!("grid.k = {} is below 64", self.grid.k)));
        }
        if self.grid.frequencies < 2 {
            return Err(Error::InvalidParameter("grid.frequencies must be at least 2".into()));
        }
        if !(self.tolerances.classify > 0.0) {
            return Err(Error::InvalidParameter("tolerances.classify must be positive".into()));
        }
        if let Some(z) = self.tolerances.zero_mode {
            if !(z > 0.0) {
                return Err(Error::InvalidParameter("tolerances.zero_mode must be positive".into()));
            }
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidParameter("jobs must be at least 1".into()));
        }
        if let Some(s) = &self.sweep {
            if s.steps < 2 {
                return Err(Error::InvalidParameter(format!("sweep needs at least 2 steps, got {}", s.steps)));
            }
            if !self.model.has_path(&s.parameter) {
                return Err(Error::InvalidParameter(format!(
                    "sweep parameter `{}` does not exist in the model",
                    s.parameter
                )));
            }
            if !s.start.is_finite() || !s.stop.is_finite() {
                return Err(Error::InvalidParameter("sweep bounds must be finite".into()));
            }
        }
        match task {
            Task::Sweep if self.sweep.is_none() => {
                return Err(Error::InvalidParameter("task `sweep` needs a [sweep] table or --param".into()))
            }
            Task::Sparams => {
                let s = self
                    .scattering
                    .as_ref()
                    .ok_or_else(|| Error::InvalidParameter("task `sparams` needs a [scattering] table".into()))?;
                if !(s.start > 0.0) || !(s.stop > s.start) {
                    return Err(Error::InvalidParameter("scattering window needs 0 < start < stop".into()));
                }
            }
            Task::Bulkboundary if self.model.n_cells < 8 => {
                return Err(Error::InvalidParameter("bulk-boundary check needs N ≥ 8".into()))
            }
            _ => {}
        }
        Ok(())
    }

    pub fn output_path(&self) -> PathBuf {
        self.output
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("bosetopo-{}.csv", self.task.map_or("run", |t| t.name()))))
    }
}

/// A table of string cells ready to be written as CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    /// Human-readable lines for standard output.
    pub summary: Vec<String>,
    pub table: Table,
}

/// Scientific notation that round-trips.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

fn push_complex(row: &mut Vec<String>, z: C64) {
    row.push(fmt_f64(z.re));
    row.push(fmt_f64(z.im));
}

/// Validates and runs `config` on a thread pool of `config.jobs` threads
/// (all cores when unset).
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = config.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| Error::Io(e.to_string()))?;
    pool.install(|| run_task(config))
}

fn run_task(config: &RunConfig) -> Result<RunOutput> {
    match config.task.expect("validated") {
        Task::Spectrum => spectrum(config),
        Task::Bands => bands(config),
        Task::Classify => classify(config),
        Task::Invariant => invariant(config),
        Task::Zeromodes => zeromodes(config),
        Task::Sparams => sparams(config),
        Task::Sweep => sweep(config),
        Task::Bulkboundary => bulkboundary(config),
    }
}

fn spectrum(config: &RunConfig) -> Result<RunOutput> {
    let h = config.model.build()?;
    let r = diagonalize(&h.dynamical_matrix())?;
    let mut table =
        Table::new(&["index", "eigenvalue_re", "eigenvalue_im", "residual", "tau3_norm", "ipr", "converged"]);
    for (i, z) in r.eigenvalues.iter().enumerate() {
        let mut row = vec![i.to_string()];
        push_complex(&mut row, *z);
        row.push(fmt_f64(r.residuals[i]));
        row.push(fmt_f64(r.tau3_norms[i]));
        row.push(fmt_f64(r.ipr[i]));
        row.push(r.converged[i].to_string());
        table.rows.push(row);
    }
    let mut summary = vec![
        format!("modes: {}", h.n_modes()),
        format!("spectral_radius: {}", fmt_f64(r.spectral_radius)),
        format!("converged: {}", r.all_converged()),
    ];
    summary.extend(r.warnings.iter().map(|w| format!("warning: {w}")));
    Ok(RunOutput { summary, table })
}

fn bands(config: &RunConfig) -> Result<RunOutput> {
    let sym = config.model.bloch_symbol()?;
    let ks = uniform_k_grid(config.grid.k);
    let bands = band_structure(&sym, &ks)?;
    let nb = bands.first().map_or(0, |b| b.len());
    let mut header = vec!["k".to_string()];
    for b in 0..nb {
        header.push(format!("band{b}_re"));
        header.push(format!("band{b}_im"));
    }
    let mut table = Table { header, rows: Vec::new() };
    for (k, vals) in ks.iter().zip(&bands) {
        let mut row = vec![fmt_f64(*k)];
        for z in vals {
            push_complex(&mut row, *z);
        }
        table.rows.push(row);
    }
    Ok(RunOutput { summary: vec![format!("bands: {nb}"), format!("k_points: {}", ks.len())], table })
}

fn classify(config: &RunConfig) -> Result<RunOutput> {
    let tol = config.tolerances.classify;
    let h = config.model.build()?;
    let rep = detect_symmetry_class(&h, tol, true);
    let mut table = Table::new(&[
        "scope",
        "class",
        "T",
        "N",
        "S",
        "axis_n1",
        "axis_n2",
        "dressing",
        "residual_T",
        "residual_N",
        "residual_S",
        "scale",
    ]);
    let (n1, n2) = rep.squeezing.unwrap_or((f64::NAN, f64::NAN));
    let r = rep.residuals;
    table.rows.push(vec![
        "real_space".into(),
        rep.class_label.to_string(),
        rep.class_label.t.to_string(),
        rep.class_label.n.to_string(),
        rep.class_label.s.to_string(),
        fmt_f64(n1),
        fmt_f64(n2),
        String::new(),
        fmt_f64(r.time_reversal),
        fmt_f64(r.number),
        fmt_f64(r.squeezing),
        fmt_f64(r.scale),
    ]);
    let mut summary = vec![format!("class: {}", rep.class_label)];
    if let Some(d) = &rep.local_dressing {
        let q: Vec<String> = d.quarter_turns.iter().map(|q| q.to_string()).collect();
        let (a1, a2) = d.squeezing.unwrap_or((f64::NAN, f64::NAN));
        summary.push(format!("dressed class: {}", d.class_label));
        table.rows.push(vec![
            "real_space_dressed".into(),
            d.class_label.to_string(),
            d.class_label.t.to_string(),
            d.class_label.n.to_string(),
            d.class_label.s.to_string(),
            fmt_f64(a1),
            fmt_f64(a2),
            q.join(" "),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
        ]);
    }
    Ok(RunOutput { summary, table })
}

fn invariant_strings(inv: &InvariantResult) -> (&'static str, String) {
    match inv.kind {
        InvariantKind::Winding(n) => ("winding", n.to_string()),
        InvariantKind::Pfaffian(s) => ("pfaffian", s.to_string()),
        InvariantKind::Trivial => ("trivial", String::new()),
        InvariantKind::GapClosed => ("gap_closed", String::new()),
    }
}

fn invariant(config: &RunConfig) -> Result<RunOutput> {
    let sym = config.model.bloch_symbol()?;
    let SymbolInvariant { class_label, dressing, invariant, bulk_gap } =
        symbol_invariant(&sym, config.tolerances.classify, config.grid.k)?;
    if invariant.is_gap_closed() {
        return Err(Error::GapClosed { gap_margin: invariant.gap_margin });
    }
    let (kind, value) = invariant_strings(&invariant);
    let mut summary = vec![if value.is_empty() { kind.to_string() } else { format!("{kind}: {value}") }];
    summary.push(format!("class: {class_label}"));
    let dressing_text = dressing.as_ref().map_or(String::new(), |d| {
        let q: Vec<String> = d.orbital_quarter_turns.iter().map(|q| q.to_string()).collect();
        format!("orbitals {} twist {}", q.join(" "), d.twist_quarter_turns)
    });
    if !dressing_text.is_empty() {
        summary.push(format!("dressing: {dressing_text}"));
    }
    summary.push(format!("gap_margin: {}", fmt_f64(invariant.gap_margin)));
    let mut table = Table::new(&["class", "kind", "value", "gap_margin", "bulk_gap", "grid_size", "dressing"]);
    table.rows.push(vec![
        class_label.to_string(),
        kind.into(),
        value,
        fmt_f64(invariant.gap_margin),
        fmt_f64(bulk_gap),
        invariant.grid_size.to_string(),
        dressing_text,
    ]);
    Ok(RunOutput { summary, table })
}

fn localization_cells(l: &Localization) -> (String, String) {
    match l {
        Localization::Exponential { length, .. } => ("exponential".into(), fmt_f64(*length)),
        Localization::Compact => ("compact".into(), fmt_f64(0.0)),
        Localization::Delocalized => ("delocalized".into(), fmt_f64(f64::INFINITY)),
    }
}

fn zeromodes(config: &RunConfig) -> Result<RunOutput> {
    let h = config.model.build()?;
    // The gap-relative default needs the symbol; without one (or for a
    // symbol that cannot be classified) the spectral default applies.
    let inv =
        config.model.bloch_symbol().and_then(|sym| symbol_invariant(&sym, config.tolerances.classify, config.grid.k));
    let rep = match &inv {
        Ok(si) => boundary_zero_modes(&h, si, config.tolerances.zero_mode, config.tolerances.classify)?,
        Err(_) => zero_modes_of(&h, config.tolerances.zero_mode)?,
    };
    let mut table = Table::new(&[
        "index",
        "eigenvalue_re",
        "eigenvalue_im",
        "left_half_weight",
        "edge_weight_left",
        "edge_weight_right",
        "ipr",
        "localization",
        "localization_length",
        "disconnected",
    ]);
    for (i, m) in rep.modes.iter().enumerate() {
        let mut row = vec![i.to_string()];
        push_complex(&mut row, m.eigenvalue);
        row.push(fmt_f64(m.left_half_weight));
        row.push(fmt_f64(m.edge_weight_left));
        row.push(fmt_f64(m.edge_weight_right));
        row.push(fmt_f64(m.ipr));
        let (kind, length) = localization_cells(&m.localization);
        row.push(kind);
        row.push(length);
        row.push(m.disconnected.to_string());
        table.rows.push(row);
    }
    let summary = vec![
        format!("zero_modes: {}", rep.count),
        format!("left: {}", rep.left_count()),
        format!("right: {}", rep.right_count()),
        format!("tolerance: {}", fmt_f64(rep.tolerance_used)),
        format!("gap: {}", fmt_f64(rep.gap)),
    ];
    Ok(RunOutput { summary, table })
}

fn scattering_setup(config: &RunConfig) -> Result<ScatteringSetup> {
    let s = config.scattering.as_ref().expect("validated");
    let h = config.model.build()?;
    match (&s.kappa, &s.ports) {
        (Some(kappa), Some(ports)) => {
            ScatteringSetup::new(h, kappa.iter().map(|&k| C64::new(k, 0.0)).collect(), ports.clone())
        }
        (None, None) => ScatteringSetup::photo_magnonic(h, s.kappa_c, s.kappa_m),
        _ => Err(Error::InvalidParameter("scattering.kappa and scattering.ports go together".into())),
    }
}

fn sparams(config: &RunConfig) -> Result<RunOutput> {
    let s = config.scattering.as_ref().expect("validated");
    let setup = scattering_setup(config)?;
    let n = config.grid.frequencies;
    let omegas: Vec<f64> = (0..n).map(|i| s.start + (s.stop - s.start) * i as f64 / (n - 1) as f64).collect();
    let resp = s_parameters(&setup, &omegas)?;
    let p = setup.ports().len();
    let mut header = vec!["frequency".to_string(), "singular".to_string()];
    let pairs: Vec<(usize, usize)> = (0..p).flat_map(|i| (0..p).map(move |j| (i, j))).collect();
    for &(i, j) in &pairs {
        header.push(format!("s{}{}_abs", i + 1, j + 1));
    }
    for &(i, j) in &pairs {
        header.push(format!("s{}{}_re", i + 1, j + 1));
        header.push(format!("s{}{}_im", i + 1, j + 1));
    }
    let mut table = Table { header, rows: Vec::with_capacity(n) };
    for (f, sm) in resp.s_matrix.iter().enumerate() {
        let mut row = vec![fmt_f64(omegas[f]), resp.singular[f].to_string()];
        for &(i, j) in &pairs {
            row.push(fmt_f64(sm[[i, j]].norm()));
        }
        for &(i, j) in &pairs {
            push_complex(&mut row, sm[[i, j]]);
        }
        table.rows.push(row);
    }
    let singular = resp.singular.iter().filter(|&&b| b).count();
    let ports: Vec<String> = setup.ports().iter().map(|&m| setup.hamiltonian().labels()[m].clone()).collect();
    Ok(RunOutput {
        summary: vec![
            format!("ports: {}", ports.join(" ")),
            format!("frequencies: {n}"),
            format!("singular_points: {singular}"),
        ],
        table,
    })
}

/// One evaluated sweep point. Failures are kept as rows with a message.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: std::result::Result<SweepPoint, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub class_label: String,
    pub invariant: InvariantResult,
    pub bulk_gap: f64,
    pub zero_modes: usize,
    pub left_zero_modes: usize,
    pub min_abs_eigenvalue: f64,
}

fn sweep_point(config: &RunConfig, spec: &ModelSpec) -> Result<SweepPoint> {
    let h = spec.build()?;
    let min_abs = min_abs_eigenvalue(&h)?;
    let inv = spec.bloch_symbol().and_then(|sym| symbol_invariant(&sym, config.tolerances.classify, config.grid.k));
    let (class_label, invariant, bulk_gap) = match &inv {
        Ok(si) => (si.class_label.to_string(), si.invariant, si.bulk_gap),
        Err(e) => (
            format!("unclassified ({e})"),
            InvariantResult { kind: InvariantKind::Trivial, gap_margin: f64::NAN, grid_size: 0 },
            f64::NAN,
        ),
    };
    let zm = match &inv {
        Ok(si) => boundary_zero_modes(&h, si, config.tolerances.zero_mode, config.tolerances.classify)?,
        Err(_) => zero_modes_of(&h, config.tolerances.zero_mode)?,
    };
    Ok(SweepPoint {
        class_label,
        invariant,
        bulk_gap,
        zero_modes: zm.count,
        left_zero_modes: zm.left_count(),
        min_abs_eigenvalue: min_abs,
    })
}

/// Evaluates every sweep point independently; row order follows the
/// parameter grid whatever order the points finish in.
pub fn sweep_rows(config: &RunConfig) -> Result<Vec<SweepRow>> {
    let s = config.sweep.as_ref().ok_or_else(|| Error::InvalidParameter("no sweep configured".into()))?;
    let values: Vec<f64> =
        (0..s.steps).map(|i| s.start + (s.stop - s.start) * i as f64 / (s.steps - 1) as f64).collect();
    Ok(values
        .par_iter()
        .map(|&v| {
            let outcome = config
                .model
                .with_value(&s.parameter, v)
                .and_then(|spec| sweep_point(config, &spec))
                .map_err(|e| e.to_string());
            SweepRow { value: v, outcome }
        })
        .collect())
}

fn sweep(config: &RunConfig) -> Result<RunOutput> {
    let s = config.sweep.as_ref().expect("validated");
    let rows = sweep_rows(config)?;
    let mut table = Table::new(&[
        "value",
        "status",
        "class",
        "invariant",
        "invariant_value",
        "gap_margin",
        "bulk_gap",
        "zero_modes",
        "left_zero_modes",
        "min_abs_eigenvalue",
    ]);
    let mut failures = 0;
    for r in &rows {
        let mut row = vec![fmt_f64(r.value)];
        match &r.outcome {
            Ok(p) => {
                let (kind, value) = invariant_strings(&p.invariant);
                row.extend([
                    "ok".to_string(),
                    p.class_label.clone(),
                    kind.to_string(),
                    value,
                    fmt_f64(p.invariant.gap_margin),
                    fmt_f64(p.bulk_gap),
                    p.zero_modes.to_string(),
                    p.left_zero_modes.to_string(),
                    fmt_f64(p.min_abs_eigenvalue),
                ]);
            }
            Err(msg) => {
                failures += 1;
                row.push(format!("error: {msg}"));
                row.extend(std::iter::repeat_n(String::new(), 8));
            }
        }
        table.rows.push(row);
    }
    Ok(RunOutput {
        summary: vec![
            format!("parameter: {}", s.parameter),
            format!("points: {}", rows.len()),
            format!("failed_points: {failures}"),
        ],
        table,
    })
}

fn bulkboundary(config: &RunConfig) -> Result<RunOutput> {
    let opts = BulkBoundaryOptions { tol: config.tolerances.classify, grid: config.grid.k };
    let r = bulk_boundary_check_with(&config.model, config.model.n_cells, &opts)?;
    let (kind, value) = invariant_strings(&r.invariant);
    let summary = vec![
        format!("class: {}", r.class_label),
        if value.is_empty() { kind.to_string() } else { format!("{kind}: {value}") },
        format!("left_zero_modes: {}", r.left_count),
        format!("right_zero_modes: {}", r.right_count),
        format!("edges_decoupled: {}", r.edges_decoupled),
        format!("holds: {}", r.holds),
    ];
    let mut table = Table::new(&[
        "class",
        "invariant",
        "invariant_value",
        "gap_margin",
        "bulk_gap",
        "zero_modes",
        "left_zero_modes",
        "right_zero_modes",
        "cross_edge_weight",
        "edges_decoupled",
        "holds",
    ]);
    table.rows.push(vec![
        r.class_label.to_string(),
        kind.into(),
        value,
        fmt_f64(r.invariant.gap_margin),
        fmt_f64(r.bulk_gap),
        r.zero_modes.count.to_string(),
        r.left_count.to_string(),
        r.right_count.to_string(),
        fmt_f64(r.cross_edge_weight),
        r.edges_decoupled.to_string(),
        r.holds.to_string(),
    ]);
    Ok(RunOutput { summary, table })
}

/// Comment line with the version and the resolved configuration.
pub fn comment_line(config: &RunConfig) -> Result<String> {
    let json = serde_json::to_string(config).map_err(|e| Error::Io(e.to_string()))?;
    Ok(format!("# bosetopo {VERSION} config: {json}"))
}

/// Writes the comment line, the header and the rows.
pub fn write_csv<W: Write>(out: W, config: &RunConfig, table: &Table) -> Result<()> {
    let mut out = out;
    writeln!(out, "{}", comment_line(config)?).map_err(|e| Error::Io(e.to_string()))?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(&table.header).map_err(|e| Error::Io(e.to_string()))?;
    for row in &table.rows {
        w.write_record(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}
