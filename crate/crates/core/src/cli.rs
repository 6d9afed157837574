//! Command-line front end: `clone`, `table` and `circuit` subcommands.
//!
//! Exit codes: 0 when every bound is saturated, 1 when a run completed but
//! missed a bound, 2 for usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cloner::{build_cloner, ClonerCircuit, Preparation, Variant};
use crate::error::{invalid, Result};
use crate::fidelity::{optimal_added_variance, optimal_fidelity};
use crate::report::{report_with, CloneReport};

pub const EXIT_SATURATED: i32 = 0;
pub const EXIT_UNSATURATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest N or M accepted on the command line.
pub const MAX_CLONES: usize = 32;
/// Largest mode count accepted for the per-copy variant.
pub const MAX_PERCOPY_MODES: usize = 128;

#[derive(Debug, Parser)]
#[command(name = "cvclone", version, about = "Optimal N→M coherent-state cloning circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a cloner, run it on |α⟩ and report clone statistics.
    Clone(CloneArgs),
    /// Simulated vs closed-form fidelity and added noise over the (N, M) grid.
    Table(TableArgs),
    /// Print the element list of a cloner.
    Circuit(CircuitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Dft,
    Msplitter,
    Percopy,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Dft => Variant::Dft,
            VariantArg::Msplitter => Variant::MSplitter,
            VariantArg::Percopy => Variant::PerCopy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CloneArgs {
    /// Number of input copies N.
    #[arg(long = "n", default_value_t = 1)]
    pub n: usize,
    /// Number of clones M.
    #[arg(long = "m", default_value_t = 2)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::Msplitter)]
    pub variant: VariantArg,
    /// Coherent amplitude as `re,im`.
    #[arg(long, default_value = "1,0", value_parser = parse_alpha, allow_hyphen_values = true)]
    pub alpha: (f64, f64),
    /// Squeezing r applied to the inputs and every auxiliary mode.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub squeeze: f64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run a circuit read from a JSON file instead of building one.
    #[arg(long, conflicts_with_all = ["n", "m", "variant"])]
    pub circuit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Largest N in the grid.
    #[arg(long = "n", visible_alias = "n-max", default_value_t = 4)]
    pub n_max: usize,
    /// Largest M in the grid.
    #[arg(long = "m", visible_alias = "m-max", default_value_t = 8)]
    pub m_max: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::Msplitter)]
    pub variant: VariantArg,
    #[arg(long, default_value = "1,0", value_parser = parse_alpha, allow_hyphen_values = true)]
    pub alpha: (f64, f64),
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CircuitArgs {
    #[arg(long = "n", default_value_t = 1)]
    pub n: usize,
    #[arg(long = "m", default_value_t = 2)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::Msplitter)]
    pub variant: VariantArg,
    /// `json` (default) or `human`; csv lists one element per row.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `re,im`.
pub fn parse_alpha(text: &str) -> std::result::Result<(f64, f64), String> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| format!("expected `re,im`, got {text:?}"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad number {s:?}: {e}"))
            .and_then(|v| {
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(format!("non-finite number {s:?}"))
                }
            })
    };
    Ok((parse(re)?, parse(im)?))
}

/// Validated parameters of one cloning run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub m: usize,
    pub variant: Variant,
    pub alpha: (f64, f64),
    pub squeeze: f64,
}

impl RunConfig {
    pub fn new(n: usize, m: usize, variant: Variant, alpha: (f64, f64), squeeze: f64) -> Result<Self> {
        let config = Self {
            n,
            m,
            variant,
            alpha,
            squeeze,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1 <= self.n && self.n <= self.m && self.m <= MAX_CLONES) {
            return Err(invalid(format!(
                "need 1 <= N <= M <= {MAX_CLONES}, got N = {}, M = {}",
                self.n, self.m
            )));
        }
        if self.variant == Variant::PerCopy && self.n * self.m + self.n > MAX_PERCOPY_MODES {
            return Err(invalid(format!(
                "percopy variant needs N*M + N <= {MAX_PERCOPY_MODES} modes, got {}",
                self.n * self.m + self.n
            )));
        }
        if !(self.squeeze.is_finite() && self.alpha.0.is_finite() && self.alpha.1.is_finite()) {
            return Err(invalid("alpha and squeeze must be finite"));
        }
        Ok(())
    }

    pub fn preparation(&self) -> Preparation {
        Preparation::matched_squeezing(self.alpha.0, self.alpha.1, self.squeeze)
    }
}

/// Significant-digit formatting for human output.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..12).contains(&mag) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| invalid(format!("cannot write output: {e}"))),
    }
}

fn csv_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| invalid(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| invalid(e.to_string()))
}

#[derive(Debug, Serialize)]
struct CloneCsvRow {
    mode: usize,
    mean_x: f64,
    mean_p: f64,
    var_x: f64,
    var_p: f64,
    added_variance: f64,
    optimal_added_variance: f64,
    fidelity: f64,
    optimal_fidelity: f64,
    saturated: bool,
}

pub fn render_clone_report(report: &CloneReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(report.to_json()? + "\n"),
        Format::Csv => {
            let rows: Vec<CloneCsvRow> = report
                .clones
                .iter()
                .map(|c| CloneCsvRow {
                    mode: c.stats.mode,
                    mean_x: c.stats.mean[0],
                    mean_p: c.stats.mean[1],
                    var_x: c.stats.cov[0][0],
                    var_p: c.stats.cov[1][1],
                    added_variance: c.added_variance[0],
                    optimal_added_variance: report.optimal_added_variance,
                    fidelity: c.fidelity,
                    optimal_fidelity: report.optimal_fidelity,
                    saturated: report.saturated,
                })
                .collect();
            csv_string(&rows)
        }
        Format::Human => {
            let mut s = format!(
                "{} -> {} cloning, variant {}, alpha = {}{:+}i, squeeze = {}\n",
                report.n,
                report.m,
                report.variant,
                fmt12(report.alpha[0]),
                report.alpha[1],
                fmt12(report.input_squeeze)
            );
            s += &format!(
                "{:>5}  {:>19}  {:>19}  {:>19}  {:>19}  {:>19}\n",
                "mode", "mean x", "mean p", "var x", "var p", "fidelity"
            );
            for c in &report.clones {
                s += &format!(
                    "{:>5}  {:>19}  {:>19}  {:>19}  {:>19}  {:>19}\n",
                    c.stats.mode,
                    fmt12(c.stats.mean[0]),
                    fmt12(c.stats.mean[1]),
                    fmt12(c.stats.cov[0][0]),
                    fmt12(c.stats.cov[1][1]),
                    fmt12(c.fidelity)
                );
            }
            for a in &report.anticlones {
                s += &format!(
                    "anticlone {}: mean ({}, {}), var ({}, {})\n",
                    a.mode,
                    fmt12(a.mean[0]),
                    fmt12(a.mean[1]),
                    fmt12(a.cov[0][0]),
                    fmt12(a.cov[1][1])
                );
            }
            if !report.waste.is_empty() {
                s += &format!("waste modes: {}\n", report.waste.len());
            }
            s += &format!("optimal fidelity:        {}\n", fmt12(report.optimal_fidelity));
            s += &format!("optimal added variance:  {}\n", fmt12(report.optimal_added_variance));
            s += &format!("max fidelity error:      {}\n", fmt12(report.max_fidelity_error));
            s += &format!("max added-variance error: {}\n", fmt12(report.max_added_variance_error));
            s += &format!("max mean error:          {}\n", fmt12(report.max_mean_error));
            s += &format!("max isotropy error:      {}\n", fmt12(report.max_isotropy_error));
            s += &format!("saturated: {}\n", report.saturated);
            Ok(s)
        }
    }
}

/// One row of the (N, M) table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub m: usize,
    pub f_sim: f64,
    pub f_formula: f64,
    pub f_abs_diff: f64,
    pub added_var_sim: f64,
    pub added_var_formula: f64,
    pub added_var_abs_diff: f64,
    pub saturated: bool,
}

/// Worst-case clone of each run, for all `1 <= N <= n_max`, `N <= M <= m_max`.
pub fn table_rows(n_max: usize, m_max: usize, variant: Variant, alpha: (f64, f64)) -> Result<Vec<TableRow>> {
    if !(1 <= n_max && n_max <= m_max && m_max <= MAX_CLONES) {
        return Err(invalid(format!(
            "need 1 <= n_max <= m_max <= {MAX_CLONES}, got {n_max}, {m_max}"
        )));
    }
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for m in n..=m_max {
            let config = RunConfig::new(n, m, variant, alpha, 0.0)?;
            let r = report_with(&build_cloner(n, m, variant)?, &config.preparation())?;
            let f_formula = optimal_fidelity(n, m)?;
            let v_formula = optimal_added_variance(n, m)?;
            let f_sim = r
                .clones
                .iter()
                .map(|c| c.fidelity)
                .max_by(|a, b| (a - f_formula).abs().total_cmp(&(b - f_formula).abs()))
                .unwrap_or(f64::NAN);
            let added_var_sim = r
                .clones
                .iter()
                .flat_map(|c| c.added_variance.iter().copied())
                .max_by(|a, b| (a - v_formula).abs().total_cmp(&(b - v_formula).abs()))
                .unwrap_or(f64::NAN);
            rows.push(TableRow {
                n,
                m,
                f_sim,
                f_formula,
                f_abs_diff: (f_sim - f_formula).abs(),
                added_var_sim,
                added_var_formula: v_formula,
                added_var_abs_diff: (added_var_sim - v_formula).abs(),
                saturated: r.saturated,
            });
        }
    }
    Ok(rows)
}

pub fn render_table(rows: &[TableRow], format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(rows)
            .map(|s| s + "\n")
            .map_err(|e| invalid(e.to_string())),
        Format::Csv => csv_string(rows),
        Format::Human => {
            let mut s = format!(
                "{:>3} {:>3}  {:>15} {:>15} {:>18}  {:>15} {:>15} {:>18}\n",
                "N", "M", "F sim", "F formula", "|dF|", "added var sim", "added var eq", "|dV|"
            );
            for r in rows {
                s += &format!(
                    "{:>3} {:>3}  {:>15} {:>15} {:>18}  {:>15} {:>15} {:>18}\n",
                    r.n,
                    r.m,
                    fmt12(r.f_sim),
                    fmt12(r.f_formula),
                    fmt12(r.f_abs_diff),
                    fmt12(r.added_var_sim),
                    fmt12(r.added_var_formula),
                    fmt12(r.added_var_abs_diff)
                );
            }
            Ok(s)
        }
    }
}

#[derive(Debug, Serialize)]
struct ElementCsvRow {
    index: usize,
    #[serde(rename = "type")]
    kind: &'static str,
    modes: String,
    parameter: f64,
}

pub fn render_circuit(cloner: &ClonerCircuit, format: Format) -> Result<String> {
    use crate::circuit::CircuitElement as E;
    let describe = |e: &E| -> (&'static str, f64) {
        match e {
            E::BeamSplitter(b) => ("bs", b.theta),
            E::Amplifier(a) => ("amp", a.gain),
            E::Permutation { .. } => ("perm", f64::NAN),
            E::PhaseShift { phi, .. } => ("phase", *phi),
            E::Dft { .. } => ("dft", f64::NAN),
            E::Unitary { .. } => ("unitary", f64::NAN),
        }
    };
    let join = |modes: Vec<usize>| {
        modes
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    match format {
        Format::Json => Ok(cloner.to_json()? + "\n"),
        Format::Csv => {
            let rows: Vec<ElementCsvRow> = cloner
                .circuit
                .elements
                .iter()
                .enumerate()
                .map(|(index, e)| {
                    let (kind, parameter) = describe(e);
                    ElementCsvRow {
                        index,
                        kind,
                        modes: join(e.modes()),
                        parameter,
                    }
                })
                .collect();
            csv_string(&rows)
        }
        Format::Human => {
            let roles = &cloner.roles;
            let mut s = format!(
                "{} -> {} cloner ({}), {} modes: {} beam splitters, {} amplifiers\n",
                roles.n,
                roles.m,
                roles.variant,
                cloner.circuit.n_modes,
                cloner.circuit.beam_splitter_count(),
                cloner.circuit.amplifier_count()
            );
            for (i, e) in cloner.circuit.elements.iter().enumerate() {
                let (kind, p) = describe(e);
                s += &format!("{i:>4}  {kind:<7} modes [{}]", join(e.modes()));
                if p.is_finite() {
                    s += &format!("  {}", fmt12(p));
                }
                s.push('\n');
            }
            s += &format!("clones:     [{}]\n", join(roles.clones.clone()));
            s += &format!("anticlones: [{}]\n", join(roles.anticlones.clone()));
            s += &format!("waste:      [{}]\n", join(roles.waste.clone()));
            Ok(s)
        }
    }
}

fn cmd_clone(args: &CloneArgs, stdout: &mut dyn Write) -> std::result::Result<i32, (i32, String)> {
    let usage = |e: crate::Error| (EXIT_USAGE, e.to_string());
    let (cloner, prep) = match &args.circuit {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| (EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
            let cloner = ClonerCircuit::from_json(&text).map_err(usage)?;
            let r = &cloner.roles;
            RunConfig::new(r.n, r.m, r.variant, args.alpha, args.squeeze).map_err(usage)?;
            let prep = Preparation::matched_squeezing(args.alpha.0, args.alpha.1, args.squeeze);
            (cloner, prep)
        }
        None => {
            let config = RunConfig::new(args.n, args.m, args.variant.into(), args.alpha, args.squeeze)
                .map_err(usage)?;
            let cloner = build_cloner(config.n, config.m, config.variant).map_err(usage)?;
            (cloner, config.preparation())
        }
    };
    let report = report_with(&cloner, &prep).map_err(|e| (EXIT_UNSATURATED, e.to_string()))?;
    let text = render_clone_report(&report, args.format).map_err(usage)?;
    emit(&args.out, &text, stdout).map_err(usage)?;
    Ok(if report.saturated {
        EXIT_SATURATED
    } else {
        EXIT_UNSATURATED
    })
}

fn cmd_table(args: &TableArgs, stdout: &mut dyn Write) -> std::result::Result<i32, (i32, String)> {
    let usage = |e: crate::Error| (EXIT_USAGE, e.to_string());
    let rows = table_rows(args.n_max, args.m_max, args.variant.into(), args.alpha).map_err(usage)?;
    let text = render_table(&rows, args.format).map_err(usage)?;
    emit(&args.out, &text, stdout).map_err(usage)?;
    Ok(if rows.iter().all(|r| r.saturated) {
        EXIT_SATURATED
    } else {
        EXIT_UNSATURATED
    })
}

fn cmd_circuit(args: &CircuitArgs, stdout: &mut dyn Write) -> std::result::Result<i32, (i32, String)> {
    let usage = |e: crate::Error| (EXIT_USAGE, e.to_string());
    let config = RunConfig::new(args.n, args.m, args.variant.into(), (0.0, 0.0), 0.0).map_err(usage)?;
    let cloner = build_cloner(config.n, config.m, config.variant).map_err(usage)?;
    let text = render_circuit(&cloner, args.format).map_err(usage)?;
    emit(&args.out, &text, stdout).map_err(usage)?;
    Ok(EXIT_SATURATED)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_SATURATED };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Clone(a) => cmd_clone(a, stdout),
        Command::Table(a) => cmd_table(a, stdout),
        Command::Circuit(a) => cmd_circuit(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err((code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}
