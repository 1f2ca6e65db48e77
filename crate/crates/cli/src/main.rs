//! `mmprop`: command line front end for the propagation toolkit.
//!
//! One binary, nine subcommands. Every number the CLI prints is produced by
//! a library call; this crate only parses flags, wires calls together, and
//! formats results. Exit codes partition failures for scripting: 0 on
//! success, 1 for computation domain errors (bad data, unreachable target),
//! 2 for invocation problems (unknown or out-of-range flags).

mod model;

use std::fmt::Write as _;
use std::io::Read as _;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mmprop::{
    ci_path_loss, distance_for_loss, effective_ple, emit_measurement_csv, export_all_tables,
    export_plot_data, export_tables, figure, fit_bc_weight, fit_ci_ple, fit_slope_correction,
    generate_ci_dataset, log_spaced_distances, measured_path_loss_from_beams, parse_beam_csv,
    parse_measurements, provenance_comments, residuals_about, shadow_series, shadowing_sigma,
    BcCiModel, CiModel, DatasetLabel, ExportedTable, FitDataset, FitSample, FrequencyBand,
    LineDiagnostic, RangeModel, RangeQuery, Scenario, ShadowingSpec, SlopeBase, SuiContext,
    TableId, REFERENCE_DISTANCE_M, SHADOWING_SAMPLER_ID,
};

use model::{ModelArgs, SchemeArg, TerrainArg};

// ======================================================================
// Errors and exit codes
// ======================================================================

/// CLI failure classes. Usage errors are knowable from the invocation
/// alone; domain errors need the computation or the data to surface.
#[derive(Debug)]
pub enum CliError {
    /// Exit status 2.
    Usage(String),
    /// Exit status 1.
    Domain(String),
}

impl From<mmprop::Error> for CliError {
    fn from(e: mmprop::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<mmprop::DataError> for CliError {
    fn from(e: mmprop::DataError) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// Reclassifies a library precondition as a usage error, for parameters
/// that come straight from flags.
pub fn usage(e: mmprop::Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn main() {
    match Cli::parse().run() {
        Ok(out) => print!("{out}"),
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}

// ======================================================================
// Command tree
// ======================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-oriented text
    Text,
    /// Machine-readable CSV
    Csv,
    /// Machine-readable JSON (schema in docs/cli-output.schema.json)
    Json,
}

/// Millimeter-wave propagation toolkit: path loss models, MMSE parameter
/// fits, reference tables, link range queries, and synthetic datasets.
#[derive(Parser)]
#[command(name = "mmprop", version, about)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a propagation model at one or more distances
    Pathloss(PathlossArgs),
    /// Fit a close-in path loss exponent to measurement data
    FitCi(FitCiArgs),
    /// Fit a slope correction factor against a base model
    FitAlpha(FitAlphaArgs),
    /// Fit the beam-combining weight from multi-beam power data
    FitBc(FitBcArgs),
    /// Estimate shadowing sigma about a configured model
    Sigma(SigmaArgs),
    /// Export the recomputed reference parameter tables
    Tables(TablesArgs),
    /// Solve for the distance that produces a target path loss
    Range(RangeArgs),
    /// Generate a seeded synthetic measurement dataset
    Synth(SynthArgs),
    /// Export model curves for plotting
    PlotData(PlotDataArgs),
}

impl Cli {
    fn run(self) -> Result<String, CliError> {
        match self.command {
            Command::Pathloss(args) => args.run(self.format),
            Command::FitCi(args) => args.run(self.format),
            Command::FitAlpha(args) => args.run(self.format),
            Command::FitBc(args) => args.run(self.format),
            Command::Sigma(args) => args.run(self.format),
            Command::Tables(args) => args.run(self.format),
            Command::Range(args) => args.run(self.format),
            Command::Synth(args) => args.run(self.format),
            Command::PlotData(args) => args.run(self.format),
        }
    }
}

// ======================================================================
// Shared helpers
// ======================================================================

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Domain(format!("cannot read standard input: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Domain(format!("cannot read {path}: {e}")))
    }
}

/// Per-line ingestion diagnostics go to standard error; they never affect
/// the exit status.
fn report_diagnostics(diagnostics: &[LineDiagnostic]) {
    for d in diagnostics {
        eprintln!("line {}: {}", d.line, d.message);
    }
}

fn band_from_flag(freq_ghz: f64) -> Result<FrequencyBand, CliError> {
    FrequencyBand::new(freq_ghz).map_err(usage)
}

fn check_distance_flag(name: &str, d: f64) -> Result<(), CliError> {
    if !(d.is_finite() && d >= REFERENCE_DISTANCE_M) {
        return Err(CliError::Usage(format!(
            "{name} {d}: distances must be at least the {REFERENCE_DISTANCE_M} m close-in \
             reference distance"
        )));
    }
    Ok(())
}

fn to_json<T: Serialize>(report: &T) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("reports serialize cleanly");
    out.push('\n');
    out
}

// ======================================================================
// pathloss
// ======================================================================

#[derive(Args)]
struct PathlossArgs {
    /// Carrier frequency in GHz
    #[arg(long)]
    freq_ghz: f64,

    #[command(flatten)]
    model: ModelArgs,

    /// Distance in meters; repeat the flag for a series
    #[arg(long, required = true)]
    distance_m: Vec<f64>,

    /// Shadowing standard deviation in dB; omit for the median curve
    #[arg(long, conflicts_with = "no_shadow")]
    sigma: Option<f64>,

    /// Seed for the shadowing stream
    #[arg(long, default_value_t = 0, requires = "sigma")]
    seed: u64,

    /// Force the deterministic median curve (the default behavior)
    #[arg(long)]
    no_shadow: bool,
}

#[derive(Serialize)]
struct ShadowingOut {
    sigma_db: f64,
    seed: u64,
    sampler: &'static str,
}

#[derive(Serialize)]
struct PathlossRow {
    distance_m: f64,
    path_loss_db: f64,
}

#[derive(Serialize)]
struct PathlossReport {
    command: &'static str,
    model: &'static str,
    frequency_ghz: f64,
    shadowing: Option<ShadowingOut>,
    results: Vec<PathlossRow>,
}

impl PathlossArgs {
    fn run(self, format: Format) -> Result<String, CliError> {
        let band = band_from_flag(self.freq_ghz)?;
        for &d in &self.distance_m {
            check_distance_flag("--distance-m", d)?;
        }
        let model = self.model.build(band)?;
        let median = self
            .distance_m
            .iter()
            .map(|&d| model.loss_db(d))
            .collect::<mmprop::Result<Vec<f64>>>()?;
        let shadow = match self.sigma {
            Some(sigma) => Some(ShadowingSpec::new(sigma, self.seed).map_err(usage)?),
            None => None,
        };
        let losses = match shadow {
            Some(spec) => shadow_series(&median, spec),
            None => median,
        };
        let report = PathlossReport {
            command: "pathloss",
            model: self.model.model.name(),
            frequency_ghz: band.ghz(),
            shadowing: shadow.map(|s| ShadowingOut {
                sigma_db: s.sigma_db(),
                seed: s.seed(),
                sampler: SHADOWING_SAMPLER_ID,
            }),
            results: self
                .distance_m
                .iter()
                .zip(&losses)
                .map(|(&distance_m, &path_loss_db)| PathlossRow { distance_m, path_loss_db })
                .collect(),
        };
        Ok(match format {
            Format::Text => {
                let mut out = String::new();
                if let [row] = report.results.as_slice() {
                    writeln!(out, "{:.3} dB", row.path_loss_db).unwrap();
                } else {
                    for row in &report.results {
                        writeln!(out, "{:.3} m: {:.3} dB", row.distance_m, row.path_loss_db)
                            .unwrap();
                    }
                }
                out
            }
            Format::Csv => {
                let mut out = String::from("distance_m,path_loss_db\n");
                for row in &report.results {
                    writeln!(out, "{:.6},{:.6}", row.distance_m, row.path_loss_db).unwrap();
                }
                out
            }
            Format::Json => to_json(&report),
        })
    }
}

// ======================================================================
// fit-ci
// ======================================================================

#[derive(Args)]
struct FitCiArgs {
    /// Measurement CSV path, or - for standard input
    #[arg(long)]
    input: String,
}

#[derive(Serialize)]
struct FitCiReport {
    command: &'static str,
    input: String,
    frequency_ghz: f64,
    samples: usize,
    ple: f64,
    sigma_db: f64,
    rmse_db: f64,
}

impl FitCiArgs {
    fn run(self, format: Format) -> Result<String, CliError> {
        let parsed = parse_measurements(&read_input(&self.input)?)?;
        report_diagnostics(&parsed.diagnostics);
        let data = parsed.fit_dataset()?;
        let fit = fit_ci_ple(&data)?;
        let report = FitCiReport {
            command: "fit-ci",
            input: self.input,
            frequency_ghz: data.band().ghz(),
            samples: data.samples().len(),
            ple: fit.value,
            sigma_db: fit.sigma_db,
            rmse_db: fit.rmse_db,
        };
        Ok(match format {
            Format::Text => format!(
                "ple: {:.6}\nsigma: {:.3} dB\nrmse: {:.3} dB\nsamples: {}\n",
                report.ple, report.sigma_db, report.rmse_db, report.samples
            ),
            Format::Csv => format!(
                "frequency_ghz,samples,ple,sigma_db,rmse_db\n{:.6},{},{:.6},{:.6},{:.6}\n",
                report.frequency_ghz, report.samples, report.ple, report.sigma_db, report.rmse_db
            ),
            Format::Json => to_json(&report),
        })
    }
}

// ======================================================================
// fit-alpha
// ======================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BaseArg {
    /// Free space base slope
    Fs,
    /// SUI base slope
    Sui,
}

#[derive(Args)]
struct FitAlphaArgs {
    /// Measurement CSV path, or - for standard input
    #[arg(long)]
    input: String,

    /// Base model whose distance slope the correction rescales
    #[arg(long, value_enum)]
    base: BaseArg,

    /// Terrain class, default a (sui base)
    #[arg(long, value_enum)]
    terrain: Option<TerrainArg>,

    /// Transmitter height in meters, default 1.5 (sui base)
    #[arg(long)]
    tx_height_m: Option<f64>,

    /// Receiver height in meters, default 1.5 (sui base)
    #[arg(long)]
    rx_height_m: Option<f64>,

    /// Transmit antenna gain in dBi, default 0 (fs base)
    #[arg(long)]
    tx_gain_dbi: Option<f64>,

    /// Receive antenna gain in dBi, default 0 (fs base)
    #[arg(long)]
    rx_gain_dbi: Option<f64>,
}

#[derive(Serialize)]
struct FitAlphaReport {
    command: &'static str,
    input: String,
    frequency_ghz: f64,
    base: &'static str,
    base_ple: f64,
    samples: usize,
    alpha: f64,
    sigma_db: f64,
    rmse_db: f64,
}

impl FitAlphaArgs {
    fn slope_base(&self, band: FrequencyBand) -> Result<SlopeBase, CliError> {
        let out_of_scope: [(bool, &str, &str); 5] = [
            (self.terrain.is_some() && self.base == BaseArg::Fs, "--terrain", "sui"),
            (self.tx_height_m.is_some() && self.base == BaseArg::Fs, "--tx-height-m", "sui"),
            (self.rx_height_m.is_some() && self.base == BaseArg::Fs, "--rx-height-m", "sui"),
            (self.tx_gain_dbi.is_some() && self.base == BaseArg::Sui, "--tx-gain-dbi", "fs"),
            (self.rx_gain_dbi.is_some() && self.base == BaseArg::Sui, "--rx-gain-dbi", "fs"),
        ];
        for (bad, flag, allowed) in out_of_scope {
            if bad {
                return Err(CliError::Usage(format!(
                    "{flag} applies to --base {allowed} only"
                )));
            }
        }
        Ok(match self.base {
            BaseArg::Fs => SlopeBase::FreeSpace {
                band,
                tx_gain_dbi: self.tx_gain_dbi.unwrap_or(0.0),
                rx_gain_dbi: self.rx_gain_dbi.unwrap_or(0.0),
            },
            BaseArg::Sui => SlopeBase::Sui(
                SuiContext::new(
                    band,
                    self.terrain.unwrap_or(TerrainArg::A).class(),
                    self.tx_height_m.unwrap_or(1.5),
                    self.rx_height_m.unwrap_or(1.5),
                )
                .map_err(usage)?,
            ),
        })
    }

    fn run(self, format: Format) -> Result<String, CliError> {
        let parsed = parse_measurements(&read_input(&self.input)?)?;
        report_diagnostics(&parsed.diagnostics);
        let data = parsed.fit_dataset()?;
        let base = self.slope_base(data.band())?;
        let fit = fit_slope_correction(&data, &base)?;
        let report = FitAlphaReport {
            command: "fit-alpha",
            input: self.input,
            frequency_ghz: data.band().ghz(),
            base: match self.base {
                BaseArg::Fs => "fs",
                BaseArg::Sui => "sui",
            },
            base_ple: base.ple(),
            samples: data.samples().len(),
            alpha: fit.value,
            sigma_db: fit.sigma_db,
            rmse_db: fit.rmse_db,
        };
        Ok(match format {
            Format::Text => format!(
                "alpha: {:.6}\nbase ple: {:.6}\nsigma: {:.3} dB\nrmse: {:.3} dB\nsamples: {}\n",
                report.alpha, report.base_ple, report.sigma_db, report.rmse_db, report.samples
            ),
            Format::Csv => format!(
                "frequency_ghz,base,base_ple,samples,alpha,sigma_db,rmse_db\n\
                 {:.6},{},{:.6},{},{:.6},{:.6},{:.6}\n",
                report.frequency_ghz,
                report.base,
                report.base_ple,
                report.samples,
                report.alpha,
                report.sigma_db,
                report.rmse_db
            ),
            Format::Json => to_json(&report),
        })
    }
}

// ======================================================================
// fit-bc
// ======================================================================

#[derive(Args)]
struct FitBcArgs {
    /// Beam CSV path, or - for standard input
    #[arg(long)]
    input: String,

    /// Single-beam path loss exponent the weight is expressed against
    #[arg(long)]
    ple: f64,

    /// Combining scheme
    #[arg(long, value_enum, default_value_t = SchemeArg::Cc)]
    scheme: SchemeArg,

    /// Largest beam count to combine per location
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    beams: u32,
}

#[derive(Serialize)]
struct EffectivePleOut {
    beams: u32,
    ple: f64,
    below_free_space: bool,
}

#[derive(Serialize)]
struct FitBcReport {
    command: &'static str,
    input: String,
    frequency_ghz: f64,
    scheme: &'static str,
    single_beam_ple: f64,
    locations: usize,
    samples: usize,
    a_weight: f64,
    sigma_db: f64,
    rmse_db: f64,
    effective_ple: Vec<EffectivePleOut>,
}

impl FitBcArgs {
    fn run(self, format: Format) -> Result<String, CliError> {
        if !(self.ple.is_finite() && self.ple > 0.0) {
            return Err(CliError::Usage(format!("--ple must be positive, got {}", self.ple)));
        }
        let parsed = parse_beam_csv(&read_input(&self.input)?)?;
        report_diagnostics(&parsed.diagnostics);
        let sets = parsed.beam_sets()?;
        let first = sets
            .first()
            .ok_or_else(|| CliError::Domain("input contains no beam locations".into()))?;
        let band = FrequencyBand::new(first.frequency_ghz)?;
        for s in &sets {
            if s.frequency_ghz != first.frequency_ghz {
                return Err(CliError::Domain(format!(
                    "locations disagree on frequency_ghz: {} has {}, {} has {}",
                    first.set.location_id(),
                    first.frequency_ghz,
                    s.set.location_id(),
                    s.frequency_ghz
                )));
            }
        }
        let mut samples = Vec::new();
        for s in &sets {
            let available = s.set.beams().len() as u32;
            for n_r in 1..=self.beams.min(available) {
                let loss = measured_path_loss_from_beams(
                    &s.set,
                    n_r as usize,
                    self.scheme.scheme(),
                    s.tx_power_dbm,
                    s.tx_gain_dbi,
                    s.rx_gain_dbi,
                )?;
                samples.push(FitSample::with_beams(s.set.distance_m(), loss, n_r));
            }
        }
        let locations = sets.len();
        let data = FitDataset::new(band, samples)?;
        let fit = fit_bc_weight(&data, self.ple)?;
        let bc = BcCiModel::new(band, self.ple, fit.value, self.scheme.scheme(), fit.sigma_db)?;
        let effective = (1..=self.beams)
            .map(|n_r| {
                effective_ple(&bc, n_r).map(|e| EffectivePleOut {
                    beams: n_r,
                    ple: e.value,
                    below_free_space: e.below_free_space,
                })
            })
            .collect::<mmprop::Result<Vec<_>>>()?;
        let report = FitBcReport {
            command: "fit-bc",
            input: self.input,
            frequency_ghz: band.ghz(),
            scheme: self.scheme.name(),
            single_beam_ple: self.ple,
            locations,
            samples: data.samples().len(),
            a_weight: fit.value,
            sigma_db: fit.sigma_db,
            rmse_db: fit.rmse_db,
            effective_ple: effective,
        };
        Ok(match format {
            Format::Text => {
                let mut out = format!(
                    "a-weight: {:.6}\nsigma: {:.3} dB\nrmse: {:.3} dB\nlocations: {}\nsamples: {}\n",
                    report.a_weight, report.sigma_db, report.rmse_db, report.locations,
                    report.samples
                );
                writeln!(out, "effective ple ({}):", report.scheme).unwrap();
                for e in &report.effective_ple {
                    let plural = if e.beams == 1 { "beam" } else { "beams" };
                    writeln!(out, "  {} {plural}: {:.6}", e.beams, e.ple).unwrap();
                }
                out
            }
            Format::Csv => format!(
                "frequency_ghz,scheme,single_beam_ple,locations,samples,a_weight,sigma_db,rmse_db\n\
                 {:.6},{},{:.6},{},{},{:.6},{:.6},{:.6}\n",
                report.frequency_ghz,
                report.scheme,
                report.single_beam_ple,
                report.locations,
                report.samples,
                report.a_weight,
                report.sigma_db,
                report.rmse_db
            ),
            Format::Json => to_json(&report),
        })
    }
}

// ======================================================================
// sigma
// ======================================================================

#[derive(Args)]
struct SigmaArgs {
    /// Measurement CSV path, or - for standard input
    #[arg(long)]
    input: String,

    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Serialize)]
struct SigmaReport {
    command: &'static str,
    input: String,
    frequency_ghz: f64,
    model: &'static str,
    samples: usize,
    sigma_db: f64,
}

impl SigmaArgs {
    fn run(self, format: Format) -> Result<String, CliError> {
        let parsed = parse_measurements(&read_input(&self.input)?)?;
        report_diagnostics(&parsed.diagnostics);
        let data = parsed.fit_dataset()?;
        let model = self.model.build(data.band())?;
        let residuals = residuals_about(&data, |d| model.loss_db(d))?;
        let sigma_db = shadowing_sigma(&residuals)?;
        let report = SigmaReport {
            command: "sigma",
            input: self.input,
            frequency_ghz: data.band().ghz(),
            model: self.model.model.name(),
            samples: data.samples().len(),
            sigma_db,
        };
        Ok(match format {
            Format::Text => format!("{:.3} dB\n", report.sigma_db),
            Format::Csv => format!(
                "frequency_ghz,model,samples,sigma_db\n{:.6},{},{},{:.6}\n",
                report.frequency_ghz, report.model, report.samples, report.sigma_db
            ),
            Format::Json => to_json(&report),
        })
    }
}

// ======================================================================
// tables
// ======================================================================

#[derive(Clone, Copy)]
enum TableSelect {
    One(TableId),
    All,
}

fn parse_table_select(s: &str) -> Result<TableSelect, String> {
    if s.eq_ignore_ascii_case("all") {
        Ok(TableSelect::All)
    } else {
        s.parse::<TableId>().map(TableSelect::One)
    }
}

#[derive(Args)]
struct TablesArgs {
    /// Table to export: I, II, III, or all
    #[arg(long, default_value = "all", value_parser = parse_table_select)]
    table: TableSelect,
}

#[derive(Serialize)]
struct TableCellOut {
    column: String,
    printed: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    recomputed: Option<f64>,
    flagged: bool,
}

#[derive(Serialize)]
struct TableRowOut {
    section: String,
    label: String,
    cells: Vec<TableCellOut>,
}

#[derive(Serialize)]
struct TableOut {
    id: String,
    title: String,
    rows: Vec<TableRowOut>,
}

#[derive(Serialize)]
struct TablesReport {
    command: &'static str,
    tables: Vec<TableOut>,
}

fn table_to_out(table: &ExportedTable) -> TableOut {
    TableOut {
        id: table.id.to_string(),
        title: table.title.to_string(),
        rows: table
            .rows
            .iter()
            .map(|row| TableRowOut {
                section: row.section.to_string(),
                label: row.label.to_string(),
                cells: row
                    .cells
                    .iter()
                    .map(|cell| TableCellOut {
                        column: cell.column.clone(),
                        printed: cell.printed,
                        recomputed: cell.recomputed,
                        flagged: cell.flag.is_some(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

impl TablesArgs {
    fn run(self, format: Format) -> Result<String, CliError> {
        let tables = match self.table {
            TableSelect::One(id) => vec![export_tables(id)],
            TableSelect::All => export_all_tables(),
        };
        Ok(match format {
            Format::Text => {
                let mut out = String::new();
                for (i, t) in tables.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    out.push_str(&t.to_text());
                }
                out
            }
            Format::Csv => {
                // One header for the whole stream; later tables repeat the
                // same columns, so theirs are stripped.
                let mut out = String::new();
                for (i, t) in tables.iter().enumerate() {
                    let csv = t.to_csv();
                    if i == 0 {
                        out.push_str(&csv);
                    } else if let Some((_, body)) = csv.split_once('\n') {
                        out.push_str(body);
                    }
                }
                out
            }
            Format::Json => to_json(&TablesReport {
                command: "tables",
                tables: tables.iter().map(table_to_out).collect(),
            }),
        })
    }
}

// ======================================================================
// range
// ======================================================================

#[derive(Args)]
#[command(group(
    ArgGroup::new("target")
        .required(true)
        .args(["target_loss_db", "target_loss_of"])
))]
struct RangeArgs {
    /// Carrier frequency in GHz
    #[arg(long)]
    freq_ghz: f64,

    /// Path loss exponent of the model being solved
    #[arg(long)]
    ple: f64,

    /// Target path loss in dB
    #[arg(long)]
    target_loss_db: Option<f64>,

    /// Take the target from a reference model's loss at --at-m
    #[arg(long, requires = "ple_ref", requires = "at_m")]
    target_loss_of: bool,

    /// Reference model path loss exponent (with --target-loss-of)
    #[arg(long, requires = "target_loss_of")]
    ple_ref: Option<f64>,

    /// Distance in meters where the reference loss is taken
    #[arg(long, requires = "target_loss_of")]
    at_m: Option<f64>,

    /// Linear atmospheric absorption in dB per km
    #[arg(long)]
    rate_db_per_km: Option<f64>,

    /// Beam-combining weight A; solves a bc-ci model instead of ci
    #[arg(long, requires = "beams")]
    a_weight: Option<f64>,

    /// Number of combined beams (with --a-weight)
    #[arg(long, requires = "a_weight", value_parser = clap::value_parser!(u32).range(1..))]
    beams: Option<u32>,

    /// Combining scheme, default cc (with --a-weight)
    #[arg(long, value_enum, requires = "a_weight")]
    scheme: Option<SchemeArg>,
}

#[derive(Serialize)]
struct RangeReport {
    command: &'static str,
    frequency_ghz: f64,
    model: &'static str,
    ple: f64,
    target_loss_db: f64,
    rate_db_per_km: f64,
    distance_m: f64,
}

impl RangeArgs {
    fn run(self, format: Format) -> Result<String, CliError> {
        let band = band_from_flag(self.freq_ghz)?;
        let (model, name) = match (self.a_weight, self.beams) {
            (Some(a_weight), Some(n_r)) => {
                let scheme = self.scheme.unwrap_or(SchemeArg::Cc).scheme();
                let bc = BcCiModel::new(band, self.ple, a_weight, scheme, 0.0).map_err(usage)?;
                (RangeModel::BcCi { model: bc, n_r }, "bc-ci")
            }
            _ => (RangeModel::Ci(CiModel::new(band, self.ple, 0.0).map_err(usage)?), "ci"),
        };
        let target_loss_db = match self.target_loss_db {
            Some(target) => target,
            None => {
                let ple_ref = self.ple_ref.expect("clap guarantees --ple-ref");
                let at_m = self.at_m.expect("clap guarantees --at-m");
                check_distance_flag("--at-m", at_m)?;
                let reference = CiModel::new(band, ple_ref, 0.0).map_err(usage)?;
                ci_path_loss(&reference, at_m, None).map_err(usage)?
            }
        };
        let mut query = RangeQuery::new(model, target_loss_db)?;
        if let Some(rate) = self.rate_db_per_km {
            query = query.with_atmospheric_rate(rate).map_err(usage)?;
        }
        let distance_m = distance_for_loss(&query)?;
        let report = RangeReport {
            command: "range",
            frequency_ghz: band.ghz(),
            model: name,
            ple: self.ple,
            target_loss_db,
            rate_db_per_km: query.atmospheric_rate_db_per_km(),
            distance_m,
        };
        Ok(match format {
            Format::Text => format!("{:.3} m\n", report.distance_m),
            Format::Csv => format!(
                "frequency_ghz,model,ple,target_loss_db,rate_db_per_km,distance_m\n\
                 {:.6},{},{:.6},{:.6},{:.6},{:.6}\n",
                report.frequency_ghz,
                report.model,
                report.ple,
                report.target_loss_db,
                report.rate_db_per_km,
                report.distance_m
            ),
            Format::Json => to_json(&report),
        })
    }
}

// ======================================================================
// synth
// ======================================================================

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse()
}

#[derive(Args)]
struct SynthArgs {
    /// Carrier frequency in GHz
    #[arg(long)]
    freq_ghz: f64,

    /// Close-in path loss exponent of the generating model
    #[arg(long)]
    ple: f64,

    /// Shadowing standard deviation in dB
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,

    /// Shadowing stream seed
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Smallest distance in meters
    #[arg(long, default_value_t = 29.0)]
    d_min_m: f64,

    /// Largest distance in meters
    #[arg(long, default_value_t = 129.0)]
    d_max_m: f64,

    /// Number of log-spaced distances
    #[arg(long, default_value_t = 40)]
    points: usize,

    /// Environment label recorded in the rows
    #[arg(long, default_value = "synthetic")]
    environment: String,

    /// Scenario label: los or nlos
    #[arg(long, default_value = "nlos", value_parser = parse_scenario)]
    scenario: Scenario,

    /// Transmitter height recorded in the rows
    #[arg(long, default_value_t = 1.5)]
    tx_height_m: f64,

    /// Receiver height recorded in the rows
    #[arg(long, default_value_t = 1.5)]
    rx_height_m: f64,
}

#[derive(Serialize)]
struct RecordOut {
    frequency_ghz: f64,
    environment: String,
    scenario: String,
    tx_height_m: f64,
    rx_height_m: f64,
    distance_m: f64,
    path_loss_db: f64,
}

#[derive(Serialize)]
struct SynthReport {
    command: &'static str,
    frequency_ghz: f64,
    ple: f64,
    sigma_db: f64,
    seed: u64,
    sampler: &'static str,
    records: Vec<RecordOut>,
}

impl SynthArgs {
    fn run(self, format: Format) -> Result<String, CliError> {
        let band = band_from_flag(self.freq_ghz)?;
        let model = CiModel::new(band, self.ple, self.sigma).map_err(usage)?;
        let distances =
            log_spaced_distances(self.d_min_m, self.d_max_m, self.points).map_err(usage)?;
        if self.environment.contains([',', '#', '\n']) {
            return Err(CliError::Usage(
                "--environment must not contain commas, hashes, or newlines".into(),
            ));
        }
        for (flag, height) in [("--tx-height-m", self.tx_height_m), ("--rx-height-m", self.rx_height_m)]
        {
            if !(height.is_finite() && height > 0.0) {
                return Err(CliError::Usage(format!("{flag} must be positive, got {height}")));
            }
        }
        let label = DatasetLabel {
            environment: self.environment,
            scenario: self.scenario,
            tx_height_m: self.tx_height_m,
            rx_height_m: self.rx_height_m,
        };
        let records = generate_ci_dataset(&model, &distances, self.seed, &label)?;
        Ok(match format {
            // The dataset's native form already is CSV; text and csv agree.
            Format::Text | Format::Csv => {
                emit_measurement_csv(&records, &provenance_comments(&model, self.seed))
            }
            Format::Json => to_json(&SynthReport {
                command: "synth",
                frequency_ghz: band.ghz(),
                ple: self.ple,
                sigma_db: self.sigma,
                seed: self.seed,
                sampler: SHADOWING_SAMPLER_ID,
                records: records
                    .into_iter()
                    .map(|r| RecordOut {
                        frequency_ghz: r.frequency_ghz,
                        environment: r.environment,
                        scenario: r.scenario.to_string(),
                        tx_height_m: r.tx_height_m,
                        rx_height_m: r.rx_height_m,
                        distance_m: r.distance_m,
                        path_loss_db: r.path_loss_db,
                    })
                    .collect(),
            }),
        })
    }
}

// ======================================================================
// plot-data
// ======================================================================

#[derive(Args)]
struct PlotDataArgs {
    /// Figure number, 1 through 7
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7))]
    figure: u8,

    /// Log-grid density; at least 2 points per decade
    #[arg(long, default_value_t = 50)]
    points_per_decade: u32,
}

#[derive(Serialize)]
struct PlotCurveOut {
    label: String,
    losses_db: Vec<f64>,
}

#[derive(Serialize)]
struct PlotReport {
    command: &'static str,
    figure: u8,
    title: String,
    distances_m: Vec<f64>,
    curves: Vec<PlotCurveOut>,
}

impl PlotDataArgs {
    fn run(self, format: Format) -> Result<String, CliError> {
        let data = export_plot_data(self.figure, self.points_per_decade).map_err(usage)?;
        Ok(match format {
            // Plot data is tabular by nature; text and csv agree.
            Format::Text | Format::Csv => data.to_csv(),
            Format::Json => {
                let spec = figure(self.figure).map_err(usage)?;
                to_json(&PlotReport {
                    command: "plot-data",
                    figure: data.figure,
                    title: spec.title.to_string(),
                    distances_m: data.distances_m,
                    curves: data
                        .columns
                        .into_iter()
                        .zip(data.losses_db)
                        .map(|(label, losses_db)| PlotCurveOut { label, losses_db })
                        .collect(),
                })
            }
        })
    }
}

// ======================================================================
// Flag plumbing sanity
// ======================================================================
