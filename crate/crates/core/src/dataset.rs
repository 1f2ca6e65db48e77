//! Measurement and beam record CSV ingestion, seeded synthetic dataset
//! generation, and CSV emission.
//!
//! The formats are plain UTF-8 CSV with LF line endings, a fixed header
//! row, '.' as the decimal separator regardless of locale, and '#' comment
//! lines. Fields are not quoted, so free-text fields (environment,
//! location_id) must not contain commas, newlines, or a leading '#'.
//!
//! Parsing never aborts on a single bad row: every reject or suspicious
//! value is reported as a per-line diagnostic and the remaining rows are
//! still ingested. Only a missing/wrong header or an input whose data rows
//! all fail to parse is fatal.

use std::collections::HashMap;

use thiserror::Error as ThisError;

use crate::combining::{Beam, BeamSet};
use crate::error::{Error, Result};
use crate::estimation::{FitDataset, FitSample};
use crate::propagation::{check_distance, ci_path_loss, CiModel};
use crate::shadowing::{ShadowingSpec, SHADOWING_SAMPLER_ID};
use crate::units::FrequencyBand;

/// Column order of measurement CSV files.
pub const MEASUREMENT_CSV_HEADER: &str =
    "frequency_ghz,environment,scenario,tx_height_m,rx_height_m,distance_m,path_loss_db";

/// Column order of beam CSV files.
pub const BEAM_CSV_HEADER: &str = "location_id,frequency_ghz,environment,scenario,tx_height_m,\
                                   rx_height_m,distance_m,beam_index,received_power_mw,\
                                   tx_power_dbm,tx_gain_dbi,rx_gain_dbi";

/// Path loss values more than this far below the 1 m free-space anchor are
/// flagged as physically implausible (but still ingested).
pub const SANITY_FLOOR_MARGIN_DB: f64 = 6.0;

/// Line-of-sight condition of a measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Los,
    Nlos,
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scenario::Los => write!(f, "LOS"),
            Scenario::Nlos => write!(f, "NLOS"),
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "LOS" => Ok(Scenario::Los),
            "NLOS" => Ok(Scenario::Nlos),
            other => Err(format!("unknown scenario '{other}' (expected LOS or NLOS)")),
        }
    }
}

/// One path loss measurement at a location.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub frequency_ghz: f64,
    pub environment: String,
    pub scenario: Scenario,
    pub tx_height_m: f64,
    pub rx_height_m: f64,
    pub distance_m: f64,
    pub path_loss_db: f64,
}

impl MeasurementRecord {
    pub fn fit_sample(&self) -> FitSample {
        FitSample::new(self.distance_m, self.path_loss_db)
    }
}

/// One received beam power at a location, with the link budget context
/// needed to convert combined powers back to path loss.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamRecord {
    pub location_id: String,
    pub frequency_ghz: f64,
    pub environment: String,
    pub scenario: Scenario,
    pub tx_height_m: f64,
    pub rx_height_m: f64,
    pub distance_m: f64,
    pub beam_index: u32,
    pub received_power_mw: f64,
    pub tx_power_dbm: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
}

/// Why a parsed line was rejected or kept-but-flagged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// The row was dropped.
    Reject,
    /// The row was ingested but looks physically suspect.
    Flag,
}

/// Per-line parse diagnostic; `line` is 1-based within the input.
#[derive(Debug, Clone, PartialEq)]
pub struct LineDiagnostic {
    pub line: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

/// Fatal, file-level ingestion failures. Row-level problems are reported
/// as [`LineDiagnostic`]s instead.
#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum DataError {
    #[error("missing header row; expected '{expected}'")]
    MissingHeader { expected: &'static str },
    #[error("header mismatch: expected '{expected}', found '{found}'")]
    HeaderMismatch { expected: &'static str, found: String },
    #[error("none of the data rows could be parsed")]
    NoParseableRecords,
    #[error("location '{location_id}' has inconsistent {field} values across its beam rows")]
    InconsistentLocation { location_id: String, field: &'static str },
    #[error("location '{location_id}' does not form a valid beam set: {source}")]
    InvalidBeamSet { location_id: String, source: Error },
}

/// Measurement ingestion result: the surviving records plus diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedMeasurements {
    pub records: Vec<MeasurementRecord>,
    pub diagnostics: Vec<LineDiagnostic>,
}

impl ParsedMeasurements {
    /// The records as a fit dataset. All rows must share one carrier.
    pub fn fit_dataset(&self) -> Result<FitDataset> {
        let first = self.records.first().ok_or(Error::EmptyDataset)?;
        let band = FrequencyBand::new(first.frequency_ghz)?;
        for r in &self.records {
            if r.frequency_ghz != first.frequency_ghz {
                return Err(Error::BandMismatch {
                    dataset_ghz: first.frequency_ghz,
                    base_ghz: r.frequency_ghz,
                });
            }
        }
        FitDataset::new(band, self.records.iter().map(MeasurementRecord::fit_sample).collect())
    }
}

/// Beam ingestion result: the surviving records plus diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedBeams {
    pub records: Vec<BeamRecord>,
    pub diagnostics: Vec<LineDiagnostic>,
}

/// A location's beam set together with its link budget context.
#[derive(Debug, Clone, PartialEq)]
pub struct LocatedBeamSet {
    pub set: BeamSet,
    pub frequency_ghz: f64,
    pub scenario: Scenario,
    pub tx_power_dbm: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
}

impl ParsedBeams {
    /// Group records into per-location beam sets, in first-appearance
    /// order. Link-budget columns must be constant within a location.
    pub fn beam_sets(&self) -> std::result::Result<Vec<LocatedBeamSet>, DataError> {
        let mut order: Vec<&str> = Vec::new();
        let mut groups: HashMap<&str, Vec<&BeamRecord>> = HashMap::new();
        for r in &self.records {
            let slot = groups.entry(r.location_id.as_str()).or_default();
            if slot.is_empty() {
                order.push(r.location_id.as_str());
            }
            slot.push(r);
        }
        let mut sets = Vec::with_capacity(order.len());
        for loc in order {
            let rows = &groups[loc];
            let head = rows[0];
            for (field, differs) in [
                ("frequency_ghz", rows.iter().any(|r| r.frequency_ghz != head.frequency_ghz)),
                ("distance_m", rows.iter().any(|r| r.distance_m != head.distance_m)),
                ("tx_power_dbm", rows.iter().any(|r| r.tx_power_dbm != head.tx_power_dbm)),
                ("tx_gain_dbi", rows.iter().any(|r| r.tx_gain_dbi != head.tx_gain_dbi)),
                ("rx_gain_dbi", rows.iter().any(|r| r.rx_gain_dbi != head.rx_gain_dbi)),
            ] {
                if differs {
                    return Err(DataError::InconsistentLocation {
                        location_id: loc.to_string(),
                        field,
                    });
                }
            }
            let beams = rows
                .iter()
                .map(|r| Beam { index: r.beam_index, power_mw: r.received_power_mw })
                .collect();
            let set = BeamSet::new(loc, head.distance_m, beams).map_err(|source| {
                DataError::InvalidBeamSet { location_id: loc.to_string(), source }
            })?;
            sets.push(LocatedBeamSet {
                set,
                frequency_ghz: head.frequency_ghz,
                scenario: head.scenario,
                tx_power_dbm: head.tx_power_dbm,
                tx_gain_dbi: head.tx_gain_dbi,
                rx_gain_dbi: head.rx_gain_dbi,
            });
        }
        Ok(sets)
    }
}

/// Provenance metadata for synthetic datasets: which generator labeled the
/// rows and how to regenerate them.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetLabel {
    pub environment: String,
    pub scenario: Scenario,
    pub tx_height_m: f64,
    pub rx_height_m: f64,
}

impl Default for DatasetLabel {
    fn default() -> Self {
        Self {
            environment: "synthetic".to_string(),
            scenario: Scenario::Nlos,
            tx_height_m: 1.5,
            rx_height_m: 1.5,
        }
    }
}

fn significant_lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

fn check_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    expected: &'static str,
) -> std::result::Result<(), DataError> {
    match lines.next() {
        None => Err(DataError::MissingHeader { expected }),
        Some((_, line)) if line.trim() == expected => Ok(()),
        Some((_, line)) => {
            Err(DataError::HeaderMismatch { expected, found: line.trim().to_string() })
        }
    }
}

fn field<'a>(parts: &[&'a str], idx: usize) -> &'a str {
    parts[idx].trim()
}

fn parse_num(parts: &[&str], idx: usize, name: &str) -> std::result::Result<f64, String> {
    let raw = field(parts, idx);
    raw.parse::<f64>().map_err(|_| format!("{name} '{raw}' is not a number"))
}

fn parse_finite(parts: &[&str], idx: usize, name: &str) -> std::result::Result<f64, String> {
    let v = parse_num(parts, idx, name)?;
    if !v.is_finite() {
        return Err(format!("{name} must be finite, got {v}"));
    }
    Ok(v)
}

fn parse_measurement_row(
    parts: &[&str],
) -> std::result::Result<(MeasurementRecord, Option<String>), String> {
    if parts.len() != 7 {
        return Err(format!("expected 7 fields, found {}", parts.len()));
    }
    let frequency_ghz = parse_finite(parts, 0, "frequency_ghz")?;
    if frequency_ghz <= 0.0 {
        return Err(format!("frequency_ghz must be positive, got {frequency_ghz}"));
    }
    let environment = field(parts, 1).to_string();
    let scenario: Scenario = field(parts, 2).parse()?;
    let tx_height_m = parse_finite(parts, 3, "tx_height_m")?;
    let rx_height_m = parse_finite(parts, 4, "rx_height_m")?;
    if tx_height_m <= 0.0 || rx_height_m <= 0.0 {
        return Err("antenna heights must be positive".to_string());
    }
    let distance_m = parse_finite(parts, 5, "distance_m")?;
    if distance_m < 1.0 {
        return Err(format!(
            "distance_m {distance_m} is below the 1 m reference distance"
        ));
    }
    let path_loss_db = parse_finite(parts, 6, "path_loss_db")?;

    let floor = FrequencyBand::new(frequency_ghz)
        .expect("positive frequency checked above")
        .fspl_1m_db()
        - SANITY_FLOOR_MARGIN_DB;
    let flag = (path_loss_db < floor).then(|| {
        format!(
            "path_loss_db {path_loss_db:.3} is more than {SANITY_FLOOR_MARGIN_DB} dB below \
             the 1 m free-space anchor ({floor:.3} dB floor)"
        )
    });
    Ok((
        MeasurementRecord {
            frequency_ghz,
            environment,
            scenario,
            tx_height_m,
            rx_height_m,
            distance_m,
            path_loss_db,
        },
        flag,
    ))
}

/// Parse measurement CSV text. Returns all parseable records plus per-line
/// diagnostics; fails only on header problems or when data rows exist but
/// none parse.
pub fn parse_measurements(
    input: &str,
) -> std::result::Result<ParsedMeasurements, DataError> {
    let mut lines = significant_lines(input);
    check_header(&mut lines, MEASUREMENT_CSV_HEADER)?;
    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    let mut attempted = 0usize;
    for (line, text) in lines {
        attempted += 1;
        let parts: Vec<&str> = text.split(',').collect();
        match parse_measurement_row(&parts) {
            Ok((record, flag)) => {
                if let Some(message) = flag {
                    diagnostics.push(LineDiagnostic {
                        line,
                        kind: DiagnosticKind::Flag,
                        message,
                    });
                }
                records.push(record);
            }
            Err(message) => {
                diagnostics.push(LineDiagnostic { line, kind: DiagnosticKind::Reject, message });
            }
        }
    }
    if attempted > 0 && records.is_empty() {
        return Err(DataError::NoParseableRecords);
    }
    Ok(ParsedMeasurements { records, diagnostics })
}

fn parse_beam_row(parts: &[&str]) -> std::result::Result<BeamRecord, String> {
    if parts.len() != 12 {
        return Err(format!("expected 12 fields, found {}", parts.len()));
    }
    let location_id = field(parts, 0).to_string();
    if location_id.is_empty() {
        return Err("location_id must be non-empty".to_string());
    }
    let frequency_ghz = parse_finite(parts, 1, "frequency_ghz")?;
    if frequency_ghz <= 0.0 {
        return Err(format!("frequency_ghz must be positive, got {frequency_ghz}"));
    }
    let environment = field(parts, 2).to_string();
    let scenario: Scenario = field(parts, 3).parse()?;
    let tx_height_m = parse_finite(parts, 4, "tx_height_m")?;
    let rx_height_m = parse_finite(parts, 5, "rx_height_m")?;
    if tx_height_m <= 0.0 || rx_height_m <= 0.0 {
        return Err("antenna heights must be positive".to_string());
    }
    let distance_m = parse_finite(parts, 6, "distance_m")?;
    if distance_m < 1.0 {
        return Err(format!("distance_m {distance_m} is below the 1 m reference distance"));
    }
    let beam_index_raw = field(parts, 7);
    let beam_index: u32 = beam_index_raw
        .parse()
        .map_err(|_| format!("beam_index '{beam_index_raw}' is not a non-negative integer"))?;
    let received_power_mw = parse_finite(parts, 8, "received_power_mw")?;
    if received_power_mw <= 0.0 {
        return Err(format!("received_power_mw must be positive, got {received_power_mw}"));
    }
    let tx_power_dbm = parse_finite(parts, 9, "tx_power_dbm")?;
    let tx_gain_dbi = parse_finite(parts, 10, "tx_gain_dbi")?;
    let rx_gain_dbi = parse_finite(parts, 11, "rx_gain_dbi")?;
    Ok(BeamRecord {
        location_id,
        frequency_ghz,
        environment,
        scenario,
        tx_height_m,
        rx_height_m,
        distance_m,
        beam_index,
        received_power_mw,
        tx_power_dbm,
        tx_gain_dbi,
        rx_gain_dbi,
    })
}

/// Parse beam CSV text. Same failure contract as [`parse_measurements`];
/// additionally rejects rows that repeat a (location_id, beam_index) pair.
pub fn parse_beam_csv(input: &str) -> std::result::Result<ParsedBeams, DataError> {
    let mut lines = significant_lines(input);
    check_header(&mut lines, BEAM_CSV_HEADER)?;
    let mut records: Vec<BeamRecord> = Vec::new();
    let mut seen: HashMap<(String, u32), usize> = HashMap::new();
    let mut diagnostics = Vec::new();
    let mut attempted = 0usize;
    for (line, text) in lines {
        attempted += 1;
        let parts: Vec<&str> = text.split(',').collect();
        match parse_beam_row(&parts) {
            Ok(record) => {
                let key = (record.location_id.clone(), record.beam_index);
                if let Some(first_line) = seen.get(&key) {
                    diagnostics.push(LineDiagnostic {
                        line,
                        kind: DiagnosticKind::Reject,
                        message: format!(
                            "duplicate beam_index {} for location '{}' (first seen on line {})",
                            record.beam_index, record.location_id, first_line
                        ),
                    });
                    continue;
                }
                seen.insert(key, line);
                records.push(record);
            }
            Err(message) => {
                diagnostics.push(LineDiagnostic { line, kind: DiagnosticKind::Reject, message });
            }
        }
    }
    if attempted > 0 && records.is_empty() {
        return Err(DataError::NoParseableRecords);
    }
    Ok(ParsedBeams { records, diagnostics })
}

/// `count` log-spaced distances from `min_m` to `max_m` inclusive, the
/// standard grid for synthetic datasets over a published measurement span.
pub fn log_spaced_distances(min_m: f64, max_m: f64, count: usize) -> Result<Vec<f64>> {
    check_distance(min_m)?;
    if !max_m.is_finite() || max_m <= min_m {
        return Err(Error::InvalidDistance { distance_m: max_m });
    }
    if count < 2 {
        return Err(Error::InsufficientGridPoints { count });
    }
    let ratio = max_m / min_m;
    let mut grid: Vec<f64> =
        (0..count).map(|i| min_m * ratio.powf(i as f64 / (count - 1) as f64)).collect();
    grid[0] = min_m;
    grid[count - 1] = max_m;
    Ok(grid)
}

/// Synthesize one record per distance from a CI model, adding one seeded
/// shadowing sample per record. With sigma = 0 every record lies exactly on
/// the model curve; identical (model, distances, seed, label) inputs yield
/// identical records.
pub fn generate_ci_dataset(
    model: &CiModel,
    distances: &[f64],
    seed: u64,
    label: &DatasetLabel,
) -> Result<Vec<MeasurementRecord>> {
    for &d in distances {
        check_distance(d)?;
    }
    let mut sampler = ShadowingSpec::new(model.sigma_db(), seed)?.sampler();
    let mut records = Vec::with_capacity(distances.len());
    for &d in distances {
        let path_loss_db = ci_path_loss(model, d, None)? + sampler.next_db();
        records.push(MeasurementRecord {
            frequency_ghz: model.band().ghz(),
            environment: label.environment.clone(),
            scenario: label.scenario,
            tx_height_m: label.tx_height_m,
            rx_height_m: label.rx_height_m,
            distance_m: d,
            path_loss_db,
        });
    }
    Ok(records)
}

/// Standard '#' header comments recording how a synthetic dataset was made,
/// including the versioned shadowing sampler identifier.
pub fn provenance_comments(model: &CiModel, seed: u64) -> Vec<String> {
    vec![
        "synthetic dataset generated from a close-in reference model".to_string(),
        format!(
            "frequency_ghz={} ple={} sigma_db={} seed={} sampler={}",
            model.band().ghz(),
            model.ple(),
            model.sigma_db(),
            seed,
            SHADOWING_SAMPLER_ID
        ),
    ]
}

/// Render records as measurement CSV: optional '#' comments, the fixed
/// header, then one row per record with numerics at 6 decimal places.
pub fn emit_measurement_csv(records: &[MeasurementRecord], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        debug_assert!(!c.contains('\n'));
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(MEASUREMENT_CSV_HEADER);
    out.push('\n');
    for r in records {
        debug_assert!(!r.environment.contains([',', '\n']) && !r.environment.starts_with('#'));
        out.push_str(&format!(
            "{:.6},{},{},{:.6},{:.6},{:.6},{:.6}\n",
            r.frequency_ghz,
            r.environment,
            r.scenario,
            r.tx_height_m,
            r.rx_height_m,
            r.distance_m,
            r.path_loss_db
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn band(ghz: f64) -> FrequencyBand {
        FrequencyBand::new(ghz).unwrap()
    }

    #[test]
    fn header_only_file_is_empty_and_clean() {
        let parsed = parse_measurements(&format!("{MEASUREMENT_CSV_HEADER}\n")).unwrap();
        assert!(parsed.records.is_empty());
        assert!(parsed.diagnostics.is_empty());
        // Comments and blank lines around the header are fine too.
        let parsed =
            parse_measurements(&format!("# hi\n\n{MEASUREMENT_CSV_HEADER}\n\n# bye\n")).unwrap();
        assert!(parsed.records.is_empty() && parsed.diagnostics.is_empty());
    }

    #[test]
    fn well_formed_row_round_trips() {
        let input = format!("{MEASUREMENT_CSV_HEADER}\n73,urban,NLOS,17,2,100,157.7\n");
        let parsed = parse_measurements(&input).unwrap();
        assert_eq!(parsed.records.len(), 1);
        assert!(parsed.diagnostics.is_empty());
        let r = &parsed.records[0];
        assert_eq!(r.frequency_ghz, 73.0);
        assert_eq!(r.environment, "urban");
        assert_eq!(r.scenario, Scenario::Nlos);
        assert_eq!(r.tx_height_m, 17.0);
        assert_eq!(r.rx_height_m, 2.0);
        assert_eq!(r.distance_m, 100.0);
        assert_eq!(r.path_loss_db, 157.7);
    }

    #[test]
    fn bad_rows_are_rejected_without_aborting() {
        let input = format!(
            "{MEASUREMENT_CSV_HEADER}\n\
             73,urban,NLOS,17,2,0.5,157.7\n\
             73,urban,NLOS,17,2,50,150.1\n\
             73,urban,SORTA,17,2,60,151.0\n\
             73,urban,NLOS,17,2,70\n\
             -5,urban,NLOS,17,2,70,150\n"
        );
        let parsed = parse_measurements(&input).unwrap();
        assert_eq!(parsed.records.len(), 1);
        assert_eq!(parsed.records[0].distance_m, 50.0);
        assert_eq!(parsed.diagnostics.len(), 4);
        assert!(parsed.diagnostics.iter().all(|d| d.kind == DiagnosticKind::Reject));
        assert_eq!(parsed.diagnostics[0].line, 2);
        assert!(parsed.diagnostics[0].message.contains("reference distance"));
        assert!(parsed.diagnostics[1].message.contains("SORTA"));
        assert!(parsed.diagnostics[2].message.contains("7 fields"));
        assert!(parsed.diagnostics[3].message.contains("positive"));
    }

    #[test]
    fn implausibly_low_loss_is_flagged_not_rejected() {
        // 73 GHz anchor is 69.666 dB; the floor sits 6 dB under it.
        let input = format!(
            "{MEASUREMENT_CSV_HEADER}\n\
             73,urban,LOS,17,2,10,60.0\n\
             73,urban,LOS,17,2,10,63.7\n"
        );
        let parsed = parse_measurements(&input).unwrap();
        assert_eq!(parsed.records.len(), 2);
        assert_eq!(parsed.diagnostics.len(), 1);
        assert_eq!(parsed.diagnostics[0].kind, DiagnosticKind::Flag);
        assert_eq!(parsed.diagnostics[0].line, 2);
        assert!(parsed.diagnostics[0].message.contains("anchor"));
    }

    #[test]
    fn fatal_format_errors() {
        assert_eq!(
            parse_measurements(""),
            Err(DataError::MissingHeader { expected: MEASUREMENT_CSV_HEADER })
        );
        assert!(matches!(
            parse_measurements("a,b,c\n1,2,3\n"),
            Err(DataError::HeaderMismatch { .. })
        ));
        let all_bad = format!("{MEASUREMENT_CSV_HEADER}\nnot,a,row\nnor,this,one\n");
        assert_eq!(parse_measurements(&all_bad), Err(DataError::NoParseableRecords));
    }

    #[test]
    fn emit_parse_round_trip() {
        let model = CiModel::new(band(73.0), 4.4, 9.1).unwrap();
        let label = DatasetLabel {
            environment: "urban-microcell".into(),
            scenario: Scenario::Nlos,
            tx_height_m: 17.0,
            rx_height_m: 2.0,
        };
        let distances: Vec<f64> = (0..40).map(|i| 29.0 + 2.5 * i as f64).collect();
        let records = generate_ci_dataset(&model, &distances, 99, &label).unwrap();
        let csv = emit_measurement_csv(&records, &provenance_comments(&model, 99));
        let parsed = parse_measurements(&csv).unwrap();
        assert_eq!(parsed.records.len(), records.len());
        assert!(parsed.diagnostics.is_empty());
        for (a, b) in records.iter().zip(&parsed.records) {
            assert_eq!(a.environment, b.environment);
            assert_eq!(a.scenario, b.scenario);
            // 6 printed decimals: round trip to within half an ulp of that.
            assert!((a.path_loss_db - b.path_loss_db).abs() <= 5e-7);
            assert!((a.distance_m - b.distance_m).abs() <= 5e-7);
        }
    }

    #[test]
    fn generated_header_documents_sampler_and_seed() {
        let model = CiModel::new(band(28.0), 3.812, 9.1).unwrap();
        let records =
            generate_ci_dataset(&model, &[10.0, 20.0], 7, &DatasetLabel::default()).unwrap();
        let csv = emit_measurement_csv(&records, &provenance_comments(&model, 7));
        assert!(csv.contains(SHADOWING_SAMPLER_ID));
        assert!(csv.contains("seed=7"));
        assert!(csv.starts_with('#'));
    }

    #[test]
    fn zero_sigma_generation_sits_on_the_curve() {
        let model = CiModel::new(band(73.0), 3.6, 0.0).unwrap();
        let records =
            generate_ci_dataset(&model, &[10.0, 100.0], 5, &DatasetLabel::default()).unwrap();
        let anchor = band(73.0).fspl_1m_db();
        assert_eq!(records[0].path_loss_db, anchor + 36.0);
        assert_eq!(records[1].path_loss_db, anchor + 72.0);
    }

    #[test]
    fn generation_is_seed_deterministic() {
        let model = CiModel::new(band(73.0), 3.6, 9.0).unwrap();
        let d: Vec<f64> = (0..50).map(|i| 29.0 + 2.0 * i as f64).collect();
        let a = generate_ci_dataset(&model, &d, 11, &DatasetLabel::default()).unwrap();
        let b = generate_ci_dataset(&model, &d, 11, &DatasetLabel::default()).unwrap();
        let c = generate_ci_dataset(&model, &d, 12, &DatasetLabel::default()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(
            emit_measurement_csv(&a, &provenance_comments(&model, 11)),
            emit_measurement_csv(&b, &provenance_comments(&model, 11))
        );
    }

    #[test]
    fn generated_shadowing_matches_sigma_statistically() {
        let sigma = 9.0;
        let model = CiModel::new(band(73.0), 3.6, sigma).unwrap();
        let distances = vec![100.0; 10_000];
        let records =
            generate_ci_dataset(&model, &distances, 3, &DatasetLabel::default()).unwrap();
        let curve = band(73.0).fspl_1m_db() + 10.0 * 3.6 * 2.0;
        let devs: Vec<f64> = records.iter().map(|r| r.path_loss_db - curve).collect();
        let mean = devs.iter().sum::<f64>() / devs.len() as f64;
        let std = (devs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
            / devs.len() as f64)
            .sqrt();
        assert!((std - sigma).abs() < 0.02 * sigma, "std {std}");
    }

    #[test]
    fn log_grid_spans_endpoints_exactly() {
        let grid = log_spaced_distances(29.0, 129.0, 40).unwrap();
        assert_eq!(grid.len(), 40);
        assert_eq!(grid[0], 29.0);
        assert_eq!(grid[39], 129.0);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(
            log_spaced_distances(29.0, 129.0, 1),
            Err(Error::InsufficientGridPoints { count: 1 })
        ));
        assert!(log_spaced_distances(0.5, 129.0, 10).is_err());
        assert!(log_spaced_distances(50.0, 50.0, 10).is_err());
    }

    #[test]
    fn generation_rejects_bad_distances() {
        let model = CiModel::new(band(73.0), 3.6, 0.0).unwrap();
        assert!(matches!(
            generate_ci_dataset(&model, &[10.0, 0.3], 1, &DatasetLabel::default()),
            Err(Error::BelowReferenceDistance { .. })
        ));
    }

    #[test]
    fn fit_dataset_from_parsed_records() {
        let model = CiModel::new(band(73.0), 4.4, 0.0).unwrap();
        let records =
            generate_ci_dataset(&model, &[31.0, 60.0, 102.0], 1, &DatasetLabel::default())
                .unwrap();
        let parsed = ParsedMeasurements { records, diagnostics: vec![] };
        let data = parsed.fit_dataset().unwrap();
        let fit = crate::estimation::fit_ci_ple(&data).unwrap();
        assert!((fit.value - 4.4).abs() < 1e-12);
    }

    #[test]
    fn beam_csv_round_trip_and_grouping() {
        let input = format!(
            "{BEAM_CSV_HEADER}\n\
             L1,28,urban,NLOS,17,1.5,100,0,4e-9,30,24.5,24.5\n\
             L1,28,urban,NLOS,17,1.5,100,1,1e-9,30,24.5,24.5\n\
             L2,28,urban,NLOS,17,1.5,55,0,9e-9,30,24.5,24.5\n"
        );
        let parsed = parse_beam_csv(&input).unwrap();
        assert_eq!(parsed.records.len(), 3);
        assert!(parsed.diagnostics.is_empty());
        let sets = parsed.beam_sets().unwrap();
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[0].set.location_id(), "L1");
        assert_eq!(sets[0].set.beams().len(), 2);
        assert_eq!(sets[1].set.location_id(), "L2");
        assert_eq!(sets[0].tx_power_dbm, 30.0);
    }

    #[test]
    fn duplicate_beam_rows_are_rejected() {
        let input = format!(
            "{BEAM_CSV_HEADER}\n\
             L1,28,urban,NLOS,17,1.5,100,0,4e-9,30,24.5,24.5\n\
             L1,28,urban,NLOS,17,1.5,100,0,5e-9,30,24.5,24.5\n"
        );
        let parsed = parse_beam_csv(&input).unwrap();
        assert_eq!(parsed.records.len(), 1);
        assert_eq!(parsed.diagnostics.len(), 1);
        assert!(parsed.diagnostics[0].message.contains("duplicate beam_index"));
    }

    #[test]
    fn inconsistent_location_rows_fail_grouping() {
        let input = format!(
            "{BEAM_CSV_HEADER}\n\
             L1,28,urban,NLOS,17,1.5,100,0,4e-9,30,24.5,24.5\n\
             L1,28,urban,NLOS,17,1.5,90,1,1e-9,30,24.5,24.5\n"
        );
        let sets = parse_beam_csv(&input).unwrap().beam_sets();
        assert_eq!(
            sets,
            Err(DataError::InconsistentLocation { location_id: "L1".into(), field: "distance_m" })
        );
    }
}
