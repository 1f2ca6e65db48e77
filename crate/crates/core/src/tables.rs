//! Reproduction of the three published parameter tables with every derived
//! cell recomputed from first principles.
//!
//! Measured quantities (CI exponents, shadowing sigmas) are carried verbatim
//! as printed reference values. Derived quantities are recomputed here:
//! slope correction factors as exponent ratios, combined-beam effective
//! exponents from the single-beam exponent and the combining weight, and the
//! sigma deltas as plain differences. A cell is flagged when our
//! recomputation, rounded to the precision the reference printed, does not
//! reproduce the printed digits. The literal comparison the reference
//! quotes (absolute deviation above 0.001) never fires on these tables; the
//! rounding comparison is what actually reproduces the known discrepancy in
//! the combined-beam exponent rows, so that is the rule used.

use crate::combining::{effective_ple, BcCiModel, CombiningScheme};
use crate::propagation::{sui_ple, TerrainClass};
use crate::units::FrequencyBand;

/// Which published table to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableId {
    I,
    II,
    III,
}

impl std::fmt::Display for TableId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TableId::I => write!(f, "I"),
            TableId::II => write!(f, "II"),
            TableId::III => write!(f, "III"),
        }
    }
}

impl std::str::FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(TableId::I),
            "II" | "2" => Ok(TableId::II),
            "III" | "3" => Ok(TableId::III),
            other => Err(format!("unknown table '{other}' (expected I, II, or III)")),
        }
    }
}

/// Raised when a recomputed cell, rounded to the printed precision, does
/// not reproduce the printed digits.
#[derive(Debug, Clone, PartialEq)]
pub struct TableFlag {
    /// Value as printed in the reference table.
    pub printed: f64,
    /// Our full-precision recomputation.
    pub recomputed: f64,
    /// The recomputation rounded to the printed number of decimals.
    pub rounded: f64,
}

/// One table cell. `recomputed` is `None` for measured quantities that can
/// only be quoted, `Some` for quantities this crate can derive.
#[derive(Debug, Clone, PartialEq)]
pub struct TableCell {
    pub column: String,
    pub printed: f64,
    /// Decimal places the reference printed this cell with.
    pub decimals: u8,
    pub recomputed: Option<f64>,
    pub flag: Option<TableFlag>,
}

impl TableCell {
    fn quoted(column: impl Into<String>, printed: f64, decimals: u8) -> Self {
        Self { column: column.into(), printed, decimals, recomputed: None, flag: None }
    }

    fn derived(column: impl Into<String>, printed: f64, decimals: u8, recomputed: f64) -> Self {
        let scale = 10f64.powi(i32::from(decimals));
        let printed_digits = (printed * scale).round() as i64;
        let recomputed_digits = (recomputed * scale).round() as i64;
        let flag = (printed_digits != recomputed_digits).then(|| TableFlag {
            printed,
            recomputed,
            rounded: recomputed_digits as f64 / scale,
        });
        Self { column: column.into(), printed, decimals, recomputed: Some(recomputed), flag }
    }

    /// The value the export shows: the recomputation when one exists,
    /// otherwise the quoted reference value.
    pub fn exported(&self) -> f64 {
        self.recomputed.unwrap_or(self.printed)
    }
}

/// One labeled table row. `section` groups rows that share a sub-header
/// (the combined-beam table has one section per measurement setup).
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub section: &'static str,
    pub label: &'static str,
    pub cells: Vec<TableCell>,
}

/// A fully recomputed table plus text/CSV renderers.
#[derive(Debug, Clone, PartialEq)]
pub struct ExportedTable {
    pub id: TableId,
    pub title: &'static str,
    pub rows: Vec<TableRow>,
}

impl ExportedTable {
    /// All flagged cells as (section, row label, column, flag).
    pub fn flagged_cells(&self) -> Vec<(&str, &str, &str, &TableFlag)> {
        let mut out = Vec::new();
        for row in &self.rows {
            for cell in &row.cells {
                if let Some(flag) = &cell.flag {
                    out.push((row.section, row.label, cell.column.as_str(), flag));
                }
            }
        }
        out
    }

    /// Aligned plain-text rendering. Flagged cells carry a `*` marker and a
    /// footnote listing the printed value they disagree with.
    pub fn to_text(&self) -> String {
        let mut out = format!("Table {}: {}\n", self.id, self.title);
        let mut footnotes: Vec<String> = Vec::new();
        let mut section = "";
        let mut i = 0;
        while i < self.rows.len() {
            if self.rows[i].section != section {
                section = self.rows[i].section;
                if !section.is_empty() {
                    out.push_str("\n== ");
                    out.push_str(section);
                    out.push_str(" ==\n");
                }
            }
            // One grid per run of rows that share a section.
            let run_end = self.rows[i..]
                .iter()
                .position(|r| r.section != section)
                .map_or(self.rows.len(), |p| i + p);
            let run = &self.rows[i..run_end];

            let mut columns: Vec<&str> = Vec::new();
            for row in run {
                for cell in &row.cells {
                    if !columns.contains(&cell.column.as_str()) {
                        columns.push(&cell.column);
                    }
                }
            }
            let mut grid: Vec<Vec<String>> = Vec::new();
            let mut header = vec![String::new()];
            header.extend(columns.iter().map(|c| c.to_string()));
            grid.push(header);
            for row in run {
                let mut line = vec![row.label.to_string()];
                for col in &columns {
                    let text = match row.cells.iter().find(|c| c.column == *col) {
                        None => String::new(),
                        Some(cell) => {
                            let mut text = format!(
                                "{:.*}",
                                usize::from(cell.decimals),
                                cell.exported()
                            );
                            if let Some(flag) = &cell.flag {
                                text.push('*');
                                footnotes.push(format!(
                                    "* {} / {}: recomputed {:.*}, printed {:.*}",
                                    row.label,
                                    col,
                                    usize::from(cell.decimals),
                                    flag.rounded,
                                    usize::from(cell.decimals),
                                    flag.printed
                                ));
                            }
                            text
                        }
                    };
                    line.push(text);
                }
                grid.push(line);
            }
            let widths: Vec<usize> = (0..grid[0].len())
                .map(|c| grid.iter().map(|r| r[c].len()).max().unwrap_or(0))
                .collect();
            for line in &grid {
                let rendered: Vec<String> = line
                    .iter()
                    .enumerate()
                    .map(|(c, v)| format!("{:>width$}", v, width = widths[c]))
                    .collect();
                out.push_str(rendered.join("  ").trim_end());
                out.push('\n');
            }
            i = run_end;
        }
        for note in footnotes {
            out.push_str(&note);
            out.push('\n');
        }
        out
    }

    /// Long-form CSV: one line per cell with both the printed and the
    /// recomputed value (blank when the cell is quoted only).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("table,section,row,column,printed,recomputed,flagged\n");
        for row in &self.rows {
            for cell in &row.cells {
                let recomputed = match cell.recomputed {
                    Some(v) => format!("{v:.6}"),
                    None => String::new(),
                };
                out.push_str(&format!(
                    "{},{},{},{},{:.*},{},{}\n",
                    self.id,
                    row.section,
                    row.label,
                    cell.column,
                    usize::from(cell.decimals),
                    cell.printed,
                    recomputed,
                    cell.flag.is_some()
                ));
            }
        }
        out
    }
}

fn band(ghz: f64) -> FrequencyBand {
    FrequencyBand::new(ghz).expect("table carriers are fixed positive constants")
}

fn quoted_row(
    section: &'static str,
    label: &'static str,
    columns: &[&str],
    printed: &[f64],
    decimals: u8,
) -> TableRow {
    let cells = columns
        .iter()
        .zip(printed)
        .map(|(c, &p)| TableCell::quoted(*c, p, decimals))
        .collect();
    TableRow { section, label, cells }
}

/// A slope-correction row: printed alpha against the ratio of the measured
/// exponent to the base model exponent.
fn alpha_row(
    section: &'static str,
    label: &'static str,
    entries: &[(&str, f64, u8, f64, f64)],
) -> TableRow {
    let cells = entries
        .iter()
        .map(|&(column, printed, decimals, ci_ple, base_ple)| {
            TableCell::derived(column, printed, decimals, ci_ple / base_ple)
        })
        .collect();
    TableRow { section, label, cells }
}

fn table_one() -> ExportedTable {
    let columns = ["courtyard NLOS", "in-vehicle NLOS", "courtyard LOS", "in-vehicle LOS"];
    let nlos_base =
        |class: TerrainClass| sui_ple(class.params(), 1.5).expect("fixed heights are valid");
    let a = nlos_base(TerrainClass::A);
    let b = nlos_base(TerrainClass::B);
    let c = nlos_base(TerrainClass::C);
    let rows = vec![
        quoted_row("", "measured PLE", &columns, &[3.6, 5.4, 2.2, 2.5], 1),
        quoted_row("", "sigma (dB)", &columns, &[9.0, 14.8, 2.0, 3.5], 1),
        alpha_row(
            "",
            "alpha (terrain A)",
            &[
                (columns[0], 0.277, 3, 3.6, a),
                (columns[1], 0.416, 3, 5.4, a),
                (columns[2], 1.10, 2, 2.2, 2.0),
                (columns[3], 1.25, 2, 2.5, 2.0),
            ],
        ),
        alpha_row(
            "",
            "alpha (terrain B)",
            &[(columns[0], 0.234, 3, 3.6, b), (columns[1], 0.351, 3, 5.4, b)],
        ),
        alpha_row(
            "",
            "alpha (terrain C)",
            &[(columns[0], 0.213, 3, 3.6, c), (columns[1], 0.319, 3, 5.4, c)],
        ),
    ];
    ExportedTable {
        id: TableId::I,
        title: "slope correction factors at 60 GHz, TX/RX heights 1.5 m, \
                29 m to 129 m",
        rows,
    }
}

fn table_two() -> ExportedTable {
    let columns = [
        "NLOS tx17 rx2",
        "NLOS tx7 rx2",
        "NLOS tx17 rx4.06",
        "NLOS tx7 rx4.06",
        "LOS tx17 rx2",
        "LOS tx7 rx2",
        "LOS tx17 rx4.06",
        "LOS tx7 rx4.06",
    ];
    let base =
        |class: TerrainClass, h| sui_ple(class.params(), h).expect("fixed heights are valid");
    let a17 = base(TerrainClass::A, 17.0);
    let a7 = base(TerrainClass::A, 7.0);
    let b17 = base(TerrainClass::B, 17.0);
    let b7 = base(TerrainClass::B, 7.0);
    let rows = vec![
        quoted_row(
            "",
            "measured PLE",
            &columns,
            &[4.4, 4.9, 4.5, 4.8, 2.2, 2.3, 2.3, 2.4],
            1,
        ),
        quoted_row(
            "",
            "sigma (dB)",
            &columns,
            &[11.7, 11.9, 12.6, 12.4, 4.1, 6.9, 4.6, 9.1],
            1,
        ),
        alpha_row(
            "",
            "alpha (terrain A)",
            &[
                (columns[0], 0.844, 3, 4.4, a17),
                (columns[1], 0.772, 3, 4.9, a7),
                (columns[2], 0.863, 3, 4.5, a17),
                (columns[3], 0.756, 3, 4.8, a7),
            ],
        ),
        alpha_row(
            "",
            "alpha (terrain B)",
            &[
                (columns[0], 0.899, 3, 4.4, b17),
                (columns[1], 0.766, 3, 4.9, b7),
                (columns[2], 0.919, 3, 4.5, b17),
                (columns[3], 0.75, 2, 4.8, b7),
            ],
        ),
        alpha_row(
            "",
            "alpha (free space)",
            &[
                (columns[4], 1.1, 1, 2.2, 2.0),
                (columns[5], 1.15, 2, 2.3, 2.0),
                (columns[6], 1.15, 2, 2.3, 2.0),
                (columns[7], 1.2, 1, 2.4, 2.0),
            ],
        ),
    ];
    ExportedTable {
        id: TableId::II,
        title: "slope correction factors at 73 GHz, TX heights 7 m and 17 m, \
                RX heights 2 m and 4.06 m",
        rows,
    }
}

struct BeamBlock {
    section: &'static str,
    ghz: f64,
    /// (A weight, effective-PLE row, reference PLE row, sigma row,
    /// reference sigma row) per scheme, CC first.
    a: [f64; 2],
    eff: [[f64; 4]; 2],
    reference: [[f64; 4]; 2],
    sigma: [[f64; 4]; 2],
    sigma_reference: [[f64; 4]; 2],
}

const BEAM_COUNTS: [u32; 4] = [1, 2, 3, 4];

fn beam_block_rows(block: &BeamBlock) -> Vec<TableRow> {
    let schemes = [CombiningScheme::Coherent, CombiningScheme::NonCoherent];
    let column = |scheme: CombiningScheme, n_r: u32| format!("{scheme} Nr={n_r}");

    let mut a_cells = Vec::new();
    let mut eff_cells = Vec::new();
    let mut reference_cells = Vec::new();
    let mut sigma_cells = Vec::new();
    let mut sigma_reference_cells = Vec::new();
    let mut delta_cells = Vec::new();
    for (s, &scheme) in schemes.iter().enumerate() {
        a_cells.push(TableCell::quoted(format!("{scheme}"), block.a[s], 4));
        let n_single = block.reference[s][0];
        let model = BcCiModel::new(band(block.ghz), n_single, block.a[s], scheme, block.sigma[s][0])
            .expect("printed block parameters are valid");
        for (i, &n_r) in BEAM_COUNTS.iter().enumerate() {
            let recomputed = effective_ple(&model, n_r)
                .expect("beam counts are positive")
                .value;
            eff_cells.push(TableCell::derived(
                column(scheme, n_r),
                block.eff[s][i],
                3,
                recomputed,
            ));
            reference_cells.push(TableCell::quoted(
                column(scheme, n_r),
                block.reference[s][i],
                3,
            ));
            sigma_cells.push(TableCell::quoted(column(scheme, n_r), block.sigma[s][i], 1));
            sigma_reference_cells.push(TableCell::quoted(
                column(scheme, n_r),
                block.sigma_reference[s][i],
                1,
            ));
            delta_cells.push(TableCell::derived(
                column(scheme, n_r),
                0.0,
                1,
                block.sigma_reference[s][i] - block.sigma[s][i],
            ));
        }
    }
    let row = |label, cells| TableRow { section: block.section, label, cells };
    vec![
        row("A weight", a_cells),
        row("effective PLE", eff_cells),
        row("reference PLE", reference_cells),
        row("sigma (dB)", sigma_cells),
        row("reference sigma (dB)", sigma_reference_cells),
        row("delta sigma (dB)", delta_cells),
    ]
}

fn table_three() -> ExportedTable {
    let blocks = [
        BeamBlock {
            section: "28 GHz (rx 1.5 m)",
            ghz: 28.0,
            a: [0.0671, 0.0297],
            eff: [[3.812, 3.557, 3.407, 3.301], [3.812, 3.699, 3.633, 3.586]],
            reference: [[3.812, 3.548, 3.406, 3.307], [3.812, 3.692, 3.631, 3.591]],
            sigma: [[9.1, 9.1, 9.2, 9.2], [9.1, 9.2, 9.2, 9.2]],
            sigma_reference: [[9.1, 9.1, 9.2, 9.2], [9.1, 9.2, 9.2, 9.2]],
        },
        BeamBlock {
            section: "73 GHz mobile (rx 2 m)",
            ghz: 73.0,
            a: [0.0673, 0.0284],
            eff: [[3.728, 3.477, 3.330, 3.226], [3.728, 3.622, 3.560, 3.516]],
            reference: [[3.728, 3.466, 3.327, 3.235], [3.728, 3.613, 3.557, 3.523]],
            sigma: [[7.6, 7.3, 7.2, 7.2], [7.6, 7.4, 7.3, 7.3]],
            sigma_reference: [[7.6, 7.3, 7.2, 7.2], [7.6, 7.4, 7.3, 7.3]],
        },
        BeamBlock {
            section: "73 GHz backhaul (rx 4.06 m)",
            ghz: 73.0,
            a: [0.0621, 0.0256],
            eff: [[3.823, 3.586, 3.447, 3.348], [3.823, 3.726, 3.668, 3.628]],
            reference: [[3.823, 3.578, 3.446, 3.353], [3.823, 3.718, 3.667, 3.632]],
            sigma: [[8.9, 8.5, 8.1, 7.8], [8.9, 8.6, 8.3, 8.1]],
            sigma_reference: [[8.9, 8.5, 8.1, 7.8], [8.9, 8.6, 8.3, 8.1]],
        },
    ];
    let rows = blocks.iter().flat_map(beam_block_rows).collect();
    ExportedTable {
        id: TableId::III,
        title: "beam-combining model parameters at 28 GHz and 73 GHz, \
                coherent and non-coherent schemes",
        rows,
    }
}

/// Reproduce one published table with all derived cells recomputed.
pub fn export_tables(id: TableId) -> ExportedTable {
    match id {
        TableId::I => table_one(),
        TableId::II => table_two(),
        TableId::III => table_three(),
    }
}

/// Convenience: all three tables in order.
pub fn export_all_tables() -> Vec<ExportedTable> {
    vec![export_tables(TableId::I), export_tables(TableId::II), export_tables(TableId::III)]
}
