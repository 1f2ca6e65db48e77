//! Plot data for the seven published model-comparison figures.
//!
//! Each figure is a set of anchored model curves over the distance span the
//! underlying measurements covered. Only model curves are emitted (the
//! close-in fits, the slope-corrected models, and the combined-beam
//! extrapolation); measured scatter points are not part of the models and
//! are not reproduced here. Every curve shares the 1 m free-space anchor of
//! its band, so all curves of a figure coincide at 1 m.

use crate::combining::{bc_ci_path_loss, BcCiModel, CombiningScheme};
use crate::error::{Error, Result};
use crate::propagation::{
    ci_path_loss, modified_fs_path_loss, modified_sui_path_loss, CiModel, ModifiedModel,
    SlopeBase, SuiContext, TerrainClass,
};
use crate::units::FrequencyBand;

/// One plottable model curve.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveModel {
    Ci(CiModel),
    Modified(ModifiedModel),
    BcCi { model: BcCiModel, n_r: u32 },
}

impl CurveModel {
    pub fn band(&self) -> FrequencyBand {
        match self {
            CurveModel::Ci(m) => m.band(),
            CurveModel::Modified(m) => m.band(),
            CurveModel::BcCi { model, .. } => model.band(),
        }
    }

    pub fn path_loss_db(&self, distance_m: f64) -> Result<f64> {
        match self {
            CurveModel::Ci(m) => ci_path_loss(m, distance_m, None),
            CurveModel::Modified(m) => match m.base() {
                SlopeBase::FreeSpace { .. } => modified_fs_path_loss(m, distance_m),
                SlopeBase::Sui(_) => modified_sui_path_loss(m, distance_m),
            },
            CurveModel::BcCi { model, n_r } => bc_ci_path_loss(model, *n_r, distance_m, None),
        }
    }
}

/// A labeled curve within a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureCurve {
    pub label: String,
    pub model: CurveModel,
}

/// The model content of one figure: its curves and the distance span the
/// measurements covered.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub id: u8,
    pub title: &'static str,
    pub span_m: (f64, f64),
    pub curves: Vec<FigureCurve>,
}

fn band(ghz: f64) -> FrequencyBand {
    FrequencyBand::new(ghz).expect("figure carriers are fixed positive constants")
}

fn ci_curve(label: impl Into<String>, ghz: f64, ple: f64, sigma_db: f64) -> FigureCurve {
    let model = CiModel::new(band(ghz), ple, sigma_db).expect("printed parameters are valid");
    FigureCurve { label: label.into(), model: CurveModel::Ci(model) }
}

fn modified_fs_curve(label: impl Into<String>, ghz: f64, alpha: f64) -> FigureCurve {
    let base = SlopeBase::FreeSpace { band: band(ghz), tx_gain_dbi: 0.0, rx_gain_dbi: 0.0 };
    let model = ModifiedModel::new(base, alpha, 0.0).expect("printed parameters are valid");
    FigureCurve { label: label.into(), model: CurveModel::Modified(model) }
}

fn modified_sui_curve(
    label: impl Into<String>,
    ghz: f64,
    tx_height_m: f64,
    rx_height_m: f64,
    alpha: f64,
) -> FigureCurve {
    let ctx = SuiContext::new(band(ghz), TerrainClass::A, tx_height_m, rx_height_m)
        .expect("printed parameters are valid");
    let model =
        ModifiedModel::new(SlopeBase::Sui(ctx), alpha, 0.0).expect("printed parameters are valid");
    FigureCurve { label: label.into(), model: CurveModel::Modified(model) }
}

fn bc_ci_curve(label: impl Into<String>, model: &BcCiModel, n_r: u32) -> FigureCurve {
    FigureCurve { label: label.into(), model: CurveModel::BcCi { model: *model, n_r } }
}

/// Build the model curves of figure `id` (1 through 7).
pub fn figure(id: u8) -> Result<FigureSpec> {
    let spec = match id {
        1 => FigureSpec {
            id,
            title: "60 GHz LOS: close-in fits and slope-corrected free space",
            span_m: (29.0, 129.0),
            curves: vec![
                ci_curve("ci courtyard n=2.2", 60.0, 2.2, 2.0),
                ci_curve("ci in-vehicle n=2.5", 60.0, 2.5, 3.5),
                modified_fs_curve("modified fs courtyard alpha=1.10", 60.0, 1.10),
                modified_fs_curve("modified fs in-vehicle alpha=1.25", 60.0, 1.25),
            ],
        },
        2 => FigureSpec {
            id,
            title: "60 GHz NLOS: close-in fits and slope-corrected terrain model",
            span_m: (29.0, 129.0),
            curves: vec![
                ci_curve("ci courtyard n=3.6", 60.0, 3.6, 9.0),
                ci_curve("ci in-vehicle n=5.4", 60.0, 5.4, 14.8),
                modified_sui_curve("modified sui courtyard alpha=0.277", 60.0, 1.5, 1.5, 0.277),
                modified_sui_curve("modified sui in-vehicle alpha=0.416", 60.0, 1.5, 1.5, 0.416),
            ],
        },
        3 => FigureSpec {
            id,
            title: "73 GHz LOS mobile (rx 2 m): close-in fits and corrected free space",
            span_m: (31.0, 102.0),
            curves: vec![
                ci_curve("ci tx17 n=2.2", 73.0, 2.2, 4.1),
                ci_curve("ci tx7 n=2.3", 73.0, 2.3, 6.9),
                modified_fs_curve("modified fs tx17 alpha=1.1", 73.0, 1.1),
                modified_fs_curve("modified fs tx7 alpha=1.15", 73.0, 1.15),
            ],
        },
        4 => FigureSpec {
            id,
            title: "73 GHz NLOS mobile (rx 2 m): close-in fits and corrected terrain model",
            span_m: (53.0, 187.0),
            curves: vec![
                ci_curve("ci tx17 n=4.4", 73.0, 4.4, 11.7),
                ci_curve("ci tx7 n=4.9", 73.0, 4.9, 11.9),
                modified_sui_curve("modified sui tx17 alpha=0.844", 73.0, 17.0, 2.0, 0.844),
                modified_sui_curve("modified sui tx7 alpha=0.772", 73.0, 7.0, 2.0, 0.772),
            ],
        },
        5 => FigureSpec {
            id,
            title: "73 GHz LOS backhaul (rx 4.06 m): close-in fits and corrected free space",
            span_m: (31.0, 102.0),
            curves: vec![
                ci_curve("ci tx17 n=2.3", 73.0, 2.3, 4.6),
                ci_curve("ci tx7 n=2.4", 73.0, 2.4, 9.1),
                modified_fs_curve("modified fs tx17 alpha=1.15", 73.0, 1.15),
                modified_fs_curve("modified fs tx7 alpha=1.2", 73.0, 1.2),
            ],
        },
        6 => FigureSpec {
            id,
            title: "73 GHz NLOS backhaul (rx 4.06 m): close-in fits and corrected terrain model",
            span_m: (53.0, 187.0),
            curves: vec![
                ci_curve("ci tx17 n=4.5", 73.0, 4.5, 12.6),
                ci_curve("ci tx7 n=4.8", 73.0, 4.8, 12.4),
                modified_sui_curve("modified sui tx17 alpha=0.863", 73.0, 17.0, 4.06, 0.863),
                modified_sui_curve("modified sui tx7 alpha=0.756", 73.0, 7.0, 4.06, 0.756),
            ],
        },
        7 => {
            let cc = BcCiModel::new(
                band(28.0),
                3.812,
                0.0671,
                CombiningScheme::Coherent,
                9.1,
            )
            .expect("printed parameters are valid");
            let mut curves: Vec<FigureCurve> = [1u32, 2, 4, 6, 8, 10]
                .iter()
                .map(|&n_r| bc_ci_curve(format!("bc-ci cc nr={n_r}"), &cc, n_r))
                .collect();
            // Single-beam-count fits from the earlier 28 GHz campaign, for
            // comparison against the 2- and 4-beam extrapolations.
            curves.push(ci_curve("ci reference nr=2 n=3.548", 28.0, 3.548, 9.1));
            curves.push(ci_curve("ci reference nr=4 n=3.307", 28.0, 3.307, 9.2));
            FigureSpec {
                id,
                title: "28 GHz coherent beam combining: effective-exponent extrapolation",
                span_m: (1.0, 1000.0),
                curves,
            }
        }
        _ => return Err(Error::UnknownFigure { id }),
    };
    Ok(spec)
}

/// Log-spaced grid over [min, max] with at least `points_per_decade` points
/// in every decade; both endpoints are included exactly.
pub fn log_grid(min_m: f64, max_m: f64, points_per_decade: u32) -> Result<Vec<f64>> {
    if points_per_decade < 2 {
        return Err(Error::InsufficientResolution { points_per_decade });
    }
    debug_assert!(min_m > 0.0 && max_m > min_m);
    let decades = (max_m / min_m).log10();
    let steps = (decades * f64::from(points_per_decade)).ceil() as usize;
    let mut grid = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let t = decades * i as f64 / steps as f64;
        grid.push(min_m * 10f64.powf(t));
    }
    grid[0] = min_m;
    grid[steps] = max_m;
    Ok(grid)
}

/// Sampled figure curves, ready for CSV emission or plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub figure: u8,
    pub columns: Vec<String>,
    pub distances_m: Vec<f64>,
    /// One loss series per column, parallel to `distances_m`.
    pub losses_db: Vec<Vec<f64>>,
}

impl PlotData {
    /// CSV with a `distance_m` column followed by one column per curve.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("distance_m");
        for c in &self.columns {
            debug_assert!(!c.contains([',', '\n']));
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (i, d) in self.distances_m.iter().enumerate() {
            out.push_str(&format!("{d:.6}"));
            for series in &self.losses_db {
                out.push_str(&format!(",{:.6}", series[i]));
            }
            out.push('\n');
        }
        out
    }
}

/// Sample every curve of figure `id` over its span on a log-spaced grid.
pub fn export_plot_data(id: u8, points_per_decade: u32) -> Result<PlotData> {
    let spec = figure(id)?;
    let grid = log_grid(spec.span_m.0, spec.span_m.1, points_per_decade)?;
    let mut losses = Vec::with_capacity(spec.curves.len());
    for curve in &spec.curves {
        let series: Result<Vec<f64>> =
            grid.iter().map(|&d| curve.model.path_loss_db(d)).collect();
        losses.push(series?);
    }
    Ok(PlotData {
        figure: id,
        columns: spec.curves.iter().map(|c| c.label.clone()).collect(),
        distances_m: grid,
        losses_db: losses,
    })
}
