//! Millimeter-wave propagation modeling toolkit.
//!
//! The crate covers four areas that together support link design in the
//! 28/60/73 GHz bands:
//!
//! * `propagation`: closed-form path loss models: free space (Friis), the
//!   SUI terrain model with frequency and RX-height corrections, the 1 m
//!   close-in (CI) reference model, and slope-corrected ("modified") FS and
//!   SUI variants that all share the same 1 m free-space anchor.
//! * `combining`: coherent and non-coherent multi-beam power combining and
//!   the beam-combining CI (BC-CI) model whose effective path loss exponent
//!   shrinks with the number of combined beams.
//! * `estimation`: the MMSE estimators that produce the model parameters:
//!   CI path loss exponent, slope correction factor alpha, BC-CI weighting
//!   factor A, and shadowing sigma.
//! * `link`: inverse queries: distance for a target loss (with an optional
//!   linear atmospheric absorption term), attenuation-per-decade deltas.
//!
//! `dataset`, `tables`, and `figures` handle measurement CSV ingestion,
//! seeded synthetic data generation, and export of the reference parameter
//! tables and model curves as plain text or CSV.
//!
//! All model evaluations are pure functions; shadowing is an opt-in,
//! seed-deterministic additive dB sample (see [`shadowing`]).

pub mod combining;
pub mod dataset;
pub mod error;
pub mod estimation;
pub mod figures;
pub mod link;
pub mod propagation;
pub mod shadowing;
pub mod tables;
pub mod units;

pub use combining::{
    bc_ci_path_loss, combine, effective_ple, measured_path_loss_from_beams, select_best_beams,
    Beam, BeamSet, BcCiModel, CombiningScheme, EffectivePle,
};
pub use dataset::{
    emit_measurement_csv, generate_ci_dataset, log_spaced_distances, parse_beam_csv,
    parse_measurements, provenance_comments, BeamRecord, DataError, DatasetLabel, DiagnosticKind,
    LineDiagnostic, LocatedBeamSet, MeasurementRecord, ParsedBeams, ParsedMeasurements, Scenario,
    BEAM_CSV_HEADER, MEASUREMENT_CSV_HEADER, SANITY_FLOOR_MARGIN_DB,
};
pub use error::{Error, Result};
pub use estimation::{
    fit_bc_weight, fit_ci_ple, fit_slope_correction, residuals_about, shadowing_sigma, FitDataset,
    FitResult, FitSample,
};
pub use figures::{export_plot_data, figure, log_grid, CurveModel, FigureCurve, FigureSpec, PlotData};
pub use link::{
    atmospheric_loss_db, attenuation_per_decade_delta, bisection_distance, closed_form_distance,
    distance_for_loss, RangeModel, RangeQuery,
};
pub use propagation::{
    ci_path_loss, fs_path_loss, modified_fs_path_loss, modified_sui_path_loss, sui_freq_correction,
    sui_path_loss, sui_ple, sui_rx_height_correction, CiModel, ModifiedModel, SlopeBase,
    SuiContext, TerrainClass, TerrainParams, REFERENCE_DISTANCE_M,
};
pub use shadowing::{shadow_series, ShadowingSampler, ShadowingSpec, SHADOWING_SAMPLER_ID};
pub use tables::{
    export_all_tables, export_tables, ExportedTable, TableCell, TableFlag, TableId, TableRow,
};
pub use units::{dbm_to_mw, fspl_1m, mw_to_dbm, to_db, to_linear, FrequencyBand};
