//! Domain errors shared across the crate.
//!
//! Every variant names the precondition it guards so that error text can be
//! surfaced verbatim by callers (the CLI relies on this for its diagnostics).

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("carrier frequency must be positive and finite, got {ghz} GHz")]
    NonPositiveFrequency { ghz: f64 },

    #[error(
        "SUI frequency correction requires a carrier of at least 2 GHz, got {ghz} GHz"
    )]
    SuiFrequencyOutOfValidity { ghz: f64 },

    #[error("distance {distance_m} m is below the 1 m close-in reference distance")]
    BelowReferenceDistance { distance_m: f64 },

    #[error("distance must be finite and non-negative, got {distance_m} m")]
    InvalidDistance { distance_m: f64 },

    #[error("TX antenna height must be positive and finite, got {meters} m")]
    NonPositiveTxHeight { meters: f64 },

    #[error("RX antenna height must be positive and finite, got {meters} m")]
    NonPositiveRxHeight { meters: f64 },

    #[error("path loss exponent must be positive and finite, got {value}")]
    NonPositivePle { value: f64 },

    #[error("slope correction factor alpha must be positive and finite, got {value}")]
    NonPositiveAlpha { value: f64 },

    #[error("shadowing sigma must be non-negative and finite, got {db} dB")]
    NegativeSigma { db: f64 },

    #[error("antenna gain must be finite, got {dbi} dBi")]
    NonFiniteGain { dbi: f64 },

    #[error("beam weighting factor A must lie in [0, 1), got {value}")]
    WeightOutOfRange { value: f64 },

    #[error("power set must contain at least one beam")]
    EmptyPowerSet,

    #[error("beam powers must be positive and finite, got {mw} mW")]
    NonPositivePower { mw: f64 },

    #[error("beam index {index} appears more than once in the set")]
    DuplicateBeamIndex { index: u32 },

    #[error("beam count must be at least 1")]
    ZeroBeamCount,

    #[error("requested {requested} beams but the set holds only {available}")]
    InsufficientBeams { requested: usize, available: usize },

    #[error("TX power must be finite, got {dbm} dBm")]
    NonFiniteTxPower { dbm: f64 },

    #[error("fit dataset must contain at least one sample")]
    EmptyDataset,

    #[error("path loss sample must be finite, got {db} dB")]
    NonFinitePathLoss { db: f64 },

    #[error("slope fit is degenerate: {reason}")]
    DegenerateFit { reason: &'static str },

    #[error(
        "weighting factor A is unidentifiable: no samples with n_r >= 2 beyond the 1 m anchor"
    )]
    UnidentifiableWeight,

    #[error("residual list must be non-empty")]
    EmptyResiduals,

    #[error(
        "base model carrier ({base_ghz} GHz) does not match the dataset carrier ({dataset_ghz} GHz)"
    )]
    BandMismatch { dataset_ghz: f64, base_ghz: f64 },

    #[error("target loss {target_db} dB is below the 1 m anchor {anchor_db} dB")]
    TargetBelowAnchor { target_db: f64, anchor_db: f64 },

    #[error(
        "target loss {target_db} dB is not reachable within the {max_distance_m} m solver bracket"
    )]
    TargetBeyondBracket { target_db: f64, max_distance_m: f64 },

    #[error("atmospheric rate must be non-negative and finite, got {db_per_km} dB/km")]
    NegativeAtmosphericRate { db_per_km: f64 },

    #[error("no figure numbered {id}; available figures are 1 through 7")]
    UnknownFigure { id: u8 },

    #[error(
        "plot grids need at least 2 points per decade to resolve a log-distance slope, \
         got {points_per_decade}"
    )]
    InsufficientResolution { points_per_decade: u32 },

    #[error("a distance grid needs at least 2 points, got {count}")]
    InsufficientGridPoints { count: usize },
}
