//! Closed-form path loss models.
//!
//! All models are anchored at a 1 m close-in reference distance. Distances
//! below 1 m are an error, not a clamp: the reference-distance physics is
//! undefined there and silent clamping hides caller bugs.
//!
//! The free-space anchor used by the SUI, CI, and modified models is the
//! conventional `32.4 + 20 log10(f_GHz)` form (see
//! [`FrequencyBand::fspl_1m_db`]); the Friis evaluation in [`fs_path_loss`]
//! keeps the analytic constant, which differs by 0.042 dB.
//!
//! Shadowing is opt-in: the deterministic model value is returned unless a
//! [`ShadowingSpec`] is supplied, in which case one seed-deterministic
//! zero-mean Gaussian dB sample is added.

use crate::error::{Error, Result};
use crate::shadowing::ShadowingSpec;
use crate::units::FrequencyBand;

/// Close-in reference distance shared by every model, in meters.
pub const REFERENCE_DISTANCE_M: f64 = 1.0;

/// Propagation speed used for wavelength conversion, m/s. The rounded value
/// is what the 32.4-style anchor constant is derived from.
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 3.0e8;

pub(crate) fn check_distance(d: f64) -> Result<()> {
    if !d.is_finite() {
        return Err(Error::InvalidDistance { distance_m: d });
    }
    if d < REFERENCE_DISTANCE_M {
        return Err(Error::BelowReferenceDistance { distance_m: d });
    }
    Ok(())
}

/// `anchor + 10 n log10(d)`, the log-distance form every anchored model
/// reduces to. Kept as the single shared expression so that models meant to
/// coincide (CI and BC-CI at n_r = 1) coincide bitwise.
pub(crate) fn log_distance_db(anchor_db: f64, ple: f64, d: f64) -> f64 {
    anchor_db + 10.0 * ple * d.log10()
}

fn shadow_db(shadow: Option<ShadowingSpec>) -> f64 {
    shadow.map(|s| s.sample_db()).unwrap_or(0.0)
}

// ======================================================================
// Friis free space
// ======================================================================

/// Friis free space path loss in dB: `-10 log10(Gt Gr lambda^2 / (4 pi d)^2)`
/// with gains supplied in dBi. With 0 dBi gains this is isotropic FSPL and
/// tracks `fspl_1m + 20 log10 d` to within the 0.05 dB anchor rounding.
pub fn fs_path_loss(
    band: FrequencyBand,
    d: f64,
    tx_gain_dbi: f64,
    rx_gain_dbi: f64,
) -> Result<f64> {
    check_distance(d)?;
    if !tx_gain_dbi.is_finite() {
        return Err(Error::NonFiniteGain { dbi: tx_gain_dbi });
    }
    if !rx_gain_dbi.is_finite() {
        return Err(Error::NonFiniteGain { dbi: rx_gain_dbi });
    }
    let lambda = SPEED_OF_LIGHT_M_PER_S / band.hz();
    let gt = 10f64.powf(tx_gain_dbi / 10.0);
    let gr = 10f64.powf(rx_gain_dbi / 10.0);
    let ratio = gt * gr * (lambda / (4.0 * std::f64::consts::PI * d)).powi(2);
    Ok(-10.0 * ratio.log10())
}

// ======================================================================
// SUI terrain model
// ======================================================================

/// SUI terrain class. A is hilly with dense vegetation (highest loss),
/// C is mostly flat with light vegetation (lowest loss).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TerrainClass {
    A,
    B,
    C,
}

impl TerrainClass {
    pub fn params(self) -> TerrainParams {
        match self {
            TerrainClass::A => TerrainParams { class: self, a: 4.6, b: 0.0075, c: 12.6 },
            TerrainClass::B => TerrainParams { class: self, a: 4.0, b: 0.0065, c: 17.1 },
            TerrainClass::C => TerrainParams { class: self, a: 3.6, b: 0.005, c: 20.0 },
        }
    }
}

impl std::fmt::Display for TerrainClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TerrainClass::A => write!(f, "A"),
            TerrainClass::B => write!(f, "B"),
            TerrainClass::C => write!(f, "C"),
        }
    }
}

impl std::str::FromStr for TerrainClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(TerrainClass::A),
            "B" => Ok(TerrainClass::B),
            "C" => Ok(TerrainClass::C),
            other => Err(format!("unknown terrain class '{other}' (expected A, B, or C)")),
        }
    }
}

/// SUI terrain constants (a, b, c) for the PLE formula `a - b h_tx + c/h_tx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerrainParams {
    pub class: TerrainClass,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// SUI path loss exponent for a TX height: `a - b h_tx + c / h_tx`.
pub fn sui_ple(terrain: TerrainParams, h_tx_m: f64) -> Result<f64> {
    if !h_tx_m.is_finite() || h_tx_m <= 0.0 {
        return Err(Error::NonPositiveTxHeight { meters: h_tx_m });
    }
    Ok(terrain.a - terrain.b * h_tx_m + terrain.c / h_tx_m)
}

/// SUI frequency correction `6 log10(f_MHz / 2000)` in dB. Valid from 2 GHz
/// up; at exactly 2 GHz the term is zero and is permitted.
pub fn sui_freq_correction(band: FrequencyBand) -> Result<f64> {
    if band.ghz() < 2.0 {
        return Err(Error::SuiFrequencyOutOfValidity { ghz: band.ghz() });
    }
    Ok(6.0 * (band.mhz() / 2000.0).log10())
}

/// SUI RX height correction in dB: `-10.8 log10(h_rx/2)` for terrain A and B,
/// `-20 log10(h_rx/2)` for terrain C.
pub fn sui_rx_height_correction(terrain_class: TerrainClass, h_rx_m: f64) -> Result<f64> {
    if !h_rx_m.is_finite() || h_rx_m <= 0.0 {
        return Err(Error::NonPositiveRxHeight { meters: h_rx_m });
    }
    let k = match terrain_class {
        TerrainClass::A | TerrainClass::B => 10.8,
        TerrainClass::C => 20.0,
    };
    Ok(-k * (h_rx_m / 2.0).log10())
}

/// Fully specified SUI evaluation context. Construction validates the
/// heights and the frequency-correction validity bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiContext {
    band: FrequencyBand,
    terrain: TerrainParams,
    tx_height_m: f64,
    rx_height_m: f64,
}

impl SuiContext {
    pub fn new(
        band: FrequencyBand,
        terrain: TerrainClass,
        tx_height_m: f64,
        rx_height_m: f64,
    ) -> Result<Self> {
        if band.ghz() < 2.0 {
            return Err(Error::SuiFrequencyOutOfValidity { ghz: band.ghz() });
        }
        if !tx_height_m.is_finite() || tx_height_m <= 0.0 {
            return Err(Error::NonPositiveTxHeight { meters: tx_height_m });
        }
        if !rx_height_m.is_finite() || rx_height_m <= 0.0 {
            return Err(Error::NonPositiveRxHeight { meters: rx_height_m });
        }
        Ok(Self { band, terrain: terrain.params(), tx_height_m, rx_height_m })
    }

    pub fn band(&self) -> FrequencyBand {
        self.band
    }

    pub fn terrain(&self) -> TerrainParams {
        self.terrain
    }

    pub fn tx_height_m(&self) -> f64 {
        self.tx_height_m
    }

    pub fn rx_height_m(&self) -> f64 {
        self.rx_height_m
    }

    pub fn ple(&self) -> f64 {
        sui_ple(self.terrain, self.tx_height_m).expect("validated at construction")
    }
}

/// Standard SUI path loss:
/// `fspl_1m + 10 n log10(d) + X_fc + X_rx (+ X_sigma when shadowed)`.
pub fn sui_path_loss(ctx: &SuiContext, d: f64, shadow: Option<ShadowingSpec>) -> Result<f64> {
    check_distance(d)?;
    let slope = log_distance_db(ctx.band.fspl_1m_db(), ctx.ple(), d);
    let x_fc = sui_freq_correction(ctx.band)?;
    let x_rx = sui_rx_height_correction(ctx.terrain.class, ctx.rx_height_m)?;
    Ok(slope + x_fc + x_rx + shadow_db(shadow))
}

// ======================================================================
// Close-in reference model
// ======================================================================

/// Close-in (CI) free space reference distance model: a single fitted slope
/// over the 1 m free-space anchor. The reference distance is fixed at 1 m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CiModel {
    band: FrequencyBand,
    ple: f64,
    sigma_db: f64,
}

impl CiModel {
    pub fn new(band: FrequencyBand, ple: f64, sigma_db: f64) -> Result<Self> {
        if !ple.is_finite() || ple <= 0.0 {
            return Err(Error::NonPositivePle { value: ple });
        }
        if !sigma_db.is_finite() || sigma_db < 0.0 {
            return Err(Error::NegativeSigma { db: sigma_db });
        }
        Ok(Self { band, ple, sigma_db })
    }

    pub fn band(&self) -> FrequencyBand {
        self.band
    }

    pub fn ple(&self) -> f64 {
        self.ple
    }

    pub fn sigma_db(&self) -> f64 {
        self.sigma_db
    }

    /// Deterministic path loss (no shadowing).
    pub fn path_loss_db(&self, d: f64) -> Result<f64> {
        ci_path_loss(self, d, None)
    }
}

/// CI path loss `fspl_1m(band) + 10 n log10(d) (+ X_sigma when shadowed)`.
pub fn ci_path_loss(model: &CiModel, d: f64, shadow: Option<ShadowingSpec>) -> Result<f64> {
    check_distance(d)?;
    Ok(log_distance_db(model.band.fspl_1m_db(), model.ple, d) + shadow_db(shadow))
}

// ======================================================================
// Modified (slope-corrected) models
// ======================================================================

/// Base model whose distance-dependent term a slope correction rescales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlopeBase {
    FreeSpace { band: FrequencyBand, tx_gain_dbi: f64, rx_gain_dbi: f64 },
    Sui(SuiContext),
}

impl SlopeBase {
    pub fn band(&self) -> FrequencyBand {
        match self {
            SlopeBase::FreeSpace { band, .. } => *band,
            SlopeBase::Sui(ctx) => ctx.band(),
        }
    }

    /// Base-model path loss at distance d, deterministic.
    pub fn path_loss_db(&self, d: f64) -> Result<f64> {
        match self {
            SlopeBase::FreeSpace { band, tx_gain_dbi, rx_gain_dbi } => {
                fs_path_loss(*band, d, *tx_gain_dbi, *rx_gain_dbi)
            }
            SlopeBase::Sui(ctx) => sui_path_loss(ctx, d, None),
        }
    }

    /// Distance-dependent part `PL_base(d) - PL_base(1 m)`, evaluated in the
    /// analytically reduced form `10 n_base log10(d)`: antenna gains and the
    /// SUI frequency/RX-height corrections are distance-independent and
    /// cancel exactly in the difference, so they never enter at all.
    pub fn delta_db(&self, d: f64) -> Result<f64> {
        check_distance(d)?;
        Ok(10.0 * self.ple() * d.log10())
    }

    /// Slope of the base model in PLE units: 2 for free space,
    /// `sui_ple(terrain, h_tx)` for SUI.
    pub fn ple(&self) -> f64 {
        match self {
            SlopeBase::FreeSpace { .. } => 2.0,
            SlopeBase::Sui(ctx) => ctx.ple(),
        }
    }
}

/// A base model rescaled by a slope correction factor alpha and re-anchored
/// at the 1 m free-space reference:
/// `PL(d) = anchor + alpha (PL_base(d) - PL_base(1 m))`.
///
/// The anchor is always `fspl_1m(band)`; with alpha chosen as a PLE ratio
/// the modified model reproduces the corresponding CI model exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedModel {
    base: SlopeBase,
    alpha: f64,
    sigma_db: f64,
}

impl ModifiedModel {
    pub fn new(base: SlopeBase, alpha: f64, sigma_db: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::NonPositiveAlpha { value: alpha });
        }
        if !sigma_db.is_finite() || sigma_db < 0.0 {
            return Err(Error::NegativeSigma { db: sigma_db });
        }
        Ok(Self { base, alpha, sigma_db })
    }

    pub fn base(&self) -> &SlopeBase {
        &self.base
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sigma_db(&self) -> f64 {
        self.sigma_db
    }

    pub fn band(&self) -> FrequencyBand {
        self.base.band()
    }

    /// PL at the 1 m anchor, identical for both base kinds.
    pub fn anchor_db(&self) -> f64 {
        self.band().fspl_1m_db()
    }

    pub fn path_loss_db(&self, d: f64) -> Result<f64> {
        Ok(self.anchor_db() + self.alpha * self.base.delta_db(d)?)
    }
}

/// Modified free space path loss. The model must carry a
/// [`SlopeBase::FreeSpace`] base.
pub fn modified_fs_path_loss(model: &ModifiedModel, d: f64) -> Result<f64> {
    debug_assert!(matches!(model.base, SlopeBase::FreeSpace { .. }));
    model.path_loss_db(d)
}

/// Modified SUI path loss. The model must carry a [`SlopeBase::Sui`] base.
pub fn modified_sui_path_loss(model: &ModifiedModel, d: f64) -> Result<f64> {
    debug_assert!(matches!(model.base, SlopeBase::Sui(_)));
    model.path_loss_db(d)
}
