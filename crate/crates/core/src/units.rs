//! Carrier-frequency newtype and dB/linear conversion helpers.

use crate::error::{Error, Result};

/// Carrier frequency in GHz. Construction rejects non-positive or non-finite
/// values, so every model downstream can assume a usable carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyBand {
    ghz: f64,
}

impl FrequencyBand {
    pub fn new(ghz: f64) -> Result<Self> {
        if !ghz.is_finite() || ghz <= 0.0 {
            return Err(Error::NonPositiveFrequency { ghz });
        }
        Ok(Self { ghz })
    }

    pub fn ghz(&self) -> f64 {
        self.ghz
    }

    pub fn mhz(&self) -> f64 {
        self.ghz * 1000.0
    }

    pub fn hz(&self) -> f64 {
        self.ghz * 1e9
    }

    /// Free space path loss in dB at the 1 m reference distance,
    /// `32.4 + 20 log10(f_GHz)`. The 32.4 constant is the conventional
    /// rounded form; the analytic constant would be 32.4418.
    pub fn fspl_1m_db(&self) -> f64 {
        32.4 + 20.0 * self.ghz.log10()
    }
}

/// Free space path loss at 1 m for the given band. See
/// [`FrequencyBand::fspl_1m_db`].
pub fn fspl_1m(band: FrequencyBand) -> f64 {
    band.fspl_1m_db()
}

/// Power ratio to decibels, `10 log10(x)`.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Decibels to power ratio, `10^(x/10)`.
pub fn to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Milliwatts to dBm.
pub fn mw_to_dbm(mw: f64) -> f64 {
    to_db(mw)
}

/// dBm to milliwatts.
pub fn dbm_to_mw(dbm: f64) -> f64 {
    to_linear(dbm)
}
