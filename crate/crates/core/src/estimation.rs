//! MMSE estimators for the model parameters: CI path loss exponent, slope
//! correction factor alpha, BC-CI weighting factor A, and shadowing sigma.
//!
//! Every fit is an anchored least squares problem: the 1 m free-space
//! intercept is fixed, only the slope-side parameter is estimated, so each
//! estimator has a single-division closed form. Residuals are reported per
//! sample and sigma is their population RMS about zero (the model error is
//! zero-mean by definition, so no mean is subtracted and RMSE coincides
//! with sigma).

use crate::error::{Error, Result};
use crate::propagation::{check_distance, SlopeBase};
use crate::units::FrequencyBand;

/// One fit observation. `n_r` carries the number of combined beams for
/// BC-CI weight fitting; plain slope fits ignore it, and an absent value
/// means the single best beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitSample {
    pub distance_m: f64,
    pub path_loss_db: f64,
    pub n_r: Option<u32>,
}

impl FitSample {
    pub fn new(distance_m: f64, path_loss_db: f64) -> Self {
        Self { distance_m, path_loss_db, n_r: None }
    }

    pub fn with_beams(distance_m: f64, path_loss_db: f64, n_r: u32) -> Self {
        Self { distance_m, path_loss_db, n_r: Some(n_r) }
    }

    fn beams(&self) -> u32 {
        self.n_r.unwrap_or(1)
    }
}

/// Measurement collection for one carrier frequency.
///
/// Construction checks sample count, distance floor, and finiteness.
/// Distance *distinctness* is deliberately not required here: with the
/// intercept pinned at 1 m, a repeated non-anchor distance still identifies
/// the slope, so each fitter checks its own precise identifiability
/// condition instead.
#[derive(Debug, Clone, PartialEq)]
pub struct FitDataset {
    band: FrequencyBand,
    samples: Vec<FitSample>,
}

impl FitDataset {
    pub fn new(band: FrequencyBand, samples: Vec<FitSample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if samples.len() < 2 {
            return Err(Error::DegenerateFit { reason: "a fit needs at least two samples" });
        }
        for s in &samples {
            check_distance(s.distance_m)?;
            if !s.path_loss_db.is_finite() {
                return Err(Error::NonFinitePathLoss { db: s.path_loss_db });
            }
            if s.n_r == Some(0) {
                return Err(Error::ZeroBeamCount);
            }
        }
        Ok(Self { band, samples })
    }

    /// Convenience constructor from bare (distance, path loss) pairs.
    pub fn from_pairs(band: FrequencyBand, pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(band, pairs.iter().map(|&(d, pl)| FitSample::new(d, pl)).collect())
    }

    pub fn band(&self) -> FrequencyBand {
        self.band
    }

    pub fn samples(&self) -> &[FitSample] {
        &self.samples
    }

    fn anchor_db(&self) -> f64 {
        self.band.fspl_1m_db()
    }
}

/// Outcome of an MMSE fit: the estimated parameter, per-sample residuals,
/// and their RMS. `sigma_db` is always exactly
/// `shadowing_sigma(&residuals)`; `rmse_db` carries the same value under
/// the name regression users look for.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub value: f64,
    pub sigma_db: f64,
    pub rmse_db: f64,
    pub residuals: Vec<f64>,
}

impl FitResult {
    fn from_residuals(value: f64, residuals: Vec<f64>) -> Result<Self> {
        let sigma_db = shadowing_sigma(&residuals)?;
        Ok(Self { value, sigma_db, rmse_db: sigma_db, residuals })
    }
}

/// Population RMS of residuals about zero, in dB: `sqrt(sum r_i^2 / K)`.
/// The divisor is K, not K-1, because sigma realizes an expectation over
/// the model error, not a sample variance about an estimated mean.
pub fn shadowing_sigma(residuals: &[f64]) -> Result<f64> {
    if residuals.is_empty() {
        return Err(Error::EmptyResiduals);
    }
    for &r in residuals {
        if !r.is_finite() {
            return Err(Error::NonFinitePathLoss { db: r });
        }
    }
    let sum_sq: f64 = residuals.iter().map(|r| r * r).sum();
    Ok((sum_sq / residuals.len() as f64).sqrt())
}

/// Residuals of a dataset about a fixed model curve: `PL_i - model(d_i)`.
/// Pairs with [`shadowing_sigma`] to score an already-parameterized model
/// against measurements without refitting it.
pub fn residuals_about<F>(data: &FitDataset, model_loss_db: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    data.samples()
        .iter()
        .map(|s| Ok(s.path_loss_db - model_loss_db(s.distance_m)?))
        .collect()
}

/// Least-squares CI path loss exponent over the fixed 1 m anchor:
/// `n = sum((PL_i - anchor) t_i) / sum(t_i^2)` with `t_i = 10 log10(d_i)`.
pub fn fit_ci_ple(data: &FitDataset) -> Result<FitResult> {
    let anchor = data.anchor_db();
    let mut num = 0.0;
    let mut den = 0.0;
    for s in data.samples() {
        let t = 10.0 * s.distance_m.log10();
        num += (s.path_loss_db - anchor) * t;
        den += t * t;
    }
    if den == 0.0 {
        return Err(Error::DegenerateFit {
            reason: "all samples sit at the 1 m reference distance; the slope is unidentifiable",
        });
    }
    let n = num / den;
    let residuals = data
        .samples()
        .iter()
        .map(|s| s.path_loss_db - anchor - n * 10.0 * s.distance_m.log10())
        .collect();
    FitResult::from_residuals(n, residuals)
}

/// Least-squares slope correction factor for a base model:
/// `alpha = sum((PL_i - anchor) D_i) / sum(D_i^2)` with
/// `D_i = PL_base(d_i) - PL_base(1 m)`.
///
/// Because `D_i` is proportional to `log10 d_i`, alpha equals the PLE ratio
/// `fit_ci_ple(data) / n_base` analytically; the general normal-equation
/// route is kept so non-log-linear bases can slot in, and the ratio serves
/// as an independent test oracle.
pub fn fit_slope_correction(data: &FitDataset, base: &SlopeBase) -> Result<FitResult> {
    let dataset_ghz = data.band().ghz();
    let base_ghz = base.band().ghz();
    if dataset_ghz != base_ghz {
        return Err(Error::BandMismatch { dataset_ghz, base_ghz });
    }
    let anchor = data.anchor_db();
    let mut num = 0.0;
    let mut den = 0.0;
    for s in data.samples() {
        let delta = base.delta_db(s.distance_m)?;
        num += (s.path_loss_db - anchor) * delta;
        den += delta * delta;
    }
    if den == 0.0 {
        return Err(Error::DegenerateFit {
            reason: "the base model is distance-flat over these samples; alpha is unidentifiable",
        });
    }
    let alpha = num / den;
    let mut residuals = Vec::with_capacity(data.samples().len());
    for s in data.samples() {
        residuals.push(s.path_loss_db - anchor - alpha * base.delta_db(s.distance_m)?);
    }
    FitResult::from_residuals(alpha, residuals)
}

/// Least-squares BC-CI weighting factor A for a known single-beam PLE:
/// minimizes `sum(PL_i - anchor - 10 n1 (1 - A log2(nr_i)) log10(d_i))^2`,
/// giving `A = sum(x_i y_i) / sum(x_i^2)` with
/// `y_i = PL_i - anchor - 10 n1 log10(d_i)` and
/// `x_i = -10 n1 log10(d_i) log2(nr_i)`.
///
/// Samples at one beam have `x_i = 0`: they are accepted and contribute to
/// the residuals but carry no information about A.
pub fn fit_bc_weight(data: &FitDataset, n_single: f64) -> Result<FitResult> {
    if !n_single.is_finite() || n_single <= 0.0 {
        return Err(Error::NonPositivePle { value: n_single });
    }
    if !data.samples().iter().any(|s| s.beams() >= 2) {
        return Err(Error::UnidentifiableWeight);
    }
    let anchor = data.anchor_db();
    let regressors = |s: &FitSample| {
        let slope = 10.0 * n_single * s.distance_m.log10();
        let x = -slope * f64::from(s.beams()).log2();
        let y = s.path_loss_db - anchor - slope;
        (x, y)
    };
    let mut num = 0.0;
    let mut den = 0.0;
    for s in data.samples() {
        let (x, y) = regressors(s);
        num += x * y;
        den += x * x;
    }
    if den == 0.0 {
        return Err(Error::DegenerateFit {
            reason: "every multi-beam sample sits at the 1 m reference distance; \
                     the weighting factor is unidentifiable",
        });
    }
    let a = num / den;
    let residuals = data
        .samples()
        .iter()
        .map(|s| {
            let (x, y) = regressors(s);
            y - a * x
        })
        .collect();
    FitResult::from_residuals(a, residuals)
}
