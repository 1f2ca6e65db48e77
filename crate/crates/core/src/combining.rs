//! Multi-beam power combining and the beam-combining CI (BC-CI) model.
//!
//! Combining works on linear milliwatt powers. The implementation
//! normalizes by the strongest beam and accumulates power ratios in
//! ascending order, which buys two exactness guarantees the tests rely on:
//! equal-power sets combine to exactly `N_r^2 P` (coherent) or `N_r P`
//! (non-coherent), and the result is invariant under any permutation of the
//! input list.

use crate::error::{Error, Result};
use crate::propagation::{check_distance, log_distance_db, CiModel};
use crate::shadowing::ShadowingSpec;
use crate::units::FrequencyBand;

/// One received beam: pointing-direction index plus linear power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beam {
    pub index: u32,
    pub power_mw: f64,
}

/// Per-location set of received beam powers at a known TX-RX distance.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSet {
    location_id: String,
    distance_m: f64,
    beams: Vec<Beam>,
}

impl BeamSet {
    pub fn new(location_id: impl Into<String>, distance_m: f64, beams: Vec<Beam>) -> Result<Self> {
        check_distance(distance_m)?;
        if beams.is_empty() {
            return Err(Error::EmptyPowerSet);
        }
        for b in &beams {
            if !b.power_mw.is_finite() || b.power_mw <= 0.0 {
                return Err(Error::NonPositivePower { mw: b.power_mw });
            }
        }
        let mut indices: Vec<u32> = beams.iter().map(|b| b.index).collect();
        indices.sort_unstable();
        if let Some(dup) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateBeamIndex { index: dup[0] });
        }
        Ok(Self { location_id: location_id.into(), distance_m, beams })
    }

    pub fn location_id(&self) -> &str {
        &self.location_id
    }

    pub fn distance_m(&self) -> f64 {
        self.distance_m
    }

    pub fn beams(&self) -> &[Beam] {
        &self.beams
    }

    pub fn powers_mw(&self) -> Vec<f64> {
        self.beams.iter().map(|b| b.power_mw).collect()
    }
}

/// How beam powers are merged into one received power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CombiningScheme {
    /// Amplitude sum then square: `(sum sqrt(P_i))^2`.
    Coherent,
    /// Power sum: `sum P_i`.
    NonCoherent,
}

impl std::fmt::Display for CombiningScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CombiningScheme::Coherent => write!(f, "CC"),
            CombiningScheme::NonCoherent => write!(f, "NCC"),
        }
    }
}

impl std::str::FromStr for CombiningScheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cc" | "coherent" => Ok(CombiningScheme::Coherent),
            "ncc" | "non-coherent" | "noncoherent" => Ok(CombiningScheme::NonCoherent),
            other => Err(format!("unknown combining scheme '{other}' (expected cc or ncc)")),
        }
    }
}

/// Combined received power in mW.
///
/// Coherent: `(sum sqrt(P_i))^2`. Non-coherent: `sum P_i`.
pub fn combine(powers_mw: &[f64], scheme: CombiningScheme) -> Result<f64> {
    if powers_mw.is_empty() {
        return Err(Error::EmptyPowerSet);
    }
    for &p in powers_mw {
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::NonPositivePower { mw: p });
        }
    }
    let p_max = powers_mw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // Normalize by the strongest power and sum ratios smallest-first: the
    // result is then independent of input order, and an all-equal set sums
    // to the exact integer N_r.
    let mut ratios: Vec<f64> = powers_mw.iter().map(|p| p / p_max).collect();
    ratios.sort_unstable_by(|a, b| a.partial_cmp(b).expect("powers validated finite"));
    Ok(match scheme {
        CombiningScheme::Coherent => {
            let amp: f64 = ratios.iter().map(|r| r.sqrt()).sum();
            p_max * (amp * amp)
        }
        CombiningScheme::NonCoherent => {
            let sum: f64 = ratios.iter().sum();
            p_max * sum
        }
    })
}

/// The `n_r` strongest beams of a set, sorted by descending power with ties
/// broken by ascending beam index so selection is deterministic.
pub fn select_best_beams(set: &BeamSet, n_r: usize) -> Result<BeamSet> {
    if n_r == 0 {
        return Err(Error::ZeroBeamCount);
    }
    if n_r > set.beams.len() {
        return Err(Error::InsufficientBeams { requested: n_r, available: set.beams.len() });
    }
    let mut beams = set.beams.clone();
    beams.sort_by(|x, y| {
        y.power_mw
            .partial_cmp(&x.power_mw)
            .expect("powers validated finite")
            .then(x.index.cmp(&y.index))
    });
    beams.truncate(n_r);
    BeamSet::new(set.location_id.clone(), set.distance_m, beams)
}

/// Path loss implied by the combined power of the best `n_r` beams:
/// `P_tx + G_tx + G_rx - combined received power in dBm`.
pub fn measured_path_loss_from_beams(
    set: &BeamSet,
    n_r: usize,
    scheme: CombiningScheme,
    tx_power_dbm: f64,
    tx_gain_dbi: f64,
    rx_gain_dbi: f64,
) -> Result<f64> {
    if !tx_power_dbm.is_finite() {
        return Err(Error::NonFiniteTxPower { dbm: tx_power_dbm });
    }
    if !tx_gain_dbi.is_finite() {
        return Err(Error::NonFiniteGain { dbi: tx_gain_dbi });
    }
    if !rx_gain_dbi.is_finite() {
        return Err(Error::NonFiniteGain { dbi: rx_gain_dbi });
    }
    let best = select_best_beams(set, n_r)?;
    let combined_mw = combine(&best.powers_mw(), scheme)?;
    Ok(tx_power_dbm + tx_gain_dbi + rx_gain_dbi - 10.0 * combined_mw.log10())
}

/// Effective path loss exponent together with its physical-plausibility
/// flag: values below the free-space exponent 2 are formula-legal at large
/// beam counts but signal extrapolation beyond anything measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectivePle {
    pub value: f64,
    pub below_free_space: bool,
}

/// Beam-combining CI model: the single-best-beam PLE shrinks with the
/// number of combined beams as `n_single (1 - A log2(N_r))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcCiModel {
    band: FrequencyBand,
    n_single: f64,
    a_weight: f64,
    scheme: CombiningScheme,
    sigma_db: f64,
}

impl BcCiModel {
    pub fn new(
        band: FrequencyBand,
        n_single: f64,
        a_weight: f64,
        scheme: CombiningScheme,
        sigma_db: f64,
    ) -> Result<Self> {
        if !n_single.is_finite() || n_single <= 0.0 {
            return Err(Error::NonPositivePle { value: n_single });
        }
        if !a_weight.is_finite() || !(0.0..1.0).contains(&a_weight) {
            return Err(Error::WeightOutOfRange { value: a_weight });
        }
        if !sigma_db.is_finite() || sigma_db < 0.0 {
            return Err(Error::NegativeSigma { db: sigma_db });
        }
        Ok(Self { band, n_single, a_weight, scheme, sigma_db })
    }

    pub fn band(&self) -> FrequencyBand {
        self.band
    }

    pub fn n_single(&self) -> f64 {
        self.n_single
    }

    pub fn a_weight(&self) -> f64 {
        self.a_weight
    }

    pub fn scheme(&self) -> CombiningScheme {
        self.scheme
    }

    pub fn sigma_db(&self) -> f64 {
        self.sigma_db
    }

    pub fn effective_ple(&self, n_r: u32) -> Result<EffectivePle> {
        effective_ple(self, n_r)
    }

    /// The plain CI model this reduces to at one beam.
    pub fn single_beam_ci(&self) -> CiModel {
        CiModel::new(self.band, self.n_single, self.sigma_db)
            .expect("BC-CI invariants imply valid CI parameters")
    }
}

/// `n_single (1 - A log2(N_r))` for any beam count >= 1. At `N_r` = 1 the
/// log term vanishes and the value is exactly `n_single`.
pub fn effective_ple(model: &BcCiModel, n_r: u32) -> Result<EffectivePle> {
    if n_r < 1 {
        return Err(Error::ZeroBeamCount);
    }
    let value = model.n_single * (1.0 - model.a_weight * f64::from(n_r).log2());
    Ok(EffectivePle { value, below_free_space: value < 2.0 })
}

/// BC-CI path loss `fspl_1m(band) + 10 n_eff log10(d) (+ X_sigma)`. With
/// `n_r` = 1 this coincides bit-for-bit with the plain CI model at
/// `n_single`.
pub fn bc_ci_path_loss(
    model: &BcCiModel,
    n_r: u32,
    d: f64,
    shadow: Option<ShadowingSpec>,
) -> Result<f64> {
    check_distance(d)?;
    let ple = effective_ple(model, n_r)?;
    let shadow_db = shadow.map(|s| s.sample_db()).unwrap_or(0.0);
    Ok(log_distance_db(model.band.fspl_1m_db(), ple.value, d) + shadow_db)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::ci_path_loss;
    use crate::units::fspl_1m;

    fn band(ghz: f64) -> FrequencyBand {
        FrequencyBand::new(ghz).unwrap()
    }

    fn beams(powers: &[(u32, f64)]) -> BeamSet {
        let beams = powers.iter().map(|&(index, power_mw)| Beam { index, power_mw }).collect();
        BeamSet::new("loc", 100.0, beams).unwrap()
    }

    #[test]
    fn combine_examples() {
        assert_eq!(combine(&[1.0, 1.0], CombiningScheme::Coherent).unwrap(), 4.0);
        assert_eq!(combine(&[4.0, 1.0], CombiningScheme::Coherent).unwrap(), 9.0);
        assert_eq!(combine(&[4.0, 1.0], CombiningScheme::NonCoherent).unwrap(), 5.0);
        assert_eq!(combine(&[], CombiningScheme::Coherent), Err(Error::EmptyPowerSet));
        assert_eq!(
            combine(&[1.0, -2.0], CombiningScheme::NonCoherent),
            Err(Error::NonPositivePower { mw: -2.0 })
        );
    }

    #[test]
    fn equal_power_ratios_are_exact() {
        let p = 3.731e-7;
        for n in 1..=12usize {
            let powers = vec![p; n];
            let cc = combine(&powers, CombiningScheme::Coherent).unwrap();
            let ncc = combine(&powers, CombiningScheme::NonCoherent).unwrap();
            assert_eq!(cc, (n * n) as f64 * p, "n={n}");
            assert_eq!(ncc, n as f64 * p, "n={n}");
        }
    }

    #[test]
    fn combine_is_permutation_invariant() {
        let base = [5.5e-9, 1.2e-7, 3.0e-8, 9.9e-10, 3.0e-8];
        let perms = [
            [3.0e-8, 5.5e-9, 9.9e-10, 1.2e-7, 3.0e-8],
            [1.2e-7, 3.0e-8, 3.0e-8, 9.9e-10, 5.5e-9],
            [9.9e-10, 3.0e-8, 1.2e-7, 5.5e-9, 3.0e-8],
        ];
        for scheme in [CombiningScheme::Coherent, CombiningScheme::NonCoherent] {
            let want = combine(&base, scheme).unwrap();
            for p in &perms {
                assert_eq!(combine(p, scheme).unwrap(), want);
            }
        }
    }

    #[test]
    fn doubling_powers_doubles_combined_power_exactly() {
        let base = [5.5e-9, 1.2e-7, 3.0e-8, 9.9e-10];
        let doubled: Vec<f64> = base.iter().map(|p| 2.0 * p).collect();
        for scheme in [CombiningScheme::Coherent, CombiningScheme::NonCoherent] {
            let a = combine(&base, scheme).unwrap();
            let b = combine(&doubled, scheme).unwrap();
            assert_eq!(b, 2.0 * a);
        }
    }

    #[test]
    fn combining_dominance() {
        let sets: [&[f64]; 4] =
            [&[2.0e-8], &[5.5e-9, 1.2e-7], &[1.0, 2.0, 3.0, 4.0], &[9.9e-10, 9.9e-10, 3.0e-8]];
        for powers in sets {
            let best = powers.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let cc = combine(powers, CombiningScheme::Coherent).unwrap();
            let ncc = combine(powers, CombiningScheme::NonCoherent).unwrap();
            assert!(cc >= ncc && ncc >= best, "{powers:?}: cc={cc} ncc={ncc} best={best}");
            if powers.len() == 1 {
                assert_eq!(cc, best);
                assert_eq!(ncc, best);
            }
        }
    }

    #[test]
    fn best_beam_selection() {
        let set = beams(&[(0, 5.0), (1, 3.0), (2, 9.0)]);
        let picked = select_best_beams(&set, 2).unwrap();
        let idx: Vec<u32> = picked.beams().iter().map(|b| b.index).collect();
        assert_eq!(idx, vec![2, 0]);

        // Whole-set selection just reorders.
        let all = select_best_beams(&set, 3).unwrap();
        let idx: Vec<u32> = all.beams().iter().map(|b| b.index).collect();
        assert_eq!(idx, vec![2, 0, 1]);

        // Ties break toward the lower beam index.
        let tied = beams(&[(4, 7.0), (1, 7.0)]);
        let picked = select_best_beams(&tied, 1).unwrap();
        assert_eq!(picked.beams()[0].index, 1);

        assert_eq!(select_best_beams(&set, 0), Err(Error::ZeroBeamCount));
        assert_eq!(
            select_best_beams(&set, 4),
            Err(Error::InsufficientBeams { requested: 4, available: 3 })
        );
    }

    #[test]
    fn beam_set_validation() {
        assert_eq!(BeamSet::new("x", 100.0, vec![]), Err(Error::EmptyPowerSet));
        let dup = vec![Beam { index: 3, power_mw: 1.0 }, Beam { index: 3, power_mw: 2.0 }];
        assert_eq!(BeamSet::new("x", 100.0, dup), Err(Error::DuplicateBeamIndex { index: 3 }));
        let neg = vec![Beam { index: 0, power_mw: 0.0 }];
        assert_eq!(BeamSet::new("x", 100.0, neg), Err(Error::NonPositivePower { mw: 0.0 }));
        let ok = vec![Beam { index: 0, power_mw: 1.0 }];
        assert!(BeamSet::new("x", 0.5, ok).is_err());
    }

    #[test]
    fn measured_path_loss_examples() {
        let set = beams(&[(0, 1.0e-9)]);
        let pl = measured_path_loss_from_beams(
            &set,
            1,
            CombiningScheme::Coherent,
            30.0,
            24.5,
            24.5,
        )
        .unwrap();
        assert!((pl - 169.0).abs() < 1e-9, "pl={pl}");

        // One beam: the schemes coincide bitwise.
        let ncc =
            measured_path_loss_from_beams(&set, 1, CombiningScheme::NonCoherent, 30.0, 24.5, 24.5)
                .unwrap();
        assert_eq!(pl, ncc);
    }

    #[test]
    fn doubling_powers_drops_path_loss_by_3db() {
        let set = beams(&[(0, 5.5e-9), (1, 1.2e-7), (2, 3.0e-8)]);
        let doubled = beams(&[(0, 1.1e-8), (1, 2.4e-7), (2, 6.0e-8)]);
        for scheme in [CombiningScheme::Coherent, CombiningScheme::NonCoherent] {
            let a = measured_path_loss_from_beams(&set, 3, scheme, 30.0, 0.0, 0.0).unwrap();
            let b = measured_path_loss_from_beams(&doubled, 3, scheme, 30.0, 0.0, 0.0).unwrap();
            let drop = a - b;
            assert!((drop - 10.0 * 2f64.log10()).abs() < 1e-12, "drop={drop}");
        }
    }

    #[test]
    fn effective_ple_values() {
        let cc28 =
            BcCiModel::new(band(28.0), 3.812, 0.0671, CombiningScheme::Coherent, 9.1).unwrap();
        let got = effective_ple(&cc28, 4).unwrap();
        assert!((got.value - 3.3004296).abs() < 1e-9, "got {}", got.value);
        assert!((got.value - 3.301).abs() < 0.001);
        assert!(!got.below_free_space);

        let one = effective_ple(&cc28, 1).unwrap();
        assert_eq!(one.value, 3.812);

        let cc73 =
            BcCiModel::new(band(73.0), 3.728, 0.0673, CombiningScheme::Coherent, 7.6).unwrap();
        let got = effective_ple(&cc73, 2).unwrap();
        assert!((got.value - 3.4771056).abs() < 1e-9, "got {}", got.value);
        assert!((got.value - 3.477).abs() < 0.001);
    }

    #[test]
    fn effective_ple_monotone_and_flagged_below_free_space() {
        let m = BcCiModel::new(band(28.0), 3.812, 0.0671, CombiningScheme::Coherent, 0.0).unwrap();
        let mut last = f64::INFINITY;
        for n_r in 1..=64 {
            let e = effective_ple(&m, n_r).unwrap();
            assert!(e.value < last, "n_r={n_r}");
            last = e.value;
        }
        // 1 - 0.0671 log2(1024) = 0.329, PLE 1.254: legal but flagged.
        let deep = effective_ple(&m, 1024).unwrap();
        assert!(deep.value < 2.0 && deep.below_free_space);

        let frozen = BcCiModel::new(band(28.0), 3.812, 0.0, CombiningScheme::Coherent, 0.0).unwrap();
        assert_eq!(effective_ple(&frozen, 1).unwrap().value, 3.812);
        assert_eq!(effective_ple(&frozen, 16).unwrap().value, 3.812);
    }

    #[test]
    fn bc_ci_path_loss_values() {
        let m = BcCiModel::new(band(28.0), 3.812, 0.0671, CombiningScheme::Coherent, 9.1).unwrap();
        // One beam reduces bitwise to the plain CI model.
        let bc = bc_ci_path_loss(&m, 1, 100.0, None).unwrap();
        let ci = ci_path_loss(&m.single_beam_ci(), 100.0, None).unwrap();
        assert_eq!(bc, ci);

        let four = bc_ci_path_loss(&m, 4, 100.0, None).unwrap();
        assert!((four - 127.35175262684437).abs() < 1e-9, "got {four}");
        assert_eq!(bc_ci_path_loss(&m, 7, 1.0, None).unwrap(), fspl_1m(band(28.0)));
    }

    #[test]
    fn bc_ci_model_validation() {
        assert!(BcCiModel::new(band(28.0), 0.0, 0.1, CombiningScheme::Coherent, 0.0).is_err());
        assert!(BcCiModel::new(band(28.0), 3.8, 1.0, CombiningScheme::Coherent, 0.0).is_err());
        assert!(BcCiModel::new(band(28.0), 3.8, -0.1, CombiningScheme::Coherent, 0.0).is_err());
        assert!(BcCiModel::new(band(28.0), 3.8, 0.1, CombiningScheme::Coherent, -2.0).is_err());
        assert!(BcCiModel::new(band(28.0), 3.8, 0.0, CombiningScheme::NonCoherent, 0.0).is_ok());
    }

    #[test]
    fn scheme_round_trip() {
        for (s, txt) in [(CombiningScheme::Coherent, "CC"), (CombiningScheme::NonCoherent, "NCC")]
        {
            assert_eq!(s.to_string(), txt);
            assert_eq!(txt.to_lowercase().parse::<CombiningScheme>().unwrap(), s);
        }
        assert!("xyz".parse::<CombiningScheme>().is_err());
    }
}
