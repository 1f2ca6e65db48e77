//! Estimator validation against independent oracles: a brute-force
//! grid-search minimizer for the combining weight, exact recovery on
//! noiseless data, and statistical recovery under heavy seeded shadowing.

use mmprop::{
    bc_ci_path_loss, ci_path_loss, fit_bc_weight, fit_ci_ple, fit_slope_correction,
    generate_ci_dataset, shadowing_sigma, sui_ple, BcCiModel, CiModel, CombiningScheme,
    DatasetLabel, FitDataset, FitSample, FrequencyBand, ModifiedModel, ShadowingSpec, SlopeBase,
    SuiContext, TerrainClass,
};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

fn band(ghz: f64) -> FrequencyBand {
    FrequencyBand::new(ghz).unwrap()
}

fn log_spaced(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| lo * (hi / lo).powf(i as f64 / (k - 1) as f64))
        .collect()
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * ((rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
}

#[test]
fn noiseless_ci_fit_recovers_the_exponent_exactly() {
    for ple in [2.2, 3.6, 4.4, 5.4] {
        let model = CiModel::new(band(73.0), ple, 0.0).unwrap();
        let records =
            generate_ci_dataset(&model, &log_spaced(29.0, 129.0, 25), 1, &DatasetLabel::default())
                .unwrap();
        let samples = records.iter().map(|r| r.fit_sample()).collect();
        let fit = fit_ci_ple(&FitDataset::new(band(73.0), samples).unwrap()).unwrap();
        assert!((fit.value - ple).abs() < 1e-9, "ple {ple}: {}", fit.value);
        assert!(fit.sigma_db < 1e-9);
    }
}

#[test]
fn noiseless_slope_fit_recovers_the_exact_ratio() {
    // Against the terrain base the correction is the exponent ratio;
    // against free space it is half the exponent.
    let b = band(60.0);
    let ctx = SuiContext::new(b, TerrainClass::A, 1.5, 1.5).unwrap();
    let sui_base = SlopeBase::Sui(ctx);
    let n_base = sui_ple(TerrainClass::A.params(), 1.5).unwrap();
    let fs_base = SlopeBase::FreeSpace { band: b, tx_gain_dbi: 0.0, rx_gain_dbi: 0.0 };
    for ple in [2.2, 3.6, 5.4] {
        let model = CiModel::new(b, ple, 0.0).unwrap();
        let records =
            generate_ci_dataset(&model, &log_spaced(29.0, 129.0, 40), 2, &DatasetLabel::default())
                .unwrap();
        let samples: Vec<FitSample> = records.iter().map(|r| r.fit_sample()).collect();
        let data = FitDataset::new(b, samples).unwrap();
        let against_sui = fit_slope_correction(&data, &sui_base).unwrap();
        assert!((against_sui.value - ple / n_base).abs() < 1e-9);
        let against_fs = fit_slope_correction(&data, &fs_base).unwrap();
        assert!((against_fs.value - ple / 2.0).abs() < 1e-9);
    }
}

#[test]
fn noiseless_weight_fit_recovers_the_weight_exactly() {
    let model =
        BcCiModel::new(band(28.0), 3.812, 0.0671, CombiningScheme::Coherent, 0.0).unwrap();
    let mut samples = Vec::new();
    for (i, &d) in log_spaced(30.0, 200.0, 24).iter().enumerate() {
        let n_r = [1u32, 2, 3, 4, 6, 8][i % 6];
        let pl = bc_ci_path_loss(&model, n_r, d, None).unwrap();
        samples.push(FitSample::with_beams(d, pl, n_r));
    }
    let data = FitDataset::new(band(28.0), samples).unwrap();
    let fit = fit_bc_weight(&data, 3.812).unwrap();
    assert!((fit.value - 0.0671).abs() < 1e-9, "{}", fit.value);
    assert!(fit.sigma_db < 1e-9);
}

/// Brute-force reference minimizer for the weight: a coarse scan of the
/// squared-error objective followed by a fine scan around the coarse
/// minimum. Works directly on the (distance, beams, loss) samples, sharing
/// no code with the closed-form estimator under test.
fn grid_search_weight(
    samples: &[(f64, u32, f64)],
    anchor_db: f64,
    n_single: f64,
) -> f64 {
    let objective = |a: f64| -> f64 {
        samples
            .iter()
            .map(|&(d, n_r, loss)| {
                let predicted =
                    anchor_db + 10.0 * n_single * (1.0 - a * f64::from(n_r).log2()) * d.log10();
                let r = loss - predicted;
                r * r
            })
            .sum()
    };
    let scan = |lo: f64, hi: f64, step: f64| -> f64 {
        let mut best = (f64::INFINITY, lo);
        let mut a = lo;
        while a <= hi {
            let j = objective(a);
            if j < best.0 {
                best = (j, a);
            }
            a += step;
        }
        best.1
    };
    let coarse = scan(0.0, 0.5, 1e-3);
    scan((coarse - 2e-3).max(0.0), coarse + 2e-3, 1e-6)
}

#[test]
fn closed_form_weight_matches_grid_search_on_randomized_datasets() {
    let b = band(28.0);
    let anchor = mmprop::fspl_1m(b);
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11_0ca7e);
    for trial in 0..100 {
        let n_single = uniform(&mut rng, 2.0, 5.0);
        let a_true = uniform(&mut rng, 0.02, 0.2);
        let model =
            BcCiModel::new(b, n_single, a_true, CombiningScheme::Coherent, 0.0).unwrap();
        let k = 12 + (rng.next_u64() % 20) as usize;
        let mut raw = Vec::with_capacity(k);
        let mut samples = Vec::with_capacity(k);
        for i in 0..k {
            let d = uniform(&mut rng, 10.0, 500.0);
            let n_r = [1u32, 2, 3, 4, 6, 8][i % 6];
            let noise = uniform(&mut rng, -2.0, 2.0);
            let loss = bc_ci_path_loss(&model, n_r, d, None).unwrap() + noise;
            raw.push((d, n_r, loss));
            samples.push(FitSample::with_beams(d, loss, n_r));
        }
        let data = FitDataset::new(b, samples).unwrap();
        let closed = fit_bc_weight(&data, n_single).unwrap().value;
        let searched = grid_search_weight(&raw, anchor, n_single);
        assert!(
            (closed - searched).abs() < 2e-6,
            "trial {trial}: closed {closed} vs searched {searched}"
        );
    }
}

#[test]
fn heavy_shadowing_recovery_stays_within_stated_bounds() {
    // sigma = 9.1 dB over K = 200 samples: the exponent estimate must land
    // within 0.15 and the weight estimate within 0.02 of the truth.
    let sigma = 9.1;
    let n_true = 3.812;
    let b = band(28.0);

    let model = CiModel::new(b, n_true, sigma).unwrap();
    let records = generate_ci_dataset(
        &model,
        &log_spaced(10.0, 1000.0, 200),
        2024,
        &DatasetLabel::default(),
    )
    .unwrap();
    let samples = records.iter().map(|r| r.fit_sample()).collect();
    let fit = fit_ci_ple(&FitDataset::new(b, samples).unwrap()).unwrap();
    assert!((fit.value - n_true).abs() <= 0.15, "exponent {}", fit.value);
    assert!((fit.sigma_db - sigma).abs() <= 1.0, "sigma {}", fit.sigma_db);

    let a_true = 0.0671;
    let bc = BcCiModel::new(b, n_true, a_true, CombiningScheme::Coherent, 0.0).unwrap();
    let mut noise = ShadowingSpec::new(sigma, 77).unwrap().sampler();
    let mut samples = Vec::new();
    for (i, &d) in log_spaced(10.0, 1000.0, 200).iter().enumerate() {
        let n_r = [1u32, 2, 3, 4][i % 4];
        let loss = bc_ci_path_loss(&bc, n_r, d, None).unwrap() + noise.next_db();
        samples.push(FitSample::with_beams(d, loss, n_r));
    }
    let fit = fit_bc_weight(&FitDataset::new(b, samples).unwrap(), n_true).unwrap();
    assert!((fit.value - a_true).abs() <= 0.02, "weight {}", fit.value);
}

#[test]
fn slope_fit_agrees_with_exponent_ratio_under_noise() {
    // The generic least-squares route and the exponent-ratio shortcut are
    // algebraically identical because the regressor is proportional to the
    // log-distance; verify on noisy data at full precision.
    let b = band(60.0);
    let model = CiModel::new(b, 3.6, 9.0).unwrap();
    let records = generate_ci_dataset(
        &model,
        &log_spaced(29.0, 129.0, 60),
        5,
        &DatasetLabel::default(),
    )
    .unwrap();
    let samples: Vec<FitSample> = records.iter().map(|r| r.fit_sample()).collect();
    let data = FitDataset::new(b, samples).unwrap();

    let ctx = SuiContext::new(b, TerrainClass::A, 1.5, 1.5).unwrap();
    let alpha = fit_slope_correction(&data, &SlopeBase::Sui(ctx)).unwrap();
    let ple = fit_ci_ple(&data).unwrap();
    let ratio = ple.value / sui_ple(TerrainClass::A.params(), 1.5).unwrap();
    assert!((alpha.value - ratio).abs() < 1e-12);

    // Both routes see the same residuals, hence the same sigma.
    assert!((alpha.sigma_db - ple.sigma_db).abs() < 1e-12);
}

#[test]
fn fitted_sigma_matches_direct_residual_sigma() {
    let b = band(73.0);
    let model = CiModel::new(b, 4.4, 6.0).unwrap();
    let records = generate_ci_dataset(
        &model,
        &log_spaced(31.0, 102.0, 30),
        9,
        &DatasetLabel::default(),
    )
    .unwrap();
    let samples = records.iter().map(|r| r.fit_sample()).collect();
    let fit = fit_ci_ple(&FitDataset::new(b, samples).unwrap()).unwrap();
    assert_eq!(fit.sigma_db, shadowing_sigma(&fit.residuals).unwrap());
    assert_eq!(fit.rmse_db, fit.sigma_db);
}

#[test]
fn modified_model_with_fitted_alpha_tracks_ci_model() {
    // End-to-end: fit alpha on noiseless data, plug it into the modified
    // model, compare against the close-in curve everywhere.
    let b = band(73.0);
    let ci = CiModel::new(b, 4.4, 0.0).unwrap();
    let records = generate_ci_dataset(
        &ci,
        &log_spaced(53.0, 187.0, 28),
        3,
        &DatasetLabel::default(),
    )
    .unwrap();
    let samples = records.iter().map(|r| r.fit_sample()).collect();
    let data = FitDataset::new(b, samples).unwrap();
    let ctx = SuiContext::new(b, TerrainClass::A, 17.0, 2.0).unwrap();
    let base = SlopeBase::Sui(ctx);
    let alpha = fit_slope_correction(&data, &base).unwrap().value;
    let modified = ModifiedModel::new(base, alpha, 0.0).unwrap();
    for d in log_spaced(1.0, 1000.0, 50) {
        let a = ci_path_loss(&ci, d, None).unwrap();
        let m = mmprop::modified_sui_path_loss(&modified, d).unwrap();
        assert!((a - m).abs() < 1e-9, "d {d}");
    }
}
