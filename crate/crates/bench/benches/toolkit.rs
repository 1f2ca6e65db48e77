//! Hot-path benchmarks: single model evaluations, beam combining across set
//! sizes, the three closed-form fitters, and the two range solvers.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use mmprop::{
    bc_ci_path_loss, ci_path_loss, combine, distance_for_loss, fit_bc_weight, fit_ci_ple,
    fit_slope_correction, fs_path_loss, modified_sui_path_loss, sui_path_loss, BcCiModel,
    CiModel, CombiningScheme, FitDataset, FitSample, FrequencyBand, ModifiedModel, RangeModel,
    RangeQuery, ShadowingSpec, SlopeBase, SuiContext, TerrainClass,
};

fn band(ghz: f64) -> FrequencyBand {
    FrequencyBand::new(ghz).unwrap()
}

fn bench_models(c: &mut Criterion) {
    let band73 = band(73.0);
    let band60 = band(60.0);
    let ci = CiModel::new(band73, 3.728, 0.0).unwrap();
    let ctx = SuiContext::new(band60, TerrainClass::A, 1.5, 1.5).unwrap();
    let modified = ModifiedModel::new(SlopeBase::Sui(ctx), 0.277, 0.0).unwrap();
    let bc = BcCiModel::new(band(28.0), 3.812, 0.0671, CombiningScheme::Coherent, 0.0).unwrap();

    let mut g = c.benchmark_group("path_loss");
    g.bench_function("free_space", |b| {
        b.iter(|| fs_path_loss(band73, black_box(100.0), 0.0, 0.0).unwrap())
    });
    g.bench_function("sui", |b| b.iter(|| sui_path_loss(&ctx, black_box(100.0), None).unwrap()));
    g.bench_function("ci", |b| b.iter(|| ci_path_loss(&ci, black_box(100.0), None).unwrap()));
    g.bench_function("modified_sui", |b| {
        b.iter(|| modified_sui_path_loss(&modified, black_box(100.0)).unwrap())
    });
    g.bench_function("bc_ci_4_beams", |b| {
        b.iter(|| bc_ci_path_loss(&bc, 4, black_box(100.0), None).unwrap())
    });
    g.finish();
}

fn bench_combining(c: &mut Criterion) {
    let mut g = c.benchmark_group("combine");
    for n in [2usize, 4, 8, 16] {
        let powers: Vec<f64> = (0..n).map(|i| 1.0e-6 * 0.7f64.powi(i as i32)).collect();
        g.bench_with_input(BenchmarkId::new("coherent", n), &powers, |b, p| {
            b.iter(|| combine(black_box(p), CombiningScheme::Coherent).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("non_coherent", n), &powers, |b, p| {
            b.iter(|| combine(black_box(p), CombiningScheme::NonCoherent).unwrap())
        });
    }
    g.finish();
}

/// 200 shadowed CI samples plus a beam-annotated variant for the weight fit.
fn fit_inputs() -> (FitDataset, FitDataset, SlopeBase) {
    let band28 = band(28.0);
    let truth = CiModel::new(band28, 3.812, 0.0).unwrap();
    let mut noise = ShadowingSpec::new(9.1, 17).unwrap().sampler();
    let distances: Vec<f64> =
        (0..200).map(|i| 10f64.powf(1.0 + 1.7 * i as f64 / 199.0)).collect();

    let plain: Vec<FitSample> = distances
        .iter()
        .map(|&d| {
            FitSample::new(d, ci_path_loss(&truth, d, None).unwrap() + noise.next().unwrap())
        })
        .collect();

    let bc = BcCiModel::new(band28, 3.812, 0.0671, CombiningScheme::Coherent, 0.0).unwrap();
    let beamed: Vec<FitSample> = distances
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let n_r = 1 + (i % 4) as u32;
            let pl = bc_ci_path_loss(&bc, n_r, d, None).unwrap() + noise.next().unwrap();
            FitSample::with_beams(d, pl, n_r)
        })
        .collect();

    let base = SlopeBase::Sui(SuiContext::new(band28, TerrainClass::A, 17.0, 1.5).unwrap());
    (
        FitDataset::new(band28, plain).unwrap(),
        FitDataset::new(band28, beamed).unwrap(),
        base,
    )
}

fn bench_fitting(c: &mut Criterion) {
    let (plain, beamed, base) = fit_inputs();
    let mut g = c.benchmark_group("fit_200_samples");
    g.bench_function("ci_ple", |b| b.iter(|| fit_ci_ple(black_box(&plain)).unwrap()));
    g.bench_function("slope_correction", |b| {
        b.iter(|| fit_slope_correction(black_box(&plain), &base).unwrap())
    });
    g.bench_function("bc_weight", |b| {
        b.iter(|| fit_bc_weight(black_box(&beamed), 3.812).unwrap())
    });
    g.finish();
}

fn bench_range(c: &mut Criterion) {
    let model = RangeModel::Ci(CiModel::new(band(73.0), 3.226, 0.0).unwrap());
    let closed = RangeQuery::new(model, 157.666).unwrap();
    let bracketed = RangeQuery::new(model, 157.666)
        .unwrap()
        .with_atmospheric_rate(15.0)
        .unwrap();

    let mut g = c.benchmark_group("range");
    g.bench_function("closed_form", |b| {
        b.iter(|| distance_for_loss(black_box(&closed)).unwrap())
    });
    g.bench_function("bisection_with_atmosphere", |b| {
        b.iter(|| distance_for_loss(black_box(&bracketed)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_models, bench_combining, bench_fitting, bench_range);
criterion_main!(benches);
