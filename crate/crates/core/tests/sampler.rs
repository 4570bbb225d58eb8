use banddepth::rng::stream_rng;
use banddepth::simulation::{
    gp_covariance, gp_factor, linear_trend, sample_gp, ContaminationConfig, ContaminationModel,
    GpSpec, ModelGenerator,
};
use banddepth::Grid;

#[test]
fn draws_reproduce_mean_and_covariance() {
    let grid = Grid::canonical(10).unwrap();
    let draws = 5000;
    for mu in [0.2, 1.5, 2.0] {
        let spec = GpSpec::new(1.0, 1.0, mu);
        let cov = gp_covariance(&grid, &spec);
        let factor = gp_factor(&cov).unwrap();
        let mut rng = stream_rng(77, &[mu.to_bits()]);
        let curves: Vec<_> = (0..draws)
            .map(|_| sample_gp(&factor, linear_trend, &grid, &mut rng))
            .collect();
        let v = grid.len();
        let mean: Vec<f64> = (0..v)
            .map(|a| curves.iter().map(|c| c[a]).sum::<f64>() / draws as f64)
            .collect();
        for (a, &t) in grid.points().iter().enumerate() {
            assert!((mean[a] - linear_trend(t)).abs() < 0.1, "mu={mu} t={t}");
        }
        for a in 0..v {
            for b in 0..v {
                let emp = curves
                    .iter()
                    .map(|c| (c[a] - mean[a]) * (c[b] - mean[b]))
                    .sum::<f64>()
                    / (draws - 1) as f64;
                assert!((emp - cov[(a, b)]).abs() < 0.05, "mu={mu} ({a},{b}): {emp}");
            }
        }
    }
}

#[test]
fn contamination_frequency_and_signs() {
    let grid = Grid::canonical(30).unwrap();
    let n = 4000;
    for model in [
        ContaminationModel::Asymmetric,
        ContaminationModel::Symmetric,
        ContaminationModel::Partial,
        ContaminationModel::Peaks,
        ContaminationModel::ScatteredPoints,
        ContaminationModel::Shape,
    ] {
        let generator =
            ModelGenerator::new(ContaminationConfig::for_model(model), grid.clone()).unwrap();
        let labeled = generator
            .generate(n, &mut stream_rng(9, &[model.id() as u64]))
            .unwrap();
        let hits = labeled.contaminated.iter().filter(|&&c| c).count() as f64;
        let sd = (n as f64 * 0.1 * 0.9).sqrt();
        assert!((hits - 0.1 * n as f64).abs() < 4.0 * sd, "{model}: {hits}");
        if let Some(signs) = &labeled.signs {
            let plus = signs.iter().filter(|&&s| s > 0).count() as f64;
            assert!(
                (plus - 0.5 * n as f64).abs() < 4.0 * (n as f64 * 0.25).sqrt(),
                "{model}: {plus}"
            );
        }
    }
}

#[test]
fn asymmetric_contamination_shifts_upwards() {
    let grid = Grid::canonical(30).unwrap();
    let generator = ModelGenerator::new(
        ContaminationConfig::for_model(ContaminationModel::Asymmetric),
        grid.clone(),
    )
    .unwrap();
    let labeled = generator.generate(600, &mut stream_rng(3, &[])).unwrap();
    let level = |i: usize| {
        let c = labeled.sample.curve(i);
        (0..30)
            .map(|a| c[a] - linear_trend(grid.points()[a]))
            .sum::<f64>()
            / 30.0
    };
    for i in 0..600 {
        if labeled.contaminated[i] {
            assert!(level(i) > 15.0);
        } else {
            assert!(level(i) < 10.0);
        }
    }
}
