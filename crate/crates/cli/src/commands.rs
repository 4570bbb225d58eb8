//! Subcommands as functions from a resolved configuration to rendered output.

use std::fmt::Write as _;

use banddepth::estimators::{trimmed_indices, trimmed_mean, Estimator};
use banddepth::resampling::{
    random_partition, rank_agreement_study, resampled_depth_all, RankAgreementConfig,
};
use banddepth::rng::stream_rng;
use banddepth::simulation::{
    run_study, ContaminationConfig, ContaminationModel, GpSpec, ModelGenerator, StudyConfig,
    StudyReport,
};
use banddepth::{depth_all, rank_order, DepthMethod, DepthVector, FunctionalSample, Grid};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::io::{curves_csv, fmt_num, read_curves, single_curve_csv};

const PARTITION_STREAM: u64 = 3;
const GENERATE_STREAM: u64 = 4;

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

/// The configured method, with `J` applied to BD and GBD.
pub fn method(cfg: &RunConfig) -> Result<DepthMethod> {
    let m = cfg.method.unwrap_or(DepthMethod::GeneralizedBand(2));
    match (m, cfg.band_size) {
        (_, None) => Ok(m),
        (DepthMethod::Band(_) | DepthMethod::GeneralizedBand(_), Some(j)) => {
            Ok(m.with_band_size(j))
        }
        (_, Some(2)) => Ok(m),
        (_, Some(j)) => Err(usage(format!("{m} is defined for pairs only, got J = {j}"))),
    }
}

/// Full-sample depths, or depths within a random `K`-partition when `K > 1`.
pub fn sample_depths(
    sample: &FunctionalSample,
    method: DepthMethod,
    cfg: &RunConfig,
) -> Result<DepthVector> {
    let parts = cfg.parts.unwrap_or(1);
    if parts <= 1 {
        if parts == 0 {
            return Err(usage("K must be at least 1"));
        }
        return Ok(depth_all(sample, method)?);
    }
    let seed = cfg.require_seed("for resampled depths (K > 1)")?;
    let partition = random_partition(
        sample.len(),
        parts,
        &mut stream_rng(seed, &[PARTITION_STREAM]),
    )?;
    Ok(resampled_depth_all(sample, &partition, method)?)
}

fn depth_rows(sample: &FunctionalSample, depths: &DepthVector, which: &[usize]) -> String {
    let ranks = rank_order(depths).ranks();
    let mut out = String::from("id,depth,rank\n");
    for &i in which {
        writeln!(
            out,
            "{},{},{}",
            sample.ids()[i],
            fmt_num(depths.values[i]),
            ranks[i]
        )
        .unwrap();
    }
    out
}

/// `id,depth,rank` for every curve in input order.
pub fn depth_table(sample: &FunctionalSample, depths: &DepthVector) -> String {
    depth_rows(sample, depths, &(0..sample.len()).collect::<Vec<_>>())
}

pub fn cmd_depth(cfg: &RunConfig) -> Result<String> {
    let sample = read_curves(cfg.require_input()?)?;
    let depths = sample_depths(&sample, method(cfg)?, cfg)?;
    Ok(depth_table(&sample, &depths))
}

/// The least deep curves and the trimmed mean of the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Screening {
    /// `id,depth,rank` of the flagged curves, least deep last.
    pub flagged: String,
    /// Trimmed mean in the curve CSV layout.
    pub mean: String,
}

pub fn screen(sample: &FunctionalSample, cfg: &RunConfig) -> Result<Screening> {
    let alpha = cfg.alpha.unwrap_or(0.2);
    let depths = sample_depths(sample, method(cfg)?, cfg)?;
    let flagged = trimmed_indices(&depths, alpha)?;
    let mean = trimmed_mean(sample, &depths, alpha)?;
    Ok(Screening {
        flagged: depth_rows(sample, &depths, &flagged),
        mean: single_curve_csv(sample.grid(), "trimmed_mean", &mean),
    })
}

pub fn cmd_screen(cfg: &RunConfig) -> Result<Screening> {
    screen(&read_curves(cfg.require_input()?)?, cfg)
}

fn models(cfg: &RunConfig) -> Result<Vec<ContaminationModel>> {
    match &cfg.models {
        None => Ok(ContaminationModel::ALL.to_vec()),
        Some(ids) if ids.is_empty() => Err(usage("no contamination models selected")),
        Some(ids) => Ok(ids
            .iter()
            .map(|&id| ContaminationModel::from_id(id))
            .collect::<banddepth::Result<_>>()?),
    }
}

fn check_sizes(n: usize, v: usize) -> Result<()> {
    if n < 2 {
        return Err(usage(format!("n must be at least 2, got {n}")));
    }
    if v < 2 {
        return Err(usage(format!("the grid needs at least 2 points, got {v}")));
    }
    Ok(())
}

pub fn study_config(cfg: &RunConfig) -> Result<StudyConfig> {
    let d = StudyConfig::default();
    let study = StudyConfig {
        models: models(cfg)?,
        methods: cfg.methods.clone().unwrap_or(d.methods),
        n: cfg.n.unwrap_or(d.n),
        q: cfg.q.unwrap_or(d.q),
        magnitude: cfg.magnitude.unwrap_or(d.magnitude),
        alpha: cfg.alpha.unwrap_or(d.alpha),
        replications: cfg.replications.unwrap_or(d.replications),
        grid_points: cfg.grid_points.unwrap_or(d.grid_points),
        parts: cfg.parts.unwrap_or(d.parts),
        peak_length: cfg.peak_length.unwrap_or(d.peak_length),
        k_points: cfg.k_points.unwrap_or(d.k_points),
        seed: cfg.require_seed("for simulate")?,
    };
    check_sizes(study.n, study.grid_points)?;
    Ok(study)
}

/// The three files written by `simulate`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationFiles {
    /// Estimators by models, cells `mean (sd)` at full precision.
    pub table_csv: String,
    /// The same table aligned for reading, with the run parameters on top.
    pub table_txt: String,
    /// Raw integrated error of every estimator in every replication.
    pub ei_csv: String,
}

pub fn render_study(report: &StudyReport) -> SimulationFiles {
    let c = &report.config;
    let estimators: Vec<Estimator> = c.estimators();

    let mut table_csv = String::from("estimator");
    for m in &report.models {
        write!(table_csv, ",{}", m.model).unwrap();
    }
    table_csv.push('\n');
    let mut cells: Vec<Vec<String>> = Vec::new();
    for (e, est) in estimators.iter().enumerate() {
        table_csv.push_str(&est.to_string());
        let mut row = vec![est.to_string()];
        for m in &report.models {
            let (mean, sd) = (m.adjusted.mean[e], m.adjusted.sd[e]);
            write!(table_csv, ",{} ({})", fmt_num(mean), fmt_num(sd)).unwrap();
            row.push(format!("{mean:.3} ({sd:.3})"));
        }
        table_csv.push('\n');
        cells.push(row);
    }

    let mut header = vec!["Estimator".to_string()];
    header.extend(report.models.iter().map(|m| m.model.to_string()));
    cells.insert(0, header);
    let widths: Vec<usize> = (0..cells[0].len())
        .map(|col| cells.iter().map(|r| r[col].len()).max().unwrap_or(0))
        .collect();
    let mut table_txt = format!(
        "Adjusted integrated errors, mean (sd) over {} replications\n\
         n = {}, q = {}, M = {}, alpha = {}, R = {}, V = {}, K = {}, peak length = {}, \
         scattered points = {}, seed = {}\n\n",
        c.replications,
        c.n,
        c.q,
        c.magnitude,
        c.alpha,
        c.replications,
        c.grid_points,
        c.parts,
        c.peak_length,
        c.k_points,
        c.seed
    );
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        table_txt.push_str(line.join("  ").trim_end());
        table_txt.push('\n');
    }

    let mut ei_csv = String::from("model,replication");
    for est in &estimators {
        write!(ei_csv, ",{est}").unwrap();
    }
    ei_csv.push('\n');
    for m in &report.models {
        for (r, row) in m.errors.ei.iter().enumerate() {
            write!(ei_csv, "{},{}", m.model, r).unwrap();
            for &e in row {
                write!(ei_csv, ",{}", fmt_num(e)).unwrap();
            }
            ei_csv.push('\n');
        }
    }

    SimulationFiles {
        table_csv,
        table_txt,
        ei_csv,
    }
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<SimulationFiles> {
    Ok(render_study(&run_study(&study_config(cfg)?)?))
}

pub fn rank_config(cfg: &RunConfig) -> Result<RankAgreementConfig> {
    let d = RankAgreementConfig::default();
    let rc = RankAgreementConfig {
        process: GpSpec::new(1.0, 1.0, cfg.mu.unwrap_or(d.process.exponent)),
        grid_points: cfg.grid_points.unwrap_or(d.grid_points),
        n: cfg.n.unwrap_or(d.n),
        parts: cfg.parts.unwrap_or(d.parts),
        repeats: cfg.repeats.unwrap_or(d.repeats),
        method: method(cfg)?,
        seed: cfg.require_seed("for resample-check")?,
    };
    check_sizes(rc.n, rc.grid_points)?;
    rc.process.validate()?;
    Ok(rc)
}

/// The two files written by `resample-check`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankFiles {
    /// `position,mean_rank,sd` by full-sample rank position.
    pub ranks_csv: String,
    /// `repeat,spearman` per simulated data set.
    pub correlations_csv: String,
}

pub fn cmd_resample_check(cfg: &RunConfig) -> Result<RankFiles> {
    let report = rank_agreement_study(&rank_config(cfg)?)?;
    let mut ranks_csv = String::from("position,mean_rank,sd\n");
    for (p, (m, s)) in report.mean.iter().zip(&report.sd).enumerate() {
        writeln!(ranks_csv, "{},{},{}", p + 1, fmt_num(*m), fmt_num(*s)).unwrap();
    }
    let mut correlations_csv = String::from("repeat,spearman\n");
    for (b, r) in report.correlations.iter().enumerate() {
        writeln!(correlations_csv, "{},{}", b, fmt_num(*r)).unwrap();
    }
    Ok(RankFiles {
        ranks_csv,
        correlations_csv,
    })
}

/// A generated sample and its contamination labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub curves: String,
    /// `id,contaminated,sign`; the sign is empty for unsigned models.
    pub labels: String,
}

pub fn cmd_generate(cfg: &RunConfig) -> Result<Generated> {
    let model = ContaminationModel::from_id(cfg.model.unwrap_or(0))?;
    let d = ContaminationConfig::for_model(model);
    let contamination = ContaminationConfig {
        q: cfg.q.unwrap_or(d.q),
        magnitude: cfg.magnitude.unwrap_or(d.magnitude),
        peak_length: cfg.peak_length.unwrap_or(d.peak_length),
        k_points: cfg.k_points.unwrap_or(d.k_points),
        ..d
    };
    let n = cfg.n.unwrap_or(150);
    let v = cfg.grid_points.unwrap_or(30);
    check_sizes(n, v)?;
    let seed = cfg.require_seed("for generate")?;
    let generator = ModelGenerator::new(contamination, Grid::canonical(v)?)?;
    let labeled = generator.generate(n, &mut stream_rng(seed, &[GENERATE_STREAM]))?;

    let mut labels = String::from("id,contaminated,sign\n");
    for (i, id) in labeled.sample.ids().iter().enumerate() {
        let sign = labeled
            .signs
            .as_ref()
            .map(|s| s[i].to_string())
            .unwrap_or_default();
        writeln!(labels, "{id},{},{sign}", u8::from(labeled.contaminated[i])).unwrap();
    }
    Ok(Generated {
        curves: curves_csv(&labeled.sample),
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use banddepth::Curve;

    fn constants(values: &[f64]) -> FunctionalSample {
        let grid = Grid::canonical(4).unwrap();
        FunctionalSample::new(
            grid,
            values.iter().map(|&c| Curve::constant(c, 4)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn depth_table_of_constants() {
        let s = constants(&[0.0, 1.0, 2.0]);
        let d = depth_all(&s, DepthMethod::Band(2)).unwrap();
        let expected = format!(
            "id,depth,rank\n0,{},2\n1,1,1\n2,{},3\n",
            2.0 / 3.0,
            2.0 / 3.0
        );
        assert_eq!(depth_table(&s, &d), expected);
    }

    #[test]
    fn method_and_band_size() {
        let mut cfg = RunConfig {
            method: Some(DepthMethod::Band(2)),
            band_size: Some(3),
            ..RunConfig::default()
        };
        assert_eq!(method(&cfg).unwrap(), DepthMethod::Band(3));
        cfg.method = Some(DepthMethod::CorrectedBand);
        assert!(method(&cfg).is_err());
        cfg.band_size = None;
        assert_eq!(method(&cfg).unwrap(), DepthMethod::CorrectedBand);
    }

    #[test]
    fn resampling_needs_a_seed() {
        let s = constants(&[0.0, 1.0, 2.0, 3.0]);
        let mut cfg = RunConfig {
            parts: Some(2),
            ..RunConfig::default()
        };
        assert!(matches!(
            sample_depths(&s, DepthMethod::Band(2), &cfg),
            Err(CliError::Usage(_))
        ));
        cfg.seed = Some(1);
        let d = sample_depths(&s, DepthMethod::Band(2), &cfg).unwrap();
        assert_eq!(d.values.len(), 4);
    }

    #[test]
    fn screening_flags_the_outlier() {
        let s = constants(&[0.0, 1.0, 2.0, 100.0]);
        for m in [
            DepthMethod::GeneralizedBand(2),
            DepthMethod::CorrectedGeneralizedBand,
            DepthMethod::GeneralizedInside,
            DepthMethod::GeneralizedOutside,
        ] {
            let cfg = RunConfig {
                method: Some(m),
                alpha: Some(0.25),
                ..RunConfig::default()
            };
            let out = screen(&s, &cfg).unwrap();
            let ids: Vec<&str> = out
                .flagged
                .lines()
                .skip(1)
                .map(|l| &l[..l.find(',').unwrap()])
                .collect();
            assert_eq!(ids, ["3"], "{m}");
            assert_eq!(out.mean, "id,0.25,0.5,0.75,1\ntrimmed_mean,1,1,1,1\n");
        }
    }

    #[test]
    fn zero_alpha_flags_nothing() {
        let s = constants(&[0.0, 1.0, 5.0]);
        let cfg = RunConfig {
            alpha: Some(0.0),
            ..RunConfig::default()
        };
        let out = screen(&s, &cfg).unwrap();
        assert_eq!(out.flagged, "id,depth,rank\n");
        assert_eq!(out.mean, "id,0.25,0.5,0.75,1\ntrimmed_mean,2,2,2,2\n");
    }

    #[test]
    fn one_replication_one_method() {
        let cfg = RunConfig {
            models: Some(vec![1]),
            methods: Some(vec![DepthMethod::GeneralizedBand(2)]),
            replications: Some(1),
            n: Some(20),
            parts: Some(2),
            seed: Some(5),
            ..RunConfig::default()
        };
        let files = cmd_simulate(&cfg).unwrap();
        let rows: Vec<&str> = files.table_csv.lines().collect();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0], "estimator,M1");
        assert!(rows[1..].iter().any(|r| r.ends_with(",0 (0)")), "{rows:?}");
        let no_methods = cmd_simulate(&RunConfig {
            methods: Some(vec![]),
            ..cfg
        });
        assert!(no_methods.is_err());
    }

    #[test]
    fn report_header_echoes_defaults() {
        let cfg = RunConfig {
            models: Some(vec![0]),
            methods: Some(vec![DepthMethod::GeneralizedBand(2)]),
            replications: Some(2),
            seed: Some(1),
            ..RunConfig::default()
        };
        let files = cmd_simulate(&cfg).unwrap();
        let second = files.table_txt.lines().nth(1).unwrap();
        assert!(
            second.starts_with("n = 150, q = 0.1, M = 25, alpha = 0.2, R = 2"),
            "{second}"
        );
        assert_eq!(files.ei_csv.lines().count(), 3);
    }

    #[test]
    fn single_part_ranks_are_exact() {
        let cfg = RunConfig {
            n: Some(12),
            parts: Some(1),
            repeats: Some(3),
            seed: Some(2),
            ..RunConfig::default()
        };
        let files = cmd_resample_check(&cfg).unwrap();
        for (p, line) in files.ranks_csv.lines().skip(1).enumerate() {
            assert_eq!(line, format!("{},{},0", p + 1, p + 1));
        }
        assert_eq!(files.correlations_csv.lines().count(), 4);
    }

    #[test]
    fn generated_labels_match_curves() {
        let cfg = RunConfig {
            model: Some(2),
            n: Some(30),
            seed: Some(8),
            ..RunConfig::default()
        };
        let g = cmd_generate(&cfg).unwrap();
        assert_eq!(g.curves.lines().count(), 31);
        assert_eq!(g.labels.lines().count(), 31);
        assert!(g
            .labels
            .lines()
            .skip(1)
            .all(|l| l.ends_with(",1") || l.ends_with(",-1")));
        assert!(cmd_generate(&RunConfig {
            model: Some(9),
            seed: Some(1),
            ..RunConfig::default()
        })
        .is_err());
    }
}
