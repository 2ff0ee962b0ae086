//! Monte Carlo estimation of LCS length statistics.
//!
//! Trial `t` draws its `k` strings one after another from stream
//! `(master_seed, t)` and records the exact LCS length. Trials are grouped
//! into blocks that run in parallel; blocks return integer moments and
//! histograms, so the merged result is identical for any worker count or
//! block size.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LcsError, Result};
use crate::exact::{exact_pair_stats, ExactResult};
use crate::lcs::{dp_cells, exact_length_raw, DEFAULT_CELL_BUDGET};
use crate::rng::{derive_seed, stream};
use crate::seqgen::{checked_pow, Alphabet};
use crate::stats::{fit_power_law, mean_ci_t, skewness, variance_ci_chi2, PowerFit, SampleSummary};

pub const DEFAULT_BATCH_SIZE: u64 = 1024;
pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// How trials are organised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Grouping {
    /// Independent draws.
    #[default]
    Flat,
    /// `datasets` groups of `per_dataset` draws; the variance estimate is the
    /// mean of the within-group sample variances.
    Grouped { datasets: u64, per_dataset: u64 },
    /// Trial `t` is the `t`-th of all `q^(k n)` tuples in base-`q` order.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub alphabet: Alphabet,
    pub trials: u64,
    pub batch_size: u64,
    pub master_seed: u64,
    pub confidence_level: f64,
    #[serde(default)]
    pub grouping: Grouping,
    pub cell_budget: u64,
}

impl ExperimentConfig {
    pub fn new(n: usize, k: usize, alphabet: Alphabet, trials: u64, master_seed: u64) -> Self {
        ExperimentConfig {
            n,
            k,
            alphabet,
            trials,
            batch_size: DEFAULT_BATCH_SIZE,
            master_seed,
            confidence_level: DEFAULT_CONFIDENCE,
            grouping: Grouping::Flat,
            cell_budget: DEFAULT_CELL_BUDGET,
        }
    }

    /// Switches to grouped mode with `datasets * per_dataset` trials.
    pub fn grouped(mut self, datasets: u64, per_dataset: u64) -> Self {
        self.trials = datasets * per_dataset;
        self.grouping = Grouping::Grouped {
            datasets,
            per_dataset,
        };
        self
    }

    /// Switches to exhaustive mode over all `q^(k n)` tuples.
    pub fn exhaustive(mut self) -> Result<Self> {
        let total = checked_pow(self.alphabet.size() as u64, self.k * self.n)
            .ok_or_else(|| LcsError::resource("exhaustive trials", "more than 2^64", u64::MAX))?;
        self.trials = total;
        self.grouping = Grouping::Exhaustive;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(LcsError::invalid("sequence length must be at least 1"));
        }
        if self.k < 2 {
            return Err(LcsError::invalid(format!(
                "need k >= 2 sequences, got {}",
                self.k
            )));
        }
        if self.trials < 2 {
            return Err(LcsError::invalid("need at least 2 trials"));
        }
        if self.batch_size == 0 {
            return Err(LcsError::invalid("batch size must be positive"));
        }
        if !(self.confidence_level > 0.0 && self.confidence_level < 1.0) {
            return Err(LcsError::invalid("confidence level must be in (0,1)"));
        }
        match self.grouping {
            Grouping::Flat => {}
            Grouping::Grouped {
                datasets,
                per_dataset,
            } => {
                if datasets == 0 || per_dataset < 2 {
                    return Err(LcsError::invalid(
                        "grouped mode needs at least 1 dataset of at least 2 draws",
                    ));
                }
                if datasets.checked_mul(per_dataset) != Some(self.trials) {
                    return Err(LcsError::invalid(
                        "trials must equal datasets * per_dataset",
                    ));
                }
            }
            Grouping::Exhaustive => {
                if checked_pow(self.alphabet.size() as u64, self.k * self.n) != Some(self.trials) {
                    return Err(LcsError::invalid("exhaustive mode needs trials = q^(k n)"));
                }
            }
        }
        if self.k > 2 {
            let cells = dp_cells(std::iter::repeat_n(self.n, self.k));
            match cells {
                Some(c) if c <= self.cell_budget => {}
                _ => {
                    let required = cells.map_or_else(|| "more than 2^64".into(), |c| c.to_string());
                    return Err(LcsError::resource(
                        "k-way DP table cells",
                        required,
                        self.cell_budget,
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub config: ExperimentConfig,
    pub mean_length: f64,
    pub gamma_hat: f64,
    /// Unbiased, divisor `trials - 1`.
    pub sample_variance: f64,
    /// Mean of within-dataset sample variances; grouped mode only.
    pub grouped_variance: Option<f64>,
    /// Sample skewness of the lengths, to judge the χ² interval.
    pub skewness: f64,
    pub histogram: BTreeMap<usize, u64>,
    pub mean_ci: (f64, f64),
    pub variance_ci: (f64, f64),
    pub wall_time_seconds: f64,
}

impl EstimateRecord {
    /// Variance estimate matching the sampling protocol. Exhaustive runs
    /// cover the whole population, so they report the population variance.
    pub fn protocol_variance(&self) -> f64 {
        match self.config.grouping {
            Grouping::Exhaustive => {
                let m = self.config.trials as f64;
                self.sample_variance * (m - 1.0) / m
            }
            _ => self.grouped_variance.unwrap_or(self.sample_variance),
        }
    }

    pub const CSV_HEADER: [&'static str; 13] = [
        "n",
        "k",
        "q",
        "probs",
        "trials",
        "seed",
        "mean",
        "gamma",
        "variance",
        "mean_ci_lo",
        "mean_ci_hi",
        "var_ci_lo",
        "var_ci_hi",
    ];

    pub fn csv_fields(&self) -> Vec<String> {
        let c = &self.config;
        vec![
            c.n.to_string(),
            c.k.to_string(),
            c.alphabet.size().to_string(),
            c.alphabet.probs_string(),
            c.trials.to_string(),
            c.master_seed.to_string(),
            self.mean_length.to_string(),
            self.gamma_hat.to_string(),
            self.protocol_variance().to_string(),
            self.mean_ci.0.to_string(),
            self.mean_ci.1.to_string(),
            self.variance_ci.0.to_string(),
            self.variance_ci.1.to_string(),
        ]
    }
}

#[derive(Debug, Clone)]
struct BlockStats {
    hist: Vec<u64>,
    count: u64,
    sum: u128,
    sum_sq: u128,
    sum_cu: u128,
}

impl BlockStats {
    fn new(n: usize) -> Self {
        BlockStats {
            hist: vec![0; n + 1],
            count: 0,
            sum: 0,
            sum_sq: 0,
            sum_cu: 0,
        }
    }

    fn add(&mut self, len: usize) {
        let l = len as u128;
        self.hist[len] += 1;
        self.count += 1;
        self.sum += l;
        self.sum_sq += l * l;
        self.sum_cu += l * l * l;
    }

    fn merge(&mut self, other: &BlockStats) {
        for (a, b) in self.hist.iter_mut().zip(&other.hist) {
            *a += b;
        }
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.sum_cu += other.sum_cu;
    }
}

fn run_block(config: &ExperimentConfig, start: u64, end: u64) -> BlockStats {
    let (n, k, q) = (config.n, config.k, config.alphabet.size());
    let sampler = config.alphabet.sampler();
    let mut stats = BlockStats::new(n);
    let mut buffers = vec![vec![0u8; n]; k];
    for t in start..end {
        match config.grouping {
            Grouping::Exhaustive => {
                let mut index = t;
                for buf in buffers.iter_mut() {
                    for s in buf.iter_mut() {
                        *s = (index % q as u64) as u8;
                        index /= q as u64;
                    }
                }
            }
            _ => {
                let mut rng = stream(config.master_seed, t);
                for buf in buffers.iter_mut() {
                    sampler.fill(&mut rng, buf);
                }
            }
        }
        let slices: Vec<&[u8]> = buffers.iter().map(Vec::as_slice).collect();
        stats.add(exact_length_raw(&slices, q));
    }
    stats
}

/// Runs a Monte Carlo experiment. Results are bit-identical across worker counts.
pub fn run_experiment(config: &ExperimentConfig) -> Result<EstimateRecord> {
    config.validate()?;
    let started = Instant::now();
    let ranges: Vec<(u64, u64)> = match config.grouping {
        Grouping::Grouped { per_dataset, .. } => (0..config.trials / per_dataset)
            .map(|g| (g * per_dataset, (g + 1) * per_dataset))
            .collect(),
        _ => (0..config.trials.div_ceil(config.batch_size))
            .map(|b| {
                let start = b * config.batch_size;
                (start, (start + config.batch_size).min(config.trials))
            })
            .collect(),
    };
    let blocks: Vec<BlockStats> = ranges
        .par_iter()
        .map(|&(s, e)| run_block(config, s, e))
        .collect();

    let mut total = BlockStats::new(config.n);
    for b in &blocks {
        total.merge(b);
    }
    let summary = SampleSummary::from_moments(total.count, total.sum, total.sum_sq);
    let grouped_variance = match config.grouping {
        Grouping::Grouped { .. } => Some(
            blocks
                .iter()
                .map(|b| SampleSummary::from_moments(b.count, b.sum, b.sum_sq).variance)
                .sum::<f64>()
                / blocks.len() as f64,
        ),
        _ => None,
    };
    let mean_ci = mean_ci_t(&summary, config.confidence_level)?;
    let variance_ci = variance_ci_chi2(&summary, config.confidence_level)?;
    let histogram = total
        .hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(l, &c)| (l, c))
        .collect();
    Ok(EstimateRecord {
        config: config.clone(),
        mean_length: summary.mean,
        gamma_hat: summary.mean / config.n as f64,
        sample_variance: summary.variance,
        grouped_variance,
        skewness: skewness(total.count, total.sum, total.sum_sq, total.sum_cu),
        histogram,
        mean_ci,
        variance_ci,
        wall_time_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Deviations of a Monte Carlo run from the exact pair statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactComparison {
    pub exact_gamma: f64,
    pub estimated_gamma: f64,
    pub eps_gamma: f64,
    pub exact_variance: f64,
    pub estimated_variance: f64,
    pub eps_variance: f64,
}

/// Compares a uniform two-string experiment with exhaustive enumeration.
pub fn compare_exact_vs_mc(config: &ExperimentConfig) -> Result<ExactComparison> {
    if config.k != 2 || !config.alphabet.is_uniform() {
        return Err(LcsError::invalid(
            "exact comparison needs k = 2 and a uniform alphabet",
        ));
    }
    let exact = exact_pair_stats(config.n, config.alphabet.size())?;
    let record = run_experiment(config)?;
    Ok(compare_with(&exact, &record))
}

pub fn compare_with(exact: &ExactResult, record: &EstimateRecord) -> ExactComparison {
    let estimated_variance = record.protocol_variance();
    ExactComparison {
        exact_gamma: exact.gamma_f64(),
        estimated_gamma: record.gamma_hat,
        eps_gamma: (exact.gamma_f64() - record.gamma_hat).abs(),
        exact_variance: exact.variance_f64(),
        estimated_variance,
        eps_variance: (exact.variance_f64() - estimated_variance).abs(),
    }
}

/// Conjectured limit `2 / (sqrt(q k / 2) + 1)` of `E|LCS| / n` for `k`
/// strings over `q` symbols.
pub fn gamma_predictor(k: usize, q: usize) -> f64 {
    2.0 / ((q as f64 * k as f64 / 2.0).sqrt() + 1.0)
}

/// Fits `variance = coefficient * n^exponent` over records sharing `(k, q, probs)`.
pub fn fit_variance_growth(records: &[EstimateRecord]) -> Result<PowerFit> {
    let first = records
        .first()
        .ok_or_else(|| LcsError::invalid("no records to fit"))?;
    for r in records {
        if r.config.k != first.config.k || r.config.alphabet != first.config.alphabet {
            return Err(LcsError::invalid("records must share k and alphabet"));
        }
    }
    let mut ns: Vec<usize> = records.iter().map(|r| r.config.n).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() != records.len() || ns.len() < 3 {
        return Err(LcsError::invalid("need at least 3 records with distinct n"));
    }
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.config.n as f64, r.protocol_variance()))
        .collect();
    fit_power_law(&points)
}

/// `floor(1 / sum p_i^2)`, the effective alphabet size of a skewed distribution.
pub fn mainville_index(probs: &[f64]) -> usize {
    let s: f64 = probs.iter().map(|p| p * p).sum();
    // absorbs rounding in sums such as 3 * (1/3)^2
    (1.0 / s + 1e-9).floor() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub record: EstimateRecord,
    /// `gamma_hat * sqrt(q)` for alphabet sweeps.
    pub scaled_gamma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCurve {
    pub parameter_name: String,
    pub points: Vec<SweepPoint>,
}

impl SweepCurve {
    fn leading_column(&self) -> bool {
        !EstimateRecord::CSV_HEADER.contains(&self.parameter_name.as_str())
    }

    pub fn csv_header(&self) -> Vec<String> {
        let mut h = Vec::new();
        if self.leading_column() {
            h.push(self.parameter_name.clone());
        }
        h.extend(EstimateRecord::CSV_HEADER.iter().map(|s| s.to_string()));
        if self.points.iter().any(|p| p.scaled_gamma.is_some()) {
            h.push("gamma_sqrt_q".into());
        }
        h
    }

    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        let scaled = self.points.iter().any(|p| p.scaled_gamma.is_some());
        let leading = self.leading_column();
        self.points
            .iter()
            .map(|p| {
                let mut row = Vec::new();
                if leading {
                    row.push(p.value.to_string());
                }
                row.extend(p.record.csv_fields());
                if scaled {
                    row.push(p.scaled_gamma.map_or_else(String::new, |v| v.to_string()));
                }
                row
            })
            .collect()
    }
}

fn strictly_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] < w[1])
}

/// Sweeps the probability `p` of symbol 1 over a binary alphabet.
///
/// `template` supplies `n`, `k`, trials, seed and the remaining settings; its
/// alphabet is replaced by `(1 - p, p)`. Point `i` runs with master seed
/// `derive_seed(template.master_seed, i)`.
pub fn sweep_p(template: &ExperimentConfig, p_grid: &[f64]) -> Result<SweepCurve> {
    if p_grid.is_empty() {
        return Err(LcsError::invalid("empty p grid"));
    }
    if let Some(p) = p_grid.iter().find(|&&p| !(p > 0.0 && p <= 0.5)) {
        return Err(LcsError::invalid(format!("p = {p} is outside (0, 0.5]")));
    }
    if !strictly_increasing(p_grid) {
        return Err(LcsError::invalid("p grid must be strictly increasing"));
    }
    let points = p_grid
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let mut config = template.clone();
            config.alphabet = Alphabet::binary(p)?;
            config.master_seed = derive_seed(template.master_seed, i as u64);
            Ok(SweepPoint {
                value: p,
                record: run_experiment(&config)?,
                scaled_gamma: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepCurve {
        parameter_name: "p".into(),
        points,
    })
}

/// Sweeps the size of a uniform alphabet; each point also carries `gamma_hat * sqrt(q)`.
pub fn sweep_alphabet(template: &ExperimentConfig, q_list: &[usize]) -> Result<SweepCurve> {
    if q_list.is_empty() {
        return Err(LcsError::invalid("empty alphabet list"));
    }
    let values: Vec<f64> = q_list.iter().map(|&q| q as f64).collect();
    if !strictly_increasing(&values) {
        return Err(LcsError::invalid(
            "alphabet sizes must be strictly increasing",
        ));
    }
    let points = q_list
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            let mut config = template.clone();
            config.alphabet = Alphabet::uniform(q)?;
            config.master_seed = derive_seed(template.master_seed, i as u64);
            let record = run_experiment(&config)?;
            let scaled = record.gamma_hat * (q as f64).sqrt();
            Ok(SweepPoint {
                value: q as f64,
                record,
                scaled_gamma: Some(scaled),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepCurve {
        parameter_name: "q".into(),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn uniform(n: usize, k: usize, q: usize, trials: u64, seed: u64) -> ExperimentConfig {
        ExperimentConfig::new(n, k, Alphabet::uniform(q).unwrap(), trials, seed)
    }

    #[test]
    fn degenerate_alphabet_gives_full_length() {
        for k in 2..=4 {
            let c = ExperimentConfig::new(9, k, Alphabet::new(vec![1.0, 0.0]).unwrap(), 50, 3);
            let r = run_experiment(&c).unwrap();
            assert_eq!(r.mean_length, 9.0);
            assert_eq!(r.sample_variance, 0.0);
            assert_eq!(r.mean_ci, (9.0, 9.0));
            assert_eq!(r.variance_ci, (0.0, 0.0));
            assert_eq!(r.gamma_hat, 1.0);
        }
    }

    #[test]
    fn record_invariants() {
        let r = run_experiment(&uniform(30, 2, 4, 3000, 8)).unwrap();
        assert_eq!(r.histogram.values().sum::<u64>(), 3000);
        assert!(r.histogram.keys().all(|&l| l <= 30));
        assert!(r.mean_ci.0 <= r.mean_length && r.mean_length <= r.mean_ci.1);
        assert!(r.variance_ci.0 <= r.sample_variance && r.sample_variance <= r.variance_ci.1);
        assert!((0.0..=1.0).contains(&r.gamma_hat));
    }

    #[test]
    fn independent_of_batch_size_and_workers() {
        let base = uniform(40, 2, 2, 777, 123);
        let reference = run_experiment(&base).unwrap();
        for batch in [1, 7, 100, 10_000] {
            let mut c = base.clone();
            c.batch_size = batch;
            let r = run_experiment(&c).unwrap();
            assert_eq!(r.histogram, reference.histogram);
            assert_eq!(
                r.sample_variance.to_bits(),
                reference.sample_variance.to_bits()
            );
        }
        for workers in [1, 3] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .unwrap();
            let r = pool.install(|| run_experiment(&base)).unwrap();
            assert_eq!(r.mean_length.to_bits(), reference.mean_length.to_bits());
            assert_eq!(r.histogram, reference.histogram);
        }
    }

    #[test]
    fn exhaustive_mode_reproduces_exact_mean() {
        let c = uniform(5, 2, 2, 0, 0).exhaustive().unwrap();
        assert_eq!(c.trials, 1024);
        let cmp = compare_exact_vs_mc(&c).unwrap();
        assert_eq!(cmp.eps_gamma, 0.0);
        assert!(cmp.eps_variance < 1e-12);
        let r = run_experiment(&c).unwrap();
        // the record itself keeps the unbiased estimate
        assert_relative_eq!(
            r.sample_variance,
            cmp.exact_variance * 1024.0 / 1023.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn n10_close_to_exact() {
        let r = run_experiment(&uniform(10, 2, 2, 100_000, 1)).unwrap();
        assert!((r.gamma_hat - 0.697843933).abs() < 0.01, "{}", r.gamma_hat);
    }

    #[test]
    fn consistency_against_exact_small_n() {
        // deviation below 3 * sqrt(var / trials) / n for almost all seeds
        let exact = exact_pair_stats(8, 2).unwrap();
        let trials = 20_000u64;
        let bound = 3.0 * (exact.variance_f64() / trials as f64).sqrt() / 8.0;
        let ok = (0..40)
            .filter(|&seed| {
                let r = run_experiment(&uniform(8, 2, 2, trials, seed)).unwrap();
                (r.gamma_hat - exact.gamma_f64()).abs() < bound
            })
            .count();
        assert!(ok >= 38, "{ok}/40 within 3 sd");
    }

    #[test]
    fn ci_half_width_scales_with_sqrt_trials() {
        let a = run_experiment(&uniform(20, 2, 2, 1_000, 4)).unwrap();
        let b = run_experiment(&uniform(20, 2, 2, 100_000, 4)).unwrap();
        let ratio = (a.mean_ci.1 - a.mean_ci.0) / (b.mean_ci.1 - b.mean_ci.0);
        assert!((ratio / 10.0 - 1.0).abs() < 0.15, "ratio {ratio}");
    }

    #[test]
    fn grouped_mode() {
        let c = uniform(12, 2, 2, 0, 9).grouped(16, 64);
        assert_eq!(c.trials, 1024);
        let r = run_experiment(&c).unwrap();
        let gv = r.grouped_variance.unwrap();
        assert!((gv - r.sample_variance).abs() < 0.3);
        assert_eq!(r.histogram.values().sum::<u64>(), 1024);
        // the same trials as a flat run with the same seed
        let flat = run_experiment(&uniform(12, 2, 2, 1024, 9)).unwrap();
        assert_eq!(flat.histogram, r.histogram);
    }

    #[test]
    fn config_validation() {
        assert!(run_experiment(&uniform(10, 1, 2, 10, 0)).is_err());
        assert!(run_experiment(&uniform(10, 2, 2, 1, 0)).is_err());
        assert!(run_experiment(&uniform(0, 2, 2, 10, 0)).is_err());
        let mut c = uniform(10, 2, 2, 10, 0).grouped(5, 2);
        c.trials = 11;
        assert!(run_experiment(&c).is_err());
        let mut c = uniform(50, 5, 2, 10, 0);
        c.cell_budget = 1000;
        assert!(matches!(run_experiment(&c), Err(LcsError::Resource { .. })));
    }

    #[test]
    fn multi_sequence_uses_exact_lengths() {
        let c = uniform(4, 3, 2, 0, 0).exhaustive().unwrap();
        let r = run_experiment(&c).unwrap();
        let exact = crate::exact::exact_k_stats(4, 3, 2).unwrap();
        assert_relative_eq!(r.mean_length, exact.mean(), max_relative = 1e-12);
    }

    #[test]
    fn predictor_values() {
        assert_relative_eq!(gamma_predictor(2, 2), 0.828427, epsilon = 1e-6);
        assert_relative_eq!(gamma_predictor(2, 8), 2.0 / (8f64.sqrt() + 1.0));
        assert_relative_eq!(gamma_predictor(2, 8), 0.52241, epsilon = 1e-5);
        for k in 2..10 {
            for q in 2..10 {
                assert!(gamma_predictor(k + 1, q) < gamma_predictor(k, q));
                assert!(gamma_predictor(k, q + 1) < gamma_predictor(k, q));
            }
        }
    }

    #[test]
    fn mainville_examples() {
        assert_eq!(mainville_index(&[0.5, 0.5]), 2);
        assert_eq!(mainville_index(&[0.9, 0.1]), 1);
        for q in 2..=64 {
            assert_eq!(
                mainville_index(Alphabet::uniform(q).unwrap().probs()),
                q,
                "q={q}"
            );
        }
    }

    fn synthetic(n: usize, variance: f64) -> EstimateRecord {
        let mut r = run_experiment(&ExperimentConfig::new(
            4,
            2,
            Alphabet::uniform(2).unwrap(),
            2,
            0,
        ))
        .unwrap();
        r.config.n = n;
        r.sample_variance = variance;
        r
    }

    #[test]
    fn variance_growth_fits() {
        let recs: Vec<_> = [100, 200, 400, 800]
            .iter()
            .map(|&n| synthetic(n, 4.0 * (n * n) as f64))
            .collect();
        let f = fit_variance_growth(&recs).unwrap();
        assert_relative_eq!(f.exponent, 2.0, epsilon = 1e-9);
        assert_relative_eq!(f.coefficient, 4.0, max_relative = 1e-9);
        assert_relative_eq!(f.r_squared, 1.0, epsilon = 1e-9);
        let recs: Vec<_> = [10, 30, 90]
            .iter()
            .map(|&n| synthetic(n, 3.0 * n as f64))
            .collect();
        assert_relative_eq!(
            fit_variance_growth(&recs).unwrap().exponent,
            1.0,
            epsilon = 1e-9
        );
        assert!(fit_variance_growth(&recs[..2]).is_err());
        let dup = vec![synthetic(10, 1.0), synthetic(10, 2.0), synthetic(20, 3.0)];
        assert!(fit_variance_growth(&dup).is_err());
    }

    #[test]
    fn sweep_p_points() {
        let template = uniform(200, 2, 2, 256, 77);
        let curve = sweep_p(&template, &[0.01, 0.25, 0.5]).unwrap();
        assert_eq!(curve.points.len(), 3);
        assert!(curve.points[0].record.gamma_hat > 0.97);
        // the p = 0.5 point is an ordinary uniform run with the derived seed
        let last = &curve.points[2].record;
        let mut again = template.clone();
        again.master_seed = derive_seed(77, 2);
        let uniform_run = run_experiment(&again).unwrap();
        assert_eq!(last.histogram, uniform_run.histogram);
        assert!(sweep_p(&template, &[0.6]).is_err());
        assert!(sweep_p(&template, &[0.0]).is_err());
        assert!(sweep_p(&template, &[0.3, 0.2]).is_err());
    }

    #[test]
    fn skew_is_symmetric_under_relabeling() {
        // (1-p, p) and (p, 1-p) give the same distribution of LCS lengths;
        // with shared streams the estimates agree within sampling noise
        let a = run_experiment(&ExperimentConfig::new(
            60,
            2,
            Alphabet::binary(0.2).unwrap(),
            4000,
            5,
        ))
        .unwrap();
        let b = run_experiment(&ExperimentConfig::new(
            60,
            2,
            Alphabet::binary(0.8).unwrap(),
            4000,
            6,
        ))
        .unwrap();
        assert!(
            (a.gamma_hat - b.gamma_hat).abs() < 0.01,
            "{} {}",
            a.gamma_hat,
            b.gamma_hat
        );
    }

    #[test]
    fn sweep_alphabet_points() {
        let template = uniform(1000, 2, 2, 24, 3);
        let curve = sweep_alphabet(&template, &[2, 4, 8, 16]).unwrap();
        let gammas: Vec<f64> = curve.points.iter().map(|p| p.record.gamma_hat).collect();
        assert!(gammas.windows(2).all(|w| w[1] < w[0]), "{gammas:?}");
        for p in &curve.points {
            assert_relative_eq!(p.scaled_gamma.unwrap(), p.record.gamma_hat * p.value.sqrt());
        }
        let mut again = template.clone();
        again.master_seed = derive_seed(3, 0);
        assert_eq!(
            run_experiment(&again).unwrap().histogram,
            curve.points[0].record.histogram
        );
        assert!(sweep_alphabet(&template, &[4, 2]).is_err());
        assert!(sweep_alphabet(&template, &[1, 2]).is_err());
    }

    #[test]
    fn sweep_csv_layout() {
        let curve = sweep_alphabet(&uniform(20, 2, 2, 8, 3), &[2, 3]).unwrap();
        let header = curve.csv_header();
        assert_eq!(header.iter().filter(|h| *h == "q").count(), 1);
        assert_eq!(header.last().unwrap(), "gamma_sqrt_q");
        let rows = curve.csv_rows();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.len() == header.len()));
    }
}
