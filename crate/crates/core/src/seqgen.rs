//! Random sequence datasets, exhaustive enumeration, and dataset quality reports.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LcsError, Result};
use crate::rng::{stream, SymbolSampler};
use crate::sequence::{check_alphabet_size, Sequence};

/// Default cap on the number of items an exhaustive enumeration may produce.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 30;

/// Coverage above this fraction is labelled "high". The cut-off is a choice
/// of this tool, not a published threshold.
pub const HIGH_COVERAGE_THRESHOLD: f64 = 0.5;

/// Symbol set `{0, .., q-1}` with a probability per symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alphabet {
    probs: Vec<f64>,
}

impl Alphabet {
    pub fn uniform(q: usize) -> Result<Self> {
        check_alphabet_size(q)?;
        Ok(Alphabet {
            probs: vec![1.0 / q as f64; q],
        })
    }

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_alphabet_size(probs.len())?;
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(LcsError::invalid(format!(
                "probability {p} is not a non-negative number"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(LcsError::invalid(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(Alphabet { probs })
    }

    /// Binary alphabet where symbol 1 has probability `p`.
    pub fn binary(p: f64) -> Result<Self> {
        Alphabet::new(vec![1.0 - p, p])
    }

    pub fn size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.size() as f64;
        self.probs.iter().all(|&p| p == u)
    }

    pub(crate) fn sampler(&self) -> SymbolSampler {
        SymbolSampler::new(&self.probs)
    }

    /// Comma-joined shortest round-trip decimals.
    pub fn probs_string(&self) -> String {
        self.probs
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub alphabet: Alphabet,
    pub seq_length: usize,
    pub count: usize,
    pub master_seed: u64,
}

impl DatasetSpec {
    pub fn validate(&self) -> Result<()> {
        if self.seq_length == 0 {
            return Err(LcsError::invalid("sequence length must be at least 1"));
        }
        if self.count == 0 {
            return Err(LcsError::invalid(
                "dataset must contain at least 1 sequence",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceDataset {
    pub spec: DatasetSpec,
    pub sequences: Vec<Sequence>,
}

/// Draws one sequence of length `n` from stream `(master_seed, key)`.
pub(crate) fn draw(
    sampler: &SymbolSampler,
    q: usize,
    n: usize,
    master_seed: u64,
    key: u64,
) -> Sequence {
    let mut rng = stream(master_seed, key);
    let mut symbols = vec![0u8; n];
    sampler.fill(&mut rng, &mut symbols);
    Sequence::from_raw(symbols, q)
}

/// Sequence `i` comes from stream `(master_seed, i)`, so the output does not
/// depend on thread count and a larger `count` only appends sequences.
pub fn generate(spec: &DatasetSpec) -> Result<SequenceDataset> {
    spec.validate()?;
    let sampler = spec.alphabet.sampler();
    let q = spec.alphabet.size();
    let sequences = (0..spec.count as u64)
        .into_par_iter()
        .map(|i| draw(&sampler, q, spec.seq_length, spec.master_seed, i))
        .collect();
    Ok(SequenceDataset {
        spec: spec.clone(),
        sequences,
    })
}

/// All `q^n` strings of length `n` in lexicographic order.
pub struct AllSequences {
    q: usize,
    next: Option<Vec<u8>>,
}

impl Iterator for AllSequences {
    type Item = Sequence;

    fn next(&mut self) -> Option<Sequence> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut advanced = false;
        for d in (0..succ.len()).rev() {
            if (succ[d] as usize) + 1 < self.q {
                succ[d] += 1;
                advanced = true;
                break;
            }
            succ[d] = 0;
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(Sequence::from_raw(current, self.q))
    }
}

pub fn enumerate_all(q: usize, n: usize) -> Result<AllSequences> {
    enumerate_all_with_budget(q, n, DEFAULT_ENUMERATION_BUDGET)
}

pub fn enumerate_all_with_budget(q: usize, n: usize, budget: u64) -> Result<AllSequences> {
    check_alphabet_size(q)?;
    match checked_pow(q as u64, n) {
        Some(total) if total <= budget => {}
        total => {
            let required = total.map_or_else(|| format!("{q}^{n}"), |t| t.to_string());
            return Err(LcsError::resource(
                "sequences to enumerate",
                required,
                budget,
            ));
        }
    }
    Ok(AllSequences {
        q,
        next: Some(vec![0; n]),
    })
}

pub(crate) fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub distinct_count: usize,
    pub duplicate_count: usize,
    /// `q^n`, or `None` when it does not fit in 128 bits.
    pub total_possible: Option<u128>,
    /// `distinct / q^n`; 0 when `saturated`.
    pub coverage_fraction: f64,
    pub saturated: bool,
    pub high_coverage_threshold: f64,
    pub high_coverage: bool,
}

pub fn coverage(dataset: &SequenceDataset) -> CoverageReport {
    let distinct: HashSet<&[u8]> = dataset.sequences.iter().map(Sequence::symbols).collect();
    let distinct_count = distinct.len();
    let q = dataset.spec.alphabet.size() as u128;
    let total_possible = u32::try_from(dataset.spec.seq_length)
        .ok()
        .and_then(|n| q.checked_pow(n));
    let (coverage_fraction, saturated) = match total_possible {
        Some(t) => (distinct_count as f64 / t as f64, false),
        None => (0.0, true),
    };
    CoverageReport {
        distinct_count,
        duplicate_count: dataset.sequences.len() - distinct_count,
        total_possible,
        coverage_fraction,
        saturated,
        high_coverage_threshold: HIGH_COVERAGE_THRESHOLD,
        high_coverage: coverage_fraction >= HIGH_COVERAGE_THRESHOLD,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionReport {
    pub global_freq: Vec<f64>,
    /// `per_position_freq[i][s]`: share of sequences with symbol `s` at position `i`.
    pub per_position_freq: Vec<Vec<f64>>,
    /// Pearson statistic of pooled symbol counts against the spec probabilities.
    pub chi2_global: f64,
    pub chi2_positions: Vec<f64>,
    pub degrees_of_freedom: usize,
}

/// Pearson χ² of `counts` against `probs`; cells with zero expectation
/// contribute infinity when observed and nothing otherwise.
pub fn pearson_chi2(counts: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    counts
        .iter()
        .zip(probs)
        .map(|(&obs, &p)| {
            let expected = p * total as f64;
            if expected > 0.0 {
                let d = obs as f64 - expected;
                d * d / expected
            } else if obs > 0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .sum()
}

pub fn composition(dataset: &SequenceDataset) -> CompositionReport {
    let q = dataset.spec.alphabet.size();
    let n = dataset
        .sequences
        .iter()
        .map(Sequence::len)
        .max()
        .unwrap_or(0);
    let mut global = vec![0u64; q];
    let mut positional = vec![vec![0u64; q]; n];
    for s in &dataset.sequences {
        for (i, &c) in s.symbols().iter().enumerate() {
            global[c as usize] += 1;
            positional[i][c as usize] += 1;
        }
    }
    let freq = |counts: &[u64]| -> Vec<f64> {
        let total: u64 = counts.iter().sum();
        counts
            .iter()
            .map(|&c| {
                if total == 0 {
                    0.0
                } else {
                    c as f64 / total as f64
                }
            })
            .collect()
    };
    let probs = dataset.spec.alphabet.probs();
    CompositionReport {
        global_freq: freq(&global),
        per_position_freq: positional.iter().map(|c| freq(c)).collect(),
        chi2_global: pearson_chi2(&global, probs),
        chi2_positions: positional.iter().map(|c| pearson_chi2(c, probs)).collect(),
        degrees_of_freedom: probs.iter().filter(|&&p| p > 0.0).count().saturating_sub(1),
    }
}
