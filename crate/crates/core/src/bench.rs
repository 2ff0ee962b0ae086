//! Performance-ratio benchmarking of the heuristics.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bitpar;
use crate::error::{LcsError, Result};
use crate::heuristics::{run_heuristic, upper_bound, Algorithm, HeuristicOutcome};
use crate::lcs::{dp_cells, lcs_k, DEFAULT_CELL_BUDGET};
use crate::seqgen::SequenceDataset;
use crate::sequence::Sequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    Exact,
    UpperBound,
}

impl fmt::Display for ReferenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReferenceKind::Exact => "exact",
            ReferenceKind::UpperBound => "upper_bound",
        })
    }
}

/// Reference length over heuristic length. A heuristic that returns nothing
/// against a positive reference gets `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Finite(f64),
    Infinite,
}

impl Ratio {
    pub fn new(reference: usize, length: usize) -> Self {
        match (reference, length) {
            (0, 0) => Ratio::Finite(1.0),
            (_, 0) => Ratio::Infinite,
            (r, l) => Ratio::Finite(r as f64 / l as f64),
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Ratio::Finite(v) => Some(v),
            Ratio::Infinite => None,
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(v) => write!(f, "{v}"),
            Ratio::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ratio::Finite(v) => s.serialize_f64(*v),
            Ratio::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmRatio {
    pub algorithm: Algorithm,
    pub ratio: Ratio,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeuristicReport {
    pub dataset_id: String,
    pub k: usize,
    pub n: usize,
    pub q: usize,
    pub reference_length: usize,
    pub reference_kind: ReferenceKind,
    /// The upper bound had to drop sequences to fit the cell budget.
    pub reference_reduced: bool,
    pub outcomes: Vec<HeuristicOutcome>,
    pub ratios: Vec<AlgorithmRatio>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub group_size: usize,
    pub algorithms: Vec<Algorithm>,
    pub reference: ReferenceKind,
    /// Deposition-extension window; `None` for the default.
    pub window: Option<usize>,
    pub max_dp_seqs: usize,
    pub cell_budget: u64,
}

impl BenchConfig {
    pub fn new(group_size: usize, reference: ReferenceKind) -> Self {
        BenchConfig {
            group_size,
            algorithms: Algorithm::ALL.to_vec(),
            reference,
            window: None,
            max_dp_seqs: 3,
            cell_budget: DEFAULT_CELL_BUDGET,
        }
    }

    /// Whether an exact reference fits the cell budget for groups of `n`-long strings.
    pub fn exact_feasible(&self, n: usize) -> bool {
        self.group_size <= 2
            || dp_cells(std::iter::repeat_n(n, self.group_size))
                .is_some_and(|c| c <= self.cell_budget)
    }
}

fn reference(group: &[Sequence], config: &BenchConfig) -> Result<(usize, bool)> {
    match config.reference {
        ReferenceKind::Exact if group.len() == 2 => Ok((
            bitpar::lcs2_length(
                group[0].symbols(),
                group[1].symbols(),
                group[0].alphabet_size(),
            ),
            false,
        )),
        ReferenceKind::Exact => Ok((lcs_k(group, config.cell_budget)?.length, false)),
        ReferenceKind::UpperBound => {
            let ub = upper_bound(group, config.max_dp_seqs, config.cell_budget)?;
            Ok((ub.length, ub.reduced))
        }
    }
}

pub fn evaluate_group(
    dataset_id: String,
    group: &[Sequence],
    config: &BenchConfig,
) -> Result<HeuristicReport> {
    let (reference_length, reference_reduced) = reference(group, config)?;
    let outcomes = config
        .algorithms
        .iter()
        .map(|&a| run_heuristic(a, group, config.window))
        .collect::<Result<Vec<_>>>()?;
    let ratios = outcomes
        .iter()
        .map(|o| AlgorithmRatio {
            algorithm: o.algorithm,
            ratio: Ratio::new(reference_length, o.length),
        })
        .collect();
    Ok(HeuristicReport {
        dataset_id,
        k: group.len(),
        n: group.iter().map(Sequence::len).max().unwrap_or(0),
        q: group[0].alphabet_size(),
        reference_length,
        reference_kind: config.reference,
        reference_reduced,
        outcomes,
        ratios,
    })
}

/// Splits the dataset into consecutive groups of `group_size` and evaluates
/// every algorithm on each. Group `g` is labelled `"{label}#{g}"`.
pub fn benchmark(
    dataset: &SequenceDataset,
    label: &str,
    config: &BenchConfig,
) -> Result<Vec<HeuristicReport>> {
    let k = config.group_size;
    if k < 2 {
        return Err(LcsError::invalid("group size must be at least 2"));
    }
    if config.algorithms.is_empty() {
        return Err(LcsError::invalid("no algorithms selected"));
    }
    if !dataset.sequences.len().is_multiple_of(k) {
        return Err(LcsError::invalid(format!(
            "{} sequences do not split into groups of {k}",
            dataset.sequences.len()
        )));
    }
    dataset
        .sequences
        .par_chunks(k)
        .enumerate()
        .map(|(g, group)| evaluate_group(format!("{label}#{g}"), group, config))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub groups: usize,
    /// Mean and sample variance over groups with a finite ratio.
    pub mean_ratio: f64,
    pub variance_ratio: f64,
    pub infinite_ratios: usize,
    pub mean_length: f64,
    pub all_valid: bool,
}

pub fn summarize(reports: &[HeuristicReport]) -> Vec<AlgorithmSummary> {
    let mut algorithms: Vec<Algorithm> = Vec::new();
    for r in reports {
        for o in &r.outcomes {
            if !algorithms.contains(&o.algorithm) {
                algorithms.push(o.algorithm);
            }
        }
    }
    algorithms
        .into_iter()
        .map(|alg| {
            let mut finite = Vec::new();
            let mut infinite_ratios = 0;
            let mut lengths = Vec::new();
            let mut all_valid = true;
            for r in reports {
                for (o, ratio) in r
                    .outcomes
                    .iter()
                    .zip(&r.ratios)
                    .filter(|(o, _)| o.algorithm == alg)
                {
                    lengths.push(o.length as f64);
                    all_valid &= o.valid;
                    match ratio.ratio.finite() {
                        Some(v) => finite.push(v),
                        None => infinite_ratios += 1,
                    }
                }
            }
            let mean = |v: &[f64]| {
                if v.is_empty() {
                    f64::NAN
                } else {
                    v.iter().sum::<f64>() / v.len() as f64
                }
            };
            let mean_ratio = mean(&finite);
            let variance_ratio = if finite.len() < 2 {
                0.0
            } else {
                finite.iter().map(|x| (x - mean_ratio).powi(2)).sum::<f64>()
                    / (finite.len() - 1) as f64
            };
            AlgorithmSummary {
                algorithm: alg,
                groups: lengths.len(),
                mean_ratio,
                variance_ratio,
                infinite_ratios,
                mean_length: mean(&lengths),
                all_valid,
            }
        })
        .collect()
}

/// CSV header for reports over `algorithms`.
pub fn report_csv_header(algorithms: &[Algorithm]) -> Vec<String> {
    let mut h: Vec<String> = [
        "dataset_id",
        "k",
        "n",
        "q",
        "reference_kind",
        "reference_length",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for a in algorithms {
        h.push(format!("{a}_length"));
        h.push(format!("{a}_ratio"));
        h.push(format!("{a}_valid"));
    }
    h
}

pub fn report_csv_row(report: &HeuristicReport) -> Vec<String> {
    let mut row = vec![
        report.dataset_id.clone(),
        report.k.to_string(),
        report.n.to_string(),
        report.q.to_string(),
        report.reference_kind.to_string(),
        report.reference_length.to_string(),
    ];
    for (o, r) in report.outcomes.iter().zip(&report.ratios) {
        row.push(o.length.to_string());
        row.push(r.ratio.to_string());
        row.push(o.valid.to_string());
    }
    row
}
