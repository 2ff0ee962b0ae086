//! Exact, Monte Carlo and heuristic tools for the longest common subsequence
//! of random strings.

pub mod bench;
mod bitpar;
pub mod dataset_file;
mod dominant;
pub mod error;
pub mod exact;
pub mod heuristics;
pub mod lcs;
pub mod mc;
pub mod rng;
pub mod seqgen;
pub mod sequence;
pub mod stats;

pub use bench::{benchmark, summarize, BenchConfig, HeuristicReport, Ratio, ReferenceKind};
pub use error::{LcsError, Result};
pub use exact::{delta_concentration, exact_k_stats, exact_pair_stats, ExactOptions, ExactResult};
pub use heuristics::{run_heuristic, upper_bound, Algorithm, HeuristicOutcome, UpperBound};
pub use lcs::{is_common_subsequence, lcs2, lcs_k, lcs_k_dominant, LcsResult, DEFAULT_CELL_BUDGET};
pub use mc::{
    compare_exact_vs_mc, run_experiment, sweep_alphabet, sweep_p, EstimateRecord, ExperimentConfig,
    Grouping, SweepCurve,
};
pub use seqgen::{
    composition, coverage, enumerate_all, generate, Alphabet, DatasetSpec, SequenceDataset,
};
pub use sequence::Sequence;
