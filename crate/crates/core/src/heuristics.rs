//! Multi-sequence LCS heuristics and the subset upper bound.
//!
//! All heuristics are deterministic: ties always go to the lowest index.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bitpar;
use crate::dominant::next_tables;
use crate::error::{LcsError, Result};
use crate::lcs::{dp_cells, is_common_subsequence, lcs_k};
use crate::sequence::{common_alphabet, Sequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    LongRun,
    Greedy,
    Tournament,
    DepositionExtension,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::DepositionExtension,
        Algorithm::LongRun,
        Algorithm::Greedy,
        Algorithm::Tournament,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::LongRun => "long_run",
            Algorithm::Greedy => "greedy",
            Algorithm::Tournament => "tournament",
            Algorithm::DepositionExtension => "deposition_extension",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = LcsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "long_run" | "longrun" => Ok(Algorithm::LongRun),
            "greedy" => Ok(Algorithm::Greedy),
            "tournament" => Ok(Algorithm::Tournament),
            "deposition_extension" | "dea" => Ok(Algorithm::DepositionExtension),
            other => Err(LcsError::invalid(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Window used by deposition-extension when none is given: `max(2, ceil(q/2))`.
pub fn default_window(alphabet_size: usize) -> usize {
    alphabet_size.div_ceil(2).max(2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeuristicOutcome {
    pub algorithm: Algorithm,
    pub result: Sequence,
    pub length: usize,
    /// Whether `result` is a common subsequence of the inputs.
    pub valid: bool,
    pub elapsed_seconds: f64,
}

fn require(seqs: &[Sequence], min_k: usize) -> Result<usize> {
    if seqs.len() < min_k {
        return Err(LcsError::invalid(format!(
            "need at least {min_k} sequences, got {}",
            seqs.len()
        )));
    }
    common_alphabet(seqs)
}

/// Longest single-symbol string common to all inputs.
pub fn long_run(seqs: &[Sequence]) -> Result<Sequence> {
    let q = require(seqs, 1)?;
    let mut best = (0usize, 0u8);
    for sym in 0..q {
        let m = seqs
            .iter()
            .map(|s| s.symbols().iter().filter(|&&c| c as usize == sym).count())
            .min()
            .unwrap_or(0);
        if m > best.0 {
            best = (m, sym as u8);
        }
    }
    Ok(Sequence::from_raw(vec![best.1; best.0], q))
}

/// Repeatedly merges the pair with the longest pairwise LCS into its
/// canonical witness until one string is left.
pub fn greedy(seqs: &[Sequence]) -> Result<Sequence> {
    let q = require(seqs, 2)?;
    let mut pool: Vec<Vec<u8>> = seqs.iter().map(|s| s.symbols().to_vec()).collect();
    let mut lengths: Vec<Vec<usize>> = vec![vec![0; pool.len()]; pool.len()];
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            lengths[i][j] = bitpar::lcs2_length(&pool[i], &pool[j], q);
        }
    }
    while pool.len() > 1 {
        let mut best = (0, 1);
        for i in 0..pool.len() {
            for j in i + 1..pool.len() {
                if lengths[i][j] > lengths[best.0][best.1] {
                    best = (i, j);
                }
            }
        }
        let (i, j) = best;
        pool[i] = bitpar::lcs2_witness(&pool[i], &pool[j], q);
        pool.remove(j);
        lengths.remove(j);
        for row in lengths.iter_mut() {
            row.remove(j);
        }
        // only pairs touching the merged string change
        for other in 0..pool.len() {
            if other != i {
                let (lo, hi) = (other.min(i), other.max(i));
                lengths[lo][hi] = bitpar::lcs2_length(&pool[lo], &pool[hi], q);
            }
        }
    }
    Ok(Sequence::from_raw(pool.pop().unwrap_or_default(), q))
}

/// Bracket rounds: adjacent pairs merge into their canonical witness, an odd
/// leftover passes through, until one string is left.
pub fn tournament(seqs: &[Sequence]) -> Result<Sequence> {
    let q = require(seqs, 2)?;
    let mut round: Vec<Vec<u8>> = seqs.iter().map(|s| s.symbols().to_vec()).collect();
    while round.len() > 1 {
        round = round
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => bitpar::lcs2_witness(a, b, q),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    Ok(Sequence::from_raw(round.pop().unwrap_or_default(), q))
}

/// Scans the regions `[start_s, end_s)` with one cursor per string. At each
/// step it looks for a symbol occurring in every string within the next
/// `window` unread positions, keeps the one whose largest cursor advance is
/// smallest (lowest symbol on ties) and moves every cursor past it. When no
/// symbol qualifies, all cursors skip `window` positions.
fn deposit(
    seqs: &[&[u8]],
    tables: &[Vec<u32>],
    q: usize,
    starts: &[usize],
    ends: &[usize],
    window: usize,
) -> Vec<(u8, Vec<usize>)> {
    let k = seqs.len();
    let mut cursors = starts.to_vec();
    let mut out = Vec::new();
    let mut positions = vec![0usize; k];
    let mut best_positions = vec![0usize; k];
    while (0..k).all(|s| cursors[s] < ends[s]) {
        let mut best: Option<(usize, u8)> = None;
        'sym: for sym in 0..q {
            let mut advance = 0;
            for s in 0..k {
                let stride = seqs[s].len() + 1;
                let next = tables[s][sym * stride + cursors[s]];
                let limit = ends[s].min(cursors[s].saturating_add(window));
                if next == u32::MAX || next as usize > limit {
                    continue 'sym;
                }
                positions[s] = next as usize - 1;
                advance = advance.max(next as usize - cursors[s]);
            }
            if best.is_none_or(|(a, _)| advance < a) {
                best = Some((advance, sym as u8));
                best_positions.copy_from_slice(&positions);
            }
        }
        match best {
            Some((_, sym)) => {
                for s in 0..k {
                    cursors[s] = best_positions[s] + 1;
                }
                out.push((sym, best_positions.clone()));
            }
            None => {
                for c in cursors.iter_mut() {
                    *c = c.saturating_add(window);
                }
            }
        }
    }
    out
}

/// Deposition-extension heuristic.
///
/// Deposition runs the windowed scan over whole strings. Extension then
/// fills each gap between consecutive deposited symbols (and before the first
/// and after the last) with an unbounded-window scan over the unread regions.
pub fn deposition_extension(seqs: &[Sequence], window: usize) -> Result<Sequence> {
    let q = require(seqs, 2)?;
    if window == 0 {
        return Err(LcsError::invalid("window must be positive"));
    }
    let slices: Vec<&[u8]> = seqs.iter().map(Sequence::symbols).collect();
    let tables = next_tables(&slices, q);
    let zeros = vec![0; slices.len()];
    let lens: Vec<usize> = slices.iter().map(|s| s.len()).collect();
    let skeleton = deposit(&slices, &tables, q, &zeros, &lens, window);

    let mut out = Vec::new();
    let fill_gap = |starts: &[usize], ends: &[usize], out: &mut Vec<u8>| {
        let fill = deposit(&slices, &tables, q, starts, ends, usize::MAX);
        out.extend(fill.iter().map(|(s, _)| *s));
    };
    let mut starts = zeros;
    for (sym, pos) in &skeleton {
        fill_gap(&starts, pos, &mut out);
        out.push(*sym);
        starts = pos.iter().map(|p| p + 1).collect();
    }
    fill_gap(&starts, &lens, &mut out);
    Ok(Sequence::from_raw(out, q))
}

pub fn run_algorithm(
    algorithm: Algorithm,
    seqs: &[Sequence],
    window: Option<usize>,
) -> Result<Sequence> {
    match algorithm {
        Algorithm::LongRun => long_run(seqs),
        Algorithm::Greedy => greedy(seqs),
        Algorithm::Tournament => tournament(seqs),
        Algorithm::DepositionExtension => {
            let q = require(seqs, 2)?;
            deposition_extension(seqs, window.unwrap_or_else(|| default_window(q)))
        }
    }
}

/// Runs one heuristic, timing it and checking its output.
pub fn run_heuristic(
    algorithm: Algorithm,
    seqs: &[Sequence],
    window: Option<usize>,
) -> Result<HeuristicOutcome> {
    let started = Instant::now();
    let result = run_algorithm(algorithm, seqs, window)?;
    let elapsed_seconds = started.elapsed().as_secs_f64();
    Ok(HeuristicOutcome {
        algorithm,
        length: result.len(),
        valid: is_common_subsequence(&result, seqs),
        result,
        elapsed_seconds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperBound {
    pub length: usize,
    /// Indices of the sequences whose exact LCS gave the bound.
    pub selected: Vec<usize>,
    /// Set when sequences were dropped to fit the cell budget.
    pub reduced: bool,
}

/// Upper bound on the LCS length of the whole set from the exact LCS of a
/// symbol-rich subset.
///
/// Selection `i` is the not-yet-chosen sequence with the most occurrences of
/// symbol `σ_i`; `min(q, max_dp_seqs, k)` sequences are chosen. Symbols are
/// taken in index order when all of them are used, otherwise by descending
/// global frequency. If the DP table exceeds `cell_budget`, the selection for
/// the least frequent symbol is dropped first, down to two sequences.
pub fn upper_bound(seqs: &[Sequence], max_dp_seqs: usize, cell_budget: u64) -> Result<UpperBound> {
    let q = require(seqs, 2)?;
    let k = seqs.len();
    let counts: Vec<Vec<usize>> = seqs.iter().map(Sequence::counts).collect();
    let global: Vec<usize> = (0..q).map(|s| counts.iter().map(|c| c[s]).sum()).collect();
    let wanted = q.min(max_dp_seqs.max(2)).min(k);

    let mut symbols: Vec<usize> = (0..q).collect();
    if wanted < q {
        symbols.sort_by(|&a, &b| global[b].cmp(&global[a]).then(a.cmp(&b)));
    }
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(wanted);
    for &sym in &symbols {
        if chosen.len() == wanted {
            break;
        }
        let pick = (0..k)
            .filter(|i| !chosen.iter().any(|&(_, c)| c == *i))
            .max_by(|&a, &b| counts[a][sym].cmp(&counts[b][sym]).then(b.cmp(&a)));
        if let Some(idx) = pick {
            chosen.push((sym, idx));
        }
    }

    let mut reduced = false;
    while chosen.len() > 2
        && dp_cells(chosen.iter().map(|&(_, i)| seqs[i].len())).is_none_or(|c| c > cell_budget)
    {
        let drop = (0..chosen.len())
            .min_by(|&a, &b| {
                let (sa, sb) = (chosen[a].0, chosen[b].0);
                global[sa].cmp(&global[sb]).then(sb.cmp(&sa))
            })
            .expect("non-empty selection");
        chosen.remove(drop);
        reduced = true;
    }

    let mut selected: Vec<usize> = chosen.iter().map(|&(_, i)| i).collect();
    selected.sort_unstable();
    let subset: Vec<Sequence> = selected.iter().map(|&i| seqs[i].clone()).collect();
    let length = if subset.len() == 2 {
        bitpar::lcs2_length(subset[0].symbols(), subset[1].symbols(), q)
    } else {
        lcs_k(&subset, cell_budget)?.length
    };
    // an unselected sequence may be shorter than the subset's LCS
    let shortest = seqs.iter().map(Sequence::len).min().unwrap_or(0);
    let length = length.min(shortest);
    Ok(UpperBound {
        length,
        selected,
        reduced,
    })
}
