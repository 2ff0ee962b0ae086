//! Exact LCS of two or more sequences.

use serde::{Deserialize, Serialize};

use crate::bitpar;
use crate::dominant;
use crate::error::{LcsError, Result};
use crate::sequence::{common_alphabet, Sequence};

/// Default cap on the number of cells of a k-dimensional DP table.
pub const DEFAULT_CELL_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcsResult {
    pub length: usize,
    pub witness: Option<Sequence>,
}

/// LCS of two sequences.
///
/// Length-only mode runs a bit-vector DP in memory proportional to the
/// shorter input. With `want_witness` the canonical witness is returned: the
/// one found by backtracking from the end preferring matches, then steps that
/// consume from `a`.
pub fn lcs2(a: &Sequence, b: &Sequence, want_witness: bool) -> Result<LcsResult> {
    if a.alphabet_size() != b.alphabet_size() {
        return Err(LcsError::invalid(format!(
            "alphabet size mismatch: {} vs {}",
            a.alphabet_size(),
            b.alphabet_size()
        )));
    }
    let q = a.alphabet_size();
    if want_witness {
        let w = bitpar::lcs2_witness(a.symbols(), b.symbols(), q);
        Ok(LcsResult {
            length: w.len(),
            witness: Some(Sequence::from_raw(w, q)),
        })
    } else {
        Ok(LcsResult {
            length: bitpar::lcs2_length(a.symbols(), b.symbols(), q),
            witness: None,
        })
    }
}

/// Number of cells of the k-dimensional table for these sequences, or `None`
/// on overflow.
pub fn dp_cells(lengths: impl IntoIterator<Item = usize>) -> Option<u64> {
    lengths
        .into_iter()
        .try_fold(1u64, |acc, len| acc.checked_mul(len as u64 + 1))
}

fn check_k(seqs: &[Sequence]) -> Result<usize> {
    if seqs.len() < 2 {
        return Err(LcsError::invalid(format!(
            "need at least 2 sequences, got {}",
            seqs.len()
        )));
    }
    common_alphabet(seqs)
}

/// Exact LCS length of `k >= 2` sequences by the k-dimensional recurrence.
///
/// Refuses when the table would hold more than `cell_budget` cells.
pub fn lcs_k(seqs: &[Sequence], cell_budget: u64) -> Result<LcsResult> {
    check_k(seqs)?;
    let cells = dp_cells(seqs.iter().map(Sequence::len));
    match cells {
        Some(c) if c <= cell_budget => {}
        _ => {
            let required = cells.map_or_else(|| "more than 2^64".to_string(), |c| c.to_string());
            return Err(LcsError::resource(
                "k-way DP table cells",
                required,
                cell_budget,
            ));
        }
    }
    let slices: Vec<&[u8]> = seqs.iter().map(Sequence::symbols).collect();
    Ok(LcsResult {
        length: table_length(&slices),
        witness: None,
    })
}

fn table_length(seqs: &[&[u8]]) -> usize {
    let k = seqs.len();
    let dims: Vec<usize> = seqs.iter().map(|s| s.len() + 1).collect();
    let mut strides = vec![1usize; k];
    for d in (0..k - 1).rev() {
        strides[d] = strides[d + 1] * dims[d + 1];
    }
    let total: usize = dims.iter().product();
    let diag: usize = strides.iter().sum();
    let mut table = vec![0u32; total];
    let mut coord = vec![0usize; k];
    for idx in 0..total {
        if coord.iter().all(|&c| c > 0) {
            let first = seqs[0][coord[0] - 1];
            let all_match = (1..k).all(|d| seqs[d][coord[d] - 1] == first);
            table[idx] = if all_match {
                table[idx - diag] + 1
            } else {
                strides.iter().map(|&s| table[idx - s]).max().unwrap_or(0)
            };
        }
        for d in (0..k).rev() {
            coord[d] += 1;
            if coord[d] < dims[d] {
                break;
            }
            coord[d] = 0;
        }
    }
    table[total - 1] as usize
}

/// Exact LCS length of `k >= 2` sequences by dominant-point search.
///
/// Agrees with [`lcs_k`] everywhere but needs no table; its cost grows with
/// the number of non-dominated prefix states instead of the product of lengths.
pub fn lcs_k_dominant(seqs: &[Sequence]) -> Result<usize> {
    let q = check_k(seqs)?;
    let slices: Vec<&[u8]> = seqs.iter().map(Sequence::symbols).collect();
    Ok(dominant::lcs_k_length(&slices, q))
}

/// Exact length on raw symbol slices, picking the cheapest engine.
pub(crate) fn exact_length_raw(seqs: &[&[u8]], alphabet_size: usize) -> usize {
    match seqs.len() {
        0 | 1 => seqs.first().map_or(0, |s| s.len()),
        2 => bitpar::lcs2_length(seqs[0], seqs[1], alphabet_size),
        _ => dominant::lcs_k_length(seqs, alphabet_size),
    }
}

/// Whether `candidate` embeds left to right in every sequence.
pub fn is_common_subsequence(candidate: &Sequence, seqs: &[Sequence]) -> bool {
    seqs.iter()
        .all(|s| embeds(candidate.symbols(), s.symbols()))
}

pub(crate) fn embeds(needle: &[u8], haystack: &[u8]) -> bool {
    let mut it = haystack.iter();
    needle.iter().all(|c| it.any(|h| h == c))
}
