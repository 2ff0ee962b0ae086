//! Text format for persisted datasets.
//!
//! ```text
//! #lcslab v1 q=2 n=4 count=2 seed=7 probs=0.5,0.5
//! 0110
//! 1011
//! ```
//!
//! Symbols are rendered with [`SYMBOL_TABLE`](crate::sequence::SYMBOL_TABLE),
//! so the format covers alphabets of at most 64 symbols.

use std::fmt::Write as _;

use crate::error::{LcsError, Result};
use crate::seqgen::{Alphabet, DatasetSpec, SequenceDataset};
use crate::sequence::{symbol_char, symbol_index, Sequence, MAX_DISPLAY_ALPHABET};

pub const MAGIC: &str = "#lcslab v1";

pub fn header(spec: &DatasetSpec) -> String {
    format!(
        "{MAGIC} q={} n={} count={} seed={} probs={}",
        spec.alphabet.size(),
        spec.seq_length,
        spec.count,
        spec.master_seed,
        spec.alphabet.probs_string()
    )
}

pub fn write_dataset(dataset: &SequenceDataset) -> Result<String> {
    let q = dataset.spec.alphabet.size();
    if q > MAX_DISPLAY_ALPHABET {
        return Err(LcsError::invalid(format!(
            "alphabet of size {q} cannot be written; the text format holds at most {MAX_DISPLAY_ALPHABET} symbols"
        )));
    }
    let mut out = header(&dataset.spec);
    out.push('\n');
    for s in &dataset.sequences {
        out.extend(s.symbols().iter().map(|&c| symbol_char(c).unwrap_or('?')));
        out.push('\n');
    }
    Ok(out)
}

fn parse_header(line: &str) -> Result<DatasetSpec> {
    let rest = line
        .strip_prefix(MAGIC)
        .ok_or_else(|| LcsError::format(1, format!("header must start with {MAGIC:?}")))?;
    let (mut q, mut n, mut count, mut seed, mut probs) = (None, None, None, None, None);
    for token in rest.split_whitespace() {
        let (key, value) = token.split_once('=').ok_or_else(|| {
            LcsError::format(1, format!("header field {token:?} is not key=value"))
        })?;
        let bad = |what: &str| LcsError::format(1, format!("invalid {what} {value:?}"));
        match key {
            "q" => q = Some(value.parse::<usize>().map_err(|_| bad("q"))?),
            "n" => n = Some(value.parse::<usize>().map_err(|_| bad("n"))?),
            "count" => count = Some(value.parse::<usize>().map_err(|_| bad("count"))?),
            "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad("seed"))?),
            "probs" => {
                probs = Some(
                    value
                        .split(',')
                        .map(|p| p.parse::<f64>())
                        .collect::<std::result::Result<Vec<f64>, _>>()
                        .map_err(|_| bad("probs"))?,
                )
            }
            other => {
                return Err(LcsError::format(
                    1,
                    format!("unknown header field {other:?}"),
                ))
            }
        }
    }
    let missing = |f: &str| LcsError::format(1, format!("header is missing {f}="));
    let q = q.ok_or_else(|| missing("q"))?;
    let probs = probs.ok_or_else(|| missing("probs"))?;
    if probs.len() != q {
        return Err(LcsError::format(
            1,
            format!("q={q} but {} probabilities given", probs.len()),
        ));
    }
    if q > MAX_DISPLAY_ALPHABET {
        return Err(LcsError::format(
            1,
            format!("q={q} exceeds {MAX_DISPLAY_ALPHABET}"),
        ));
    }
    let alphabet = Alphabet::new(probs).map_err(|e| LcsError::format(1, e.to_string()))?;
    let spec = DatasetSpec {
        alphabet,
        seq_length: n.ok_or_else(|| missing("n"))?,
        count: count.ok_or_else(|| missing("count"))?,
        master_seed: seed.ok_or_else(|| missing("seed"))?,
    };
    spec.validate()
        .map_err(|e| LcsError::format(1, e.to_string()))?;
    Ok(spec)
}

/// Parses a dataset; errors carry the 1-based line number.
pub fn parse_dataset(text: &str) -> Result<SequenceDataset> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines
        .next()
        .ok_or_else(|| LcsError::format(1, "empty file"))?;
    let spec = parse_header(first.trim_end())?;
    let q = spec.alphabet.size();
    let mut sequences = Vec::with_capacity(spec.count);
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        let mut symbols = Vec::with_capacity(line.len());
        for (pos, c) in line.chars().enumerate() {
            match symbol_index(c) {
                Some(s) if (s as usize) < q => symbols.push(s),
                _ => {
                    return Err(LcsError::format(
                        line_no,
                        format!(
                            "character {c:?} at column {} is outside the alphabet of size {q}",
                            pos + 1
                        ),
                    ))
                }
            }
        }
        if symbols.len() != spec.seq_length {
            return Err(LcsError::format(
                line_no,
                format!(
                    "sequence has length {}, header says n={}",
                    symbols.len(),
                    spec.seq_length
                ),
            ));
        }
        sequences.push(Sequence::from_raw(symbols, q));
    }
    if sequences.len() != spec.count {
        let mut msg = String::new();
        let _ = write!(
            msg,
            "header says count={} but {} sequences follow",
            spec.count,
            sequences.len()
        );
        return Err(LcsError::format(1, msg));
    }
    Ok(SequenceDataset { spec, sequences })
}
