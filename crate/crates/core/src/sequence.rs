use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LcsError, Result};

/// Display characters for symbol indices: `0-9`, `a-z`, `A-Z`, then `+`, `/`.
pub const SYMBOL_TABLE: &[u8; 64] =
    b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ+/";

/// Largest alphabet representable in the text formats.
pub const MAX_DISPLAY_ALPHABET: usize = SYMBOL_TABLE.len();

/// Largest alphabet supported in memory (symbols are stored as `u8`).
pub const MAX_ALPHABET: usize = 256;

pub fn symbol_char(symbol: u8) -> Option<char> {
    SYMBOL_TABLE.get(symbol as usize).map(|&c| c as char)
}

pub fn symbol_index(c: char) -> Option<u8> {
    match c {
        '0'..='9' => Some(c as u8 - b'0'),
        'a'..='z' => Some(c as u8 - b'a' + 10),
        'A'..='Z' => Some(c as u8 - b'A' + 36),
        '+' => Some(62),
        '/' => Some(63),
        _ => None,
    }
}

/// A string over the alphabet `{0, .., alphabet_size - 1}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequence {
    symbols: Vec<u8>,
    alphabet_size: usize,
}

impl Sequence {
    pub fn new(symbols: Vec<u8>, alphabet_size: usize) -> Result<Self> {
        check_alphabet_size(alphabet_size)?;
        if let Some((pos, &s)) = symbols
            .iter()
            .enumerate()
            .find(|(_, &s)| s as usize >= alphabet_size)
        {
            return Err(LcsError::invalid(format!(
                "symbol {s} at position {pos} is outside an alphabet of size {alphabet_size}"
            )));
        }
        Ok(Sequence {
            symbols,
            alphabet_size,
        })
    }

    /// Builds a sequence without checking symbol bounds. Callers guarantee
    /// every symbol is below `alphabet_size`.
    pub(crate) fn from_raw(symbols: Vec<u8>, alphabet_size: usize) -> Self {
        debug_assert!(symbols.iter().all(|&s| (s as usize) < alphabet_size));
        Sequence {
            symbols,
            alphabet_size,
        }
    }

    /// Parses a string rendered with [`SYMBOL_TABLE`].
    pub fn parse(text: &str, alphabet_size: usize) -> Result<Self> {
        check_alphabet_size(alphabet_size)?;
        let symbols = text
            .chars()
            .enumerate()
            .map(|(pos, c)| match symbol_index(c) {
                Some(s) if (s as usize) < alphabet_size => Ok(s),
                _ => Err(LcsError::invalid(format!(
                    "character {c:?} at position {pos} is not in an alphabet of size {alphabet_size}"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Sequence {
            symbols,
            alphabet_size,
        })
    }

    pub fn empty(alphabet_size: usize) -> Self {
        Sequence {
            symbols: Vec::new(),
            alphabet_size,
        }
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Per-symbol occurrence counts, indexed by symbol.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.alphabet_size];
        for &s in &self.symbols {
            counts[s as usize] += 1;
        }
        counts
    }

    pub fn reversed(&self) -> Self {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Sequence::from_raw(symbols, self.alphabet_size)
    }

    /// Applies `perm[s]` to every symbol. `perm` must be a permutation of the alphabet.
    pub fn relabeled(&self, perm: &[u8]) -> Self {
        assert_eq!(perm.len(), self.alphabet_size);
        let symbols = self.symbols.iter().map(|&s| perm[s as usize]).collect();
        Sequence::from_raw(symbols, self.alphabet_size)
    }

    /// Renders with [`SYMBOL_TABLE`]; `None` when the alphabet is too large to display.
    pub fn render(&self) -> Option<String> {
        self.symbols.iter().map(|&s| symbol_char(s)).collect()
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.render() {
            Some(s) => write!(f, "Sequence({s:?}, q={})", self.alphabet_size),
            None => write!(f, "Sequence({:?}, q={})", self.symbols, self.alphabet_size),
        }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.render() {
            Some(s) => f.write_str(&s),
            None => {
                let parts: Vec<String> = self.symbols.iter().map(u8::to_string).collect();
                f.write_str(&parts.join(" "))
            }
        }
    }
}

pub(crate) fn check_alphabet_size(q: usize) -> Result<()> {
    if !(2..=MAX_ALPHABET).contains(&q) {
        return Err(LcsError::invalid(format!(
            "alphabet size must be in 2..={MAX_ALPHABET}, got {q}"
        )));
    }
    Ok(())
}

/// Checks that all sequences share one alphabet size and returns it.
pub(crate) fn common_alphabet(seqs: &[Sequence]) -> Result<usize> {
    let q = seqs
        .first()
        .map(Sequence::alphabet_size)
        .ok_or_else(|| LcsError::invalid("no sequences given"))?;
    if let Some(s) = seqs.iter().find(|s| s.alphabet_size() != q) {
        return Err(LcsError::invalid(format!(
            "alphabet size mismatch: {q} vs {}",
            s.alphabet_size()
        )));
    }
    Ok(q)
}
