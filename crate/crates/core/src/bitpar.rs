//! Bit-vector kernels for two-string LCS.
//!
//! The pattern string is laid out one bit per position. After consuming
//! `text[..j]`, bit `i` of the row vector is zero exactly when
//! `L[i + 1][j] = L[i][j] + 1`, so the LCS length is the number of zero bits
//! and each row step costs `O(|pattern| / 64)` word operations.

/// Per-symbol match masks of a pattern.
pub(crate) struct MatchMasks {
    words: usize,
    masks: Vec<u64>,
}

impl MatchMasks {
    pub(crate) fn new(pattern: &[u8], alphabet_size: usize) -> Self {
        let words = pattern.len().div_ceil(64);
        let mut masks = vec![0u64; alphabet_size * words];
        for (i, &s) in pattern.iter().enumerate() {
            masks[s as usize * words + i / 64] |= 1u64 << (i % 64);
        }
        MatchMasks { words, masks }
    }

    #[inline]
    pub(crate) fn row(&self, symbol: u8) -> &[u64] {
        let start = symbol as usize * self.words;
        &self.masks[start..start + self.words]
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    fn initial_row(&self) -> Vec<u64> {
        vec![u64::MAX; self.words]
    }
}

/// Advances the row vector by one text symbol with match mask `m`.
#[inline]
pub(crate) fn step(v: &mut [u64], m: &[u64]) {
    let mut carry = 0u64;
    for (vw, &mw) in v.iter_mut().zip(m) {
        let x = *vw;
        let u = x & mw;
        let (s1, c1) = x.overflowing_add(u);
        let (s2, c2) = s1.overflowing_add(carry);
        carry = (c1 | c2) as u64;
        // bits above the pattern length start at one and stay one
        *vw = s2 | (x - u);
    }
}

#[inline]
pub(crate) fn step_word(v: u64, m: u64) -> u64 {
    let u = v & m;
    v.wrapping_add(u) | (v - u)
}

fn zeros(v: &[u64]) -> usize {
    v.iter().map(|w| w.count_zeros() as usize).sum()
}

/// LCS length with the pattern taken from `pattern` and rows driven by `text`.
pub(crate) fn length_with_masks(masks: &MatchMasks, text: &[u8]) -> usize {
    if masks.words() == 1 {
        let mut v = u64::MAX;
        for &s in text {
            v = step_word(v, masks.row(s)[0]);
        }
        return v.count_zeros() as usize;
    }
    let mut v = masks.initial_row();
    for &s in text {
        step(&mut v, masks.row(s));
    }
    zeros(&v)
}

/// LCS length in memory linear in `min(|a|, |b|)`.
pub(crate) fn lcs2_length(a: &[u8], b: &[u8], alphabet_size: usize) -> usize {
    let (pattern, text) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if pattern.is_empty() {
        return 0;
    }
    let masks = MatchMasks::new(pattern, alphabet_size);
    length_with_masks(&masks, text)
}

/// Canonical LCS witness of `a` and `b`.
///
/// Equals the string read off by backtracking the full DP table from
/// `(|a|, |b|)`: take the diagonal on a match, otherwise step back in `a` when
/// that keeps the score, otherwise step back in `b`. Rows are recomputed from
/// checkpoints every `ceil(sqrt(|b|))` columns, so memory is
/// `O(|a| * sqrt(|b|) / 64)` words rather than `O(|a| * |b|)`.
pub(crate) fn lcs2_witness(a: &[u8], b: &[u8], alphabet_size: usize) -> Vec<u8> {
    let (m, n) = (a.len(), b.len());
    if m == 0 || n == 0 {
        return Vec::new();
    }
    let masks = MatchMasks::new(a, alphabet_size);
    let words = masks.words();
    let block = (n as f64).sqrt().ceil().max(1.0) as usize;

    let mut checkpoints: Vec<Vec<u64>> = Vec::with_capacity(n / block + 1);
    let mut v = masks.initial_row();
    checkpoints.push(v.clone());
    for (j, &s) in b.iter().enumerate() {
        step(&mut v, masks.row(s));
        if (j + 1) % block == 0 && j + 1 < n {
            checkpoints.push(v.clone());
        }
    }

    let mut out = Vec::new();
    let (mut i, mut j) = (m, n);
    let mut cols: Vec<u64> = Vec::with_capacity((block + 1) * words);
    while i > 0 && j > 0 {
        let start = (j - 1) / block * block;
        let mut cur = checkpoints[start / block].clone();
        cols.clear();
        cols.extend_from_slice(&cur);
        for &s in &b[start..j] {
            step(&mut cur, masks.row(s));
            cols.extend_from_slice(&cur);
        }
        while i > 0 && j > start {
            if a[i - 1] == b[j - 1] {
                out.push(a[i - 1]);
                i -= 1;
                j -= 1;
            } else {
                let row = &cols[(j - start) * words..(j - start + 1) * words];
                let same_above = (row[(i - 1) / 64] >> ((i - 1) % 64)) & 1 == 1;
                if same_above {
                    i -= 1;
                } else {
                    j -= 1;
                }
            }
        }
    }
    out.reverse();
    out
}
