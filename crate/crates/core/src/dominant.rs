//! Exact k-way LCS length by levelled dominant-point search.
//!
//! A state is the vector of prefix lengths consumed in each string by the
//! leftmost embedding of some common subsequence. Level `l` holds the states
//! reachable by common subsequences of length `l`; a state is dropped when
//! another state on the same level is componentwise no larger. The LCS length
//! is the last non-empty level. For short random strings the surviving sets
//! stay small, which makes this much cheaper than the full k-dimensional table.

const NONE: u32 = u32::MAX;

/// `next[s][sym * (len + 1) + p]` = one past the first occurrence of `sym`
/// at or after position `p`, or `NONE`.
pub(crate) fn next_tables(seqs: &[&[u8]], alphabet_size: usize) -> Vec<Vec<u32>> {
    seqs.iter()
        .map(|s| {
            let stride = s.len() + 1;
            let mut t = vec![NONE; alphabet_size * stride];
            for sym in 0..alphabet_size {
                let row = &mut t[sym * stride..(sym + 1) * stride];
                let mut next = NONE;
                for p in (0..=s.len()).rev() {
                    if p < s.len() && s[p] as usize == sym {
                        next = p as u32 + 1;
                    }
                    row[p] = next;
                }
            }
            t
        })
        .collect()
}

pub(crate) fn lcs_k_length(seqs: &[&[u8]], alphabet_size: usize) -> usize {
    let k = seqs.len();
    if k == 0 || seqs.iter().any(|s| s.is_empty()) {
        return 0;
    }
    let tables = next_tables(seqs, alphabet_size);
    let strides: Vec<usize> = seqs.iter().map(|s| s.len() + 1).collect();

    let mut level: Vec<u32> = vec![0; k];
    let mut candidates: Vec<u32> = Vec::new();
    let mut order: Vec<usize> = Vec::new();
    let mut depth = 0;
    loop {
        candidates.clear();
        for state in level.chunks_exact(k) {
            'sym: for sym in 0..alphabet_size {
                let base = candidates.len();
                for d in 0..k {
                    let nx = tables[d][sym * strides[d] + state[d] as usize];
                    if nx == NONE {
                        candidates.truncate(base);
                        continue 'sym;
                    }
                    candidates.push(nx);
                }
            }
        }
        if candidates.is_empty() {
            return depth;
        }
        depth += 1;

        let count = candidates.len() / k;
        order.clear();
        order.extend(0..count);
        let cand = &candidates;
        order.sort_unstable_by(|&x, &y| cand[x * k..(x + 1) * k].cmp(&cand[y * k..(y + 1) * k]));

        // Lexicographic order puts every dominator before the states it dominates.
        level.clear();
        for &idx in &order {
            let c = &candidates[idx * k..(idx + 1) * k];
            let dominated = level
                .chunks_exact(k)
                .any(|kept| kept.iter().zip(c).all(|(a, b)| a <= b));
            if !dominated {
                level.extend_from_slice(c);
            }
        }
    }
}
