//! Exact LCS length distributions by exhaustive enumeration.
//!
//! For pairs, the first string fixes the bit-parallel match masks and the
//! second string is enumerated depth-first as a trie, so every prefix row is
//! computed once. Binary pairs are further reduced by the order-4 group
//! generated by complementing both strings and reversing both strings: only
//! the smallest member of each first-string orbit is visited, weighted by the
//! orbit size.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitpar::step_word;
use crate::error::{LcsError, Result};
use crate::lcs::{lcs_k, DEFAULT_CELL_BUDGET};
use crate::seqgen::{checked_pow, DEFAULT_ENUMERATION_BUDGET};
use crate::sequence::{check_alphabet_size, Sequence};

/// Decimal places used when rendering exact rationals.
pub const DECIMAL_PLACES: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Maximum number of tuples actually evaluated (after symmetry reduction).
    pub budget: u64,
    /// Use the complement/reverse reduction for binary pairs.
    pub symmetry: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            budget: DEFAULT_ENUMERATION_BUDGET,
            symmetry: true,
        }
    }
}

/// Exact distribution of the LCS length over all `q^(k n)` tuples.
///
/// Variance is the population variance over all tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactResult {
    pub n: usize,
    pub k: usize,
    pub q: usize,
    /// `q^(k n)`.
    pub total: u128,
    pub sum_length: u128,
    pub sum_sq_length: u128,
    pub mean_length: String,
    pub gamma: String,
    pub variance: String,
    /// `histogram[l]` = number of tuples whose LCS has length `l`.
    pub histogram: Vec<u128>,
}

impl ExactResult {
    pub fn from_histogram(n: usize, k: usize, q: usize, histogram: Vec<u128>) -> Self {
        let total: u128 = histogram.iter().sum();
        let sum_length: u128 = histogram
            .iter()
            .enumerate()
            .map(|(l, &c)| l as u128 * c)
            .sum();
        let sum_sq_length: u128 = histogram
            .iter()
            .enumerate()
            .map(|(l, &c)| (l * l) as u128 * c)
            .sum();
        let mut r = ExactResult {
            n,
            k,
            q,
            total,
            sum_length,
            sum_sq_length,
            mean_length: String::new(),
            gamma: String::new(),
            variance: String::new(),
            histogram,
        };
        let (mn, md) = r.mean_ratio();
        r.mean_length = decimal(mn, md, DECIMAL_PLACES);
        r.gamma = decimal(mn, md * n.max(1) as u128, DECIMAL_PLACES);
        let (vn, vd) = r.variance_ratio();
        r.variance = decimal(vn, vd, DECIMAL_PLACES);
        r
    }

    /// Mean as an exact fraction `(numerator, denominator)`.
    pub fn mean_ratio(&self) -> (u128, u128) {
        (self.sum_length, self.total)
    }

    /// Population variance as an exact fraction.
    pub fn variance_ratio(&self) -> (u128, u128) {
        let num = self.total * self.sum_sq_length - self.sum_length * self.sum_length;
        (num, self.total * self.total)
    }

    pub fn mean(&self) -> f64 {
        self.sum_length as f64 / self.total as f64
    }

    pub fn gamma_f64(&self) -> f64 {
        self.mean() / self.n as f64
    }

    pub fn variance_f64(&self) -> f64 {
        let (num, den) = self.variance_ratio();
        num as f64 / den as f64
    }

    /// Mean rendered to `places` decimals, rounded half up.
    pub fn mean_decimal(&self, places: u32) -> String {
        let (num, den) = self.mean_ratio();
        decimal(num, den, places)
    }

    pub fn gamma_decimal(&self, places: u32) -> String {
        let (num, den) = self.mean_ratio();
        decimal(num, den * self.n as u128, places)
    }

    pub fn variance_decimal(&self, places: u32) -> String {
        let (num, den) = self.variance_ratio();
        decimal(num, den, places)
    }

    pub const CSV_HEADER: [&'static str; 7] =
        ["n", "k", "q", "mean", "gamma", "variance", "histogram"];

    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.k.to_string(),
            self.q.to_string(),
            trim_decimal(&self.mean_length),
            trim_decimal(&self.gamma),
            trim_decimal(&self.variance),
            self.histogram
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(l, c)| format!("{l}:{c}"))
                .collect::<Vec<_>>()
                .join(";"),
        ]
    }
}

/// `num / den` to `places` decimals, rounded half up, by long division.
pub fn decimal(num: u128, den: u128, places: u32) -> String {
    assert!(den > 0, "zero denominator");
    let int_part = num / den;
    let mut rem = num % den;
    let mut digits: Vec<u8> = Vec::with_capacity(places as usize);
    for _ in 0..places {
        rem *= 10;
        digits.push((rem / den) as u8);
        rem %= den;
    }
    let mut int_part = int_part;
    if rem * 2 >= den {
        let mut carry = true;
        for d in digits.iter_mut().rev() {
            if *d == 9 {
                *d = 0;
            } else {
                *d += 1;
                carry = false;
                break;
            }
        }
        if carry {
            int_part += 1;
        }
    }
    if places == 0 {
        return int_part.to_string();
    }
    let frac: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
    format!("{int_part}.{frac}")
}

/// Drops trailing zeros (and a trailing point) from a rendered decimal.
pub fn trim_decimal(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn budget_error(required: impl ToString, budget: u64) -> LcsError {
    LcsError::resource("tuples to enumerate", required, budget)
        .with_hint("use Monte Carlo estimation for this size")
}

/// Number of first-string orbits under the complement/reverse group (Burnside).
fn binary_orbit_count(n: usize) -> u64 {
    let all = 1u64 << n;
    let rev_fixed = 1u64 << n.div_ceil(2);
    let comp_rev_fixed = if n.is_multiple_of(2) {
        1u64 << (n / 2)
    } else {
        0
    };
    let comp_fixed = if n == 0 { 1 } else { 0 };
    (all + comp_fixed + rev_fixed + comp_rev_fixed) / 4
}

/// Smallest member of the orbit of `a`, and the orbit size.
fn binary_orbit(a: u64, n: usize) -> (u64, u64) {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let rev = |x: u64| {
        if n == 0 {
            0
        } else {
            x.reverse_bits() >> (64 - n)
        }
    };
    let mut images = [a, !a & full, rev(a), !rev(a) & full];
    images.sort_unstable();
    let distinct = 1 + images.windows(2).filter(|w| w[0] != w[1]).count();
    (images[0], distinct as u64)
}

/// Adds `weight` to `hist[lcs(a, b)]` for every `b` of length `n`.
fn accumulate_all_b(masks: &[u64], n: usize, weight: u128, hist: &mut [u128]) {
    fn dfs(v: u64, depth: usize, masks: &[u64], n: usize, weight: u128, hist: &mut [u128]) {
        if depth == n {
            // bits above n stay one, so zeros count only real positions
            hist[v.count_zeros() as usize] += weight;
            return;
        }
        for &m in masks {
            dfs(step_word(v, m), depth + 1, masks, n, weight, hist);
        }
    }
    dfs(u64::MAX, 0, masks, n, weight, hist);
}

fn merge(mut a: Vec<u128>, b: Vec<u128>) -> Vec<u128> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Exact statistics of `|LCS|` over all ordered pairs of length-`n` strings.
pub fn exact_pair_stats(n: usize, q: usize) -> Result<ExactResult> {
    exact_pair_stats_with(n, q, ExactOptions::default())
}

pub fn exact_pair_stats_with(n: usize, q: usize, opts: ExactOptions) -> Result<ExactResult> {
    check_alphabet_size(q)?;
    if n == 0 {
        return Err(LcsError::invalid("sequence length must be at least 1"));
    }
    let strings = checked_pow(q as u64, n).filter(|_| n <= 64);
    let reduce = opts.symmetry && q == 2;
    let firsts = if reduce {
        strings.map(|_| binary_orbit_count(n))
    } else {
        strings
    };
    let evaluated = firsts.zip(strings).and_then(|(f, s)| f.checked_mul(s));
    match evaluated {
        Some(e) if e <= opts.budget => {}
        Some(e) => return Err(budget_error(e, opts.budget)),
        None => return Err(budget_error(format!("{q}^{}", 2 * n), opts.budget)),
    }
    let strings = strings.unwrap_or(0);

    let histogram = (0..strings)
        .into_par_iter()
        .fold(
            || vec![0u128; n + 1],
            |mut hist, index| {
                let digits = digits_of(index, q, n);
                let weight = if reduce {
                    let bits = digits
                        .iter()
                        .enumerate()
                        .fold(0u64, |acc, (i, &d)| acc | ((d as u64) << i));
                    let (rep, size) = binary_orbit(bits, n);
                    if rep != bits {
                        return hist;
                    }
                    size as u128
                } else {
                    1
                };
                let mut masks = vec![0u64; q];
                for (i, &d) in digits.iter().enumerate() {
                    masks[d as usize] |= 1u64 << i;
                }
                accumulate_all_b(&masks, n, weight, &mut hist);
                hist
            },
        )
        .reduce(|| vec![0u128; n + 1], merge);
    Ok(ExactResult::from_histogram(n, 2, q, histogram))
}

/// Base-`q` digits of `index`, least significant first, padded to `n`.
fn digits_of(mut index: u64, q: usize, n: usize) -> Vec<u8> {
    let mut d = vec![0u8; n];
    for slot in d.iter_mut() {
        *slot = (index % q as u64) as u8;
        index /= q as u64;
    }
    d
}

/// Exact statistics over all `k`-tuples of length-`n` strings.
pub fn exact_k_stats(n: usize, k: usize, q: usize) -> Result<ExactResult> {
    exact_k_stats_with(n, k, q, ExactOptions::default())
}

pub fn exact_k_stats_with(n: usize, k: usize, q: usize, opts: ExactOptions) -> Result<ExactResult> {
    if k < 2 {
        return Err(LcsError::invalid(format!("need k >= 2, got {k}")));
    }
    if k == 2 {
        return exact_pair_stats_with(n, q, opts);
    }
    check_alphabet_size(q)?;
    if n == 0 {
        return Err(LcsError::invalid("sequence length must be at least 1"));
    }
    let total = match checked_pow(q as u64, k * n) {
        Some(t) if t <= opts.budget => t,
        Some(t) => return Err(budget_error(t, opts.budget)),
        None => return Err(budget_error(format!("{q}^{}", k * n), opts.budget)),
    };
    let histogram = (0..total)
        .into_par_iter()
        .fold(
            || vec![0u128; n + 1],
            |mut hist, index| {
                let digits = digits_of(index, q, k * n);
                let seqs: Vec<Sequence> = digits
                    .chunks(n)
                    .map(|c| Sequence::from_raw(c.to_vec(), q))
                    .collect();
                let len = lcs_k(&seqs, DEFAULT_CELL_BUDGET)
                    .expect("table for enumerable sizes fits the default budget")
                    .length;
                hist[len] += 1;
                hist
            },
        )
        .reduce(|| vec![0u128; n + 1], merge);
    Ok(ExactResult::from_histogram(n, k, q, histogram))
}

/// Histogram mass with length in `[n - 2δ, n]`, `δ = floor(n/4) + 1`.
pub fn delta_concentration(result: &ExactResult) -> f64 {
    let n = result.n;
    let delta = n / 4 + 1;
    let low = n.saturating_sub(2 * delta);
    let inside: u128 = result.histogram.iter().skip(low).take(n + 1 - low).sum();
    inside as f64 / result.total as f64
}
