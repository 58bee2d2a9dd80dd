//! The three classical randomness postulates over one period of a
//! binary sequence: balance, run distribution, and two-level
//! autocorrelation.

use crate::bitseq::pack_bits;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GolombError {
    #[error("period must be at least 1")]
    PeriodZero,
    #[error("period {period} exceeds the {available} bits supplied")]
    PeriodExceedsData { period: usize, available: usize },
    #[error("sequence entry {index} is {value}, not a bit")]
    NotABit { index: usize, value: u8 },
}

/// Run-distribution check for one run length: the postulate expects
/// `expected` runs of this length, half of them blocks (runs of ones)
/// and half gaps (runs of zeros).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunCheck {
    pub length: usize,
    pub expected: usize,
    pub blocks: usize,
    pub gaps: usize,
}

impl RunCheck {
    pub fn holds(&self) -> bool {
        self.blocks + self.gaps == self.expected && self.blocks == self.gaps
    }
}

/// Outcome of the three postulates over one period.
#[derive(Debug, Clone, PartialEq)]
pub struct GolombReport {
    pub period: usize,
    pub ones: usize,
    pub zeros: usize,
    /// Ones and zeros differ by at most one.
    pub balanced: bool,
    /// Cyclic runs of either symbol in one period.
    pub total_runs: usize,
    /// One entry per run length with at least two expected runs.
    pub run_checks: Vec<RunCheck>,
    pub runs_pass: bool,
    /// Every out-of-phase shift disagrees in the same number of places.
    pub two_level: bool,
    /// Out-of-phase autocorrelation numerator (agreements minus
    /// disagreements); the correlation value is this over the period.
    pub off_peak_numerator: Option<i64>,
    /// All three postulates hold.
    pub pass: bool,
}

impl GolombReport {
    pub fn off_peak_correlation(&self) -> Option<f64> {
        self.off_peak_numerator.map(|n| n as f64 / self.period as f64)
    }
}

/// Cyclic runs of the first `period` bits as (symbol, length) pairs.
fn cyclic_runs(bits: &[u8]) -> Vec<(u8, usize)> {
    let p = bits.len();
    let start = match (1..p).find(|&i| bits[i] != bits[i - 1]) {
        Some(i) => i,
        None => return vec![(bits[0], p)],
    };
    let mut runs = Vec::new();
    let mut symbol = bits[start];
    let mut len = 0usize;
    for i in 0..p {
        let b = bits[(start + i) % p];
        if b == symbol {
            len += 1;
        } else {
            runs.push((symbol, len));
            symbol = b;
            len = 1;
        }
    }
    runs.push((symbol, len));
    runs
}

/// Disagreement count between the sequence and its cyclic shift by
/// `shift`, computed on packed words.
fn shift_mismatches(doubled: &[u64], base: &[u64], period: usize, shift: usize) -> usize {
    let word_off = shift / 64;
    let bit_off = shift % 64;
    let nwords = period.div_ceil(64);
    let mut mismatches = 0usize;
    for w in 0..nwords {
        let lo = doubled[word_off + w] >> bit_off;
        let hi = if bit_off == 0 {
            0
        } else {
            doubled.get(word_off + w + 1).copied().unwrap_or(0) << (64 - bit_off)
        };
        let mut x = (lo | hi) ^ base[w];
        if w == nwords - 1 && !period.is_multiple_of(64) {
            x &= (1u64 << (period % 64)) - 1;
        }
        mismatches += x.count_ones() as usize;
    }
    mismatches
}

/// Evaluates the three postulates on the first `period` bits of the
/// sequence, treated as one full period of a cyclic sequence.
pub fn golomb_report(bits: &[u8], period: usize) -> Result<GolombReport, GolombError> {
    if period == 0 {
        return Err(GolombError::PeriodZero);
    }
    if bits.len() < period {
        return Err(GolombError::PeriodExceedsData { period, available: bits.len() });
    }
    let bits = &bits[..period];
    if let Some((index, &value)) = bits.iter().enumerate().find(|(_, &b)| b > 1) {
        return Err(GolombError::NotABit { index, value });
    }

    let ones = bits.iter().filter(|&&b| b == 1).count();
    let zeros = period - ones;
    let balanced = ones.abs_diff(zeros) <= 1;

    let runs = cyclic_runs(bits);
    let total_runs = runs.len();
    let mut run_checks = Vec::new();
    let mut runs_pass = true;
    let mut length = 1usize;
    loop {
        let expected = total_runs >> length;
        if expected < 2 {
            break;
        }
        let blocks = runs.iter().filter(|&&(s, l)| s == 1 && l == length).count();
        let gaps = runs.iter().filter(|&&(s, l)| s == 0 && l == length).count();
        let check = RunCheck { length, expected, blocks, gaps };
        runs_pass &= check.holds();
        run_checks.push(check);
        length += 1;
    }

    let mut doubled = Vec::with_capacity(2 * period);
    doubled.extend_from_slice(bits);
    doubled.extend_from_slice(bits);
    let packed_doubled = pack_bits(&doubled);
    let packed_base = pack_bits(bits);
    let mut off_peak: Option<usize> = None;
    let mut two_level = true;
    for shift in 1..period {
        let mismatches = shift_mismatches(&packed_doubled, &packed_base, period, shift);
        match off_peak {
            None => off_peak = Some(mismatches),
            Some(m) if m != mismatches => {
                two_level = false;
                break;
            }
            Some(_) => {}
        }
    }
    let off_peak_numerator = if two_level {
        off_peak.map(|m| period as i64 - 2 * m as i64)
    } else {
        None
    };

    let pass = balanced && runs_pass && two_level;
    Ok(GolombReport {
        period,
        ones,
        zeros,
        balanced,
        total_runs,
        run_checks,
        runs_pass,
        two_level,
        off_peak_numerator,
        pass,
    })
}
