//! Bit-sequence sources and packing helpers for the sequence experiments.
//!
//! Sequences are `Vec<u8>` holding one bit per entry. A bit LFSR is
//! described by its tap distances: `taps = [1, 2, 5, 16]` means
//! `s[t] = s[t-1] ^ s[t-2] ^ s[t-5] ^ s[t-16]`, a register of degree 16
//! (the largest distance).

use snowlab_core::Word;
use thiserror::Error;

/// Degree-16 register with a primitive characteristic polynomial:
/// period 65535 from any nonzero fill (checked by test).
pub const DEGREE16_TAPS: [usize; 4] = [1, 3, 12, 16];

/// Degree-8 register with a primitive characteristic polynomial:
/// period 255 from any nonzero fill (checked by test).
pub const DEGREE8_TAPS: [usize; 4] = [4, 5, 6, 8];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitSeqError {
    #[error("tap list is empty")]
    EmptyTaps,
    #[error("tap distance 0 is not a recurrence")]
    ZeroTap,
    #[error("tap distance {distance} appears twice")]
    DuplicateTap { distance: usize },
    #[error("seed holds {found} bits but the register degree is {expected}")]
    SeedLength { expected: usize, found: usize },
    #[error("sequence entry {index} is {value}, not a bit")]
    NotABit { index: usize, value: u8 },
}

fn check_taps(taps: &[usize]) -> Result<usize, BitSeqError> {
    if taps.is_empty() {
        return Err(BitSeqError::EmptyTaps);
    }
    let mut seen = vec![false; taps.iter().max().copied().unwrap_or(0) + 1];
    for &d in taps {
        if d == 0 {
            return Err(BitSeqError::ZeroTap);
        }
        if seen[d] {
            return Err(BitSeqError::DuplicateTap { distance: d });
        }
        seen[d] = true;
    }
    Ok(seen.len() - 1)
}

fn check_bits(bits: &[u8]) -> Result<(), BitSeqError> {
    for (index, &value) in bits.iter().enumerate() {
        if value > 1 {
            return Err(BitSeqError::NotABit { index, value });
        }
    }
    Ok(())
}

/// The impulse fill `[1, 0, ..., 0]` of the given degree.
pub fn unit_seed(degree: usize) -> Vec<u8> {
    let mut seed = vec![0; degree];
    if degree > 0 {
        seed[0] = 1;
    }
    seed
}

/// Runs the bit LFSR for `len` output bits, starting with the seed bits
/// themselves. `seed.len()` must equal the register degree.
pub fn lfsr_bits(taps: &[usize], seed: &[u8], len: usize) -> Result<Vec<u8>, BitSeqError> {
    let degree = check_taps(taps)?;
    check_bits(seed)?;
    if seed.len() != degree {
        return Err(BitSeqError::SeedLength { expected: degree, found: seed.len() });
    }
    let mut out = Vec::with_capacity(len.max(degree));
    out.extend_from_slice(seed);
    for t in degree..len {
        let bit = taps.iter().fold(0u8, |acc, &d| acc ^ out[t - d]);
        out.push(bit);
    }
    out.truncate(len);
    Ok(out)
}

/// The m-sequence of the register: impulse fill, `len` bits.
pub fn m_sequence(taps: &[usize], len: usize) -> Result<Vec<u8>, BitSeqError> {
    let degree = check_taps(taps)?;
    lfsr_bits(taps, &unit_seed(degree), len)
}

/// Exact cycle length of the register state starting from `seed`,
/// found by stepping until the fill recurs.
pub fn sequence_period(taps: &[usize], seed: &[u8]) -> Result<u64, BitSeqError> {
    let degree = check_taps(taps)?;
    check_bits(seed)?;
    if seed.len() != degree {
        return Err(BitSeqError::SeedLength { expected: degree, found: seed.len() });
    }
    let mut window = seed.to_vec();
    let mut steps = 0u64;
    loop {
        let bit = taps.iter().fold(0u8, |acc, &d| acc ^ window[degree - d]);
        window.rotate_left(1);
        window[degree - 1] = bit;
        steps += 1;
        if window == seed {
            return Ok(steps);
        }
    }
}

/// Bit `bit` of every word, as a bit sequence.
pub fn word_bit_plane(words: &[Word], bit: u32) -> Vec<u8> {
    assert!(bit < 32, "word bit index out of range");
    words.iter().map(|&w| ((w >> bit) & 1) as u8).collect()
}

/// Packs bits into u64 words, bit `i` of the sequence at bit `i % 64`
/// of word `i / 64`.
pub fn pack_bits(bits: &[u8]) -> Vec<u64> {
    let mut packed = vec![0u64; bits.len().div_ceil(64)];
    for (i, &b) in bits.iter().enumerate() {
        packed[i / 64] |= u64::from(b & 1) << (i % 64);
    }
    packed
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree16_register_has_full_period() {
        let period = sequence_period(&DEGREE16_TAPS, &unit_seed(16)).unwrap();
        assert_eq!(period, 65535);
    }

    #[test]
    fn degree8_register_has_full_period() {
        let period = sequence_period(&DEGREE8_TAPS, &unit_seed(8)).unwrap();
        assert_eq!(period, 255);
    }

    #[test]
    fn output_starts_with_seed_and_obeys_recurrence() {
        let seed = [1, 0, 1, 1, 0];
        let taps = [2, 5];
        let bits = lfsr_bits(&taps, &seed, 40).unwrap();
        assert_eq!(&bits[..5], &seed);
        for t in 5..40 {
            assert_eq!(bits[t], bits[t - 2] ^ bits[t - 5]);
        }
    }

    #[test]
    fn short_request_truncates() {
        let bits = lfsr_bits(&[1, 3], &[1, 1, 0], 2).unwrap();
        assert_eq!(bits, vec![1, 1]);
    }

    #[test]
    fn zero_seed_stays_zero() {
        let bits = lfsr_bits(&DEGREE8_TAPS, &[0; 8], 64).unwrap();
        assert!(bits.iter().all(|&b| b == 0));
    }

    #[test]
    fn tap_errors() {
        assert_eq!(lfsr_bits(&[], &[], 4), Err(BitSeqError::EmptyTaps));
        assert_eq!(lfsr_bits(&[0, 2], &[1, 1], 4), Err(BitSeqError::ZeroTap));
        assert_eq!(
            lfsr_bits(&[2, 2], &[1, 1], 4),
            Err(BitSeqError::DuplicateTap { distance: 2 })
        );
        assert_eq!(
            lfsr_bits(&[1, 4], &[1, 1], 4),
            Err(BitSeqError::SeedLength { expected: 4, found: 2 })
        );
        assert_eq!(
            lfsr_bits(&[1], &[3], 4),
            Err(BitSeqError::NotABit { index: 0, value: 3 })
        );
    }

    #[test]
    fn bit_plane_extracts_one_bit_per_word() {
        let words = [0x8000_0001, 0x0000_0001, 0x8000_0000];
        assert_eq!(word_bit_plane(&words, 0), vec![1, 1, 0]);
        assert_eq!(word_bit_plane(&words, 31), vec![1, 0, 1]);
    }

    #[test]
    fn packing_round_trips() {
        let bits: Vec<u8> = (0..130).map(|i| ((i * 7 + 3) % 5 == 0) as u8).collect();
        let packed = pack_bits(&bits);
        assert_eq!(packed.len(), 3);
        for (i, &b) in bits.iter().enumerate() {
            assert_eq!(((packed[i / 64] >> (i % 64)) & 1) as u8, b);
        }
    }
}
