//! Seeded Monte Carlo bias estimates with calibrated error bars.
//!
//! Estimates live on the correlation scale: for a 0/1 relation value,
//! `estimate = 2 Pr[relation = 0] - 1`, so an unbiased relation sits at
//! 0 and the standard error is `sqrt((1 - estimate^2) / samples)`.

use crate::rng::mc_count;
use rand::RngCore;
use serde::Serialize;
use snowlab_core::field::{add_mod32, rotl7};
use snowlab_core::sboxes::{snow1_sbox_word, BitPermutation};
use snowlab_core::Word;
use std::fmt;
use thiserror::Error;

/// Stream tag of the carry experiment.
const TAG_CARRY: u64 = 0x6361_7272;
/// Stream tag of the FSM relation experiment.
const TAG_FSM: u64 = 0x6673_6d62;

/// Threshold for calling an estimated bias real.
pub const SIGNIFICANCE_SIGMA: f64 = 5.0;
/// Threshold for calling an estimate consistent with a predicted value.
pub const AGREEMENT_SIGMA: f64 = 4.0;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BiasError {
    #[error("at least one sample is required")]
    NoSamples,
    #[error("bit index {bit} is outside a 32-bit word")]
    BitOutOfRange { bit: u32 },
}

/// Monte Carlo estimate of one relation's bias.
#[derive(Debug, Clone, Serialize)]
pub struct BiasReport {
    pub relation_id: String,
    /// `2 Pr[relation = 0] - 1`, in [-1, 1].
    pub estimate: f64,
    pub samples: u64,
    /// `sqrt((1 - estimate^2) / samples)`.
    pub std_error: f64,
    pub seed: u64,
}

impl BiasReport {
    fn from_zero_count(relation_id: impl Into<String>, zeros: u64, samples: u64, seed: u64) -> Self {
        let estimate = 2.0 * zeros as f64 / samples as f64 - 1.0;
        let std_error = ((1.0 - estimate * estimate) / samples as f64).sqrt();
        Self { relation_id: relation_id.into(), estimate, samples, std_error, seed }
    }

    /// The estimate mapped back to `Pr[relation = 0]`.
    pub fn probability_zero(&self) -> f64 {
        0.5 * (self.estimate + 1.0)
    }

    /// Standard error of [`Self::probability_zero`].
    pub fn probability_std_error(&self) -> f64 {
        self.std_error / 2.0
    }

    /// Distance of the estimate from zero in standard errors.
    pub fn sigmas(&self) -> f64 {
        if self.std_error == 0.0 {
            if self.estimate == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            self.estimate / self.std_error
        }
    }

    /// True when the bias clears [`SIGNIFICANCE_SIGMA`].
    pub fn significant(&self) -> bool {
        self.sigmas().abs() > SIGNIFICANCE_SIGMA
    }

    /// True when `Pr[relation = 0]` sits within `sigma` standard errors
    /// of the predicted probability.
    pub fn probability_within(&self, predicted: f64, sigma: f64) -> bool {
        (self.probability_zero() - predicted).abs() <= sigma * self.probability_std_error()
    }
}

/// Exact probability that the carry into bit `i` of a 32-bit sum of two
/// uniform words is zero: 1/2 + 2^-(i+1). Bit 0 never receives a carry,
/// so the formula's value 1 at i = 0 is the boundary case.
pub fn carry_probability_zero(i: u32) -> f64 {
    0.5 + 0.5f64.powi(i as i32 + 1)
}

/// Estimates `Pr[carry into bit i of x + y is zero]` by sampling.
pub fn carry_bias(i: u32, samples: u64, seed: u64, workers: usize) -> Result<BiasReport, BiasError> {
    if i >= 32 {
        return Err(BiasError::BitOutOfRange { bit: i });
    }
    if samples == 0 {
        return Err(BiasError::NoSamples);
    }
    let zeros = mc_count(seed, TAG_CARRY, samples, workers, |rng| {
        let x = rng.next_u32();
        let y = rng.next_u32();
        let carries = x ^ y ^ x.wrapping_add(y);
        (carries >> i) & 1 == 0
    });
    Ok(BiasReport::from_zero_count(format!("carry-into-bit-{i}"), zeros, samples, seed))
}

/// How bit indices name word bits in a mask relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BitConvention {
    /// Index 0 is the least significant bit.
    LsbZero,
    /// Index 0 is the most significant bit.
    MsbZero,
}

impl fmt::Display for BitConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BitConvention::LsbZero => "lsb0",
            BitConvention::MsbZero => "msb0",
        })
    }
}

/// Masks of a relation over two consecutive FSM output words: the
/// relation XORs the masked bits of the two LFSR words fed in and the
/// two FSM words read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationMasks {
    pub lfsr0: Word,
    pub lfsr1: Word,
    pub fsm0: Word,
    pub fsm1: Word,
}

fn mask_of(bits: &[u32], convention: BitConvention) -> Word {
    bits.iter().fold(0, |acc, &b| {
        acc | match convention {
            BitConvention::LsbZero => 1u32 << b,
            BitConvention::MsbZero => 1u32 << (31 - b),
        }
    })
}

/// The published two-round relation: LFSR bits {15, 16} of the first
/// word, {22, 23} of the second, FSM output bit {15} of the first word
/// and {23} of the second, read under the given bit convention.
pub fn round_pair_masks(convention: BitConvention) -> RelationMasks {
    RelationMasks {
        lfsr0: mask_of(&[15, 16], convention),
        lfsr1: mask_of(&[22, 23], convention),
        fsm0: mask_of(&[15], convention),
        fsm1: mask_of(&[23], convention),
    }
}

/// A 0/1 relation to sample.
#[derive(Debug, Clone)]
pub enum FsmRelation {
    /// The two-round mask relation over the rotation/addition FSM.
    RoundPair(BitConvention),
    /// A fair coin, for calibrating the error bars.
    FreshCoin,
    /// Any mask set over the same two-round experiment.
    Custom { id: String, masks: RelationMasks },
}

impl FsmRelation {
    pub fn id(&self) -> String {
        match self {
            FsmRelation::RoundPair(c) => format!("fsm-round-pair-{c}"),
            FsmRelation::FreshCoin => "fresh-coin".to_string(),
            FsmRelation::Custom { id, .. } => id.clone(),
        }
    }

    fn masks(&self) -> Option<RelationMasks> {
        match self {
            FsmRelation::RoundPair(c) => Some(round_pair_masks(*c)),
            FsmRelation::FreshCoin => None,
            FsmRelation::Custom { masks, .. } => Some(*masks),
        }
    }
}

fn parity(w: Word) -> u32 {
    w.count_ones() & 1
}

/// Two clocks of the rotation/addition FSM from the given registers,
/// fed the two LFSR words; returns the two FSM output words.
fn fsm_two_rounds(st0: Word, st1: Word, r1: Word, r2: Word, perm: &BitPermutation) -> (Word, Word) {
    let fm0 = add_mod32(st0, r1) ^ r2;
    let r1_next = rotl7(add_mod32(fm0, r2)) ^ r1;
    let r2_next = snow1_sbox_word(r1, perm);
    let fm1 = add_mod32(st1, r1_next) ^ r2_next;
    (fm0, fm1)
}

/// Samples the relation over uniform registers and LFSR words.
pub fn fsm_bias_mc(
    relation: &FsmRelation,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<BiasReport, BiasError> {
    if samples == 0 {
        return Err(BiasError::NoSamples);
    }
    let zeros = match relation.masks() {
        None => mc_count(seed, TAG_FSM, samples, workers, |rng| rng.next_u32() & 1 == 0),
        Some(m) => {
            let perm = BitPermutation::identity();
            mc_count(seed, TAG_FSM, samples, workers, move |rng| {
                let st0 = rng.next_u32();
                let st1 = rng.next_u32();
                let r1 = rng.next_u32();
                let r2 = rng.next_u32();
                let (fm0, fm1) = fsm_two_rounds(st0, st1, r1, r2, &perm);
                let bit = parity(st0 & m.lfsr0)
                    ^ parity(st1 & m.lfsr1)
                    ^ parity(fm0 & m.fsm0)
                    ^ parity(fm1 & m.fsm1);
                bit == 0
            })
        }
    };
    Ok(BiasReport::from_zero_count(relation.id(), zeros, samples, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carry_formula_values() {
        assert_eq!(carry_probability_zero(0), 1.0);
        assert_eq!(carry_probability_zero(1), 0.75);
        assert_eq!(carry_probability_zero(5), 0.5 + 1.0 / 64.0);
    }

    #[test]
    fn carry_estimate_matches_formula() {
        for i in [1, 3, 8] {
            let r = carry_bias(i, 1 << 20, 7, 1).unwrap();
            assert!(
                r.probability_within(carry_probability_zero(i), AGREEMENT_SIGMA),
                "bit {i}: {r:?}"
            );
        }
    }

    #[test]
    fn carry_indexing_counts_the_carry_into_the_bit() {
        // The carry word x ^ y ^ (x + y) has an always-zero bit 0, so the
        // index names the bit the carry arrives at, not the bit it leaves.
        let r0 = carry_bias(0, 1 << 16, 3, 1).unwrap();
        assert_eq!(r0.probability_zero(), 1.0);
        // Reading index i as "carry out of bit i" would predict 0.75 at
        // i = 0; the estimate rejects that by a wide margin.
        assert!((r0.probability_zero() - 0.75).abs() > 0.2);
    }

    #[test]
    fn fresh_coin_is_null() {
        let r = fsm_bias_mc(&FsmRelation::FreshCoin, 1 << 20, 7, 1).unwrap();
        assert!(r.sigmas().abs() < AGREEMENT_SIGMA, "{r:?}");
        assert!(!r.significant());
    }

    #[test]
    fn error_bars_are_calibrated() {
        let mut within = 0;
        for seed in 0..100 {
            let r = fsm_bias_mc(&FsmRelation::FreshCoin, 1 << 16, seed, 1).unwrap();
            if r.sigmas().abs() <= AGREEMENT_SIGMA {
                within += 1;
            }
        }
        assert!(within >= 99, "only {within}/100 inside four sigma");
    }

    #[test]
    fn round_pair_bias_is_significant_lsb0() {
        let r = fsm_bias_mc(&FsmRelation::RoundPair(BitConvention::LsbZero), 1 << 22, 7, 1).unwrap();
        assert!(r.significant(), "{r:?}");
    }

    #[test]
    fn round_pair_msb0_reading_shows_no_bias() {
        let r = fsm_bias_mc(&FsmRelation::RoundPair(BitConvention::MsbZero), 1 << 20, 7, 1).unwrap();
        assert!(!r.significant(), "{r:?}");
    }

    #[test]
    fn custom_masks_reproduce_the_round_pair_estimate() {
        let builtin =
            fsm_bias_mc(&FsmRelation::RoundPair(BitConvention::LsbZero), 1 << 16, 5, 1).unwrap();
        let custom = fsm_bias_mc(
            &FsmRelation::Custom {
                id: "same-masks".into(),
                masks: round_pair_masks(BitConvention::LsbZero),
            },
            1 << 16,
            5,
            1,
        )
        .unwrap();
        assert_eq!(builtin.estimate, custom.estimate);
        assert_ne!(builtin.relation_id, custom.relation_id);
    }

    #[test]
    fn mask_values_under_both_conventions() {
        let lsb = round_pair_masks(BitConvention::LsbZero);
        assert_eq!(lsb.lfsr0, 0x0001_8000);
        assert_eq!(lsb.lfsr1, 0x00C0_0000);
        assert_eq!(lsb.fsm0, 0x0000_8000);
        assert_eq!(lsb.fsm1, 0x0080_0000);
        let msb = round_pair_masks(BitConvention::MsbZero);
        assert_eq!(msb.lfsr0, 0x0001_8000);
        assert_eq!(msb.lfsr1, 0x0000_0300);
        assert_eq!(msb.fsm0, 0x0001_0000);
        assert_eq!(msb.fsm1, 0x0000_0100);
    }

    #[test]
    fn estimates_are_deterministic_and_worker_independent() {
        let a = carry_bias(4, 1 << 18, 42, 1).unwrap();
        let b = carry_bias(4, 1 << 18, 42, 2).unwrap();
        let c = carry_bias(4, 1 << 18, 42, 8).unwrap();
        assert_eq!(a.estimate, b.estimate);
        assert_eq!(a.estimate, c.estimate);
        let d = carry_bias(4, 1 << 18, 43, 1).unwrap();
        assert_ne!(a.estimate, d.estimate);
    }

    #[test]
    fn std_error_follows_the_estimate() {
        let r = carry_bias(1, 1 << 16, 9, 1).unwrap();
        let expected = ((1.0 - r.estimate * r.estimate) / r.samples as f64).sqrt();
        assert_eq!(r.std_error, expected);
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(
            carry_bias(32, 10, 0, 1),
            Err(BiasError::BitOutOfRange { bit: 32 })
        ));
        assert!(matches!(carry_bias(1, 0, 0, 1), Err(BiasError::NoSamples)));
        assert!(matches!(
            fsm_bias_mc(&FsmRelation::FreshCoin, 0, 0, 1),
            Err(BiasError::NoSamples)
        ));
    }
}
