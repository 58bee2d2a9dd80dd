//! SNOW 1.0 keystream generator.
//!
//! A 16-stage LFSR of 32-bit words feeds a two-register FSM. One output
//! step reads the FSM, emits `Fm ^ s[0]`, updates the registers, and clocks
//! the LFSR. Index 0 always holds the oldest word; fresh feedback enters at
//! index 15, so a word surfaces at the output tap 16 clocks after entering.

use crate::field::{add_mod32, mul_alpha_snow1, rotl7};
use crate::keys::{parse_hex_words, KeyParseError};
use crate::sboxes::{snow1_sbox_word, BitPermutation};
use crate::Word;

/// How the 32 setup clocks absorb the FSM output into the LFSR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitMode {
    /// XOR the FSM output into the feedback word only (the default; matches
    /// the way the successor cipher folds its FSM during setup).
    #[default]
    FeedbackFold,
    /// XOR the FSM output into all sixteen LFSR words after the shift, an
    /// alternate reading kept for study.
    WholeStateXor,
}

/// Constructor options: the S-box output bit permutation (identity unless a
/// specific one is supplied) and the setup mode.
#[derive(Debug, Clone, Default)]
pub struct Snow1Config {
    pub permutation: BitPermutation,
    pub init_mode: InitMode,
}

/// 256-bit key and 64-bit IV.
///
/// `key[0]` is k1, the leftmost word of the hex form. The IV tuple is
/// ordered (IV2, IV1), so the leftmost IV word in hex is `iv2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Snow1Key {
    pub key: [Word; 8],
    pub iv2: Word,
    pub iv1: Word,
}

impl Snow1Key {
    pub fn from_hex(key_hex: &str, iv_hex: &str) -> Result<Self, KeyParseError> {
        let kw = parse_hex_words(key_hex, "key", 8)?;
        let vw = parse_hex_words(iv_hex, "iv", 2)?;
        let mut key = [0 as Word; 8];
        key.copy_from_slice(&kw);
        Ok(Self { key, iv2: vw[0], iv1: vw[1] })
    }
}

/// Pre-clock register load: lower half is the key with the IV folded into
/// words 0 and 3, upper half the complemented key words (the family's setup
/// convention, matching the published SNOW 3G layout).
fn initial_layout(key: &Snow1Key) -> [Word; 16] {
    let k = &key.key;
    let mut lfsr = [0 as Word; 16];
    lfsr[0] = k[0] ^ key.iv1;
    lfsr[1] = k[1];
    lfsr[2] = k[2];
    lfsr[3] = k[3] ^ key.iv2;
    lfsr[4..8].copy_from_slice(&k[4..8]);
    for i in 0..8 {
        lfsr[8 + i] = !k[i];
    }
    lfsr
}

/// Generator state. Construction runs the 32 setup clocks; afterwards the
/// clock counter restarts at zero.
#[derive(Debug, Clone)]
pub struct Snow1 {
    lfsr: [Word; 16],
    r1: Word,
    r2: Word,
    clock: u64,
    config: Snow1Config,
}

impl Snow1 {
    pub fn new(key: &Snow1Key) -> Self {
        Self::with_config(key, Snow1Config::default())
    }

    pub fn with_config(key: &Snow1Key, config: Snow1Config) -> Self {
        let mut state = Self { lfsr: initial_layout(key), r1: 0, r2: 0, clock: 0, config };
        for _ in 0..32 {
            state.init_clock();
        }
        state.clock = 0;
        state
    }

    fn sbox(&self, w: Word) -> Word {
        snow1_sbox_word(w, &self.config.permutation)
    }

    /// Reads the FSM output and advances the registers.
    pub fn fsm_step(&mut self) -> Word {
        let fm = add_mod32(self.lfsr[0], self.r1) ^ self.r2;
        let r1_old = self.r1;
        self.r1 ^= rotl7(add_mod32(fm, self.r2));
        self.r2 = self.sbox(r1_old);
        fm
    }

    fn feedback(&self) -> Word {
        mul_alpha_snow1(self.lfsr[0] ^ self.lfsr[3] ^ self.lfsr[9])
    }

    fn shift_in(&mut self, word: Word) {
        self.lfsr.copy_within(1..16, 0);
        self.lfsr[15] = word;
    }

    /// Clocks the shift register once in keystream mode.
    pub fn lfsr_step(&mut self) {
        let fb = self.feedback();
        self.shift_in(fb);
    }

    fn init_clock(&mut self) {
        match self.config.init_mode {
            InitMode::FeedbackFold => {
                let fm = self.fsm_step();
                let fb = self.feedback() ^ fm;
                self.shift_in(fb);
            }
            InitMode::WholeStateXor => {
                let fm = self.fsm_step();
                self.lfsr_step();
                for w in self.lfsr.iter_mut() {
                    *w ^= fm;
                }
            }
        }
    }

    /// One output step: emit, then advance FSM and LFSR.
    pub fn next_word(&mut self) -> Word {
        let s0 = self.lfsr[0];
        let fm = self.fsm_step();
        let z = fm ^ s0;
        self.lfsr_step();
        self.clock += 1;
        z
    }

    pub fn keystream(&mut self, n: usize) -> Vec<Word> {
        (0..n).map(|_| self.next_word()).collect()
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn lfsr(&self) -> &[Word; 16] {
        &self.lfsr
    }

    pub fn registers(&self) -> (Word, Word) {
        (self.r1, self.r2)
    }
}
