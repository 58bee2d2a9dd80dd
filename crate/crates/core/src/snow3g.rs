//! SNOW 3G keystream generator (3GPP TS 35.216, the UEA2/UIA2 core).
//!
//! Compared to its ancestor this variant carries a third FSM register fed
//! through a second S-box, and takes a 128-bit key. Wiring, byte orders,
//! and the setup schedule follow the 3GPP specification exactly, which the
//! bundled TS 35.217 test vectors confirm.
//!
//! The `fault-hooks` feature adds raw-state construction and bit-level
//! fault injection for the analysis experiments; release builds leave it
//! off so the hooks do not exist in the compiled cipher.

use thiserror::Error;

use crate::field::{add_mod32, snow2_tables};
use crate::keys::{parse_hex_words, KeyParseError};
use crate::sboxes::{s1_word_standard, s2_word};
pub use crate::snow2::Arith;
use crate::Word;

/// 128-bit key and 128-bit IV. `key[0]` and `iv[0]` are the leftmost hex
/// words (the most significant words in the 3GPP byte order).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Snow3gKey {
    pub key: [Word; 4],
    pub iv: [Word; 4],
}

impl Snow3gKey {
    pub fn from_hex(key_hex: &str, iv_hex: &str) -> Result<Self, KeyParseError> {
        let kw = parse_hex_words(key_hex, "key", 4)?;
        let vw = parse_hex_words(iv_hex, "iv", 4)?;
        let mut key = [0 as Word; 4];
        key.copy_from_slice(&kw);
        let mut iv = [0 as Word; 4];
        iv.copy_from_slice(&vw);
        Ok(Self { key, iv })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Snow3gConfig {
    pub arith: Arith,
}

/// Places a fault: one of the FSM registers or an LFSR cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultTarget {
    R1,
    R2,
    R3,
    /// LFSR cell index, 0 (oldest) through 15 (newest).
    Lfsr(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FaultError {
    #[error("bit index {bit} out of range for a 32-bit word")]
    BitOutOfRange { bit: u32 },
    #[error("shift register cell {cell} out of range (0..16)")]
    CellOutOfRange { cell: usize },
}

/// Register load before the setup clocks: four blocks of the key words,
/// complemented in blocks 0 and 2, with the IV folded into cells 15, 12,
/// 10, and 9.
fn initial_layout(key: &Snow3gKey) -> [Word; 16] {
    let k = &key.key;
    let iv = &key.iv;
    let mut s = [0 as Word; 16];
    for i in 0..4 {
        s[i] = !k[3 - i];
        s[4 + i] = k[3 - i];
        s[8 + i] = !k[3 - i];
        s[12 + i] = k[3 - i];
    }
    s[15] ^= iv[3];
    s[12] ^= iv[2];
    s[10] ^= iv[1];
    s[9] ^= iv[0];
    s
}

/// Generator state. Construction runs the 32 setup clocks, then the one
/// transition clock whose FSM output is discarded.
#[derive(Debug, Clone)]
pub struct Snow3g {
    lfsr: [Word; 16],
    r1: Word,
    r2: Word,
    r3: Word,
    clock: u64,
    arith: Arith,
}

/// Opaque deep copy of a generator, taken with [`Snow3g::snapshot`].
#[derive(Debug, Clone)]
pub struct Snow3gSnapshot(Snow3g);

impl Snow3gSnapshot {
    /// Materializes a fresh generator positioned exactly where the
    /// snapshot was taken. The original keeps running independently.
    pub fn instantiate(&self) -> Snow3g {
        self.0.clone()
    }
}

impl Snow3g {
    pub fn new(key: &Snow3gKey) -> Self {
        Self::with_config(key, Snow3gConfig::default())
    }

    pub fn with_config(key: &Snow3gKey, config: Snow3gConfig) -> Self {
        let mut state = Self {
            lfsr: initial_layout(key),
            r1: 0,
            r2: 0,
            r3: 0,
            clock: 0,
            arith: config.arith,
        };
        for _ in 0..32 {
            let f = state.clock_fsm();
            let fb = state.feedback() ^ f;
            state.shift_in(fb);
        }
        let _discarded = state.clock_fsm();
        let fb = state.feedback();
        state.shift_in(fb);
        state.clock = 0;
        state
    }

    /// Reads the FSM output word and advances R1, R2, R3.
    fn clock_fsm(&mut self) -> Word {
        let (f, r1_next, r2_next, r3_next) = match self.arith {
            Arith::Real => (
                add_mod32(self.lfsr[15], self.r1) ^ self.r2,
                add_mod32(self.r2, self.r3 ^ self.lfsr[5]),
                s1_word_standard(self.r1),
                s2_word(self.r2),
            ),
            Arith::Linearized => (
                self.lfsr[15] ^ self.r1 ^ self.r2,
                self.r2 ^ self.r3 ^ self.lfsr[5],
                self.r1,
                self.r2,
            ),
        };
        self.r1 = r1_next;
        self.r2 = r2_next;
        self.r3 = r3_next;
        f
    }

    fn feedback(&self) -> Word {
        let t = snow2_tables();
        t.mul_alpha(self.lfsr[0]) ^ self.lfsr[2] ^ t.mul_alpha_inv(self.lfsr[11])
    }

    fn shift_in(&mut self, word: Word) {
        self.lfsr.copy_within(1..16, 0);
        self.lfsr[15] = word;
    }

    pub fn next_word(&mut self) -> Word {
        let s0 = self.lfsr[0];
        let f = self.clock_fsm();
        let z = f ^ s0;
        let fb = self.feedback();
        self.shift_in(fb);
        self.clock += 1;
        z
    }

    pub fn keystream(&mut self, n: usize) -> Vec<Word> {
        (0..n).map(|_| self.next_word()).collect()
    }

    pub fn snapshot(&self) -> Snow3gSnapshot {
        Snow3gSnapshot(self.clone())
    }

    pub fn restore(&mut self, snap: &Snow3gSnapshot) {
        *self = snap.0.clone();
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn lfsr(&self) -> &[Word; 16] {
        &self.lfsr
    }

    pub fn registers(&self) -> (Word, Word, Word) {
        (self.r1, self.r2, self.r3)
    }

    /// Builds a generator directly from register contents, skipping key
    /// setup. Analysis builds only.
    #[cfg(feature = "fault-hooks")]
    pub fn from_raw(lfsr: [Word; 16], r1: Word, r2: Word, r3: Word, config: Snow3gConfig) -> Self {
        Self { lfsr, r1, r2, r3, clock: 0, arith: config.arith }
    }

    /// Flips one state bit in place. Analysis builds only.
    #[cfg(feature = "fault-hooks")]
    pub fn flip_bit(&mut self, target: FaultTarget, bit: u32) -> Result<(), FaultError> {
        if bit >= 32 {
            return Err(FaultError::BitOutOfRange { bit });
        }
        let mask = 1u32 << bit;
        match target {
            FaultTarget::R1 => self.r1 ^= mask,
            FaultTarget::R2 => self.r2 ^= mask,
            FaultTarget::R3 => self.r3 ^= mask,
            FaultTarget::Lfsr(cell) => {
                if cell >= 16 {
                    return Err(FaultError::CellOutOfRange { cell });
                }
                self.lfsr[cell] ^= mask;
            }
        }
        Ok(())
    }
}
