//! SNOW 2.0 keystream generator.
//!
//! Same 16-stage shift-register shape as its predecessor, but the feedback
//! multiplies taps 0 and 11 by a field generator and its inverse, the FSM
//! reads the newest word instead of the oldest, and the S-box is the
//! Rijndael round structure. A configurable emission budget enforces the
//! rekeying rule (default 2^50 words).

use thiserror::Error;

use crate::field::{add_mod32, quartic, snow2_tables};
use crate::keys::{parse_hex_words, KeyParseError};
use crate::sboxes::{s1_word_with, S1Config};
use crate::Word;

/// Default emission budget before a rekey is required.
pub const DEFAULT_LIMIT: u64 = 1 << 50;

/// 256-bit key and 128-bit IV.
///
/// `key[0]` is k0, the leftmost word of the hex form. The IV tuple is
/// ordered (IV3, IV2, IV1, IV0), so `iv[0]` is IV3, the leftmost IV word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Snow2Key {
    pub key: [Word; 8],
    pub iv: [Word; 4],
}

impl Snow2Key {
    /// Parses hex forms. Only the 256-bit key layout is defined; other key
    /// lengths are rejected with the offending length in the error.
    pub fn from_hex(key_hex: &str, iv_hex: &str) -> Result<Self, KeyParseError> {
        let kw = parse_hex_words(key_hex, "key", 8)?;
        let vw = parse_hex_words(iv_hex, "iv", 4)?;
        let mut key = [0 as Word; 8];
        key.copy_from_slice(&kw);
        let mut iv = [0 as Word; 4];
        iv.copy_from_slice(&vw);
        Ok(Self { key, iv })
    }
}

/// Route used for the generator multiplications in the feedback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlphaPath {
    /// Shift plus precomputed byte-table lookup (the fast path).
    #[default]
    Table,
    /// Full polynomial multiplication in the quartic tower; the slow
    /// reference route, kept for cross-checking and benchmarks.
    Polynomial,
}

/// Word-mixing arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Arith {
    /// Integer addition and the real S-box.
    #[default]
    Real,
    /// Every ⊞ becomes XOR and the S-box becomes identity, making the whole
    /// generator F2-linear in its state; used by the analysis experiments.
    Linearized,
}

#[derive(Debug, Clone, Copy)]
pub struct Snow2Config {
    pub s1: S1Config,
    pub alpha_path: AlphaPath,
    pub arith: Arith,
    /// Maximum number of keystream words the instance may emit.
    pub limit: u64,
}

impl Default for Snow2Config {
    fn default() -> Self {
        Self {
            s1: S1Config::default(),
            alpha_path: AlphaPath::default(),
            arith: Arith::default(),
            limit: DEFAULT_LIMIT,
        }
    }
}

/// Raised when an instance has emitted its configured word budget; the
/// cipher must be rekeyed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("keystream budget of {limit} words exhausted after emitting {produced}; rekey required")]
pub struct BudgetExhausted {
    pub produced: u64,
    pub limit: u64,
}

/// Pre-clock register load: complemented key words in the lower half, then
/// the key again with the IV folded into positions 9, 10, 12, and 15.
fn initial_layout(key: &Snow2Key) -> [Word; 16] {
    let k = &key.key;
    let iv = &key.iv;
    let mut lfsr = [0 as Word; 16];
    for i in 0..8 {
        lfsr[i] = !k[i];
    }
    lfsr[8] = k[0];
    lfsr[9] = k[1] ^ iv[0];
    lfsr[10] = k[2] ^ iv[1];
    lfsr[11] = k[3];
    lfsr[12] = k[4] ^ iv[2];
    lfsr[13] = k[5];
    lfsr[14] = k[6];
    lfsr[15] = k[7] ^ iv[3];
    lfsr
}

/// Generator state. Construction runs the 32 setup clocks and silently
/// discards the first output word; emission counters then restart at zero.
#[derive(Debug, Clone)]
pub struct Snow2 {
    lfsr: [Word; 16],
    r1: Word,
    r2: Word,
    clock: u64,
    produced: u64,
    buf: [u8; 4],
    buf_len: u8,
    alpha: Word,
    alpha_inv: Word,
    config: Snow2Config,
}

impl Snow2 {
    pub fn new(key: &Snow2Key) -> Self {
        Self::with_config(key, Snow2Config::default())
    }

    pub fn with_config(key: &Snow2Key, config: Snow2Config) -> Self {
        let mut state = Self {
            lfsr: initial_layout(key),
            r1: 0,
            r2: 0,
            clock: 0,
            produced: 0,
            buf: [0; 4],
            buf_len: 0,
            alpha: quartic::alpha(),
            alpha_inv: quartic::alpha_inv(),
            config,
        };
        for _ in 0..32 {
            let fm = state.fsm_advance();
            let fb = state.feedback() ^ fm;
            state.shift_in(fb);
        }
        let _discarded = state.raw_step();
        state.clock = 0;
        state
    }

    #[inline]
    fn mul_alpha(&self, w: Word) -> Word {
        match self.config.alpha_path {
            AlphaPath::Table => snow2_tables().mul_alpha(w),
            AlphaPath::Polynomial => quartic::mul(w, self.alpha),
        }
    }

    #[inline]
    fn mul_alpha_inv(&self, w: Word) -> Word {
        match self.config.alpha_path {
            AlphaPath::Table => snow2_tables().mul_alpha_inv(w),
            AlphaPath::Polynomial => quartic::mul(w, self.alpha_inv),
        }
    }

    /// Reads the FSM output and advances the registers.
    fn fsm_advance(&mut self) -> Word {
        let (fm, r1_next, r2_next) = match self.config.arith {
            Arith::Real => (
                add_mod32(self.lfsr[15], self.r1) ^ self.r2,
                add_mod32(self.lfsr[5], self.r2),
                s1_word_with(self.r1, self.config.s1),
            ),
            Arith::Linearized => (self.lfsr[15] ^ self.r1 ^ self.r2, self.lfsr[5] ^ self.r2, self.r1),
        };
        self.r1 = r1_next;
        self.r2 = r2_next;
        fm
    }

    fn feedback(&self) -> Word {
        self.mul_alpha_inv(self.lfsr[11]) ^ self.lfsr[2] ^ self.mul_alpha(self.lfsr[0])
    }

    fn shift_in(&mut self, word: Word) {
        self.lfsr.copy_within(1..16, 0);
        self.lfsr[15] = word;
    }

    fn raw_step(&mut self) -> Word {
        let s0 = self.lfsr[0];
        let fm = self.fsm_advance();
        let z = fm ^ s0;
        let fb = self.feedback();
        self.shift_in(fb);
        self.clock += 1;
        z
    }

    fn check_budget(&self, extra: u64) -> Result<(), BudgetExhausted> {
        if self.produced.saturating_add(extra) > self.config.limit {
            Err(BudgetExhausted { produced: self.produced, limit: self.config.limit })
        } else {
            Ok(())
        }
    }

    /// Emits one keystream word.
    pub fn step(&mut self) -> Result<Word, BudgetExhausted> {
        self.check_budget(1)?;
        self.produced += 1;
        Ok(self.raw_step())
    }

    pub fn keystream(&mut self, n: usize) -> Result<Vec<Word>, BudgetExhausted> {
        self.check_budget(n as u64)?;
        Ok((0..n)
            .map(|_| {
                self.produced += 1;
                self.raw_step()
            })
            .collect())
    }

    /// XORs keystream into the buffer, continuing at the current byte
    /// offset. The whole request is budget-checked before any byte is
    /// touched.
    pub fn xor_in_place(&mut self, data: &mut [u8]) -> Result<(), BudgetExhausted> {
        let fresh = data.len().saturating_sub(self.buf_len as usize);
        self.check_budget(fresh.div_ceil(4) as u64)?;
        for byte in data.iter_mut() {
            if self.buf_len == 0 {
                self.produced += 1;
                self.buf = self.raw_step().to_be_bytes();
                self.buf_len = 4;
            }
            *byte ^= self.buf[4 - self.buf_len as usize];
            self.buf_len -= 1;
        }
        Ok(())
    }

    pub fn produced(&self) -> u64 {
        self.produced
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn limit(&self) -> u64 {
        self.config.limit
    }

    pub fn lfsr(&self) -> &[Word; 16] {
        &self.lfsr
    }

    pub fn registers(&self) -> (Word, Word) {
        (self.r1, self.r2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sboxes::{MatrixRow4, S1ByteBox};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample_key(rng: &mut ChaCha8Rng) -> Snow2Key {
        Snow2Key {
            key: std::array::from_fn(|_| rng.gen()),
            iv: std::array::from_fn(|_| rng.gen()),
        }
    }

    fn config(limit: u64) -> Snow2Config {
        Snow2Config { limit, ..Snow2Config::default() }
    }

    #[test]
    fn key_parsing_and_unsupported_lengths() {
        let key_hex = "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f";
        let iv_hex = "ffeeddccbbaa99887766554433221100";
        let k = Snow2Key::from_hex(key_hex, iv_hex).unwrap();
        assert_eq!(k.key[0], 0x0001_0203);
        assert_eq!(k.iv[0], 0xFFEE_DDCC);
        assert_eq!(k.iv[3], 0x3322_1100);

        // 128-bit keys have no defined layout here; the length comes back
        // in the error.
        let short = Snow2Key::from_hex(&key_hex[..32], iv_hex).unwrap_err();
        assert_eq!(short, KeyParseError::WrongLength { role: "key", expected: 64, found: 32 });
    }

    #[test]
    fn initial_layout_positions() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let key = sample_key(&mut rng);
        let s = initial_layout(&key);
        for (i, &word) in s.iter().take(8).enumerate() {
            assert_eq!(word, !key.key[i]);
        }
        assert_eq!(s[8], key.key[0]);
        assert_eq!(s[9], key.key[1] ^ key.iv[0]);
        assert_eq!(s[10], key.key[2] ^ key.iv[1]);
        assert_eq!(s[11], key.key[3]);
        assert_eq!(s[12], key.key[4] ^ key.iv[2]);
        assert_eq!(s[13], key.key[5]);
        assert_eq!(s[14], key.key[6]);
        assert_eq!(s[15], key.key[7] ^ key.iv[3]);
    }

    #[test]
    fn determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let key = sample_key(&mut rng);
        let a = Snow2::new(&key).keystream(64).unwrap();
        let b = Snow2::new(&key).keystream(64).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_lfsr_is_fixed_point_of_feedback() {
        let mut s = Snow2 {
            lfsr: [0; 16],
            r1: 0,
            r2: 0,
            clock: 0,
            produced: 0,
            buf: [0; 4],
            buf_len: 0,
            alpha: quartic::alpha(),
            alpha_inv: quartic::alpha_inv(),
            config: Snow2Config::default(),
        };
        assert_eq!(s.raw_step(), 0);
        assert_eq!(s.lfsr, [0; 16]);
    }

    #[test]
    fn output_word_entered_sixteen_steps_earlier() {
        // Shift-register bookkeeping: the tap emitted at time t is the
        // feedback word inserted 16 steps before.
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let key = sample_key(&mut rng);
        let mut s = Snow2::new(&key);
        s.step().unwrap();
        let inserted = s.lfsr()[15];
        for _ in 0..15 {
            s.step().unwrap();
        }
        assert_eq!(s.lfsr()[0], inserted);
    }

    #[test]
    fn budget_error_and_recovery_free_zone() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let key = sample_key(&mut rng);
        let mut s = Snow2::with_config(&key, config(3));
        s.keystream(3).unwrap();
        assert_eq!(s.produced(), 3);
        let err = s.step().unwrap_err();
        assert_eq!(err, BudgetExhausted { produced: 3, limit: 3 });
        // Repeated attempts stay rejected without advancing anything.
        assert_eq!(s.step().unwrap_err(), err);
        assert_eq!(s.produced(), 3);
    }

    #[test]
    fn xor_checks_budget_before_touching_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let key = sample_key(&mut rng);
        let mut s = Snow2::with_config(&key, config(1));
        let mut data = [0u8; 8];
        assert!(s.xor_in_place(&mut data).is_err());
        assert_eq!(data, [0u8; 8]);
        let mut short = [0u8; 4];
        s.xor_in_place(&mut short).unwrap();
        assert_ne!(short, [0u8; 4]);
    }

    #[test]
    fn empty_input_consumes_nothing() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let key = sample_key(&mut rng);
        let mut s = Snow2::new(&key);
        s.xor_in_place(&mut []).unwrap();
        assert_eq!(s.produced(), 0);
    }

    #[test]
    fn encryption_roundtrip_across_odd_chunks() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let key = sample_key(&mut rng);
        let mut plain = vec![0u8; 61];
        rng.fill(plain.as_mut_slice());

        let mut once = plain.clone();
        let mut enc = Snow2::new(&key);
        // Uneven chunk boundaries exercise the byte buffer continuation.
        let (a, rest) = once.split_at_mut(7);
        enc.xor_in_place(a).unwrap();
        let (b, c) = rest.split_at_mut(30);
        enc.xor_in_place(b).unwrap();
        enc.xor_in_place(c).unwrap();

        let mut dec = Snow2::new(&key);
        dec.xor_in_place(&mut once).unwrap();
        assert_eq!(once, plain);
    }

    #[test]
    fn ciphertext_xor_plaintext_is_keystream() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let key = sample_key(&mut rng);
        let mut data = vec![0xA5u8; 16];
        Snow2::new(&key).xor_in_place(&mut data).unwrap();
        let words = Snow2::new(&key).keystream(4).unwrap();
        for (i, w) in words.iter().enumerate() {
            let expect = w.to_be_bytes();
            for (j, e) in expect.iter().enumerate() {
                assert_eq!(data[i * 4 + j] ^ 0xA5, *e);
            }
        }
    }

    #[test]
    fn alpha_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(28);
        let key = sample_key(&mut rng);
        let fast = Snow2::new(&key).keystream(64).unwrap();
        let slow = Snow2::with_config(
            &key,
            Snow2Config { alpha_path: AlphaPath::Polynomial, ..Snow2Config::default() },
        )
        .keystream(64)
        .unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn s1_variants_change_the_stream() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let key = sample_key(&mut rng);
        let default = Snow2::new(&key).keystream(8).unwrap();
        for s1 in [
            S1Config { byte_box: S1ByteBox::Inversion, row4: MatrixRow4::Circulant },
            S1Config { byte_box: S1ByteBox::Aes, row4: MatrixRow4::Irregular },
        ] {
            let variant = Snow2::with_config(&key, Snow2Config { s1, ..Snow2Config::default() })
                .keystream(8)
                .unwrap();
            assert_ne!(default, variant);
        }
    }

    #[test]
    fn linearized_mode_superposes() {
        // With XOR arithmetic and identity S-box the keystream is affine in
        // the key/IV bits: z(a) ^ z(b) ^ z(0) = z(a^b) for a shared IV.
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let iv: [Word; 4] = std::array::from_fn(|_| rng.gen());
        let ka: [Word; 8] = std::array::from_fn(|_| rng.gen());
        let kb: [Word; 8] = std::array::from_fn(|_| rng.gen());
        let kc: [Word; 8] = std::array::from_fn(|i| ka[i] ^ kb[i]);
        let cfg = Snow2Config { arith: Arith::Linearized, ..Snow2Config::default() };
        let run = |key: [Word; 8]| {
            Snow2::with_config(&Snow2Key { key, iv }, cfg).keystream(48).unwrap()
        };
        let za = run(ka);
        let zb = run(kb);
        let z0 = run([0; 8]);
        let zc = run(kc);
        for i in 0..48 {
            assert_eq!(za[i] ^ zb[i] ^ z0[i], zc[i]);
        }
    }

    #[test]
    fn real_mode_violates_superposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let iv: [Word; 4] = std::array::from_fn(|_| rng.gen());
        let ka: [Word; 8] = std::array::from_fn(|_| rng.gen());
        let kb: [Word; 8] = std::array::from_fn(|_| rng.gen());
        let kc: [Word; 8] = std::array::from_fn(|i| ka[i] ^ kb[i]);
        let run = |key: [Word; 8]| Snow2::new(&Snow2Key { key, iv }).keystream(8).unwrap();
        let za = run(ka);
        let zb = run(kb);
        let z0 = run([0; 8]);
        let zc = run(kc);
        assert!((0..8).any(|i| za[i] ^ zb[i] ^ z0[i] != zc[i]));
    }
}
