//! A parametric scaled-down cipher with the same shape as the 32-bit
//! generators: a word LFSR over GF(2^m) with per-tap field multipliers and
//! a two-register FSM. At 4-bit words and a handful of cells the whole
//! state space fits in memory, so attacks on the full-size ciphers can be
//! rehearsed against exhaustive ground truth.

use thiserror::Error;

/// Exhaustive operations refuse states wider than this.
pub const MAX_EXHAUSTIVE_BITS: u32 = 24;

/// Which ⊞ the FSM uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MiniArith {
    /// Addition modulo 2^m.
    #[default]
    Add,
    /// Plain XOR, which makes the FSM linear.
    Xor,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MiniError {
    #[error("word size {m} unsupported (1..=8)")]
    BadWordSize { m: u32 },
    #[error("register length {n} unsupported (1..=8)")]
    BadLength { n: usize },
    #[error("modulus {modulus:#x} is not a degree-{m} polynomial")]
    BadModulus { modulus: u16, m: u32 },
    #[error("no feedback taps given")]
    NoTaps,
    #[error("tap cell {cell} out of range for {n} cells")]
    TapOutOfRange { cell: usize, n: usize },
    #[error("tap on cell {cell} repeated")]
    DuplicateTap { cell: usize },
    #[error("tap multiplier {multiplier:#x} invalid for {m}-bit words")]
    BadMultiplier { multiplier: u8, m: u32 },
    #[error("s-box must be a permutation of {expected} values")]
    BadSBox { expected: usize },
    #[error("state has {found} words, this cipher needs {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("word value {value:#x} does not fit in {m} bits")]
    WordOutOfRange { value: u8, m: u32 },
    #[error("{bits} state bits exceed the exhaustive-search ceiling of {MAX_EXHAUSTIVE_BITS}")]
    StateTooLarge { bits: u32 },
    #[error("period is undefined for the all-zero state")]
    AllZeroState,
    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },
}

/// Multiplication in GF(2^m) with the given degree-m modulus.
pub fn gf_mul(m: u32, modulus: u16, a: u8, b: u8) -> u8 {
    let mut acc: u16 = 0;
    let mut a = a as u16;
    let mut b = b as u16;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a <<= 1;
        if a >> m != 0 {
            a ^= modulus;
        }
        b >>= 1;
    }
    acc as u8
}

/// Multiplicative order of `g`, or 0 for g = 0. The modulus is primitive
/// exactly when the order of 0x02 is 2^m − 1.
pub fn multiplier_order(m: u32, modulus: u16, g: u8) -> u64 {
    if g == 0 {
        return 0;
    }
    let mut acc = g;
    let mut order = 1;
    while acc != 1 {
        acc = gf_mul(m, modulus, acc, g);
        order += 1;
    }
    order
}

/// The field-inversion permutation on m-bit words, with 0 fixed.
pub fn inverse_sbox(m: u32, modulus: u16) -> Vec<u8> {
    let size = 1usize << m;
    (0..size as u16)
        .map(|v| {
            if v == 0 {
                return 0;
            }
            (1..size as u16)
                .map(|w| w as u8)
                .find(|&w| gf_mul(m, modulus, v as u8, w) == 1)
                .expect("every nonzero field element has an inverse")
        })
        .collect()
}

/// Identity permutation on m-bit words.
pub fn identity_sbox(m: u32) -> Vec<u8> {
    (0..1u16 << m).map(|v| v as u8).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiniParams {
    /// Word size in bits.
    pub m: u32,
    /// Number of shift-register cells.
    pub n: usize,
    /// Degree-m field modulus for the tap multipliers, top bit included.
    pub modulus: u16,
    /// Feedback taps as (cell, multiplier) pairs; cell 0 is the oldest.
    pub taps: Vec<(usize, u8)>,
    /// FSM byte substitution, a permutation of the 2^m word values.
    pub sbox: Vec<u8>,
    pub arith: MiniArith,
}

impl MiniParams {
    /// The reference instance: 4-bit words, 4 cells, modulus x^4 + x + 1,
    /// feedback 2·s0 ⊕ s2 ⊕ s3 (a primitive configuration), inversion
    /// S-box, modular addition.
    pub fn canonical_small() -> Self {
        Self {
            m: 4,
            n: 4,
            modulus: 0x13,
            taps: vec![(0, 2), (2, 1), (3, 1)],
            sbox: inverse_sbox(4, 0x13),
            arith: MiniArith::Add,
        }
    }

    pub fn validate(&self) -> Result<(), MiniError> {
        if !(1..=8).contains(&self.m) {
            return Err(MiniError::BadWordSize { m: self.m });
        }
        if !(1..=8).contains(&self.n) {
            return Err(MiniError::BadLength { n: self.n });
        }
        if self.modulus >> self.m != 1 {
            return Err(MiniError::BadModulus { modulus: self.modulus, m: self.m });
        }
        if self.taps.is_empty() {
            return Err(MiniError::NoTaps);
        }
        let size = 1usize << self.m;
        let mut cells_seen = [false; 8];
        for &(cell, multiplier) in &self.taps {
            if cell >= self.n {
                return Err(MiniError::TapOutOfRange { cell, n: self.n });
            }
            if cells_seen[cell] {
                return Err(MiniError::DuplicateTap { cell });
            }
            cells_seen[cell] = true;
            if multiplier == 0 || multiplier as usize >= size {
                return Err(MiniError::BadMultiplier { multiplier, m: self.m });
            }
        }
        if self.sbox.len() != size {
            return Err(MiniError::BadSBox { expected: size });
        }
        let mut seen = vec![false; size];
        for &v in &self.sbox {
            if v as usize >= size || seen[v as usize] {
                return Err(MiniError::BadSBox { expected: size });
            }
            seen[v as usize] = true;
        }
        Ok(())
    }

    pub fn word_mask(&self) -> u8 {
        (((1u16) << self.m) - 1) as u8
    }

    /// Total state width of the full cipher: n cells plus two registers.
    pub fn state_bits(&self) -> u32 {
        self.m * (self.n as u32 + 2)
    }

    fn check_words(&self, words: &[u8]) -> Result<(), MiniError> {
        let mask = self.word_mask();
        for &w in words {
            if w & !mask != 0 {
                return Err(MiniError::WordOutOfRange { value: w, m: self.m });
            }
        }
        Ok(())
    }

    /// Renders the line-oriented `key = value` config form.
    pub fn to_config_text(&self) -> String {
        let taps = self
            .taps
            .iter()
            .map(|(c, f)| format!("{c}:{f}"))
            .collect::<Vec<_>>()
            .join(", ");
        let sbox = if self.sbox == inverse_sbox(self.m, self.modulus) {
            "inverse".to_string()
        } else if self.sbox == identity_sbox(self.m) {
            "identity".to_string()
        } else {
            self.sbox.iter().map(|b| format!("{b:02X}")).collect::<Vec<_>>().join(" ")
        };
        let arith = match self.arith {
            MiniArith::Add => "add",
            MiniArith::Xor => "xor",
        };
        format!(
            "m = {}\nn = {}\nmodulus = {:#x}\ntaps = {}\nsbox = {}\narith = {}\n",
            self.m, self.n, self.modulus, taps, sbox, arith
        )
    }

    /// Parses the config form produced by [`to_config_text`]. `sbox`
    /// accepts the named tables `inverse` and `identity` or explicit hex
    /// words.
    ///
    /// [`to_config_text`]: Self::to_config_text
    pub fn from_config_text(text: &str) -> Result<Self, MiniError> {
        let fail = |line: usize, reason: &str| MiniError::Config { line, reason: reason.into() };
        let mut m: Option<u32> = None;
        let mut n: Option<usize> = None;
        let mut modulus: Option<u16> = None;
        let mut taps: Option<Vec<(usize, u8)>> = None;
        let mut sbox_raw: Option<(usize, String)> = None;
        let mut arith: Option<MiniArith> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| fail(line_no, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "m" => {
                    m = Some(value.parse().map_err(|_| fail(line_no, "m must be an integer"))?)
                }
                "n" => {
                    n = Some(value.parse().map_err(|_| fail(line_no, "n must be an integer"))?)
                }
                "modulus" => {
                    let parsed = match value.strip_prefix("0x") {
                        Some(hex) => u16::from_str_radix(hex, 16),
                        None => value.parse(),
                    };
                    modulus = Some(parsed.map_err(|_| fail(line_no, "bad modulus"))?);
                }
                "taps" => {
                    let mut list = Vec::new();
                    for part in value.split(',') {
                        let (cell, factor) = part
                            .trim()
                            .split_once(':')
                            .ok_or_else(|| fail(line_no, "taps entries are `cell:multiplier`"))?;
                        let cell =
                            cell.trim().parse().map_err(|_| fail(line_no, "bad tap cell"))?;
                        let factor = factor
                            .trim()
                            .parse()
                            .map_err(|_| fail(line_no, "bad tap multiplier"))?;
                        list.push((cell, factor));
                    }
                    taps = Some(list);
                }
                "sbox" => sbox_raw = Some((line_no, value.to_string())),
                "arith" => {
                    arith = Some(match value {
                        "add" => MiniArith::Add,
                        "xor" => MiniArith::Xor,
                        _ => return Err(fail(line_no, "arith must be `add` or `xor`")),
                    })
                }
                _ => return Err(fail(line_no, "unknown key")),
            }
        }
        let m = m.ok_or_else(|| fail(0, "missing key `m`"))?;
        let n = n.ok_or_else(|| fail(0, "missing key `n`"))?;
        let modulus = modulus.ok_or_else(|| fail(0, "missing key `modulus`"))?;
        let taps = taps.ok_or_else(|| fail(0, "missing key `taps`"))?;
        let (sbox_line, sbox_text) = sbox_raw.ok_or_else(|| fail(0, "missing key `sbox`"))?;
        let arith = arith.ok_or_else(|| fail(0, "missing key `arith`"))?;
        if !(1..=8).contains(&m) || modulus >> m != 1 {
            return Err(fail(sbox_line, "m and modulus are inconsistent"));
        }
        let sbox = match sbox_text.as_str() {
            "inverse" => inverse_sbox(m, modulus),
            "identity" => identity_sbox(m),
            explicit => explicit
                .split_whitespace()
                .map(|tok| u8::from_str_radix(tok, 16))
                .collect::<Result<Vec<u8>, _>>()
                .map_err(|_| fail(sbox_line, "sbox must be hex words or a named table"))?,
        };
        let params = Self { m, n, modulus, taps, sbox, arith };
        params.validate()?;
        Ok(params)
    }
}

/// Running instance. The state vector passed at construction is the n
/// shift-register cells (oldest first) followed by R1 and R2.
#[derive(Debug, Clone)]
pub struct Mini {
    params: MiniParams,
    lfsr: Vec<u8>,
    r1: u8,
    r2: u8,
}

impl Mini {
    pub fn new(params: &MiniParams, state: &[u8]) -> Result<Self, MiniError> {
        params.validate()?;
        if state.len() != params.n + 2 {
            return Err(MiniError::DimensionMismatch {
                expected: params.n + 2,
                found: state.len(),
            });
        }
        params.check_words(state)?;
        Ok(Self {
            params: params.clone(),
            lfsr: state[..params.n].to_vec(),
            r1: state[params.n],
            r2: state[params.n + 1],
        })
    }

    fn combine(&self, a: u8, b: u8) -> u8 {
        match self.params.arith {
            MiniArith::Add => ((a as u16 + b as u16) & self.params.word_mask() as u16) as u8,
            MiniArith::Xor => a ^ b,
        }
    }

    fn feedback(&self) -> u8 {
        self.params
            .taps
            .iter()
            .fold(0, |acc, &(cell, factor)| {
                acc ^ gf_mul(self.params.m, self.params.modulus, factor, self.lfsr[cell])
            })
    }

    fn shift_in(&mut self, word: u8) {
        let n = self.params.n;
        self.lfsr.copy_within(1..n, 0);
        self.lfsr[n - 1] = word;
    }

    /// One clock with the FSM disabled: pure shift-register motion.
    pub fn lfsr_step(&mut self) {
        let fb = self.feedback();
        self.shift_in(fb);
    }

    /// One keystream word. The FSM taps the oldest cell (which is also
    /// the output tap) and the second-oldest cell, so every keystream
    /// word depends only on cells already pushed toward the output end.
    /// That locality is what lets a register-guessing attack determine
    /// the cells one at a time instead of guessing them.
    pub fn next_word(&mut self) -> u8 {
        let s0 = self.lfsr[0];
        let fm = self.combine(s0, self.r1) ^ self.r2;
        let z = fm ^ s0;
        let r1_next = self.combine(self.lfsr[usize::min(1, self.params.n - 1)], self.r2);
        self.r2 = self.params.sbox[self.r1 as usize];
        self.r1 = r1_next;
        self.lfsr_step();
        z
    }

    pub fn keystream(&mut self, len: usize) -> Vec<u8> {
        (0..len).map(|_| self.next_word()).collect()
    }

    pub fn lfsr(&self) -> &[u8] {
        &self.lfsr
    }

    pub fn registers(&self) -> (u8, u8) {
        (self.r1, self.r2)
    }

    pub fn params(&self) -> &MiniParams {
        &self.params
    }
}

/// Exact cycle length of the shift register (FSM disabled) starting from
/// the given cell contents, found by iterating until the state recurs.
/// A primitive configuration returns 2^(m·n) − 1 from every nonzero start.
pub fn mini_period(params: &MiniParams, start: &[u8]) -> Result<u64, MiniError> {
    params.validate()?;
    if start.len() != params.n {
        return Err(MiniError::DimensionMismatch { expected: params.n, found: start.len() });
    }
    params.check_words(start)?;
    let bits = params.m * params.n as u32;
    if bits > MAX_EXHAUSTIVE_BITS {
        return Err(MiniError::StateTooLarge { bits });
    }
    if start.iter().all(|&w| w == 0) {
        return Err(MiniError::AllZeroState);
    }
    let mut padded = start.to_vec();
    padded.extend_from_slice(&[0, 0]);
    let mut walker = Mini::new(params, &padded)?;
    let mut period = 0u64;
    loop {
        walker.lfsr_step();
        period += 1;
        if walker.lfsr() == start {
            return Ok(period);
        }
    }
}

/// Every full initial state (cells then R1, R2) whose keystream begins
/// with `prefix`, in ascending packed order. Exhaustive ground truth for
/// the state-recovery attacks.
pub fn mini_enumerate(params: &MiniParams, prefix: &[u8]) -> Result<Vec<Vec<u8>>, MiniError> {
    params.validate()?;
    params.check_words(prefix)?;
    let bits = params.state_bits();
    if bits > MAX_EXHAUSTIVE_BITS {
        return Err(MiniError::StateTooLarge { bits });
    }
    let words = params.n + 2;
    let mask = params.word_mask();
    let mut matches = Vec::new();
    let mut state = vec![0u8; words];
    for packed in 0u32..(1u32 << bits) {
        for (i, slot) in state.iter_mut().enumerate() {
            *slot = ((packed >> (i as u32 * params.m)) as u8) & mask;
        }
        let mut cipher = Mini::new(params, &state)?;
        if prefix.iter().all(|&want| cipher.next_word() == want) {
            matches.push(state.clone());
        }
    }
    Ok(matches)
}
