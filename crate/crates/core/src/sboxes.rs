//! Byte and word substitution layers.
//!
//! The word substitutions used by SNOW 2.0 and SNOW 3G apply a byte S-box to
//! every byte of a word and then diffuse the four bytes with an invertible
//! 4x4 matrix over a byte field, the Rijndael round structure. Byte tables
//! and the deployed diffusion matrices live in plain-text data files that
//! are validated on load; the SNOW 1.0 S-box and the study-variant matrices
//! are computed from their closed forms.

use std::sync::OnceLock;

use thiserror::Error;

use crate::field::{
    aes_field, gf8_inv, gf8_mul, gf8_pow, s2_field, snow1_sbox_field, snow2_field, Gf8Modulus,
};
use crate::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SBoxError {
    #[error("table '{name}' is not a permutation: value 0x{value:02X} repeats")]
    NotPermutation { name: String, value: u8 },
    #[error("matrix '{name}' is singular over its byte field")]
    SingularMatrix { name: String },
    #[error("bit permutation is not a permutation of 0..32: position {position} repeats or overflows")]
    BadBitPermutation { position: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataFileError {
    #[error("line {line}: expected `name=<identifier>` before table entries")]
    MissingName { line: usize },
    #[error("line {line}: `{token}` is not a two-digit hex byte")]
    BadByte { line: usize, token: String },
    #[error("expected {expected} entries, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error(transparent)]
    Invalid(#[from] SBoxError),
}

/// Parses the shared table format: comment and blank lines are skipped, the
/// first content line is `name=<id>`, and the rest is whitespace-separated
/// two-digit hex bytes.
pub fn parse_table_file(text: &str, expected: usize) -> Result<(String, Vec<u8>), DataFileError> {
    let mut name: Option<String> = None;
    let mut entries = Vec::with_capacity(expected);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        match &name {
            None => match content.strip_prefix("name=") {
                Some(id) if !id.trim().is_empty() => name = Some(id.trim().to_string()),
                _ => return Err(DataFileError::MissingName { line }),
            },
            Some(_) => {
                for token in content.split_whitespace() {
                    if token.len() != 2 {
                        return Err(DataFileError::BadByte { line, token: token.to_string() });
                    }
                    let byte = u8::from_str_radix(token, 16).map_err(|_| {
                        DataFileError::BadByte { line, token: token.to_string() }
                    })?;
                    entries.push(byte);
                }
            }
        }
    }
    let name = name.ok_or(DataFileError::MissingName { line: 0 })?;
    if entries.len() != expected {
        return Err(DataFileError::WrongLength { expected, found: entries.len() });
    }
    Ok((name, entries))
}

/// A byte substitution table, guaranteed to be a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ByteSBox {
    name: String,
    table: [u8; 256],
}

impl ByteSBox {
    pub fn new(name: impl Into<String>, table: [u8; 256]) -> Result<Self, SBoxError> {
        let name = name.into();
        let mut seen = [false; 256];
        for &v in table.iter() {
            if seen[v as usize] {
                return Err(SBoxError::NotPermutation { name, value: v });
            }
            seen[v as usize] = true;
        }
        Ok(Self { name, table })
    }

    pub fn parse(text: &str) -> Result<Self, DataFileError> {
        let (name, entries) = parse_table_file(text, 256)?;
        let mut table = [0u8; 256];
        table.copy_from_slice(&entries);
        Ok(Self::new(name, table)?)
    }

    #[inline]
    pub fn apply(&self, b: u8) -> u8 {
        self.table[b as usize]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn table(&self) -> &[u8; 256] {
        &self.table
    }
}

/// A 4x4 diffusion matrix over a byte field, guaranteed invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixMatrix {
    name: String,
    entries: [u8; 16],
    field: Gf8Modulus,
}

impl MixMatrix {
    pub fn new(
        name: impl Into<String>,
        entries: [u8; 16],
        field: Gf8Modulus,
    ) -> Result<Self, SBoxError> {
        let name = name.into();
        if !is_invertible(&entries, field) {
            return Err(SBoxError::SingularMatrix { name });
        }
        Ok(Self { name, entries, field })
    }

    pub fn parse(text: &str, field: Gf8Modulus) -> Result<Self, DataFileError> {
        let (name, entries) = parse_table_file(text, 16)?;
        let mut m = [0u8; 16];
        m.copy_from_slice(&entries);
        Ok(Self::new(name, m, field)?)
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> u8 {
        self.entries[row * 4 + col]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Gf8Modulus {
        self.field
    }

    /// Applies the matrix to a column of four bytes.
    pub fn apply(&self, col: [u8; 4]) -> [u8; 4] {
        let mut out = [0u8; 4];
        for (r, slot) in out.iter_mut().enumerate() {
            for (c, &x) in col.iter().enumerate() {
                *slot ^= gf8_mul(self.entry(r, c), x, self.field);
            }
        }
        out
    }
}

/// Gaussian elimination over the byte field.
fn is_invertible(entries: &[u8; 16], field: Gf8Modulus) -> bool {
    let mut m = *entries;
    for col in 0..4 {
        let pivot = match (col..4).find(|&r| m[r * 4 + col] != 0) {
            Some(r) => r,
            None => return false,
        };
        for c in 0..4 {
            m.swap(col * 4 + c, pivot * 4 + c);
        }
        let inv = gf8_inv(m[col * 4 + col], field);
        for r in (col + 1)..4 {
            let factor = gf8_mul(m[r * 4 + col], inv, field);
            for c in 0..4 {
                m[r * 4 + c] ^= gf8_mul(factor, m[col * 4 + c], field);
            }
        }
    }
    true
}

/// A permutation of the 32 bit positions of a word; position 0 is the least
/// significant bit, and input bit `i` moves to output position `map[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitPermutation {
    map: [u8; 32],
}

impl Default for BitPermutation {
    fn default() -> Self {
        BitPermutation::identity()
    }
}

impl BitPermutation {
    pub fn identity() -> Self {
        let mut map = [0u8; 32];
        for (i, slot) in map.iter_mut().enumerate() {
            *slot = i as u8;
        }
        Self { map }
    }

    pub fn new(map: [u8; 32]) -> Result<Self, SBoxError> {
        let mut seen = [false; 32];
        for &p in map.iter() {
            if p >= 32 || seen[p as usize] {
                return Err(SBoxError::BadBitPermutation { position: p });
            }
            seen[p as usize] = true;
        }
        Ok(Self { map })
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &p)| p == i as u8)
    }

    pub fn apply(&self, w: Word) -> Word {
        let mut out = 0;
        for (i, &p) in self.map.iter().enumerate() {
            out |= ((w >> i) & 1) << p;
        }
        out
    }
}

/// Rijndael byte table, loaded from the bundled data file.
pub fn aes_sbox() -> &'static ByteSBox {
    static SBOX: OnceLock<ByteSBox> = OnceLock::new();
    SBOX.get_or_init(|| {
        ByteSBox::parse(include_str!("../data/sbox_sr.txt")).expect("bundled table")
    })
}

/// S_Q byte table of the S2 substitution, loaded from the bundled data file.
pub fn sq_sbox() -> &'static ByteSBox {
    static SBOX: OnceLock<ByteSBox> = OnceLock::new();
    SBOX.get_or_init(|| {
        ByteSBox::parse(include_str!("../data/sbox_sq.txt")).expect("bundled table")
    })
}

/// Field inversion (0 maps to 0) over the SNOW 2.0 byte field, the bare
/// alternative byte box of the S1 substitution.
pub fn inversion_sbox() -> &'static ByteSBox {
    static SBOX: OnceLock<ByteSBox> = OnceLock::new();
    SBOX.get_or_init(|| {
        let m = snow2_field();
        let mut table = [0u8; 256];
        for (i, slot) in table.iter_mut().enumerate() {
            *slot = gf8_inv(i as u8, m);
        }
        ByteSBox::new("inversion-a9", table).expect("inversion is a permutation")
    })
}

/// Fourth-row choice for the study form of the S1 diffusion matrix. The
/// first three rows are the circulant shifts of (X, X+1, 1, 1); the variants
/// differ only in how the pattern is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatrixRow4 {
    /// Complete the circulant: (X+1, 1, 1, X).
    #[default]
    Circulant,
    /// Break the pattern with (X+1, X, 1, 1), a selectable study variant of
    /// the diffusion layer.
    Irregular,
}

/// Byte box feeding the study form of the S1 substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum S1ByteBox {
    /// Full Rijndael table: inversion plus affine map (the default).
    #[default]
    Aes,
    /// Bare field inversion over the SNOW 2.0 byte field.
    Inversion,
}

/// Configuration of the study form of the S1 word substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct S1Config {
    pub byte_box: S1ByteBox,
    pub row4: MatrixRow4,
}

/// Builds the study-form diffusion matrix over the Rijndael field with
/// X = 0x02.
fn study_matrix(row4: MatrixRow4) -> &'static MixMatrix {
    static CIRCULANT: OnceLock<MixMatrix> = OnceLock::new();
    static IRREGULAR: OnceLock<MixMatrix> = OnceLock::new();
    let build = move |name: &str, last_row: [u8; 4]| {
        let x = 0x02u8;
        let x1 = x ^ 0x01;
        let mut entries = [0u8; 16];
        entries[0..4].copy_from_slice(&[x, x1, 1, 1]);
        entries[4..8].copy_from_slice(&[1, x, x1, 1]);
        entries[8..12].copy_from_slice(&[1, 1, x, x1]);
        entries[12..16].copy_from_slice(&last_row);
        MixMatrix::new(name, entries, aes_field()).expect("invertible by construction")
    };
    match row4 {
        MatrixRow4::Circulant => {
            CIRCULANT.get_or_init(|| build("s1-mix-circulant", [0x03, 1, 1, 0x02]))
        }
        MatrixRow4::Irregular => {
            IRREGULAR.get_or_init(|| build("s1-mix-irregular-row", [0x03, 0x02, 1, 1]))
        }
    }
}

/// Deployed S1 diffusion matrix, loaded from the bundled data file. It is
/// the same circulant as the study form read in the opposite byte order.
fn standard_s1_matrix() -> &'static MixMatrix {
    static MATRIX: OnceLock<MixMatrix> = OnceLock::new();
    MATRIX.get_or_init(|| {
        MixMatrix::parse(include_str!("../data/matrix_s1.txt"), aes_field())
            .expect("bundled matrix")
    })
}

/// Deployed S2 diffusion matrix, loaded from the bundled data file.
fn standard_s2_matrix() -> &'static MixMatrix {
    static MATRIX: OnceLock<MixMatrix> = OnceLock::new();
    MATRIX.get_or_init(|| {
        MixMatrix::parse(include_str!("../data/matrix_s2.txt"), s2_field())
            .expect("bundled matrix")
    })
}

/// Applies a byte box and a diffusion matrix to a word; byte 0 is the most
/// significant byte.
fn substitute_word(w: Word, sbox: &ByteSBox, matrix: &MixMatrix) -> Word {
    let col = [
        sbox.apply((w >> 24) as u8),
        sbox.apply((w >> 16) as u8),
        sbox.apply((w >> 8) as u8),
        sbox.apply(w as u8),
    ];
    let out = matrix.apply(col);
    (out[0] as Word) << 24 | (out[1] as Word) << 16 | (out[2] as Word) << 8 | out[3] as Word
}

/// Study form of the S1 word substitution with an explicit configuration.
pub fn s1_word_with(w: Word, config: S1Config) -> Word {
    let sbox = match config.byte_box {
        S1ByteBox::Aes => aes_sbox(),
        S1ByteBox::Inversion => inversion_sbox(),
    };
    substitute_word(w, sbox, study_matrix(config.row4))
}

/// Study form of the S1 word substitution with the default configuration
/// (Rijndael byte box, circulant matrix).
pub fn s1_word(w: Word) -> Word {
    s1_word_with(w, S1Config::default())
}

/// S1 exactly as deployed in SNOW 3G (3GPP TS 35.216): Rijndael byte table
/// plus the data-file diffusion matrix.
pub fn s1_word_standard(w: Word) -> Word {
    substitute_word(w, aes_sbox(), standard_s1_matrix())
}

/// S2 exactly as deployed in SNOW 3G (3GPP TS 35.216): S_Q byte table plus
/// the data-file diffusion matrix over its own byte field.
pub fn s2_word(w: Word) -> Word {
    substitute_word(w, sq_sbox(), standard_s2_matrix())
}

/// SNOW 1.0 byte map: Y^7 in its byte field, then adding g^2+g+1 where g is
/// the field generator 0x02.
pub fn snow1_byte_map(y: u8) -> u8 {
    let m = snow1_sbox_field();
    let offset = gf8_mul(0x02, 0x02, m) ^ 0x02 ^ 0x01;
    gf8_pow(y, 7, m) ^ offset
}

/// The byte map tabulated once, with the permutation property checked.
pub fn snow1_byte_table() -> &'static ByteSBox {
    static SBOX: OnceLock<ByteSBox> = OnceLock::new();
    SBOX.get_or_init(|| {
        let mut table = [0u8; 256];
        for (i, slot) in table.iter_mut().enumerate() {
            *slot = snow1_byte_map(i as u8);
        }
        ByteSBox::new("snow1-power-map", table).expect("Y^7 is a permutation")
    })
}

/// SNOW 1.0 word S-box: the byte map on each byte, then a bit permutation.
pub fn snow1_sbox_word(w: Word, permutation: &BitPermutation) -> Word {
    let sbox = snow1_byte_table();
    let mapped = (sbox.apply((w >> 24) as u8) as Word) << 24
        | (sbox.apply((w >> 16) as u8) as Word) << 16
        | (sbox.apply((w >> 8) as u8) as Word) << 8
        | sbox.apply(w as u8) as Word;
    permutation.apply(mapped)
}
