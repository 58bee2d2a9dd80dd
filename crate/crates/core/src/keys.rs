//! Hex key and IV parsing shared by the generators.
//!
//! All hex strings are read big-endian: the leftmost eight digits form the
//! first word of the tuple.

use thiserror::Error;

use crate::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeyParseError {
    #[error("{role} must be {expected} hex digits, got {found}")]
    WrongLength { role: &'static str, expected: usize, found: usize },
    #[error("{role} contains a non-hex character")]
    BadDigit { role: &'static str },
}

pub fn parse_hex_words(
    s: &str,
    role: &'static str,
    count: usize,
) -> Result<Vec<Word>, KeyParseError> {
    if s.len() != count * 8 {
        return Err(KeyParseError::WrongLength { role, expected: count * 8, found: s.len() });
    }
    // from_str_radix tolerates a leading sign, which is not hex.
    if !s.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(KeyParseError::BadDigit { role });
    }
    (0..count)
        .map(|i| {
            Word::from_str_radix(&s[i * 8..(i + 1) * 8], 16)
                .map_err(|_| KeyParseError::BadDigit { role })
        })
        .collect()
}
