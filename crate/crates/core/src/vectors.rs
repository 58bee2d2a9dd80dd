//! Known-answer vector files.
//!
//! One entry per line: `cipher=<name> key=<hex> iv=<hex> discard=<n>
//! ks=<hex words to end of line>`. Blank lines and `#` comments are
//! skipped. Unknown fields and unknown cipher names are errors rather
//! than silently ignored, so a typo cannot turn a failing vector into a
//! vacuous pass.

use thiserror::Error;

use crate::keys::{parse_hex_words, KeyParseError};
use crate::snow1::{Snow1, Snow1Key};
use crate::snow2::{Snow2, Snow2Key, DEFAULT_LIMIT};
use crate::snow3g::{Snow3g, Snow3gKey};
use crate::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorEntry {
    pub cipher: String,
    pub key: String,
    pub iv: String,
    /// Keystream words to drop before comparing.
    pub discard: usize,
    pub ks: Vec<Word>,
    /// Line number in the source file, for reporting.
    pub line: usize,
}

#[derive(Debug, Error)]
pub enum VectorError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: unknown cipher `{name}`")]
    UnknownCipher { line: usize, name: String },
    #[error("line {line}: {source}")]
    BadKey {
        line: usize,
        #[source]
        source: KeyParseError,
    },
    #[error("line {line}: entry exceeds the emission budget")]
    TooLong { line: usize },
}

/// Result of replaying one entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseOutcome {
    Pass,
    Mismatch { index: usize, expected: Word, actual: Word },
}

impl CaseOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, CaseOutcome::Pass)
    }
}

fn syntax(line: usize, reason: impl Into<String>) -> VectorError {
    VectorError::Syntax { line, reason: reason.into() }
}

pub fn parse_vector_file(text: &str) -> Result<Vec<VectorEntry>, VectorError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut cipher = None;
        let mut key = None;
        let mut iv = None;
        let mut discard = None;
        let mut ks: Option<Vec<Word>> = None;
        let mut tokens = content.split_whitespace();
        while let Some(token) = tokens.next() {
            let (field, value) = token
                .split_once('=')
                .ok_or_else(|| syntax(line, format!("expected field=value, got `{token}`")))?;
            let slot_taken = match field {
                "cipher" => cipher.replace(value.to_string()).is_some(),
                "key" => key.replace(value.to_string()).is_some(),
                "iv" => iv.replace(value.to_string()).is_some(),
                "discard" => {
                    let n: usize = value
                        .parse()
                        .map_err(|_| syntax(line, format!("bad discard count `{value}`")))?;
                    discard.replace(n).is_some()
                }
                "ks" => {
                    let mut words = Vec::new();
                    for tok in std::iter::once(value).chain(tokens.by_ref()) {
                        let parsed = parse_hex_words(tok, "keystream word", 1)
                            .map_err(|e| syntax(line, e.to_string()))?;
                        words.push(parsed[0]);
                    }
                    ks.replace(words).is_some()
                }
                other => return Err(syntax(line, format!("unknown field `{other}`"))),
            };
            if slot_taken {
                return Err(syntax(line, format!("field `{field}` given twice")));
            }
        }
        let entry = VectorEntry {
            cipher: cipher.ok_or_else(|| syntax(line, "missing field `cipher`"))?,
            key: key.ok_or_else(|| syntax(line, "missing field `key`"))?,
            iv: iv.ok_or_else(|| syntax(line, "missing field `iv`"))?,
            discard: discard.ok_or_else(|| syntax(line, "missing field `discard`"))?,
            ks: ks.ok_or_else(|| syntax(line, "missing field `ks`"))?,
            line,
        };
        if entry.ks.is_empty() {
            return Err(syntax(line, "empty keystream"));
        }
        entries.push(entry);
    }
    Ok(entries)
}

/// Replays one entry against the named cipher and compares keystream
/// words after the configured discard.
pub fn run_entry(entry: &VectorEntry) -> Result<CaseOutcome, VectorError> {
    let bad_key = |source| VectorError::BadKey { line: entry.line, source };
    let total = entry.discard + entry.ks.len();
    let produced: Vec<Word> = match entry.cipher.as_str() {
        "snow1" => {
            let key = Snow1Key::from_hex(&entry.key, &entry.iv).map_err(bad_key)?;
            Snow1::new(&key).keystream(total)
        }
        "snow2" => {
            let key = Snow2Key::from_hex(&entry.key, &entry.iv).map_err(bad_key)?;
            if total as u64 > DEFAULT_LIMIT {
                return Err(VectorError::TooLong { line: entry.line });
            }
            Snow2::new(&key)
                .keystream(total)
                .map_err(|_| VectorError::TooLong { line: entry.line })?
        }
        "snow3g" => {
            let key = Snow3gKey::from_hex(&entry.key, &entry.iv).map_err(bad_key)?;
            Snow3g::new(&key).keystream(total)
        }
        other => {
            return Err(VectorError::UnknownCipher { line: entry.line, name: other.to_string() })
        }
    };
    for (index, (&expected, &actual)) in
        entry.ks.iter().zip(produced[entry.discard..].iter()).enumerate()
    {
        if expected != actual {
            return Ok(CaseOutcome::Mismatch { index, expected, actual });
        }
    }
    Ok(CaseOutcome::Pass)
}
