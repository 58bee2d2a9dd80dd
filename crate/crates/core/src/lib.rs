//! Keystream generators of the SNOW family and a scaled-down study variant.
//!
//! The crate is organised bottom-up: [`field`] provides the byte- and
//! word-level finite-field arithmetic, [`sboxes`] the substitution layers
//! built on top of it, and the cipher modules ([`snow1`], [`snow2`],
//! [`snow3g`], [`mini`]) the generators themselves. [`vectors`] runs
//! published test-vector files against the generators.
//!
//! The optional `fault-hooks` feature exposes raw-state construction and
//! bit-level manipulation on the SNOW 3G state for fault-injection studies;
//! it is off by default so the ordinary API cannot reach internal state.

pub mod field;
pub mod keys;
pub mod mini;
pub mod sboxes;
pub mod snow1;
pub mod snow2;
pub mod snow3g;
pub mod vectors;

/// Machine word processed by the full-size generators.
pub type Word = u32;
