//! Linear-complexity witnesses separating the shift register, the
//! linearized generators, and the real generators.
//!
//! The 512-bit shift-register state evolves under a single F2-linear
//! map whose minimal polynomial has degree 512, so any bit plane of the
//! raw register sequence has linear complexity exactly 512. The
//! linearized generators add the FSM registers: two XOR-coupled
//! registers contribute at most a factor (x + 1) on top (degree 513),
//! three contribute a degree-3 factor (degree 515). The real generators
//! break linearity entirely and a 4096-bit sample already measures in
//! the thousands.

use snowlab_analysis::bitseq::word_bit_plane;
use snowlab_analysis::bm::berlekamp_massey;
use snowlab_core::field::snow2_tables;
use snowlab_core::snow2::{Arith, Snow2, Snow2Config, Snow2Key};
use snowlab_core::snow3g::{Snow3g, Snow3gConfig, Snow3gKey};
use snowlab_core::Word;

const KEY64: &str = "00112233445566778899AABBCCDDEEFF00112233445566778899AABBCCDDEEFF";
const IV32: &str = "0123456789ABCDEF0123456789ABCDEF";
const KEY32: &str = "2BD6459F82C5B300952C49104881FF48";
const IV32B: &str = "EA024714AD5C4D84DF1F9B251C0BF45F";

fn complexity_of_plane(words: &[Word], plane: u32) -> usize {
    berlekamp_massey(&word_bit_plane(words, plane)).complexity
}

/// The raw word recurrence with no FSM on top.
fn shift_register_words(len: usize) -> Vec<Word> {
    let t = snow2_tables();
    let mut s: Vec<Word> = (0..16)
        .map(|i| 0x9E37_79B9u32.wrapping_mul(i as u32 + 1))
        .collect();
    while s.len() < len {
        let i = s.len() - 16;
        let fb = t.mul_alpha(s[i]) ^ s[i + 2] ^ t.mul_alpha_inv(s[i + 11]);
        s.push(fb);
    }
    s
}

#[test]
fn shift_register_planes_have_complexity_exactly_512() {
    let words = shift_register_words(4096);
    for plane in [0, 7, 31] {
        let bits = word_bit_plane(&words, plane);
        let r = berlekamp_massey(&bits);
        assert_eq!(r.complexity, 512, "plane {plane}");
        assert!(r.reproduces(&bits), "plane {plane} regeneration");
    }
}

#[test]
fn linearized_snow2_keystream_carries_one_register_factor() {
    let key = Snow2Key::from_hex(KEY64, IV32).unwrap();
    let mut g = Snow2::with_config(
        &key,
        Snow2Config { arith: Arith::Linearized, ..Snow2Config::default() },
    );
    let words = g.keystream(4096).unwrap();

    // The two FSM registers add an (x + 1) factor to the degree-512
    // state polynomial, so planes measure 513 except where the
    // register component cancels for this key.
    let bits = word_bit_plane(&words, 31);
    let r = berlekamp_massey(&bits);
    assert_eq!(r.complexity, 513);
    assert!(r.reproduces(&bits));
    assert_eq!(complexity_of_plane(&words, 7), 512);
    for plane in 0..32 {
        let c = complexity_of_plane(&words, plane);
        assert!((512..=513).contains(&c), "plane {plane} measured {c}");
    }
}

#[test]
fn linearized_snow3g_keystream_carries_a_degree_three_register_factor() {
    let key = Snow3gKey::from_hex(KEY32, IV32B).unwrap();
    let mut g = Snow3g::with_config(&key, Snow3gConfig { arith: Arith::Linearized });
    let words = g.keystream(4096);
    let bits = word_bit_plane(&words, 31);
    let r = berlekamp_massey(&bits);
    assert_eq!(r.complexity, 515);
    assert!(r.reproduces(&bits));
    assert_eq!(complexity_of_plane(&words, 0), 515);
}

#[test]
fn real_generators_leave_the_linear_regime() {
    let key = Snow2Key::from_hex(KEY64, IV32).unwrap();
    let words = Snow2::new(&key).keystream(4096).unwrap();
    assert!(complexity_of_plane(&words, 31) > 512);

    let key = Snow3gKey::from_hex(KEY32, IV32B).unwrap();
    let words = Snow3g::new(&key).keystream(4096);
    assert!(complexity_of_plane(&words, 31) > 512);
}

#[test]
fn linearized_keystream_superposes_over_the_shift_register_state() {
    // Keyed construction cannot reach raw states, so superpose over
    // keys: in the linearized generator the map key -> keystream is an
    // affine F2 map, and the four-term XOR cancels the affine part.
    let cfg = Snow2Config { arith: Arith::Linearized, ..Snow2Config::default() };
    let ks = |key_hex: &str| {
        let key = Snow2Key::from_hex(key_hex, IV32).unwrap();
        Snow2::with_config(&key, cfg).keystream(64).unwrap()
    };
    let a = "00000000000000000000000000000000000000000000000000000000000000FF";
    let b = "0000000000000000000000000000000000000000000000000000000000FF0000";
    let ab = "0000000000000000000000000000000000000000000000000000000000FF00FF";
    let zero = "0000000000000000000000000000000000000000000000000000000000000000";
    let (za, zb, zab, z0) = (ks(a), ks(b), ks(ab), ks(zero));
    for i in 0..64 {
        assert_eq!(zab[i] ^ z0[i], za[i] ^ zb[i], "word {i}");
    }
}
