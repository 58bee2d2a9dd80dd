//! Finite-field and word arithmetic shared by the generators.
//!
//! Two kinds of GF(2^32) structure appear in the SNOW family. SNOW 2.0 and
//! SNOW 3G view a word as a degree-3 polynomial over GF(2^8) and multiply by
//! a root `alpha` of a quartic extension polynomial; SNOW 1.0 builds
//! GF(2^32) directly from a degree-32 binary polynomial. Both multiplications
//! reduce to a shift and a table lookup, and both tables are derived here
//! from the defining polynomials rather than transcribed.

use std::sync::OnceLock;

use thiserror::Error;

use crate::Word;

/// Error raised when a byte-field modulus fails its irreducibility check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("0x{reduction:02X} does not describe an irreducible degree-8 polynomial")]
pub struct ReducibleModulus {
    pub reduction: u8,
}

/// Degree-8 binary polynomial used to reduce GF(2^8) products.
///
/// The stored byte holds the low eight coefficients; the x^8 term is
/// implicit. Construction verifies irreducibility so that every modulus in
/// circulation really defines a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf8Modulus {
    reduction: u8,
}

impl Gf8Modulus {
    pub fn new(reduction: u8) -> Result<Self, ReducibleModulus> {
        let full = 0x100u16 | reduction as u16;
        // Trial division by every polynomial of degree 1..=4 suffices for
        // degree 8.
        for d in 2u16..=0x1F {
            if poly_rem(full, d) == 0 {
                return Err(ReducibleModulus { reduction });
            }
        }
        Ok(Self { reduction })
    }

    pub const fn reduction(self) -> u8 {
        self.reduction
    }
}

/// Remainder of binary-polynomial long division.
fn poly_rem(mut num: u16, den: u16) -> u16 {
    let shift = |p: u16| 15 - p.leading_zeros() as i32;
    let dd = shift(den);
    while num != 0 && shift(num) >= dd {
        num ^= den << (shift(num) - dd);
    }
    num
}

/// Byte field of the SNOW 2.0 / SNOW 3G LFSR tower: x^8+x^7+x^5+x^3+1.
pub fn snow2_field() -> Gf8Modulus {
    Gf8Modulus::new(0xA9).expect("irreducible")
}

/// Byte field underlying the SNOW 1.0 S-box: x^8+x^5+x^3+x+1.
pub fn snow1_sbox_field() -> Gf8Modulus {
    Gf8Modulus::new(0x2B).expect("irreducible")
}

/// Rijndael byte field: x^8+x^4+x^3+x+1.
pub fn aes_field() -> Gf8Modulus {
    Gf8Modulus::new(0x1B).expect("irreducible")
}

/// Byte field of the S2 word substitution: x^8+x^6+x^5+x^3+1.
pub fn s2_field() -> Gf8Modulus {
    Gf8Modulus::new(0x69).expect("irreducible")
}

/// Product in GF(2^8) under the given modulus.
pub fn gf8_mul(a: u8, b: u8, m: Gf8Modulus) -> u8 {
    let mut r = 0u8;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        let overflow = a & 0x80 != 0;
        a <<= 1;
        if overflow {
            a ^= m.reduction;
        }
        b >>= 1;
    }
    r
}

/// Square-and-multiply exponentiation in GF(2^8).
pub fn gf8_pow(a: u8, e: u32, m: Gf8Modulus) -> u8 {
    let mut base = a;
    let mut e = e;
    let mut acc = 1u8;
    while e != 0 {
        if e & 1 == 1 {
            acc = gf8_mul(acc, base, m);
        }
        base = gf8_mul(base, base, m);
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse in GF(2^8); maps 0 to 0.
pub fn gf8_inv(a: u8, m: Gf8Modulus) -> u8 {
    gf8_pow(a, 254, m)
}

/// Addition modulo 2^32, the integer half of the FSM mixing.
pub fn add_mod32(a: Word, b: Word) -> Word {
    a.wrapping_add(b)
}

/// Left rotation by seven used by the SNOW 1.0 register update.
pub fn rotl7(w: Word) -> Word {
    w.rotate_left(7)
}

/// GF(2^32) as a degree-4 extension of the SNOW 2.0 byte field.
///
/// A word is read big-endian: the most significant byte is the coefficient
/// of `alpha^3`. The extension polynomial is
/// `y^4 + d^23 y^3 + d^245 y^2 + d^48 y + d^239` where `d` maps to byte
/// 0x02 of the byte field. This module performs full polynomial products;
/// it is the slow reference route the lookup tables are checked against.
pub mod quartic {
    use super::{gf8_inv, gf8_mul, gf8_pow, snow2_field, Gf8Modulus};
    use crate::Word;

    /// Coefficients of `alpha^4` expressed on `alpha^3..alpha^0`, derived
    /// from the extension polynomial.
    pub fn reduction_coeffs(m: Gf8Modulus) -> [u8; 4] {
        [
            gf8_pow(0x02, 23, m),
            gf8_pow(0x02, 245, m),
            gf8_pow(0x02, 48, m),
            gf8_pow(0x02, 239, m),
        ]
    }

    /// Byte coefficients `[c0, c1, c2, c3]` of `c0 + c1 a + c2 a^2 + c3 a^3`.
    pub fn to_coeffs(w: Word) -> [u8; 4] {
        [w as u8, (w >> 8) as u8, (w >> 16) as u8, (w >> 24) as u8]
    }

    pub fn from_coeffs(c: [u8; 4]) -> Word {
        (c[3] as Word) << 24 | (c[2] as Word) << 16 | (c[1] as Word) << 8 | c[0] as Word
    }

    /// Full product of two field elements.
    pub fn mul(a: Word, b: Word) -> Word {
        let m = snow2_field();
        let red = reduction_coeffs(m);
        let ac = to_coeffs(a);
        let bc = to_coeffs(b);
        let mut prod = [0u8; 7];
        for (i, &x) in ac.iter().enumerate() {
            for (j, &y) in bc.iter().enumerate() {
                prod[i + j] ^= gf8_mul(x, y, m);
            }
        }
        // Fold degrees 6..4 down with a^4 = red[0] a^3 + .. + red[3].
        for deg in (4..7).rev() {
            let c = prod[deg];
            if c != 0 {
                prod[deg] = 0;
                for (k, &r) in red.iter().enumerate() {
                    prod[deg - 4 + (3 - k)] ^= gf8_mul(c, r, m);
                }
            }
        }
        from_coeffs([prod[0], prod[1], prod[2], prod[3]])
    }

    /// The generator `alpha` itself.
    pub fn alpha() -> Word {
        from_coeffs([0, 1, 0, 0])
    }

    /// `alpha^-1`, obtained by rearranging the extension polynomial:
    /// `alpha (alpha^3 + r0 alpha^2 + r1 alpha + r2) = r3`.
    pub fn alpha_inv() -> Word {
        let m = snow2_field();
        let red = reduction_coeffs(m);
        let scale = gf8_inv(red[3], m);
        from_coeffs([
            gf8_mul(red[2], scale, m),
            gf8_mul(red[1], scale, m),
            gf8_mul(red[0], scale, m),
            scale,
        ])
    }
}

/// Bit positions of the SNOW 1.0 feedback polynomial
/// `y^32+y^29+y^20+y^15+y^10+y+1` below the leading term.
const SNOW1_FEEDBACK_BITS: [u32; 6] = [29, 20, 15, 10, 1, 0];

const fn word_from_bits(bits: &[u32]) -> Word {
    let mut w = 0;
    let mut i = 0;
    while i < bits.len() {
        w |= 1 << bits[i];
        i += 1;
    }
    w
}

/// Reduction word for one SNOW 1.0 LFSR step: XORed in when the shifted-out
/// bit is set.
pub const SNOW1_REDUCTION: Word = word_from_bits(&SNOW1_FEEDBACK_BITS);

/// Reduction word for the inverse SNOW 1.0 step, derived from the same
/// polynomial solved for the constant term.
pub const SNOW1_INV_REDUCTION: Word = (SNOW1_REDUCTION >> 1) | (1 << 31);

/// Multiplication by the SNOW 1.0 field generator.
pub fn mul_alpha_snow1(w: Word) -> Word {
    (w << 1) ^ (w >> 31).wrapping_mul(SNOW1_REDUCTION)
}

/// Multiplication by the inverse SNOW 1.0 field generator.
pub fn mul_alpha_inv_snow1(w: Word) -> Word {
    (w >> 1) ^ (w & 1).wrapping_mul(SNOW1_INV_REDUCTION)
}

/// Which GF(2^32) construction a table set serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldVariant {
    /// Degree-32 binary polynomial (SNOW 1.0). The tables collapse to the
    /// two reduction words; they are stored at indices 0 and 1.
    Snow1,
    /// Degree-4 tower over GF(2^8) (SNOW 2.0 and SNOW 3G).
    Snow2,
}

/// Precomputed single-step multiplication tables for `alpha` and its
/// inverse.
#[derive(Debug, Clone)]
pub struct AlphaTables {
    variant: FieldVariant,
    mul_a: [Word; 256],
    mul_ainv: [Word; 256],
}

/// Builds the lookup tables from the defining polynomials.
pub fn build_alpha_tables(variant: FieldVariant) -> AlphaTables {
    let mut mul_a = [0 as Word; 256];
    let mut mul_ainv = [0 as Word; 256];
    match variant {
        FieldVariant::Snow1 => {
            mul_a[1] = SNOW1_REDUCTION;
            mul_ainv[1] = SNOW1_INV_REDUCTION;
        }
        FieldVariant::Snow2 => {
            let m = snow2_field();
            let red = quartic::reduction_coeffs(m);
            let inv = quartic::to_coeffs(quartic::alpha_inv());
            for b in 0..256usize {
                let x = b as u8;
                // Overflow coefficient times a^4, and low coefficient times
                // a^-1, both expanded on the word basis.
                mul_a[b] = quartic::from_coeffs([
                    gf8_mul(x, red[3], m),
                    gf8_mul(x, red[2], m),
                    gf8_mul(x, red[1], m),
                    gf8_mul(x, red[0], m),
                ]);
                mul_ainv[b] = quartic::from_coeffs([
                    gf8_mul(x, inv[0], m),
                    gf8_mul(x, inv[1], m),
                    gf8_mul(x, inv[2], m),
                    gf8_mul(x, inv[3], m),
                ]);
            }
        }
    }
    AlphaTables { variant, mul_a, mul_ainv }
}

impl AlphaTables {
    pub fn variant(&self) -> FieldVariant {
        self.variant
    }

    /// One multiplication by the field generator: shift plus table lookup.
    #[inline]
    pub fn mul_alpha(&self, w: Word) -> Word {
        match self.variant {
            FieldVariant::Snow2 => (w << 8) ^ self.mul_a[(w >> 24) as usize],
            FieldVariant::Snow1 => (w << 1) ^ self.mul_a[(w >> 31) as usize],
        }
    }

    /// One multiplication by the inverse generator.
    #[inline]
    pub fn mul_alpha_inv(&self, w: Word) -> Word {
        match self.variant {
            FieldVariant::Snow2 => (w >> 8) ^ self.mul_ainv[(w & 0xFF) as usize],
            FieldVariant::Snow1 => (w >> 1) ^ self.mul_ainv[(w & 1) as usize],
        }
    }
}

/// Shared table set for the SNOW 2.0 / SNOW 3G word field.
pub fn snow2_tables() -> &'static AlphaTables {
    static TABLES: OnceLock<AlphaTables> = OnceLock::new();
    TABLES.get_or_init(|| build_alpha_tables(FieldVariant::Snow2))
}
