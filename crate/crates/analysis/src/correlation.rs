//! Exact correlations of mask relations over small word functions,
//! by exhaustive enumeration of the domain.

use thiserror::Error;

/// Largest domain accepted for exhaustive enumeration.
pub const MAX_DOMAIN_BITS: u32 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorrelationError {
    #[error("a {bits}-bit domain exceeds the {MAX_DOMAIN_BITS}-bit exhaustive ceiling")]
    DomainTooWide { bits: u32 },
    #[error("domain must have at least one bit")]
    DomainEmpty,
}

/// The linear relation `<output_mask, f(x)> = <input_mask, x>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaskPair {
    pub output_mask: u32,
    pub input_mask: u32,
}

fn parity(w: u32) -> u32 {
    w.count_ones() & 1
}

/// Correlation of the mask relation over all 2^bits inputs:
/// (agreements - disagreements) / 2^bits, a value in [-1, 1].
pub fn correlation_exhaustive<F>(f: F, bits: u32, masks: MaskPair) -> Result<f64, CorrelationError>
where
    F: Fn(u32) -> u32,
{
    let size = check_domain(bits)?;
    let mut agree = 0i64;
    for x in 0..size {
        let lhs = parity(f(x as u32) & masks.output_mask);
        let rhs = parity(x as u32 & masks.input_mask);
        if lhs == rhs {
            agree += 1;
        }
    }
    let n = size as i64;
    Ok((2 * agree - n) as f64 / n as f64)
}

fn check_domain(bits: u32) -> Result<u64, CorrelationError> {
    if bits == 0 {
        return Err(CorrelationError::DomainEmpty);
    }
    if bits > MAX_DOMAIN_BITS {
        return Err(CorrelationError::DomainTooWide { bits });
    }
    Ok(1u64 << bits)
}

/// Integer correlation numerators of one output mask against every
/// input mask at once, via the fast Walsh-Hadamard transform.
///
/// Entry `lambda` is `agreements - disagreements` for the relation
/// `<output_mask, f(x)> = <lambda, x>`; dividing by 2^bits gives the
/// correlation.
pub fn spectrum<F>(f: F, bits: u32, output_mask: u32) -> Result<Vec<i64>, CorrelationError>
where
    F: Fn(u32) -> u32,
{
    let n = check_domain(bits)? as usize;
    let mut v: Vec<i64> = (0..n)
        .map(|x| if parity(f(x as u32) & output_mask) == 0 { 1 } else { -1 })
        .collect();
    let mut half = 1;
    while half < n {
        for block in v.chunks_mut(2 * half) {
            for i in 0..half {
                let (a, b) = (block[i], block[i + half]);
                block[i] = a + b;
                block[i + half] = a - b;
            }
        }
        half *= 2;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use snowlab_core::sboxes::aes_sbox;

    #[test]
    fn identity_function_correlates_exactly_with_itself() {
        let id = |x: u32| x;
        let c = correlation_exhaustive(id, 8, MaskPair { output_mask: 1, input_mask: 1 }).unwrap();
        assert_eq!(c, 1.0);
        let c = correlation_exhaustive(id, 8, MaskPair { output_mask: 1, input_mask: 2 }).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn complement_flips_the_sign() {
        let not4 = |x: u32| x ^ 0xF;
        let c = correlation_exhaustive(not4, 4, MaskPair { output_mask: 1, input_mask: 1 }).unwrap();
        assert_eq!(c, -1.0);
    }

    #[test]
    fn linear_function_has_unit_correlation_on_its_own_mask() {
        let f = |x: u32| (x & 1) ^ ((x >> 2) & 1);
        let c = correlation_exhaustive(f, 4, MaskPair { output_mask: 1, input_mask: 0b0101 }).unwrap();
        assert_eq!(c, 1.0);
        let c = correlation_exhaustive(f, 4, MaskPair { output_mask: 1, input_mask: 0b0001 }).unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn spectrum_matches_the_direct_loop() {
        let f = |x: u32| aes_sbox().apply(x as u8) as u32;
        let s = spectrum(f, 8, 0x37).unwrap();
        for lambda in 0..256u32 {
            let direct =
                correlation_exhaustive(f, 8, MaskPair { output_mask: 0x37, input_mask: lambda })
                    .unwrap();
            assert_eq!(s[lambda as usize] as f64 / 256.0, direct, "lambda {lambda}");
        }
    }

    #[test]
    fn aes_component_spectra_satisfy_parseval_exactly() {
        for output_mask in [0x01u32, 0x80, 0x5A, 0xFF] {
            let s = spectrum(|x| aes_sbox().apply(x as u8) as u32, 8, output_mask).unwrap();
            let total: i64 = s.iter().map(|&w| w * w).sum();
            assert_eq!(total, 256 * 256, "output mask {output_mask:#x}");
            assert_eq!(s[0], 0, "nonzero components of a bijection are balanced");
        }
    }

    #[test]
    fn aes_linearity_is_32() {
        let s = spectrum(|x| aes_sbox().apply(x as u8) as u32, 8, 0x01).unwrap();
        let max = s.iter().skip(1).map(|w| w.abs()).max().unwrap();
        assert_eq!(max, 32);
    }

    #[test]
    fn correlation_agrees_with_bitwise_parity_definition() {
        let f = |x: u32| aes_sbox().apply(x as u8) as u32;
        let masks = MaskPair { output_mask: 0xB4, input_mask: 0x29 };
        let mut agree = 0i64;
        for x in 0..256u32 {
            let mut lhs = 0u32;
            let fx = f(x);
            let mut rhs = 0u32;
            for b in 0..8 {
                lhs ^= (fx >> b) & (masks.output_mask >> b) & 1;
                rhs ^= (x >> b) & (masks.input_mask >> b) & 1;
            }
            if lhs == rhs {
                agree += 1;
            }
        }
        let naive = (2 * agree - 256) as f64 / 256.0;
        assert_eq!(correlation_exhaustive(f, 8, masks).unwrap(), naive);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(
            correlation_exhaustive(|x| x, 17, MaskPair { output_mask: 1, input_mask: 1 }),
            Err(CorrelationError::DomainTooWide { bits: 17 })
        );
        assert_eq!(
            correlation_exhaustive(|x| x, 0, MaskPair { output_mask: 1, input_mask: 1 }),
            Err(CorrelationError::DomainEmpty)
        );
    }

    #[test]
    fn sixteen_bit_domain_stays_cheap() {
        let f = |x: u32| x.rotate_left(3) ^ (x >> 1);
        let c = correlation_exhaustive(f, 16, MaskPair { output_mask: 0x8000, input_mask: 0x4001 })
            .unwrap();
        assert!((-1.0..=1.0).contains(&c));
    }
}
