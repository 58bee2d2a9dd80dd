//! Berlekamp-Massey: shortest linear recurrence of a bit sequence.

/// Shortest LFSR found for a sequence.
///
/// `connection[0]` is always 1 and `connection[j] = 1` means the
/// recurrence uses the bit `j` steps back:
/// `s[t] = XOR over j with connection[j] = 1, j >= 1, of s[t-j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearComplexityResult {
    /// Length of the shortest recurrence (the linear complexity).
    pub complexity: usize,
    /// Recurrence coefficients, length `complexity + 1`.
    pub connection: Vec<u8>,
    /// Linear complexity of every prefix, one entry per input bit.
    pub profile: Vec<usize>,
}

impl LinearComplexityResult {
    /// Extends a prefix of at least `complexity` bits to `len` bits
    /// using the recovered recurrence.
    pub fn extend(&self, prefix: &[u8], len: usize) -> Vec<u8> {
        assert!(
            prefix.len() >= self.complexity,
            "prefix shorter than the recurrence"
        );
        let mut out = prefix.to_vec();
        out.truncate(len);
        for t in out.len()..len {
            let mut bit = 0;
            for (j, &c) in self.connection.iter().enumerate().skip(1) {
                bit ^= c & out[t - j];
            }
            out.push(bit);
        }
        out
    }

    /// True when the recurrence regenerates the whole sequence from its
    /// first `complexity` bits.
    pub fn reproduces(&self, bits: &[u8]) -> bool {
        self.extend(&bits[..self.complexity], bits.len()) == bits
    }
}

/// Runs Berlekamp-Massey over GF(2) and returns the shortest recurrence
/// together with the complexity profile.
pub fn berlekamp_massey(bits: &[u8]) -> LinearComplexityResult {
    let n = bits.len();
    let mut current = vec![0u8; n + 1];
    let mut previous = vec![0u8; n + 1];
    current[0] = 1;
    previous[0] = 1;
    let mut complexity = 0usize;
    let mut shift = 1usize;
    let mut profile = Vec::with_capacity(n);
    for i in 0..n {
        let mut discrepancy = bits[i] & 1;
        for j in 1..=complexity {
            discrepancy ^= current[j] & bits[i - j];
        }
        if discrepancy == 0 {
            shift += 1;
        } else if 2 * complexity <= i {
            let stale = current.clone();
            for j in 0..=n - shift {
                current[j + shift] ^= previous[j];
            }
            complexity = i + 1 - complexity;
            previous = stale;
            shift = 1;
        } else {
            for j in 0..=n - shift {
                current[j + shift] ^= previous[j];
            }
            shift += 1;
        }
        profile.push(complexity);
    }
    debug_assert!(current[complexity + 1..].iter().all(|&c| c == 0));
    current.truncate(complexity + 1);
    LinearComplexityResult { complexity, connection: current, profile }
}
