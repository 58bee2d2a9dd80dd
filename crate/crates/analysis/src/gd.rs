//! Guess-and-determine attack on the mini generator.
//!
//! The mini FSM reads the output cell and its neighbour, so once the
//! two registers are guessed, each keystream word constrains exactly
//! one fresh cell. The attack enumerates the 2^(2m) register pairs,
//! determines cell candidates word by word, and keeps the assignments
//! that reproduce the whole keystream. Cost is counted in register
//! guesses: far below the 2^(m(n+2)) of brute force over full states.

use crate::rng::substream;
use rand::RngCore;
use snowlab_core::mini::{mini_enumerate, Mini, MiniArith, MiniError, MiniParams};
use thiserror::Error;

/// Stream tag of the planted-state trials.
const TAG_PLANT: u64 = 0x6764_706c;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GdError {
    #[error(transparent)]
    Params(#[from] MiniError),
    #[error("{got} keystream words cannot determine {need} cells")]
    KeystreamTooShort { got: usize, need: usize },
    #[error("keystream word {index} does not fit the cipher's word size")]
    WordOutOfRange { index: usize },
}

/// Attack result: every full initial state (cells then R1, R2) that
/// reproduces the keystream, plus the work spent finding them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdOutcome {
    /// Consistent initial states in lexicographic order.
    pub states: Vec<Vec<u8>>,
    /// Register pairs enumerated: always 2^(2m).
    pub guesses: u64,
    /// Search tree nodes visited while determining cells.
    pub nodes: u64,
}

/// Runs the attack. Needs at least `n` keystream words to determine
/// the cells; words beyond the first `n` only prune, so more words
/// mean fewer surviving states.
pub fn gd_attack(params: &MiniParams, keystream: &[u8]) -> Result<GdOutcome, GdError> {
    params.validate()?;
    let n = params.n;
    if keystream.len() < n {
        return Err(GdError::KeystreamTooShort { got: keystream.len(), need: n });
    }
    let mask = params.word_mask();
    if let Some(index) = keystream.iter().position(|&z| z & !mask != 0) {
        return Err(GdError::WordOutOfRange { index });
    }

    let words = 1u16 << params.m;
    let combine = |a: u8, b: u8| -> u8 {
        match params.arith {
            MiniArith::Add => ((a as u16 + b as u16) as u8) & mask,
            MiniArith::Xor => a ^ b,
        }
    };

    let mut states = Vec::new();
    let mut guesses = 0u64;
    let mut nodes = 0u64;
    let mut cells = Vec::with_capacity(n);

    for r1_0 in 0..words {
        for r2_0 in 0..words {
            guesses += 1;
            cells.clear();
            let guess = (r1_0 as u8, r2_0 as u8);
            descend(
                params,
                keystream,
                &combine,
                guess,
                guess,
                &mut cells,
                &mut nodes,
                &mut states,
            );
        }
    }
    states.sort();
    Ok(GdOutcome { states, guesses, nodes })
}

/// Depth `cells.len()`: picks the cell reaching the output at that
/// step. `regs` holds (R1, R2) of the previous step, which fix this
/// step's registers once the cell is chosen; `guess` is the starting
/// pair kept for the final replay.
#[allow(clippy::too_many_arguments)]
fn descend(
    params: &MiniParams,
    keystream: &[u8],
    combine: &impl Fn(u8, u8) -> u8,
    guess: (u8, u8),
    regs: (u8, u8),
    cells: &mut Vec<u8>,
    nodes: &mut u64,
    states: &mut Vec<Vec<u8>>,
) {
    let n = params.n;
    let t = cells.len();
    if t == n {
        *nodes += 1;
        let mut state = cells.clone();
        state.push(guess.0);
        state.push(guess.1);
        let mut replay = Mini::new(params, &state).expect("searched state is well formed");
        if replay.keystream(keystream.len()) == keystream {
            states.push(state);
        }
        return;
    }

    let (r1_prev, r2_prev) = regs;
    // Registers after the previous step; at depth 0 they are the guess
    // itself and the "previous" values are unused.
    let r2_t = if t == 0 { guess.1 } else { params.sbox[r1_prev as usize] };
    for w in 0..1u16 << params.m {
        let w = w as u8;
        *nodes += 1;
        let r1_t = if t == 0 { guess.0 } else { combine(w, r2_prev) };
        let fm = combine(w, r1_t) ^ r2_t;
        if fm ^ w == keystream[t] {
            cells.push(w);
            descend(params, keystream, combine, guess, (r1_t, r2_t), cells, nodes, states);
            cells.pop();
        }
    }
}

/// One planted-state experiment: the attack against a known answer,
/// cross-checked by exhaustive enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdTrial {
    /// The state the keystream was generated from.
    pub planted: Vec<u8>,
    /// Keystream handed to the attacker.
    pub keystream: Vec<u8>,
    /// What the attack found.
    pub outcome: GdOutcome,
    /// Every consistent state by brute force, sorted.
    pub enumerated: Vec<Vec<u8>>,
}

impl GdTrial {
    /// True when the attack found exactly the planted state and brute
    /// force confirms nothing else is consistent.
    pub fn exact_unique_recovery(&self) -> bool {
        self.outcome.states.len() == 1
            && self.outcome.states[0] == self.planted
            && self.enumerated == self.outcome.states
    }
}

/// Plants a seeded random state, emits `words` keystream words, and
/// runs both the attack and the exhaustive check against them.
pub fn gd_trial(params: &MiniParams, words: usize, seed: u64) -> Result<GdTrial, GdError> {
    params.validate()?;
    let mut rng = substream(seed, TAG_PLANT, 0);
    let mask = params.word_mask();
    let planted: Vec<u8> = (0..params.n + 2)
        .map(|_| (rng.next_u32() as u8) & mask)
        .collect();
    let keystream =
        Mini::new(params, &planted).expect("planted state fits the word size").keystream(words);
    let outcome = gd_attack(params, &keystream)?;
    let mut enumerated = mini_enumerate(params, &keystream)?;
    enumerated.sort();
    Ok(GdTrial { planted, keystream, outcome, enumerated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use snowlab_core::mini::{identity_sbox, mini_enumerate};

    fn sorted(mut v: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
        v.sort();
        v
    }

    fn keystream_of(params: &MiniParams, state: &[u8], len: usize) -> Vec<u8> {
        Mini::new(params, state).unwrap().keystream(len)
    }

    #[test]
    fn recovers_a_planted_state_uniquely() {
        let params = MiniParams::canonical_small();
        let planted = vec![3, 1, 4, 1, 5, 9];
        let ks = keystream_of(&params, &planted, 12);
        let out = gd_attack(&params, &ks).unwrap();
        assert_eq!(out.states, vec![planted]);
        assert_eq!(out.guesses, 256);
    }

    #[test]
    fn agrees_with_exhaustive_enumeration() {
        let params = MiniParams::canonical_small();
        for planted in [vec![3, 1, 4, 1, 5, 9], vec![0, 0, 0, 1, 0, 0], vec![15, 14, 13, 12, 11, 10]] {
            let ks = keystream_of(&params, &planted, 12);
            let out = gd_attack(&params, &ks).unwrap();
            let brute = mini_enumerate(&params, &ks).unwrap();
            assert_eq!(out.states, sorted(brute));
            assert!(out.states.contains(&planted));
        }
    }

    #[test]
    fn every_survivor_replays_the_keystream() {
        let params = MiniParams::canonical_small();
        let ks = keystream_of(&params, &[7, 2, 9, 4, 0, 8], 6);
        let out = gd_attack(&params, &ks).unwrap();
        assert!(!out.states.is_empty());
        for state in &out.states {
            assert_eq!(keystream_of(&params, state, 6), ks);
        }
    }

    #[test]
    fn planted_trial_is_deterministic_and_exact() {
        let params = MiniParams::canonical_small();
        let a = gd_trial(&params, 12, 17).unwrap();
        let b = gd_trial(&params, 12, 17).unwrap();
        assert_eq!(a, b);
        assert!(a.exact_unique_recovery());
        assert_eq!(a.outcome.guesses, 256);
        assert_eq!(a.keystream.len(), 12);
        assert_ne!(gd_trial(&params, 12, 18).unwrap().planted, a.planted);
    }

    #[test]
    fn corrupting_the_keystream_leaves_no_survivors() {
        let params = MiniParams::canonical_small();
        let mut ks = keystream_of(&params, &[3, 1, 4, 1, 5, 9], 12);
        ks[6] ^= 0x5;
        let out = gd_attack(&params, &ks).unwrap();
        assert!(out.states.is_empty());
        assert_eq!(out.guesses, 256);
    }

    #[test]
    fn xor_variant_with_identity_sbox_is_also_recovered() {
        let params = MiniParams {
            sbox: identity_sbox(4),
            arith: MiniArith::Xor,
            ..MiniParams::canonical_small()
        };
        let planted = vec![6, 10, 2, 5, 12, 3];
        let ks = keystream_of(&params, &planted, 12);
        let out = gd_attack(&params, &ks).unwrap();
        assert!(out.states.contains(&planted));
        assert_eq!(out.states, sorted(mini_enumerate(&params, &ks).unwrap()));
    }

    #[test]
    fn three_cell_variant_works() {
        let params = MiniParams {
            n: 3,
            taps: vec![(0, 2), (1, 1), (2, 1)],
            ..MiniParams::canonical_small()
        };
        let planted = vec![9, 6, 3, 0, 7];
        let ks = keystream_of(&params, &planted, 10);
        let out = gd_attack(&params, &ks).unwrap();
        assert!(out.states.contains(&planted));
        assert_eq!(out.states, sorted(mini_enumerate(&params, &ks).unwrap()));
    }

    #[test]
    fn tiny_two_bit_cipher_matches_enumeration_exhaustively() {
        let params = MiniParams {
            m: 2,
            n: 2,
            modulus: 0x7,
            taps: vec![(0, 2), (1, 1)],
            sbox: identity_sbox(2),
            arith: MiniArith::Add,
        };
        for packed in 0..256u32 {
            let state: Vec<u8> = (0..4).map(|i| ((packed >> (2 * i)) & 3) as u8).collect();
            let ks = keystream_of(&params, &state, 8);
            let out = gd_attack(&params, &ks).unwrap();
            assert_eq!(out.guesses, 16);
            assert_eq!(out.states, sorted(mini_enumerate(&params, &ks).unwrap()));
            assert!(out.states.contains(&state));
        }
    }

    #[test]
    fn argument_errors() {
        let params = MiniParams::canonical_small();
        assert_eq!(
            gd_attack(&params, &[1, 2, 3]),
            Err(GdError::KeystreamTooShort { got: 3, need: 4 })
        );
        assert_eq!(
            gd_attack(&params, &[1, 2, 3, 16, 1]),
            Err(GdError::WordOutOfRange { index: 3 })
        );
    }

    #[test]
    fn work_stays_near_the_guess_budget() {
        let params = MiniParams::canonical_small();
        let ks = keystream_of(&params, &[3, 1, 4, 1, 5, 9], 12);
        let out = gd_attack(&params, &ks).unwrap();
        // 256 guesses, each scanning 16 candidates at depth 0 and only
        // consistent branches deeper: a few thousand nodes, not 2^24.
        assert!(out.nodes < 1 << 16, "visited {} nodes", out.nodes);
    }
}
