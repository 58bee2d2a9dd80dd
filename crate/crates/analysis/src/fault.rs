//! Single-bit fault injection on the XOR-linearized generator and
//! recovery of the 512-bit shift-register state by linear algebra.
//!
//! In the linearized generator every keystream word is an F2-linear
//! image of the initial state, the initial registers, and the planted
//! fault. Each observed faulted word therefore contributes 32 linear
//! equations in the 512 unknown state bits; two dozen well-spread
//! faults plus one clean word make the system full rank and pin the
//! state exactly.

use crate::f2::{gaussian_solve, F2Solution, F2System};
use crate::rng::substream;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use rayon::prelude::*;
use snowlab_core::snow2::Arith;
use snowlab_core::snow3g::{FaultError, FaultTarget, Snow3g, Snow3gConfig, Snow3gSnapshot};
use snowlab_core::Word;
use thiserror::Error;

/// Stream tag of the planted-recovery trials.
const TAG_TRIAL: u64 = 0x6661_756c;

/// Bits in the shift-register state.
pub const STATE_BITS: usize = 512;

/// One planted fault: flip `bit` of `target` after `time` keystream
/// words have been produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaultSpec {
    pub target: FaultTarget,
    pub bit: u32,
    pub time: u64,
}

/// The keystream word seen at the fault's injection time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaultObservation {
    pub spec: FaultSpec,
    pub word: Word,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FaultPlanError {
    #[error("fault time {requested} is before the generator position {current}")]
    TimeAlreadyPassed { requested: u64, current: u64 },
    #[error(transparent)]
    Flip(#[from] FaultError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecoveryError {
    #[error("observations span a rank-{rank} system, short of {STATE_BITS}")]
    RankDeficient { rank: usize },
    #[error("observations contradict the linear model")]
    Inconsistent,
    #[error(transparent)]
    InvalidFault(#[from] FaultError),
}

/// Runs a copy of the snapshot forward to `spec.time` produced words,
/// flips the bit there, and returns the faulted generator's snapshot.
pub fn inject_fault(snap: &Snow3gSnapshot, spec: FaultSpec) -> Result<Snow3gSnapshot, FaultPlanError> {
    let mut g = snap.instantiate();
    if spec.time < g.clock() {
        return Err(FaultPlanError::TimeAlreadyPassed { requested: spec.time, current: g.clock() });
    }
    while g.clock() < spec.time {
        g.next_word();
    }
    g.flip_bit(spec.target, spec.bit)?;
    Ok(g.snapshot())
}

/// Keystream of the faulted generator, starting at the injection time.
pub fn faulted_keystream(
    snap: &Snow3gSnapshot,
    spec: FaultSpec,
    len: usize,
) -> Result<Vec<Word>, FaultPlanError> {
    let mut g = inject_fault(snap, spec)?.instantiate();
    Ok(g.keystream(len))
}

/// Plants the fault on a fresh copy and observes the single word
/// produced right after the flip.
pub fn observe_fault(snap: &Snow3gSnapshot, spec: FaultSpec) -> Result<FaultObservation, FaultPlanError> {
    let word = faulted_keystream(snap, spec, 1)?[0];
    Ok(FaultObservation { spec, word })
}

/// One observation per fault, each planted on its own fresh copy of the
/// snapshot.
pub fn gather_observations(
    snap: &Snow3gSnapshot,
    plan: &[FaultSpec],
) -> Result<Vec<FaultObservation>, FaultPlanError> {
    plan.iter().map(|&spec| observe_fault(snap, spec)).collect()
}

/// A well-spread random plan: `count` faults at distinct times in
/// `1..=2*count`, cycling over registers and cells with random bits.
pub fn random_fault_plan(count: usize, rng: &mut impl Rng) -> Vec<FaultSpec> {
    let mut times: Vec<u64> = (1..=2 * count as u64).collect();
    times.shuffle(rng);
    times.truncate(count);
    times.sort_unstable();
    times
        .into_iter()
        .map(|time| {
            let target = match rng.gen_range(0..19) {
                0 => FaultTarget::R1,
                1 => FaultTarget::R2,
                2 => FaultTarget::R3,
                c => FaultTarget::Lfsr(c - 3),
            };
            FaultSpec { target, bit: rng.gen_range(0..32), time }
        })
        .collect()
}

fn linearized() -> Snow3gConfig {
    Snow3gConfig { arith: Arith::Linearized }
}

/// Word produced at `spec.time` by a zero-state linearized generator
/// carrying the known registers and the planted fault.
fn offset_word(registers: (Word, Word, Word), spec: FaultSpec) -> Result<Word, FaultError> {
    let (r1, r2, r3) = registers;
    let mut g = Snow3g::from_raw([0; 16], r1, r2, r3, linearized());
    while g.clock() < spec.time {
        g.next_word();
    }
    g.flip_bit(spec.target, spec.bit)?;
    Ok(g.next_word())
}

/// Recovers the shift-register state of a linearized generator.
///
/// Inputs, all counted from the moment whose state is recovered:
/// the register values at that moment, the clean first keystream word,
/// and one faulted-word observation per planted fault (fault times are
/// produced-word counts from the same moment).
pub fn recover_state_linearized(
    registers: (Word, Word, Word),
    clean_first_word: Word,
    observations: &[FaultObservation],
) -> Result<[Word; 16], RecoveryError> {
    let horizon = observations.iter().map(|o| o.spec.time).max().unwrap_or(0) as usize + 1;

    let impulse: Vec<Vec<Word>> = (0..STATE_BITS)
        .map(|k| {
            let mut lfsr = [0 as Word; 16];
            lfsr[k / 32] = 1 << (31 - (k % 32));
            Snow3g::from_raw(lfsr, 0, 0, 0, linearized()).keystream(horizon)
        })
        .collect();

    let mut sys = F2System::new(STATE_BITS);
    let mut add_equations = |time: usize, observed: Word, offset: Word| {
        let rhs = observed ^ offset;
        for p in 0..32 {
            sys.push_row(
                impulse.iter().map(|stream| (stream[time] >> p) & 1 == 1),
                (rhs >> p) & 1 == 1,
            );
        }
    };

    let (r1, r2, r3) = registers;
    let clean_offset = Snow3g::from_raw([0; 16], r1, r2, r3, linearized()).next_word();
    add_equations(0, clean_first_word, clean_offset);
    for obs in observations {
        let offset = offset_word(registers, obs.spec)?;
        add_equations(obs.spec.time as usize, obs.word, offset);
    }

    let out = gaussian_solve(&sys);
    match out.solution {
        F2Solution::Unique(x) => {
            let mut lfsr = [0 as Word; 16];
            for (k, &b) in x.iter().enumerate() {
                if b == 1 {
                    lfsr[k / 32] |= 1 << (31 - (k % 32));
                }
            }
            Ok(lfsr)
        }
        F2Solution::Space { .. } => Err(RecoveryError::RankDeficient { rank: out.rank }),
        F2Solution::Inconsistent => Err(RecoveryError::Inconsistent),
    }
}

/// Plants `trials` random linearized generators, attacks each with a
/// fresh random plan of `faults` faults, and counts the states
/// recovered exactly. Every trial draws from its own substream of
/// `seed`, so the count does not depend on the worker count.
pub fn recovery_trials(faults: usize, trials: u64, seed: u64, workers: usize) -> u64 {
    let run_one = |trial: u64| -> u64 {
        let mut rng = substream(seed, TAG_TRIAL, trial);
        let mut lfsr = [0 as Word; 16];
        for cell in lfsr.iter_mut() {
            *cell = rng.next_u32();
        }
        let g = Snow3g::from_raw(
            lfsr,
            rng.next_u32(),
            rng.next_u32(),
            rng.next_u32(),
            linearized(),
        );
        let hidden = *g.lfsr();
        let registers = g.registers();
        let snap = g.snapshot();
        let clean_first = snap.instantiate().next_word();
        let plan = random_fault_plan(faults, &mut rng);
        let Ok(observations) = gather_observations(&snap, &plan) else {
            return 0;
        };
        match recover_state_linearized(registers, clean_first, &observations) {
            Ok(state) if state == hidden => 1,
            _ => 0,
        }
    };
    if workers <= 1 {
        (0..trials).map(run_one).sum()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("worker pool");
        pool.install(|| (0..trials).into_par_iter().map(run_one).sum())
    }
}
