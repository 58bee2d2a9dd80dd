//! Desk-scale cryptanalysis experiments for the snowlab generators.
//!
//! Every experiment here runs in seconds on one machine and produces an
//! exact or statistically calibrated answer:
//!
//! - [`bm`] measures linear complexity with Berlekamp-Massey and checks
//!   the recovered recurrence by regeneration.
//! - [`golomb`] checks the three classical randomness postulates
//!   (balance, run distribution, two-level autocorrelation) over one
//!   period of a sequence.
//! - [`bias`] estimates distinguisher biases by seeded Monte Carlo:
//!   the carry-bit bias of integer addition and linear-mask relations
//!   over two rounds of the rotation/addition FSM.
//! - [`correlation`] computes exact mask correlations of small functions
//!   by exhaustive enumeration.
//! - [`algebraic`] counts the quadratic Boolean relations satisfied by
//!   an 8-bit S-box, the quantity behind algebraic attack estimates.
//! - [`fault`] plants single-bit faults in the XOR-linearized SNOW 3G
//!   and recovers the full 512-bit LFSR state by linear algebra.
//! - [`gd`] runs a guess-and-determine attack on the mini generator and
//!   counts the guesses it spends.
//!
//! Supporting modules: [`bitseq`] (bit-sequence generation and packing),
//! [`f2`] (dense linear algebra over GF(2)), [`rng`] (worker-count
//! independent Monte Carlo scheduling), [`report`] (the JSON document
//! shape shared by the statistical commands).

pub mod algebraic;
pub mod bias;
pub mod bitseq;
pub mod bm;
pub mod correlation;
pub mod f2;
pub mod fault;
pub mod gd;
pub mod golomb;
pub mod report;
pub mod rng;
