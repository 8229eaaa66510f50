//! Guess & Check (GC) codes for list decoding a constant number of deletions.
//!
//! A GC codeword is the binary message followed by the bits of `c` systematic
//! MDS parity symbols over GF(2^ℓ), each parity bit repeated `δ + 1` times.
//! The decoder recovers the parities from the repetition-coded tail, guesses
//! how the deletions are spread over the message blocks, fills the affected
//! blocks in by erasure decoding and keeps the guesses that are consistent
//! with the remaining parities and with the received string.
//!
//! Besides the code itself the crate carries the deletion channel, the
//! Varshamov–Tenengolts baseline list decoder, brute-force oracles and the
//! Monte Carlo harness used to measure list sizes.

pub mod bits;
pub mod channel;
pub mod codec;
mod error;
pub mod gf2e;
pub mod harness;
pub mod mds;
pub mod oracle;
pub mod vt;

pub use codec::{Candidate, CandidateList, Codeword, GcCode, GcParams, Guess};
pub use error::{Error, Result};
