//! Exact-arithmetic certificates that Mori trinomials
//! `x^(2g+1) - b x - p c / 4` have Galois group `S_(2g+1)`.
//!
//! The pipeline reproduces each witness constructively: a 2-adic Newton
//! polygon for irreducibility, the factorization mod `p` for a `2g`-cycle,
//! and a double root modulo an odd prime dividing the discriminant to odd
//! order for a transposition. [`numfield`] carries the same argument over the
//! imaginary quadratic fields of class number one.

pub mod arith;
pub mod finfield;
pub mod galois;
pub mod intpoly;
pub mod mori;
pub mod numfield;
pub mod padic;
pub mod serde_dec;

/// Seed used for randomized subroutines when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;
