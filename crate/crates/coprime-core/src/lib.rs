//! Exact computations for sets of integers that avoid k+1 pairwise coprime
//! elements.
//!
//! The central quantity is the largest size of a subset of [1, n] containing
//! no k+1 pairwise coprime members. The crate provides:
//!
//! - dense integer sets over [1, n] ([`IntSet`]) and exact maximum
//!   pairwise-coprime searches with certificates ([`clique`]);
//! - prime tables with gap data, primorials, and the window-witness search
//!   for indices t where p_t · p_{t+2l} exceeds p_{t+2l−1}² ([`primes`]);
//! - the canonical candidate sets E_k(n) (multiples of the first k primes)
//!   and B_k(n), with exact inclusion–exclusion sizes and densities
//!   ([`canonical`]);
//! - an exact branch-and-bound solver for the extremal value, with forced
//!   elements, escape constraints, brute-force cross-checks, and canonical
//!   witnesses ([`solver`]);
//! - the two explicit near-extremal constructions with certificate-backed
//!   structural checks ([`construct`]);
//! - residue-block lemma verification, coprimality pattern counts by CRT,
//!   and exact rational bound comparisons ([`verify`]).
//!
//! All arithmetic that feeds a reported value is exact (integers or
//! rationals); the only floating-point quantity is the normalized gap of the
//! bracket construction, which is explicitly a real-valued diagnostic.

pub mod canonical;
pub mod clique;
pub mod construct;
pub mod error;
pub mod intset;
pub mod primes;
pub mod solver;
pub mod verify;

pub use canonical::{build_bk, build_ek, density_ek, CanonicalKind, CanonicalSetReport};
pub use clique::{
    clique_upper_bound_by_prime_cover, is_in_ck, max_pairwise_coprime, CliqueWitness,
    SearchOptions,
};
pub use construct::{
    build_theorem1, build_theorem4, Theorem1Checks, Theorem1Report, Theorem4Checks,
    Theorem4Report,
};
pub use error::{Error, Result};
pub use intset::{IntSet, MAX_UNIVERSE};
pub use primes::{euler_phi, first_primes, PrimeTable};
pub use solver::{
    escapes_ek, f_bruteforce, f_exact, theorem3_gap, SolveRequest, SolveResult, SolveStatus,
};
pub use verify::{
    bound_coefficient, builtin_block_lemmas, count_admissible_six, count_consecutive_coprime,
    crt_count_pattern, verify_block_lemma, verify_proposition, BlockLemma, BlockLemmaReport,
    ExternalElement, PropositionReport,
};
