//! Representatives of `U_n(F) \ GL_n(F) / J_{l,n}`, the brute-force block
//! sums of the twisted Rankin–Selberg integrand over them, and the exact
//! comparison with the closed forms of the local Birch lemma.
//!
//! A block is the set `ϖ^e ω R_{l,n}^ω`; the integral over
//! `U_n(F) \ GL_n(F)` is the sum over blocks of the block volume times the
//! block sum.  Values are formal: `w` and `v` are kept as cell symbols and
//! `|det g|^s` as a power of `X`.

pub mod corollary;
pub mod orbit;
pub mod pairing;
pub mod reps;
pub mod sums;

pub use corollary::{corollary_check, CorollaryReport};
pub use pairing::{PairKey, PairTerm, PairingValue};
pub use reps::{
    canonical_double_rep, enumerate_reps, orbit_count_check, rtilde_bijection_by_domains, rtilde_bijection_check, volume, volume_by_counting, Level,
    RepSet,
};
pub use sums::{
    block_sum, block_sum_of, lemma_closed_form, sum_check, theorem_check, theorem_rhs, Integrand, TheoremReport,
};
