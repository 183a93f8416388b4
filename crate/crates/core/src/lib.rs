//! Exact verification kernel for the combinatorial core of p-adic
//! Rankin–Selberg interpolation over `Q_p`.
//!
//! Everything here is exact: matrices live over `Z[1/p]` (as rationals),
//! character values and Gauss sums live in cyclotomic fields, and Satake
//! parameters are symbolic.  The modules build on each other:
//!
//! * [`scalars`]: cyclotomic numbers, p-adic rationals, residue rings and
//!   symbolic Laurent polynomials in Satake parameters.
//! * [`localgroup`]: matrices over `Q_p`, Weyl bookkeeping, the
//!   Iwahori–Iwasawa decomposition and the catalog of special matrices.
//! * [`characters`]: the standard additive character, multiplicative
//!   characters of p-power conductor and Gauss sums.
//! * [`whittaker`]: formal Iwahori-invariant Whittaker vectors and the
//!   spherical (Shintani) Whittaker function.
//! * [`birch`]: representative sets, orbit sums and the brute-force check
//!   of the local Birch lemma and its `h^(f)` corollary.
//! * [`hecke`]: spherical and parabolic Hecke algebras at `p`.
//! * [`measures`]: p-adic distributions on `Z_p^×`.
//! * [`campaign`]: the batch driver behind the `rsbirch` binary.

pub mod birch;
pub mod campaign;
pub mod characters;
pub mod error;
pub mod hecke;
pub mod localgroup;
pub mod measures;
pub mod scalars;
pub mod whittaker;

pub use error::{Error, Result};
