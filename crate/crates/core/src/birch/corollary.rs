//! The `h^{(f)}` form of the lemma, checked by brute force and through the
//! substitution chain that derives it from the theorem on `GL_{n+1}`.

use serde::Serialize;

use super::sums::{sum_check, Integrand, TheoremReport};
use crate::characters::MultChar;
use crate::error::Result;
use crate::localgroup::{special_matrix, Kind};
use crate::scalars::padic::{ipow, Rat};
use crate::scalars::CyclotomicRepr;

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    /// Brute force of `w(j(g) h^{(f)}) v(g) χ(det g) |det g|^{s-1/2}`.
    pub corollary: TheoremReport,
    /// Brute force of the theorem integrand with `w` on `GL_{n+1}`.
    pub theorem_form: TheoremReport,
    /// `χ(det B_n)`.
    pub chain_factor: CyclotomicRepr,
    /// Corollary LHS `= χ(det B_n)·Σ w(j(g) C_{n+1} D_{n+1} w_{n+1}) …`.
    pub chain_holds: bool,
    /// Corollary LHS `=` theorem-form LHS.
    pub theorem_form_holds: bool,
    pub holds: bool,
}

impl CorollaryReport {
    pub fn passed(&self) -> bool {
        self.holds && self.chain_holds && self.theorem_form_holds
    }
}

/// `X` stands for `p^{-(s - 1/2)}` here.
pub fn corollary_check(n: usize, m: u32, chi: &MultChar, radius: i64, l: u32) -> Result<CorollaryReport> {
    let corollary = sum_check(Integrand::Corollary, n, m, chi, radius, l)?;
    let chain = sum_check(Integrand::Chain, n, m, chi, radius, l)?;
    let theorem_form = sum_check(Integrand::Theorem { ambient: n + 1 }, n, m, chi, radius, l)?;
    let f = Rat::from_integer(ipow(chi.p, m) as i128);
    let det_b = if n == 0 { Rat::from_integer(1) } else { special_matrix(Kind::B, n, f, chi.p)?.det() };
    let factor = chi.eval(&det_b)?;
    let chain_holds = corollary.lhs_value == chain.lhs_value.scale(&factor) && chain.blockwise_vanishing;
    let theorem_form_holds = corollary.lhs_value == theorem_form.lhs_value && theorem_form.passed();
    Ok(CorollaryReport {
        holds: corollary.passed(),
        chain_factor: factor.reduce_level().to_repr(),
        chain_holds,
        theorem_form_holds,
        corollary,
        theorem_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_chars;

    #[test]
    fn corollary_small() {
        for p in [3, 5] {
            for chi in enumerate_chars(p, 1) {
                for n in [0, 1] {
                    let r = corollary_check(n, 1, &chi, 2, 2 * n as u32).unwrap();
                    assert!(r.passed(), "p={p} n={n}: {:?} {:?}", r.corollary.witness(), r.corollary.lhs);
                }
            }
        }
    }
}
