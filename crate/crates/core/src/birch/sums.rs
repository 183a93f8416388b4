//! Brute-force block sums of the twisted zeta integrand and the exact
//! comparison with the closed forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::pairing::{Counts, PairTerm, PairingValue};
use super::reps::{block_volume, enumerate_reps, euler_factor, RepSet};
use crate::characters::{gauss_sum, psi_exp, CharDescription, MultChar, RootExp};
use crate::error::{Error, Result};
use crate::localgroup::{lambda_n, special_matrix, torus_weyl, GMatrix, Kind, WeylElement};
use crate::scalars::padic::{ipow, Rat};
use crate::scalars::Cyclotomic;
use crate::whittaker::{formal_eval_exp, supported, WhittakerKey};

/// Which integrand is summed.  In every case `v` is a formal
/// `ψ^{-1}`-Whittaker function on `GL_n` and `w` a formal `ψ`-Whittaker
/// function on `GL_m`, `m` the ambient size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Integrand {
    /// `ψ(λ_n(g)) w(j(g D_n w_n))` with `w` on `GL_ambient`.
    Theorem { ambient: usize },
    /// `w(j(g) h^{(f)})` with `w` on `GL_{n+1}`.
    Corollary,
    /// `w(j(g) C_{n+1} D_{n+1} w_{n+1})`, the middle of the substitution
    /// chain between the two.
    Chain,
}

impl Integrand {
    pub fn ambient(&self, n: usize) -> usize {
        match self {
            Integrand::Theorem { ambient } => *ambient,
            _ => n + 1,
        }
    }

    fn uses_lambda(&self) -> bool {
        matches!(self, Integrand::Theorem { .. })
    }

    /// The fixed right factor `Q` with `w(j(g) Q)`.
    fn right_factor(&self, n: usize, f: Rat, p: u64) -> Result<GMatrix> {
        let m = self.ambient(n);
        if m < n {
            return Err(Error::Precondition("ambient size below n".into()));
        }
        Ok(match self {
            Integrand::Theorem { .. } => {
                let dw = &special_matrix(Kind::D, n, f, p)? * &special_matrix(Kind::W, n, f, p)?;
                embed_to(&dw, m)
            }
            Integrand::Corollary => special_matrix(Kind::HF, m, f, p)?,
            Integrand::Chain => {
                let c = special_matrix(Kind::C, m, f, p)?;
                let d = special_matrix(Kind::D, m, f, p)?;
                &(&c * &d) * &special_matrix(Kind::W, m, f, p)?
            }
        })
    }
}

/// `j(g) = diag(g, 1_{m-n})`.
pub fn embed_to(g: &GMatrix, m: usize) -> GMatrix {
    let mut out = g.clone();
    while out.n() < m {
        out = out.embed();
    }
    out
}

/// Smallest admissible `l`: `max(2n, ⌈n - e_i / m⌉)`.
pub fn l_min(n: usize, m: u32, e: &[i64]) -> u32 {
    let m = m as i64;
    let bound = e.iter().map(|&x| n as i64 + (-x).div_euclid(m) + i64::from((-x).rem_euclid(m) != 0)).max();
    (2 * n as i64).max(bound.unwrap_or(0)).max(0) as u32
}

/// `Σ_{g ∈ ϖ^e ω R_{l,n}^ω}` of the integrand times `χ(det g) X^{Σe}`.
pub fn block_sum(n: usize, m: u32, l: u32, e: &[i64], omega: &WeylElement, chi: &MultChar) -> Result<PairingValue> {
    block_sum_of(Integrand::Theorem { ambient: n }, n, m, l, e, omega, chi)
}

pub fn block_sum_of(form: Integrand, n: usize, m: u32, l: u32, e: &[i64], omega: &WeylElement, chi: &MultChar) -> Result<PairingValue> {
    if e.len() != n || omega.n() != n {
        return Err(Error::Domain("e and ω must have size n".into()));
    }
    if chi.m != m || m == 0 {
        return Err(Error::Precondition("χ must have conductor p^m with m ≥ 1".into()));
    }
    let need = l_min(n, m, e);
    if l < need {
        return Err(Error::Precondition(format!("l = {l} below the admissible bound {need} for e = {e:?}")));
    }
    let p = chi.p;
    let x: i64 = e.iter().sum();
    let v_key = WhittakerKey::new(e.to_vec(), omega);
    // v is Iwahori invariant, so v(ϖ^e ω r) = v(ϖ^e ω), which is a basis
    // symbol on supported cells and 0 elsewhere.
    if !supported(e, omega) {
        return Ok(PairingValue::zero());
    }
    let set = enumerate_reps(n, l, m, p, omega)?;
    let f = Rat::from_integer(ipow(p, m) as i128);
    let q = form.right_factor(n, f, p)?;
    let base = torus_weyl(p, e, omega);
    let ambient = form.ambient(n);
    let sign = omega.sign() as i128;
    let pm = ipow(p, m) as i128;
    let counts = (0..set.count())
        .into_par_iter()
        .fold(Counts::default, |mut acc, idx| {
            let r = set.entries(idx);
            let g = &base * &super::reps::to_matrix(n, p, &r);
            let Some(phase) = point_phase(&form, &g, &q, ambient, f) else {
                return acc;
            };
            let (w_exp, w_key) = phase;
            let unit = (0..n).fold(sign, |u, i| (u * r[i * n + i]).rem_euclid(pm));
            let chi_exp = chi.unit_exp(unit as u64).expect("unit determinant");
            acc.bump(w_key, w_exp + chi_exp);
            acc
        })
        .reduce(Counts::default, Counts::merge);
    let chi_p = chi.value_at_p.pow(x)?;
    Ok(counts.into_value(&v_key, x).scale(&chi_p))
}

/// `ψ(λ_n(g))·w(j(g) Q)` as an exponent and the `w`-cell; `None` when `w`
/// vanishes there.
fn point_phase(form: &Integrand, g: &GMatrix, q: &GMatrix, ambient: usize, f: Rat) -> Option<(RootExp, WhittakerKey)> {
    let jg = embed_to(g, ambient);
    let (w, key) = formal_eval_exp(&(&jg * q), 1).expect("invertible");
    let mut e = w?;
    if form.uses_lambda() {
        e += psi_exp(&lambda_n(g, f), g.prime());
    }
    Some((e, key))
}

/// The closed form of the block `(0, id)`:
/// `N(f)^{(l-2n)n(n+1)/2 + Σ(5ν²-3ν)/2} G(χ)^{n(n+1)/2} [w(1) ⊗ v(1)]`.
pub fn lemma_closed_form(n: usize, m: u32, l: u32, chi: &MultChar) -> Result<PairingValue> {
    let nn = n as i64;
    let quad: i64 = (1..=nn).map(|v| 5 * v * v - 3 * v).sum::<i64>() / 2;
    let exp = (l as i64 - 2 * nn) * nn * (nn + 1) / 2 + quad;
    let c = power_of_p(chi.p, m as i64 * exp);
    let g = gauss_power(chi, n)?;
    Ok(PairingValue::single(WhittakerKey::identity(n), WhittakerKey::identity(n), 0, g.scale(&c)))
}

/// `Π(1-p^{-ν})^{-1} N(f)^{-Σ k(n+1-k)} G(χ)^{n(n+1)/2} [w(1_ambient) ⊗ v(1_n)]`.
pub fn theorem_rhs(n: usize, ambient: usize, m: u32, chi: &MultChar) -> Result<PairingValue> {
    let nn = n as i64;
    let exp: i64 = (1..=nn).map(|k| k * (nn + 1 - k)).sum();
    let c = euler_factor(n, chi.p) * power_of_p(chi.p, -(m as i64) * exp);
    let g = gauss_power(chi, n)?;
    Ok(PairingValue::single(WhittakerKey::identity(ambient), WhittakerKey::identity(n), 0, g.scale(&c)))
}

fn gauss_power(chi: &MultChar, n: usize) -> Result<Cyclotomic> {
    if n == 0 {
        return Ok(Cyclotomic::one());
    }
    gauss_sum(chi)?.pow((n * (n + 1) / 2) as i64)
}

fn power_of_p(p: u64, e: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b.recip(), (-e) as usize)
    }
}

/// All `e ∈ [-radius, radius]^n`.
pub fn window(n: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| (-radius..=radius).map(move |x| [v.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockStatus {
    pub e: Vec<i64>,
    pub omega: Vec<usize>,
    pub l: u32,
    pub vanishes: bool,
    pub value: Vec<PairTerm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub n: usize,
    pub p: u64,
    pub m: u32,
    pub l: u32,
    pub radius: i64,
    pub integrand: Integrand,
    pub character: CharDescription,
    pub blocks: Vec<BlockStatus>,
    /// Every block other than `(0, id)` is the zero value.
    pub blockwise_vanishing: bool,
    /// The `(0, id)` block equals its closed form (theorem integrand on
    /// `GL_n` only).
    pub lemma_block: Option<bool>,
    pub lhs: Vec<PairTerm>,
    pub rhs: Vec<PairTerm>,
    pub holds: bool,
    #[serde(skip)]
    pub lhs_value: PairingValue,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.holds && self.blockwise_vanishing && self.lemma_block != Some(false)
    }

    /// The first nonvanishing block other than `(0, id)`.
    pub fn witness(&self) -> Option<&BlockStatus> {
        self.blocks.iter().find(|b| !b.vanishes)
    }
}

/// Sum of `block_volume · block_sum` over the window, each block at
/// `l_e = max(l, l_min(e))`, compared with the closed form.
pub fn theorem_check(n: usize, m: u32, chi: &MultChar, radius: i64, l: u32) -> Result<TheoremReport> {
    sum_check(Integrand::Theorem { ambient: n }, n, m, chi, radius, l)
}

pub fn sum_check(form: Integrand, n: usize, m: u32, chi: &MultChar, radius: i64, l: u32) -> Result<TheoremReport> {
    if !chi.is_primitive() || chi.m != m || m == 0 {
        return Err(Error::Precondition("χ must be primitive of conductor p^m, m ≥ 1".into()));
    }
    if l < 2 * n as u32 {
        return Err(Error::Precondition(format!("l = {l} < 2n = {}", 2 * n)));
    }
    let p = chi.p;
    let mut blocks = Vec::new();
    let mut lhs = PairingValue::zero();
    let mut lemma_block = None;
    for e in window(n, radius) {
        for omega in WeylElement::all(n) {
            let le = l.max(l_min(n, m, &e));
            let value = block_sum_of(form, n, m, le, &e, &omega, chi)?;
            let main = e.iter().all(|&x| x == 0) && omega.is_identity();
            if main && form == (Integrand::Theorem { ambient: n }) {
                lemma_block = Some(value == lemma_closed_form(n, m, le, chi)?);
            }
            lhs = lhs.add(&value.scale_rat(&block_volume(n, le, m, p, &e)));
            if !main {
                blocks.push(BlockStatus {
                    e: e.clone(),
                    omega: omega.sigma.clone(),
                    l: le,
                    vanishes: value.is_zero(),
                    value: value.to_repr(),
                });
            }
        }
    }
    let rhs = theorem_rhs(n, form.ambient(n), m, chi)?;
    Ok(TheoremReport {
        n,
        p,
        m,
        l,
        radius,
        integrand: form,
        character: chi.describe(),
        blockwise_vanishing: blocks.iter().all(|b| b.vanishes),
        lemma_block,
        lhs: lhs.to_repr(),
        rhs: rhs.to_repr(),
        holds: lhs == rhs,
        blocks,
        lhs_value: lhs,
    })
}

/// Members of `R^ω` have `det r = Π r_ii`, checked on every member.
pub fn det_is_diagonal_product(set: &RepSet) -> bool {
    let n = set.n;
    (0..set.count()).all(|i| {
        let r = set.entries(i);
        let d: i128 = (0..n).map(|k| r[k * n + k]).product();
        set.get(i).det() == Rat::from_integer(d)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_chars;

    #[test]
    fn l_min_examples() {
        assert_eq!(l_min(1, 1, &[-2]), 3);
        assert_eq!(l_min(1, 2, &[-2]), 2);
        assert_eq!(l_min(2, 1, &[-2, 0]), 4);
        assert_eq!(l_min(2, 1, &[-3, 1]), 5);
        assert_eq!(l_min(0, 1, &[]), 0);
    }

    #[test]
    fn n1_theorem_p3() {
        for chi in enumerate_chars(3, 1) {
            let r = theorem_check(1, 1, &chi, 2, 2).unwrap();
            assert!(r.passed(), "{:?}", r.witness());
        }
    }

    #[test]
    fn n0_block() {
        let chi = &enumerate_chars(3, 1)[0];
        let b = block_sum(0, 1, 0, &[], &WeylElement::identity(0), chi).unwrap();
        assert_eq!(b, PairingValue::single(WhittakerKey::identity(0), WhittakerKey::identity(0), 0, Cyclotomic::one()));
        assert!(theorem_check(0, 1, chi, 2, 0).unwrap().passed());
    }

    #[test]
    fn n1_unit_block_vanishes() {
        let chi = &enumerate_chars(5, 1)[1];
        let b = block_sum(1, 1, 3, &[1], &WeylElement::identity(1), chi).unwrap();
        assert!(b.is_zero());
    }
}
