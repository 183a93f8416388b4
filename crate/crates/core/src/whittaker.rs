//! Formal Iwahori-invariant Whittaker functions and the spherical one.
//!
//! An Iwahori-invariant `ψ`-Whittaker function `w` is determined by its
//! values `w(ϖ^e ω)`, and `w(u ϖ^e ω s) = ψ(u) w(ϖ^e ω)`.  The formal model
//! keeps those values as basis symbols `[e, ω]`.  Cells on which `ψ` is
//! nontrivial on `U_n ∩ ϖ^e ω I_n (ϖ^e ω)^{-1}` force the value `0`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::characters::{psi_exp, root_value, RootExp};
use crate::error::Result;
use crate::hecke::HeckeElement;
use crate::localgroup::{coset_key, random, torus_weyl, GMatrix, WeylElement};
use crate::scalars::{Cyclotomic, Ring, SymbolicScalar};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct WhittakerKey {
    pub e: Vec<i64>,
    pub omega: Vec<usize>,
}

impl WhittakerKey {
    pub fn new(e: Vec<i64>, omega: &WeylElement) -> Self {
        Self { e, omega: omega.sigma.clone() }
    }

    pub fn identity(n: usize) -> Self {
        Self { e: vec![0; n], omega: (0..n).collect() }
    }

    pub fn weyl(&self) -> WeylElement {
        WeylElement::new(self.omega.clone())
    }

    pub fn is_supported(&self) -> bool {
        supported(&self.e, &self.weyl())
    }
}

impl fmt::Display for WhittakerKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.e, self.weyl())
    }
}

/// `e_i - e_{i+1} + [σ(i) > σ(i+1)] ≥ 0` for all `i`.
pub fn supported(e: &[i64], omega: &WeylElement) -> bool {
    (0..e.len().saturating_sub(1))
        .all(|i| e[i] - e[i + 1] + i64::from(omega.sigma[i] > omega.sigma[i + 1]) >= 0)
}

/// `ψ^{sign}(u)` as an exponent together with the cell of `g`; the
/// exponent is `None` on unsupported cells.
pub fn formal_eval_exp(g: &GMatrix, sign: i64) -> Result<(Option<RootExp>, WhittakerKey)> {
    let k = coset_key(g)?;
    let key = WhittakerKey::new(k.e, &k.omega);
    if !key.is_supported() {
        return Ok((None, key));
    }
    Ok((Some(psi_exp(&k.psi_arg, g.prime()) * sign), key))
}

pub fn formal_eval(g: &GMatrix, sign: i64) -> Result<(Cyclotomic, WhittakerKey)> {
    let (r, key) = formal_eval_exp(g, sign)?;
    Ok((r.map_or_else(Cyclotomic::zero, root_value), key))
}

/// Samples `s ∈ I_n` and decomposes `ϖ^e ω s = u' ϖ^e ω s'`; any
/// `ψ(u') ≠ 1` proves that `w(ϖ^e ω)` must vanish.
pub fn consistency_probe<R: Rng>(rng: &mut R, p: u64, e: &[i64], omega: &WeylElement, trials: usize) -> Result<bool> {
    let base = torus_weyl(p, e, omega);
    for _ in 0..trials {
        let s = random::iwahori(rng, e.len(), p);
        let k = coset_key(&(&base * &s))?;
        debug_assert_eq!((k.e.as_slice(), &k.omega), (e, omega));
        if psi_exp(&k.psi_arg, p) != RootExp::from_integer(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Finitely supported combination `Σ c_k [k]`.
#[derive(Clone, PartialEq, Debug)]
pub struct FormalWhittakerVector<R: Ring> {
    terms: BTreeMap<WhittakerKey, R>,
}

impl<R: Ring> Default for FormalWhittakerVector<R> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<R: Ring> FormalWhittakerVector<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c [key]`, or zero on an unsupported key.
    pub fn basis(key: WhittakerKey, c: R) -> Self {
        let mut v = Self::zero();
        v.add_term(key, c);
        v
    }

    pub fn add_term(&mut self, key: WhittakerKey, c: R) {
        if c.is_zero() || !key.is_supported() {
            return;
        }
        match self.terms.get(&key) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    self.terms.insert(key, s);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero();
        for (k, d) in &self.terms {
            out.add_term(k.clone(), d.mul(c));
        }
        out
    }

    pub fn scale_rat(&self, q: &BigRational) -> Self {
        let mut out = Self::zero();
        for (k, d) in &self.terms {
            out.add_term(k.clone(), d.scale_rat(q));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &WhittakerKey) -> Option<&R> {
        self.terms.get(key)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WhittakerKey, &R)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Something that can be evaluated on `GL_n(Q_p)` and combined linearly.
pub trait WhittakerFunction {
    type Value: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn eval(&self, g: &GMatrix) -> Result<Self::Value>;
}

/// Values that can be scaled by Hecke coefficients from `R`.
pub trait ScaleBy<R>: WhittakerFunction {
    fn scale(&self, a: &Self::Value, c: &R) -> Self::Value;
}

/// The formal Iwahori-invariant `ψ^{sign}`-Whittaker function.
pub struct Formal {
    pub sign: i64,
}

impl WhittakerFunction for Formal {
    type Value = FormalWhittakerVector<Cyclotomic>;
    fn zero(&self) -> Self::Value {
        FormalWhittakerVector::zero()
    }
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        a.add(b)
    }
    fn eval(&self, g: &GMatrix) -> Result<Self::Value> {
        let (c, key) = formal_eval(g, self.sign)?;
        Ok(FormalWhittakerVector::basis(key, c))
    }
}

/// The normalized spherical `ψ`-Whittaker function with symbolic Satake
/// parameters: `W(u ϖ^e k) = ψ(u) · δ^{1/2}(ϖ^e) s_e(x)`.
pub struct Spherical {
    pub n: usize,
    pub p: u64,
}

impl WhittakerFunction for Spherical {
    type Value = SymbolicScalar;
    fn zero(&self) -> Self::Value {
        SymbolicScalar::zero(self.n, self.p)
    }
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value {
        a.add(b)
    }
    fn eval(&self, g: &GMatrix) -> Result<Self::Value> {
        // ω s ∈ GL_n(Z_p), so only (u, e) matter.
        let k = coset_key(g)?;
        let s = shintani_value(self.n, self.p, &k.e);
        Ok(s.scale(&root_value(psi_exp(&k.psi_arg, self.p))))
    }
}

impl ScaleBy<BigRational> for Formal {
    fn scale(&self, a: &Self::Value, c: &BigRational) -> Self::Value {
        a.scale_rat(c)
    }
}

impl ScaleBy<BigRational> for Spherical {
    fn scale(&self, a: &Self::Value, c: &BigRational) -> Self::Value {
        a.scale_rat(c)
    }
}

impl ScaleBy<SymbolicScalar> for Spherical {
    fn scale(&self, a: &Self::Value, c: &SymbolicScalar) -> Self::Value {
        a.mul(c)
    }
}

/// `Σ a_i w(g g_i)` for `T = Σ a_i g_i K_B`.
pub fn hecke_act<R: Ring, W: ScaleBy<R>>(t: &HeckeElement<R>, w: &W, g: &GMatrix) -> Result<W::Value> {
    let mut acc = w.zero();
    for (rep, a) in t.terms() {
        let v = w.eval(&(g * rep))?;
        acc = w.add(&acc, &w.scale(&v, a));
    }
    Ok(acc)
}

/// `hecke_act` on the spherical function, evaluating each Schur
/// polynomial once per distinct torus exponent.
pub fn spherical_act<R: Ring>(t: &HeckeElement<R>, g: &GMatrix) -> Result<SymbolicScalar>
where
    Spherical: ScaleBy<R>,
{
    let (n, p) = (t.n(), t.prime());
    let w = Spherical { n, p };
    let mut by_e: BTreeMap<Vec<i64>, SymbolicScalar> = BTreeMap::new();
    for (rep, a) in t.terms() {
        let k = coset_key(&(g * rep))?;
        if !is_dominant(&k.e) {
            continue;
        }
        let c = SymbolicScalar::constant(n, p, root_value(psi_exp(&k.psi_arg, p)));
        let v = w.scale(&c, a);
        let slot = by_e.entry(k.e).or_insert_with(|| SymbolicScalar::zero(n, p));
        *slot = slot.add(&v);
    }
    Ok(by_e.iter().fold(SymbolicScalar::zero(n, p), |acc, (e, c)| acc.add(&shintani_value(n, p, e).mul(c))))
}

pub fn is_dominant(e: &[i64]) -> bool {
    e.windows(2).all(|w| w[0] >= w[1])
}

/// Complete homogeneous symmetric polynomial `h_k`.
fn complete_homogeneous(n: usize, p: u64, k: i64) -> SymbolicScalar {
    if k < 0 {
        return SymbolicScalar::zero(n, p);
    }
    let mut out = SymbolicScalar::zero(n, p);
    // exponent vectors of total degree k
    fn go(i: usize, left: i32, cur: &mut Vec<i32>, n: usize, p: u64, out: &mut SymbolicScalar) {
        if i + 1 == n {
            cur.push(left);
            *out = out.add(&SymbolicScalar::monomial(n, p, cur.clone(), 0, Cyclotomic::one()));
            cur.pop();
            return;
        }
        for a in 0..=left {
            cur.push(a);
            go(i + 1, left - a, cur, n, p, out);
            cur.pop();
        }
    }
    if n == 0 {
        return if k == 0 { SymbolicScalar::one(0, p) } else { out };
    }
    go(0, k as i32, &mut Vec::new(), n, p, &mut out);
    out
}

/// Schur polynomial `s_e` for dominant `e ∈ Z^n` (Jacobi–Trudi, shifted
/// by a power of `x_1⋯x_n` for negative parts).
pub fn schur(n: usize, p: u64, e: &[i64]) -> SymbolicScalar {
    assert!(is_dominant(e));
    if n == 0 {
        return SymbolicScalar::one(0, p);
    }
    let shift = e[n - 1];
    let lam: Vec<i64> = e.iter().map(|x| x - shift).collect();
    let len = lam.iter().filter(|&&x| x > 0).count();
    // det(h_{λ_i - i + j}) over the nonzero parts
    let mat: Vec<Vec<SymbolicScalar>> = (0..len)
        .map(|i| (0..len).map(|j| complete_homogeneous(n, p, lam[i] - i as i64 + j as i64)).collect())
        .collect();
    let det = symbolic_det(&mat, n, p);
    let det_power = SymbolicScalar::monomial(n, p, vec![shift as i32; n], 0, Cyclotomic::one());
    det.mul(&det_power)
}

fn symbolic_det(m: &[Vec<SymbolicScalar>], n: usize, p: u64) -> SymbolicScalar {
    let k = m.len();
    if k == 0 {
        return SymbolicScalar::one(n, p);
    }
    // Laplace expansion along the first row; sizes here stay tiny.
    let mut acc = SymbolicScalar::zero(n, p);
    for j in 0..k {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<SymbolicScalar>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][j].mul(&symbolic_det(&minor, n, p));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.add(&term.neg()) };
    }
    acc
}

/// `δ_B^{1/2}(ϖ^e) = q½^{-Σ e_i (n + 1 - 2i)}` (1-based `i`).
pub fn delta_half_exponent(e: &[i64]) -> i64 {
    let n = e.len() as i64;
    -e.iter().enumerate().map(|(i, &x)| x * (n + 1 - 2 * (i as i64 + 1))).sum::<i64>()
}

/// Shintani: `W(ϖ^e) = δ^{1/2}(ϖ^e) s_e(x)` for dominant `e`, else `0`.
pub fn shintani_value(n: usize, p: u64, e: &[i64]) -> SymbolicScalar {
    if !is_dominant(e) {
        return SymbolicScalar::zero(n, p);
    }
    schur(n, p, e).mul(&SymbolicScalar::q_half(n, p, delta_half_exponent(e)))
}


#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn support_examples() {
        let id2 = WeylElement::identity(2);
        assert!(supported(&[1, 0], &id2));
        assert!(!supported(&[0, 1], &id2));
        for w in WeylElement::all(3) {
            assert!(supported(&[0, 0, 0], &w));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(consistency_probe(&mut rng, 3, &[0, 0], &id2, 100).unwrap());
        assert!(!consistency_probe(&mut rng, 3, &[0, 1], &id2, 100).unwrap());
        let w2 = WeylElement::longest(2);
        assert_eq!(consistency_probe(&mut rng, 3, &[2, 0], &w2, 100).unwrap(), supported(&[2, 0], &w2));
    }

    #[test]
    fn shintani_examples() {
        let p = 3;
        assert_eq!(shintani_value(2, p, &[0, 0]), SymbolicScalar::one(2, p));
        let expect = SymbolicScalar::var(2, p, 1).add(&SymbolicScalar::var(2, p, 2)).mul(&SymbolicScalar::q_half(2, p, -1));
        assert_eq!(shintani_value(2, p, &[1, 0]), expect);
        assert!(shintani_value(2, p, &[0, 1]).is_zero());
        let x1x2 = SymbolicScalar::var(2, p, 1).mul(&SymbolicScalar::var(2, p, 2));
        assert_eq!(shintani_value(2, p, &[1, 1]), x1x2);
    }

    #[test]
    fn formal_eval_examples() {
        let (c, k) = formal_eval(&GMatrix::identity(3, 5), 1).unwrap();
        assert!(c.is_one());
        assert_eq!(k, WhittakerKey::identity(3));
        let mut u = GMatrix::identity(2, 5);
        u[(0, 1)] = crate::scalars::Rat::new(1, 5);
        let g = &u * &torus_weyl(5, &[1, 0], &WeylElement::identity(2));
        let (c, k) = formal_eval(&g, 1).unwrap();
        assert_eq!(c, Cyclotomic::root_of_unity(5, 1));
        assert_eq!(k.e, vec![1, 0]);
    }
}
