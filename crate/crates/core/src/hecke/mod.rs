//! Spherical and parabolic Hecke algebras at `p`.
//!
//! Elements are formal sums of right cosets `b K_B`, `K_B = B_n(Z_p)`,
//! each stored through a canonical upper-triangular representative.

pub mod ops;
pub mod satake;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::localgroup::GMatrix;
use crate::scalars::padic::{reduce_mod_p_power, val, Rat};
use crate::scalars::Ring;

pub use ops::{
    double_coset, epsilon_embed, gaussian_binomial, spherical_t, standard_op, t_p_coset, u_op, v_op,
    v_op_blocks, v_op_product, Op,
};
pub use satake::{
    gritsenko_check, modification_operator, ordinarity_and_kappa, satake_eigenvalue, satake_normalization,
    HeckeRoots, KappaReport,
};

/// Canonical representative of `b K_B`: diagonal `p^{e_i}` and entry
/// `(i, j)` reduced modulo `p^{e_i}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CosetRep(GMatrix);

impl CosetRep {
    pub fn matrix(&self) -> &GMatrix {
        &self.0
    }

    pub fn diagonal_exponents(&self) -> Vec<i64> {
        let p = self.0.prime();
        (0..self.0.n()).map(|i| val(&self.0[(i, i)], p).unwrap()).collect()
    }
}

impl PartialOrd for CosetRep {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for CosetRep {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.entries().cmp(o.0.entries())
    }
}

pub fn canonicalize(b: &GMatrix) -> Result<CosetRep> {
    if !b.is_square() || !b.is_upper_triangular() {
        return Err(Error::Precondition("coset representatives must be upper triangular".into()));
    }
    let n = b.n();
    let p = b.prime();
    let mut m = b.clone();
    let mut e = vec![0i64; n];
    // Normalize the diagonal by unit column scalings.
    for j in 0..n {
        let d = m[(j, j)];
        let v = val(&d, p).ok_or(Error::NotInvertible)?;
        e[j] = v;
        let unit = d * crate::scalars::p_pow(p, -v);
        let ui = unit.recip();
        for i in 0..=j {
            m[(i, j)] *= ui;
        }
    }
    // Reduce (i, j) modulo p^{e_i} with col_j += x col_i, bottom-up.
    for j in 1..n {
        for i in (0..j).rev() {
            let target = reduce_mod_p_power(&m[(i, j)], p, e[i]);
            let x = (target - m[(i, j)]) / m[(i, i)];
            if x.is_zero() {
                continue;
            }
            for k in 0..=i {
                let t = m[(k, i)];
                if !t.is_zero() {
                    m[(k, j)] += x * t;
                }
            }
        }
    }
    Ok(CosetRep(m))
}

/// `B(Q_p)`-part of `g`: an upper triangular `b` with `g K = b K`,
/// `K = GL_n(Z_p)`, found by `K`-column operations.
pub fn borel_part(g: &GMatrix) -> Result<GMatrix> {
    let n = g.n();
    let p = g.prime();
    let mut m = g.clone();
    for i in (0..n).rev() {
        // pivot: column ≤ i of minimal valuation in row i
        let (c, _) = (0..=i)
            .filter_map(|c| val(&m[(i, c)], p).map(|v| (c, v)))
            .min_by_key(|&(c, v)| (v, c))
            .ok_or(Error::NotInvertible)?;
        if c != i {
            for r in 0..n {
                let t = m[(r, c)];
                m[(r, c)] = m[(r, i)];
                m[(r, i)] = t;
            }
        }
        let piv = m[(i, i)];
        for k in 0..i {
            if m[(i, k)].is_zero() {
                continue;
            }
            let x = -m[(i, k)] / piv;
            for r in 0..=i {
                let t = m[(r, i)];
                m[(r, k)] += x * t;
            }
        }
    }
    Ok(m)
}

/// `Σ a_i · b_i K_B` with coefficients in `R`.
#[derive(Clone, PartialEq, Debug)]
pub struct HeckeElement<R: Ring = BigRational> {
    n: usize,
    p: u64,
    terms: BTreeMap<CosetRep, R>,
    /// Set when the element is known to be left `K_B`-invariant.
    left_invariant: bool,
}

impl<R: Ring> HeckeElement<R> {
    pub fn zero(n: usize, p: u64) -> Self {
        Self { n, p, terms: BTreeMap::new(), left_invariant: true }
    }

    pub fn single(rep: CosetRep, c: R) -> Self {
        let m = rep.matrix();
        let mut out = Self { n: m.n(), p: m.prime(), terms: BTreeMap::new(), left_invariant: false };
        out.add_term(rep, c);
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_left_invariant(&self) -> bool {
        self.left_invariant
    }

    pub fn add_term(&mut self, rep: CosetRep, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get(&rep) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&rep);
                } else {
                    self.terms.insert(rep, s);
                }
            }
            None => {
                self.terms.insert(rep, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GMatrix, &R)> {
        self.terms.iter().map(|(k, v)| (k.matrix(), v))
    }

    pub fn cosets(&self) -> impl Iterator<Item = (&CosetRep, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, rep: &CosetRep) -> Option<&R> {
        self.terms.get(rep)
    }

    /// Checks left `K_B`-invariance against the topological generators
    /// of `K_B` and records the result.
    pub fn certify_left_invariant(mut self) -> Result<Self> {
        self.left_invariant = false;
        for k in kb_generators(self.n, self.p) {
            let mut moved = Self::zero(self.n, self.p);
            for (rep, c) in &self.terms {
                moved.add_term(canonicalize(&(&k * rep.matrix()))?, c.clone());
            }
            if moved.terms != self.terms {
                return Ok(self);
            }
        }
        self.left_invariant = true;
        Ok(self)
    }

    /// Trust the caller that the element is left-invariant.
    pub(crate) fn assume_left_invariant(mut self) -> Self {
        self.left_invariant = true;
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        out.left_invariant = self.left_invariant && o.left_invariant;
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        for (k, d) in &self.terms {
            out.add_term(k.clone(), d.mul(c));
        }
        out
    }

    /// `(Σ a_i s_i K_B)(Σ b_j t_j K_B) = Σ a_i b_j s_i t_j K_B`; well
    /// defined when the right factor is left `K_B`-invariant.
    pub fn convolve(&self, o: &Self) -> Result<Self> {
        if !o.left_invariant {
            return Err(Error::Contract("right convolution factor is not left K_B-invariant".into()));
        }
        let mut out = Self::zero(self.n, self.p);
        for (s, a) in &self.terms {
            for (t, b) in &o.terms {
                out.add_term(canonicalize(&(s.matrix() * t.matrix()))?, a.mul(b));
            }
        }
        out.left_invariant = self.left_invariant;
        Ok(out)
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> HeckeElement<S> {
        let mut out = HeckeElement::<S> { n: self.n, p: self.p, terms: BTreeMap::new(), left_invariant: self.left_invariant };
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }

    /// Sorted entry lists, for reports.
    pub fn to_entries(&self) -> Vec<CosetEntry>
    where
        R: fmt::Display,
    {
        self.terms
            .iter()
            .map(|(k, c)| CosetEntry {
                rep: (0..self.n)
                    .map(|i| (0..self.n).map(|j| k.matrix()[(i, j)].to_string()).collect())
                    .collect(),
                coeff: c.to_string(),
            })
            .collect()
    }
}

impl HeckeElement<BigRational> {
    pub fn identity(n: usize, p: u64) -> Self {
        let rep = canonicalize(&GMatrix::identity(n, p)).expect("identity is triangular");
        Self::single(rep, BigRational::one()).assume_left_invariant()
    }

    /// Total multiplicity `Σ a_i`.
    pub fn degree(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, b| a + b)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetEntry {
    pub rep: Vec<Vec<String>>,
    pub coeff: String,
}

/// Generators of `K_B` acting on finite coset sets: `1 + E_{ij}`
/// (`i < j`) and unit diagonal matrices built from the generators of
/// `Z_p^×`.
pub fn kb_generators(n: usize, p: u64) -> Vec<GMatrix> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut g = GMatrix::identity(n, p);
            g[(i, j)] = Rat::one();
            gens.push(g);
        }
    }
    let units: Vec<i128> = if p == 2 {
        vec![-1, 5]
    } else {
        // a primitive root mod p^2 generates Z_p^× topologically
        let g = crate::characters::generators(p, 2)[0];
        vec![g as i128]
    };
    for i in 0..n {
        for &u in &units {
            let mut g = GMatrix::identity(n, p);
            g[(i, i)] = Rat::from_integer(u);
            gens.push(g);
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalize_examples() {
        let b = GMatrix::from_ints(5, &[&[5, 8], &[0, 1]]);
        assert_eq!(canonicalize(&b).unwrap().matrix(), &GMatrix::from_ints(5, &[&[5, 3], &[0, 1]]));
        let d = GMatrix::from_ints(5, &[&[5, 0], &[0, 1]]);
        assert_eq!(canonicalize(&d).unwrap().matrix(), &d);
        let k = GMatrix::from_ints(5, &[&[2, 7, 1], &[0, -3, 4], &[0, 0, 6]]);
        assert!(canonicalize(&k).unwrap().matrix().is_identity());
        assert!(canonicalize(&GMatrix::from_ints(5, &[&[1, 0], &[1, 1]])).is_err());
    }

    #[test]
    fn borel_part_generates_the_same_k_coset() {
        let g = GMatrix::from_ints(3, &[&[1, 2, 0], &[3, 1, 1], &[9, 0, 2]]);
        let b = borel_part(&g).unwrap();
        assert!(b.is_upper_triangular());
        let k = &g.inverse().unwrap() * &b;
        assert!(crate::localgroup::membership(&k, crate::localgroup::Subgroup::GlnZp));
    }
}
