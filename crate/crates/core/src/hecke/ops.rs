//! The standard operators `T_ν`, `U_i`, `V_{p,ν}` and `K_B t_(p) K_B`.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{borel_part, canonicalize, kb_generators, CosetRep, HeckeElement};
use crate::error::{Error, Result};
use crate::localgroup::{special_matrix, GMatrix, Kind};
use crate::scalars::padic::{ipow, Rat};

fn diag_p(n: usize, p: u64, at: impl Fn(usize) -> bool) -> GMatrix {
    let pr = Rat::from_integer(p as i128);
    GMatrix::from_fn(n, n, p, |i, j| {
        if i != j {
            Rat::from_integer(0)
        } else if at(i) {
            pr
        } else {
            Rat::one()
        }
    })
}

/// `K_B g K_B` as the orbit of `g K_B` under left multiplication by the
/// generators of `K_B`.
pub fn double_coset(g: &GMatrix) -> Result<HeckeElement> {
    let n = g.n();
    let p = g.prime();
    let gens = kb_generators(n, p);
    let start = canonicalize(g)?;
    let mut seen: BTreeSet<CosetRep> = BTreeSet::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    while let Some(c) = queue.pop_front() {
        for k in &gens {
            let d = canonicalize(&(k * c.matrix()))?;
            if seen.insert(d.clone()) {
                queue.push_back(d);
            }
        }
    }
    let mut out = HeckeElement::zero(n, p);
    for c in seen {
        out.add_term(c, BigRational::one());
    }
    Ok(out.assume_left_invariant())
}

/// `U_i = K_B diag(1_{i-1}, ϖ, 1_{n-i}) K_B`, 1-based `i`.
pub fn u_op(n: usize, p: u64, i: usize) -> Result<HeckeElement> {
    if i == 0 || i > n {
        return Err(Error::Domain(format!("U_{i} out of range for n = {n}")));
    }
    double_coset(&diag_p(n, p, |k| k + 1 == i))
}

/// `V_{p,ν} = K_B diag(ϖ 1_ν, 1_{n-ν}) K_B`; `V_{p,0}` is the unit.
pub fn v_op(n: usize, p: u64, nu: usize) -> Result<HeckeElement> {
    if nu > n {
        return Err(Error::Domain(format!("V_{{p,{nu}}} out of range for n = {n}")));
    }
    double_coset(&diag_p(n, p, |k| k < nu))
}

/// `⊔_A (ϖ 1_ν, A; 0, 1_{n-ν}) K_B` with `A` running over `(Z/p)^{ν×(n-ν)}`.
pub fn v_op_blocks(n: usize, p: u64, nu: usize) -> Result<HeckeElement> {
    if nu > n {
        return Err(Error::Domain(format!("V_{{p,{nu}}} out of range for n = {n}")));
    }
    let slots: Vec<(usize, usize)> = (0..nu).flat_map(|i| (nu..n).map(move |j| (i, j))).collect();
    let mut out = HeckeElement::zero(n, p);
    let total = ipow(p, slots.len() as u32);
    for code in 0..total {
        let mut g = diag_p(n, p, |k| k < nu);
        let mut c = code;
        for &(i, j) in &slots {
            g[(i, j)] = Rat::from_integer((c % p) as i128);
            c /= p;
        }
        out.add_term(canonicalize(&g)?, BigRational::one());
    }
    out.certify_left_invariant()
}

/// `p^{-ν(ν-1)/2} U_1 ⋯ U_ν`.
pub fn v_op_product(n: usize, p: u64, nu: usize) -> Result<HeckeElement> {
    let mut acc = HeckeElement::identity(n, p);
    for i in 1..=nu {
        acc = acc.convolve(&u_op(n, p, i)?)?;
    }
    let k = (nu * nu.saturating_sub(1) / 2) as u32;
    let scale = BigRational::new(BigInt::one(), BigInt::from(p).pow(k));
    Ok(acc.scale(&scale))
}

/// `K_B t_(p) K_B` enumerated as `⊔_u u t_(p) K_B`, `u_{ij}` running over
/// `[0, p^{j-i})`.
pub fn t_p_coset(n: usize, p: u64) -> Result<HeckeElement> {
    let t = special_matrix(Kind::TP, n, Rat::from_integer(p as i128), p)?;
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let ranges: Vec<u64> = slots.iter().map(|&(i, j)| ipow(p, (j - i) as u32)).collect();
    let mut idx = vec![0u64; slots.len()];
    let mut out = HeckeElement::zero(n, p);
    loop {
        let mut u = GMatrix::identity(n, p);
        for (&(i, j), &v) in slots.iter().zip(&idx) {
            u[(i, j)] = Rat::from_integer(v as i128);
        }
        out.add_term(canonicalize(&(&u * &t))?, BigRational::one());
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return out.certify_left_invariant();
            }
            idx[pos] += 1;
            if idx[pos] < ranges[pos] {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `[n choose k]_p`.
pub fn gaussian_binomial(n: u32, k: u32, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= (p as u128).pow(n - i) - 1;
        den *= (p as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// Right `K`-cosets of `T_ν = K diag(1_{n-ν}, ϖ 1_ν) K`, `K = GL_n(Z_p)`,
/// as Hermite normal forms: upper triangular, diagonal in `{1, p}`,
/// entries above a `p` reduced into `[0, p)`, kept when the elementary
/// divisors are `(1^{n-ν}, p^ν)`, i.e. `p b^{-1}` is integral.
pub fn spherical_t(n: usize, p: u64, nu: usize) -> Result<Vec<GMatrix>> {
    if nu > n {
        return Err(Error::Domain(format!("T_{nu} out of range for n = {n}")));
    }
    let mut out = Vec::new();
    let pr = Rat::from_integer(p as i128);
    for subset in crate::localgroup::weyl::subsets(n, nu) {
        let d = diag_p(n, p, |k| subset.contains(&k));
        let slots: Vec<(usize, usize)> =
            subset.iter().flat_map(|&i| (i + 1..n).map(move |j| (i, j))).collect();
        let total = ipow(p, slots.len() as u32);
        for code in 0..total {
            let mut b = d.clone();
            let mut c = code;
            for &(i, j) in &slots {
                b[(i, j)] = Rat::from_integer((c % p) as i128);
                c /= p;
            }
            if b.inverse()?.scale(pr).is_integral() {
                out.push(b);
            }
        }
    }
    Ok(out)
}

/// `ε(Σ a_i g_i K) = Σ a_i b_i K_B` with `g_i K = b_i K`, `b_i` upper
/// triangular.
pub fn epsilon_embed(cosets: &[(GMatrix, BigRational)]) -> Result<HeckeElement> {
    let (n, p) = match cosets.first() {
        Some((g, _)) => (g.n(), g.prime()),
        None => return Err(Error::Domain("empty spherical element".into())),
    };
    let mut out = HeckeElement::zero(n, p);
    for (g, a) in cosets {
        out.add_term(canonicalize(&borel_part(g)?)?, a.clone());
    }
    out.certify_left_invariant()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    /// `ε(T_ν)`
    T(usize),
    U(usize),
    V(usize),
    /// `K_B t_(p) K_B`
    TP,
}

pub fn standard_op(n: usize, p: u64, op: Op) -> Result<HeckeElement> {
    match op {
        Op::T(nu) => {
            let cosets: Vec<(GMatrix, BigRational)> =
                spherical_t(n, p, nu)?.into_iter().map(|g| (g, BigRational::one())).collect();
            epsilon_embed(&cosets)
        }
        Op::U(i) => u_op(n, p, i),
        Op::V(nu) => v_op(n, p, nu),
        Op::TP => t_p_coset(n, p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coset_counts() {
        for p in [2u64, 3, 5] {
            assert_eq!(spherical_t(2, p, 1).unwrap().len() as u64, p + 1);
            assert_eq!(spherical_t(3, p, 1).unwrap().len() as u64, gaussian_binomial(3, 1, p));
            assert_eq!(v_op(2, p, 1).unwrap().len() as u64, p);
            assert_eq!(u_op(2, p, 2).unwrap().len(), 1);
        }
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
    }

    #[test]
    fn u1_u2_is_p_times_scalar_coset() {
        let p = 3;
        let prod = u_op(2, p, 1).unwrap().convolve(&u_op(2, p, 2).unwrap()).unwrap();
        assert_eq!(prod.len(), 1);
        let (rep, c) = prod.terms().next().unwrap();
        assert_eq!(rep, &GMatrix::from_ints(3, &[&[3, 0], &[0, 3]]));
        assert_eq!(*c, BigRational::from_integer(3.into()));
    }

    #[test]
    fn epsilon_of_t1() {
        let p = 3;
        let e = standard_op(2, p, Op::T(1)).unwrap();
        let mut expect = HeckeElement::zero(2, p);
        for a in 0..3 {
            expect.add_term(canonicalize(&GMatrix::from_ints(3, &[&[3, a], &[0, 1]])).unwrap(), BigRational::one());
        }
        expect.add_term(canonicalize(&GMatrix::from_ints(3, &[&[1, 0], &[0, 3]])).unwrap(), BigRational::one());
        assert_eq!(e.to_entries().len(), 4);
        assert!(e.cosets().zip(expect.cosets()).all(|(a, b)| a == b));
    }
}
