//! Satake eigenvalues, Gritsenko's factorization, the modification
//! operator and the ordinarity constants.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::ops::{standard_op, v_op, Op};
use super::HeckeElement;
use crate::error::{Error, Result};
use crate::localgroup::{torus_weyl, GMatrix, WeylElement};
use crate::scalars::{Cyclotomic, Ring, SymbolicScalar};
use crate::whittaker::{shintani_value, spherical_act, supported, ScaleBy, Spherical};

fn to_symbolic(h: &HeckeElement, n: usize, p: u64) -> HeckeElement<SymbolicScalar> {
    h.map_coeffs(|c| SymbolicScalar::constant(n, p, Cyclotomic::from_rational(c.clone())))
}

/// The scalar by which a spherical element acts on the normalized
/// spherical Whittaker function, read off at `g = 1` and confirmed at
/// further dominant `ϖ^e`.
pub fn satake_eigenvalue<R: Ring>(a: &HeckeElement<R>) -> Result<SymbolicScalar>
where
    Spherical: ScaleBy<R>,
{
    let (n, p) = (a.n(), a.prime());
    let lambda = spherical_act(a, &GMatrix::identity(n, p))?;
    let probes: Vec<Vec<i64>> = vec![
        (0..n).map(|i| i64::from(i == 0)).collect(),
        (0..n).map(|i| (n - i) as i64).collect(),
        (0..n).map(|i| if i + 1 == n { -1 } else { 1 }).collect(),
    ];
    for e in probes {
        let g = torus_weyl(p, &e, &WeylElement::identity(n));
        let lhs = spherical_act(a, &g)?;
        let rhs = lambda.mul(&shintani_value(n, p, &e));
        if lhs != rhs {
            return Err(Error::Contract(format!("not an eigenfunction at e = {e:?}")));
        }
    }
    Ok(lambda)
}

/// The value this crate computes for `T_ν`: `q½^{ν(n-ν)} σ_ν(x)`.
pub fn expected_t_eigenvalue(n: usize, p: u64, nu: usize) -> SymbolicScalar {
    SymbolicScalar::elementary(n, p, nu).mul(&SymbolicScalar::q_half(n, p, (nu * (n - nu)) as i64))
}

#[derive(Clone, Debug, Serialize)]
pub struct SatakeNormalization {
    /// Per `ν`: the exponent `c_ν` with `X_i = q½^{c_ν} x_i` turning the
    /// displayed `p^{ν(ν+1)/2} σ_ν(X)` into the computed eigenvalue.
    pub per_nu_exponent: Vec<(usize, i64)>,
    /// Whether one rescaling serves every `ν`.
    pub uniform: bool,
}

/// Compare `q½^{ν(n-ν)} σ_ν(x)` against `p^{ν(ν+1)/2} σ_ν(X)`:
/// `X_i = q½^c x_i` matches at `ν` iff `c ν + ν(ν+1) = ν(n-ν)`.
pub fn satake_normalization(n: usize) -> SatakeNormalization {
    let per: Vec<(usize, i64)> = (1..=n).map(|nu| (nu, n as i64 - 2 * nu as i64 - 1)).collect();
    let uniform = per.windows(2).all(|w| w[0].1 == w[1].1);
    SatakeNormalization { per_nu_exponent: per, uniform }
}

#[derive(Clone, Debug, Serialize)]
pub struct GritsenkoLine {
    pub nu: usize,
    pub holds: bool,
    pub cosets_lhs: usize,
    pub cosets_rhs: usize,
}

/// `e_ν(U_1, …, U_n) = p^{ν(ν-1)/2} ε(T_ν)` for every `ν`.
pub fn gritsenko_check(n: usize, p: u64) -> Result<Vec<GritsenkoLine>> {
    let us: Vec<HeckeElement> = (1..=n).map(|i| standard_op(n, p, Op::U(i))).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for nu in 1..=n {
        let mut lhs = HeckeElement::zero(n, p);
        for subset in crate::localgroup::weyl::subsets(n, nu) {
            let mut prod = HeckeElement::identity(n, p);
            for i in subset {
                prod = prod.convolve(&us[i])?;
            }
            lhs = lhs.add(&prod);
        }
        let k = (nu * (nu - 1) / 2) as u32;
        let rhs = standard_op(n, p, Op::T(nu))?.scale(&BigRational::from_integer(BigInt::from(p).pow(k)));
        out.push(GritsenkoLine { nu, holds: lhs.cosets().eq(rhs.cosets()), cosets_lhs: lhs.len(), cosets_rhs: rhs.len() });
    }
    Ok(out)
}

/// Hecke roots `λ_1, …, λ_n`.
#[derive(Clone, Debug)]
pub struct HeckeRoots {
    pub n: usize,
    pub p: u64,
    pub lambdas: Vec<SymbolicScalar>,
}

impl HeckeRoots {
    /// `λ_i = q½^{n-1} x_i`, so `e_ν(λ) = p^{ν(ν-1)/2} q½^{ν(n-ν)} σ_ν(x)`.
    pub fn from_satake(n: usize, p: u64) -> Self {
        let s = SymbolicScalar::q_half(n, p, n as i64 - 1);
        Self { n, p, lambdas: (1..=n).map(|i| SymbolicScalar::var(n, p, i).mul(&s)).collect() }
    }

    /// `η_ν = p^{-ν(ν-1)/2} Π_{i≤ν} λ_i`.
    pub fn eta(&self, nu: usize) -> SymbolicScalar {
        let mut acc = SymbolicScalar::q_half(self.n, self.p, -((nu * nu.saturating_sub(1)) as i64));
        for l in &self.lambdas[..nu] {
            acc = acc.mul(l);
        }
        acc
    }
}

/// `ψ_λ = Π_{i=1}^{n-1} Π_{j≠i} (λ_i p^{1-j} V_{p,j-1} - V_{p,j})`.
pub fn modification_operator(roots: &HeckeRoots) -> Result<HeckeElement<SymbolicScalar>> {
    let (n, p) = (roots.n, roots.p);
    let vs: Vec<HeckeElement<SymbolicScalar>> =
        (0..=n).map(|j| v_op(n, p, j).map(|v| to_symbolic(&v, n, p))).collect::<Result<_>>()?;
    let mut acc = to_symbolic(&HeckeElement::identity(n, p), n, p);
    for i in 1..n {
        for j in (1..=n).filter(|&j| j != i) {
            let c = roots.lambdas[i - 1].mul(&SymbolicScalar::q_half(n, p, 2 * (1 - j as i64)));
            let factor = vs[j - 1]
                .scale(&c)
                .add(&vs[j].scale(&SymbolicScalar::constant(n, p, Cyclotomic::from_int(-1))))
                .assume_left_invariant();
            acc = acc.convolve(&factor)?;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenLine {
    pub nu: usize,
    pub key_e: Vec<i64>,
    pub key_omega: Vec<usize>,
    pub holds: bool,
}

/// `V_{p,ν} (ψ_λ W)(g) = η_ν (ψ_λ W)(g)` at `g = ϖ^e ω` for the supported
/// cells with `|e_i| ≤ radius`.
pub fn eigen_check(n: usize, p: u64, radius: i64) -> Result<Vec<EigenLine>> {
    let roots = HeckeRoots::from_satake(n, p);
    let psi = modification_operator(&roots)?;
    let keys = sample_keys(n, radius);
    let base: Vec<SymbolicScalar> =
        keys.par_iter().map(|(e, om)| spherical_act(&psi, &torus_weyl(p, e, om))).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for nu in 1..n {
        let v = to_symbolic(&v_op(n, p, nu)?, n, p);
        let vpsi = v.convolve(&psi)?;
        let eta = roots.eta(nu);
        let lines: Vec<EigenLine> = keys
            .par_iter()
            .zip(&base)
            .map(|((e, om), b)| {
                let lhs = spherical_act(&vpsi, &torus_weyl(p, e, om))?;
                Ok(EigenLine { nu, key_e: e.clone(), key_omega: om.sigma.clone(), holds: lhs == b.mul(&eta) })
            })
            .collect::<Result<_>>()?;
        out.extend(lines);
    }
    Ok(out)
}

pub fn sample_keys(n: usize, radius: i64) -> Vec<(Vec<i64>, WeylElement)> {
    let mut out = Vec::new();
    let side = (2 * radius + 1) as usize;
    let total = side.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let e: Vec<i64> = (0..n)
            .map(|_| {
                let x = (c % side) as i64 - radius;
                c /= side;
                x
            })
            .collect();
        for w in WeylElement::all(n) {
            if supported(&e, &w) {
                out.push((e.clone(), w));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaReport {
    pub ordinary: bool,
    /// Valuations after sorting.
    pub valuations: Vec<String>,
    pub val_kappa: String,
    pub val_kappa_hat: String,
    pub kappa_hat_is_unit: bool,
}

/// Ordinarity (`val λ_i = i - 1` for `i < n` after sorting) and the
/// valuations of `κ_λ = Π_{ν<n} λ_ν^{n-ν}` and
/// `κ̂_λ = p^{-n(n-1)(n-2)/6} κ_λ`.
pub fn ordinarity_and_kappa(vals: &[Ratio<i64>]) -> KappaReport {
    let n = vals.len();
    let mut v = vals.to_vec();
    v.sort();
    let ordinary = (0..n.saturating_sub(1)).all(|i| v[i] == Ratio::from_integer(i as i64));
    let val_kappa: Ratio<i64> = (0..n.saturating_sub(1)).map(|i| v[i] * (n - 1 - i) as i64).sum();
    let correction = (n * n.saturating_sub(1) * n.saturating_sub(2) / 6) as i64;
    let val_hat = val_kappa - Ratio::from_integer(correction);
    if ordinary {
        assert!(val_hat.is_zero(), "κ̂ of ordinary roots must be a unit");
    }
    KappaReport {
        ordinary,
        valuations: v.iter().map(|x| x.to_string()).collect(),
        val_kappa: val_kappa.to_string(),
        val_kappa_hat: val_hat.to_string(),
        kappa_hat_is_unit: val_hat.is_zero(),
    }
}

/// `κ_λ` and `κ̂_λ` for explicit root values.
pub fn kappa_values(p: u64, lambdas: &[Cyclotomic]) -> Result<(Cyclotomic, Cyclotomic)> {
    let n = lambdas.len();
    let mut k = Cyclotomic::one();
    for (i, l) in lambdas.iter().enumerate().take(n.saturating_sub(1)) {
        k = &k * &l.pow((n - 1 - i) as i64)?;
    }
    let corr = (n * n.saturating_sub(1) * n.saturating_sub(2) / 6) as u32;
    let scale = BigRational::new(BigInt::one(), BigInt::from(p).pow(corr));
    Ok((k.clone(), k.scale(&scale)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_eigenvalues() {
        for (n, p) in [(1usize, 3u64), (2, 2), (2, 3), (3, 2)] {
            for nu in 0..=n {
                let t = standard_op(n, p, Op::T(nu)).unwrap();
                assert_eq!(satake_eigenvalue(&t).unwrap(), expected_t_eigenvalue(n, p, nu), "n={n} p={p} ν={nu}");
            }
        }
    }

    #[test]
    fn gritsenko_small() {
        for (n, p) in [(1usize, 5u64), (2, 2), (2, 3), (3, 2)] {
            for line in gritsenko_check(n, p).unwrap() {
                assert!(line.holds, "n={n} p={p} ν={}", line.nu);
            }
        }
    }

    #[test]
    fn eigen_relations_n2() {
        for line in eigen_check(2, 3, 1).unwrap() {
            assert!(line.holds, "{line:?}");
        }
    }

    #[test]
    fn kappa_examples() {
        let r = |a: i64, b: i64| Ratio::new(a, b);
        assert!(ordinarity_and_kappa(&[r(0, 1), r(1, 1)]).ordinary);
        let k = ordinarity_and_kappa(&[r(2, 1), r(0, 1), r(1, 1)]);
        assert!(k.ordinary && k.kappa_hat_is_unit);
        assert_eq!(k.val_kappa, "1");
        assert!(!ordinarity_and_kappa(&[r(1, 2), r(1, 2)]).ordinary);
        assert!(!satake_normalization(2).uniform);
        assert!(satake_normalization(1).uniform);
    }
}
