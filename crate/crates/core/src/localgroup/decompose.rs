//! The Iwahori–Iwasawa decomposition `g = u · ϖ^e · ω · s`.
//!
//! Rows are cleared from the bottom up.  In row `i` the pivot is the first
//! remaining column of minimal valuation; the rest of the row is cleared
//! by Iwahori column operations (columns to the right of the pivot take
//! `Z_p` multiples, columns to the left take `pZ_p` multiples, which the
//! minimality of the first pivot guarantees), the pivot is normalized to
//! `p^{e_i}`, and the pivot column is cleared above by upper-unipotent row
//! operations.

use num_traits::Zero;

use super::matrix::GMatrix;
use super::weyl::WeylElement;
use crate::error::{Error, Result};
use crate::scalars::padic::{p_pow, val, Rat};

/// `g = u · ϖ^e · ω · s`.
#[derive(Clone, PartialEq, Debug)]
pub struct IwasawaData {
    pub u: GMatrix,
    pub e: Vec<i64>,
    pub omega: WeylElement,
    pub s: GMatrix,
}

impl IwasawaData {
    pub fn reconstruct(&self) -> GMatrix {
        let p = self.u.prime();
        let d: Vec<Rat> = self.e.iter().map(|&e| p_pow(p, e)).collect();
        let t = GMatrix::diag(p, &d);
        &(&(&self.u * &t) * &self.omega.matrix(p)) * &self.s
    }
}

/// The double-coset key `(e, ω)` together with `Σ_i u_{i,i+1}`, the
/// argument of `ψ(u)`.
#[derive(Clone, PartialEq, Debug)]
pub struct CosetKey {
    pub e: Vec<i64>,
    pub omega: WeylElement,
    pub psi_arg: Rat,
}

struct Ops {
    // left row operations L and right column operations R with L g R = ϖ^e ω
    left: Option<GMatrix>,
    right: Option<GMatrix>,
}

fn run(g: &GMatrix, track: bool) -> Result<(CosetKey, Ops)> {
    if !g.is_square() {
        return Err(Error::Precondition("decompose needs a square matrix".into()));
    }
    let n = g.n();
    let p = g.prime();
    let mut m = g.clone();
    let mut ops = Ops {
        left: track.then(|| GMatrix::identity(n, p)),
        right: track.then(|| GMatrix::identity(n, p)),
    };
    let mut remaining: Vec<bool> = vec![true; n];
    let mut e = vec![0i64; n];
    let mut sigma = vec![0usize; n];
    let mut superdiag = Rat::zero();

    for i in (0..n).rev() {
        let mut best: Option<(i64, usize)> = None;
        for c in 0..n {
            if !remaining[c] {
                continue;
            }
            if let Some(v) = val(&m[(i, c)], p) {
                if best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, c));
                }
            }
        }
        let (ei, c) = best.ok_or(Error::NotInvertible)?;
        let piv = m[(i, c)];
        // Clear row i in the other remaining columns: col_k += x · col_c.
        for k in 0..n {
            if k == c || !remaining[k] || m[(i, k)].is_zero() {
                continue;
            }
            let x = -m[(i, k)] / piv;
            for r in 0..=i {
                let t = m[(r, c)];
                if !t.is_zero() {
                    m[(r, k)] += x * t;
                }
            }
            if let Some(rt) = ops.right.as_mut() {
                for r in 0..n {
                    let t = rt[(r, c)];
                    if !t.is_zero() {
                        rt[(r, k)] += x * t;
                    }
                }
            }
        }
        // Normalize the pivot to p^{e_i}.
        let unit = piv * p_pow(p, -ei);
        let uinv = unit.recip();
        for r in 0..=i {
            m[(r, c)] *= uinv;
        }
        if let Some(rt) = ops.right.as_mut() {
            for r in 0..n {
                rt[(r, c)] *= uinv;
            }
        }
        // Clear column c above row i: row_r += y · row_i.
        let pe = m[(i, c)];
        for r in 0..i {
            if m[(r, c)].is_zero() {
                continue;
            }
            let y = -m[(r, c)] / pe;
            m[(r, c)] = Rat::zero();
            if r + 1 == i {
                superdiag -= y;
            }
            if let Some(lt) = ops.left.as_mut() {
                for j in 0..n {
                    let t = lt[(i, j)];
                    if !t.is_zero() {
                        lt[(r, j)] += y * t;
                    }
                }
            }
        }
        remaining[c] = false;
        e[i] = ei;
        sigma[i] = c;
    }
    Ok((CosetKey { e, omega: WeylElement { sigma }, psi_arg: superdiag }, ops))
}

/// `(e, ω)` and `ψ`-argument of `g`, without assembling `u` and `s`.
pub fn coset_key(g: &GMatrix) -> Result<CosetKey> {
    run(g, false).map(|(k, _)| k)
}

pub fn decompose(g: &GMatrix) -> Result<IwasawaData> {
    let (key, ops) = run(g, true)?;
    let u = ops.left.unwrap().inverse()?;
    let s = ops.right.unwrap().inverse()?;
    Ok(IwasawaData { u, e: key.e, omega: key.omega, s })
}

/// `ϖ^e ω`.
pub fn torus_weyl(p: u64, e: &[i64], omega: &WeylElement) -> GMatrix {
    let d: Vec<Rat> = e.iter().map(|&x| p_pow(p, x)).collect();
    &GMatrix::diag(p, &d) * &omega.matrix(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localgroup::matrix::{membership, Subgroup};

    #[test]
    fn identity_decomposes_trivially() {
        let d = decompose(&GMatrix::identity(3, 5)).unwrap();
        assert_eq!(d.e, vec![0, 0, 0]);
        assert!(d.omega.is_identity());
        assert!(d.u.is_identity() && d.s.is_identity());
    }

    #[test]
    fn torus_weyl_is_a_fixed_point() {
        for w in WeylElement::all(3) {
            let e = vec![2, -1, 0];
            let g = torus_weyl(3, &e, &w);
            let d = decompose(&g).unwrap();
            assert_eq!((d.e.clone(), d.omega.clone()), (e, w));
            assert_eq!(d.reconstruct(), g);
        }
    }

    #[test]
    fn components_are_in_the_right_groups() {
        let g = GMatrix::from_ints(2, &[&[3, 4], &[6, 10]]);
        let d = decompose(&g).unwrap();
        assert!(membership(&d.u, Subgroup::Unipotent));
        assert!(membership(&d.s, Subgroup::Iwahori));
        assert_eq!(d.reconstruct(), g);
        let k = coset_key(&g).unwrap();
        assert_eq!(k.psi_arg, d.u[(0, 1)]);
    }

    #[test]
    fn singular_input_is_rejected() {
        let g = GMatrix::from_ints(3, &[&[1, 2], &[2, 4]]);
        assert!(decompose(&g).is_err());
    }
}
