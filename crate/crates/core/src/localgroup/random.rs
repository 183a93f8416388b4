//! Seeded random group elements for property checks.

use rand::Rng;

use super::decompose::torus_weyl;
use super::matrix::GMatrix;
use super::weyl::WeylElement;
use crate::scalars::padic::{p_pow, Rat};

fn small_int<R: Rng>(rng: &mut R, bound: i128) -> Rat {
    Rat::from_integer(rng.gen_range(-bound..=bound))
}

fn unit<R: Rng>(rng: &mut R, p: u64) -> Rat {
    loop {
        let a: i128 = rng.gen_range(1..(4 * p as i128));
        if a % p as i128 != 0 {
            return if rng.gen_bool(0.5) { Rat::from_integer(a) } else { -Rat::from_integer(a) };
        }
    }
}

/// Unit diagonal, integral upper part, lower part in `pZ`.
pub fn iwahori<R: Rng>(rng: &mut R, n: usize, p: u64) -> GMatrix {
    let pr = Rat::from_integer(p as i128);
    let mut g = GMatrix::zeros(n, n, p);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = match i.cmp(&j) {
                std::cmp::Ordering::Equal => unit(rng, p),
                std::cmp::Ordering::Less => small_int(rng, 2 * p as i128),
                std::cmp::Ordering::Greater => pr * small_int(rng, p as i128),
            };
        }
    }
    // Unit diagonal and pZ below force a unit determinant.
    debug_assert_eq!(crate::scalars::padic::val(&g.det(), p), Some(0));
    g
}

/// Upper unipotent with entries in `p^{-2} Z`.
pub fn unipotent<R: Rng>(rng: &mut R, n: usize, p: u64) -> GMatrix {
    let scale = p_pow(p, -2);
    let mut g = GMatrix::identity(n, p);
    for i in 0..n {
        for j in i + 1..n {
            g[(i, j)] = small_int(rng, (p * p) as i128) * scale;
        }
    }
    g
}

/// An element of `GL_n(Z_p)` as `s_1 ω s_2`.
pub fn maximal_compact<R: Rng>(rng: &mut R, n: usize, p: u64) -> GMatrix {
    let all = WeylElement::all(n);
    let w = &all[rng.gen_range(0..all.len())];
    &(&iwahori(rng, n, p) * &w.matrix(p)) * &iwahori(rng, n, p)
}

pub fn weyl<R: Rng>(rng: &mut R, n: usize) -> WeylElement {
    let all = WeylElement::all(n);
    all[rng.gen_range(0..all.len())].clone()
}

pub fn exponents<R: Rng>(rng: &mut R, n: usize, radius: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-radius..=radius)).collect()
}

/// `u ϖ^e ω s` from random components, returned with `(e, ω)`.
pub fn assembled<R: Rng>(rng: &mut R, n: usize, p: u64) -> (GMatrix, Vec<i64>, WeylElement) {
    let e = exponents(rng, n, 3);
    let w = weyl(rng, n);
    let g = &(&unipotent(rng, n, p) * &torus_weyl(p, &e, &w)) * &iwahori(rng, n, p);
    (g, e, w)
}
