//! The standard additive character `ψ` of `Q_p`, multiplicative characters
//! of p-power conductor, and Gauss sums.
//!
//! Root-of-unity values are also exposed as exponents in `Q/Z`
//! (`r ↦ e^{2πi r}`) so that hot loops can count instead of multiply.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::localgroup::GMatrix;
use crate::scalars::padic::{fractional_part, ipow, residue, val, Rat};
use crate::scalars::{Cyclotomic, CyclotomicRepr};

/// An exponent in `Q/Z`, kept in `[0, 1)`.
pub type RootExp = Ratio<i64>;

pub fn norm_exp(r: RootExp) -> RootExp {
    r - Ratio::from_integer(r.floor().to_integer())
}

pub fn root_value(r: RootExp) -> Cyclotomic {
    let r = norm_exp(r);
    Cyclotomic::root_of_unity(*r.denom() as u64, *r.numer())
}

/// `ψ(x)` as an exponent: `x ≡ a / p^k mod Z_p` gives `a / p^k`.
pub fn psi_exp(x: &Rat, p: u64) -> RootExp {
    let (a, k) = fractional_part(x, p);
    if k == 0 {
        return RootExp::zero();
    }
    RootExp::new(a as i64, ipow(p, k) as i64)
}

pub fn psi_eval(x: &Rat, p: u64) -> Cyclotomic {
    root_value(psi_exp(x, p))
}

/// `ψ^{sign}(u) = Π ψ(u_{i,i+1})^{sign}` on upper unipotent `u`.
pub fn psi_unipotent(u: &GMatrix, sign: i64) -> Result<Cyclotomic> {
    use crate::localgroup::{membership, Subgroup};
    if !membership(u, Subgroup::Unipotent) {
        return Err(Error::Precondition("ψ(u) needs an upper unipotent u".into()));
    }
    let p = u.prime();
    let s: Rat = (0..u.n().saturating_sub(1)).map(|i| u[(i, i + 1)]).sum();
    Ok(root_value(psi_exp(&s, p) * sign))
}

/// A character of `Q_p^×` trivial on `1 + p^m Z_p`, given by its values
/// on the units (a table of exponents at level `order`) and a free value
/// at `p`.
#[derive(Clone, Debug)]
pub struct MultChar {
    pub p: u64,
    pub m: u32,
    /// Exponents of the images of the fixed generators, in `Q/Z`.
    pub generator_images: Vec<RootExp>,
    pub value_at_p: Cyclotomic,
    order: u64,
    // χ(x) = ζ_order^{table[x]} for units x mod p^m.
    table: Vec<u32>,
}

const NONUNIT: u32 = u32::MAX;

/// Fixed generators of `(Z/p^m)^×`: the smallest primitive root for odd
/// `p`, `{-1, 5}` for `p = 2` (just `{-1}` when `m = 2`).
pub fn generators(p: u64, m: u32) -> Vec<u64> {
    let pm = ipow(p, m);
    if p == 2 {
        return match m {
            0 | 1 => vec![],
            2 => vec![pm - 1],
            _ => vec![pm - 1, 5],
        };
    }
    if m == 0 {
        return vec![];
    }
    let phi = pm / p * (p - 1);
    let prime_factors: Vec<u64> = {
        let mut fs = Vec::new();
        let mut t = phi;
        let mut q = 2;
        while q * q <= t {
            if t.is_multiple_of(q) {
                fs.push(q);
                while t.is_multiple_of(q) {
                    t /= q;
                }
            }
            q += 1;
        }
        if t > 1 {
            fs.push(t);
        }
        fs
    };
    let g = (2..pm)
        .find(|&g| g % p != 0 && prime_factors.iter().all(|&q| pow_mod(g, phi / q, pm) != 1))
        .expect("(Z/p^m)^× is cyclic for odd p");
    vec![g]
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Orders of the fixed generators.
fn generator_orders(p: u64, m: u32) -> Vec<u64> {
    if p == 2 {
        return match m {
            0 | 1 => vec![],
            2 => vec![2],
            _ => vec![2, ipow(2, m - 2)],
        };
    }
    if m == 0 {
        return vec![];
    }
    vec![ipow(p, m - 1) * (p - 1)]
}

impl MultChar {
    /// The character with the given generator images (exponents in `Q/Z`).
    pub fn new(p: u64, m: u32, images: Vec<RootExp>, value_at_p: Cyclotomic) -> Result<Self> {
        let gens = generators(p, m);
        let orders = generator_orders(p, m);
        if images.len() != gens.len() {
            return Err(Error::Domain(format!("need {} generator images", gens.len())));
        }
        for (r, &o) in images.iter().zip(&orders) {
            if (*r * o as i64).denom() != &1 {
                return Err(Error::Domain(format!("image {r} is not an {o}-th root of unity")));
            }
        }
        let images: Vec<RootExp> = images.into_iter().map(norm_exp).collect();
        let order = images.iter().fold(1u64, |acc, r| acc.lcm(&(*r.denom() as u64)));
        let pm = ipow(p, m);
        let mut table = vec![NONUNIT; pm as usize];
        // Walk the product of cyclic groups generated by gens.
        let mut idx = vec![0u64; gens.len()];
        loop {
            let mut x = 1 % pm;
            let mut e = RootExp::zero();
            for ((g, &k), r) in gens.iter().zip(&idx).zip(&images) {
                x = ((x as u128 * pow_mod(*g, k, pm) as u128) % pm as u128) as u64;
                e += *r * k as i64;
            }
            let e = norm_exp(e);
            table[x as usize] = (*e.numer() as u64 * (order / *e.denom() as u64)) as u32;
            // odometer
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return Ok(Self { p, m, generator_images: images, value_at_p, order, table });
                }
                idx[pos] += 1;
                if idx[pos] < orders[pos] {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    pub fn trivial(p: u64) -> Self {
        Self::new(p, 0, vec![], Cyclotomic::one()).unwrap()
    }

    pub fn with_value_at_p(mut self, v: Cyclotomic) -> Self {
        self.value_at_p = v;
        self
    }

    pub fn conductor(&self) -> u64 {
        ipow(self.p, self.m)
    }

    /// Order of the restriction to the units.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `χ(x)` on a unit residue `x mod p^m` as an exponent; `None` off
    /// the units.
    pub fn unit_exp(&self, x: u64) -> Option<RootExp> {
        let t = self.table[(x % self.conductor()) as usize];
        (t != NONUNIT).then(|| RootExp::new(t as i64, self.order as i64))
    }

    /// Raw table entry: `χ(x) = ζ_order^k`.
    pub fn unit_index(&self, x: u64) -> Option<u32> {
        let t = self.table[(x % self.conductor()) as usize];
        (t != NONUNIT).then_some(t)
    }

    /// `χ(u)` for a p-adic unit `u ∈ Z_(p)^×`, as an exponent.
    pub fn exp_of_unit(&self, u: &Rat) -> RootExp {
        debug_assert_eq!(val(u, self.p), Some(0));
        if self.m == 0 {
            return RootExp::zero();
        }
        self.unit_exp(residue(u, self.p, self.m) as u64).expect("unit")
    }

    /// `χ(x) = χ(p)^{val x} · χ(unit part)`, `x ≠ 0`.
    pub fn eval(&self, x: &Rat) -> Result<Cyclotomic> {
        let v = val(x, self.p).ok_or_else(|| Error::Domain("χ(0)".into()))?;
        let u = x * crate::scalars::p_pow(self.p, -v);
        Ok(&self.value_at_p.pow(v)? * &root_value(self.exp_of_unit(&u)))
    }

    /// Exact conductor test: nontrivial on `1 + p^{m-1} Z_p`.
    pub fn is_primitive(&self) -> bool {
        if self.m == 0 {
            return true;
        }
        let pm = self.conductor();
        let step = ipow(self.p, self.m - 1);
        (0..self.p).any(|k| {
            let x = (1 + k * step) % pm;
            !x.is_multiple_of(self.p) && self.unit_exp(x).is_some_and(|e| !e.is_zero())
        })
    }

    pub fn conj(&self) -> Self {
        let images = self.generator_images.iter().map(|r| norm_exp(-*r)).collect();
        Self::new(self.p, self.m, images, self.value_at_p.inv().unwrap_or_else(|_| Cyclotomic::zero()))
            .expect("conjugate of a valid character")
    }

    pub fn describe(&self) -> CharDescription {
        CharDescription {
            p: self.p,
            m: self.m,
            generators: generators(self.p, self.m),
            generator_images: self.generator_images.iter().map(|r| r.to_string()).collect(),
            value_at_p: self.value_at_p.to_repr(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CharDescription {
    pub p: u64,
    pub m: u32,
    pub generators: Vec<u64>,
    pub generator_images: Vec<String>,
    pub value_at_p: CyclotomicRepr,
}

/// All characters of conductor exactly `p^m`, with `χ(p) = 1`.
pub fn enumerate_chars(p: u64, m: u32) -> Vec<MultChar> {
    let orders = generator_orders(p, m);
    let mut out = Vec::new();
    let mut idx = vec![0u64; orders.len()];
    if m == 0 {
        return out;
    }
    loop {
        let images = idx.iter().zip(&orders).map(|(&k, &o)| RootExp::new(k as i64, o as i64)).collect();
        let chi = MultChar::new(p, m, images, Cyclotomic::one()).expect("valid images");
        if chi.is_primitive() {
            out.push(chi);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < orders[pos] {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `G(χ) = Σ_{x mod f} χ(x) ψ(x / f)`, `f = p^m`.
pub fn gauss_sum(chi: &MultChar) -> Result<Cyclotomic> {
    if chi.m == 0 {
        return Err(Error::Domain("Gauss sum of an unramified character".into()));
    }
    let pm = chi.conductor();
    let level = chi.order.lcm(&pm);
    let counts = (1..pm).filter_map(|x| {
        chi.unit_index(x).map(|t| (t as u64 * (level / chi.order) + x * (level / pm), 1i64))
    });
    Ok(Cyclotomic::from_power_counts(level, counts))
}

/// `Σ_{x mod 𝔥} χ(x) ψ(x / g)` with `𝔥 = 𝔣 ∩ gZ_p`, by direct summation.
pub fn twisted_sum(chi: &MultChar, g: &Rat) -> Result<Cyclotomic> {
    let j = val(g, chi.p).ok_or_else(|| Error::Precondition("twisted sum needs g ≠ 0".into()))?;
    if j < 0 {
        return Err(Error::Precondition("twisted sum needs g ∈ Z_p".into()));
    }
    let h = (chi.m as i64).max(j) as u32;
    let ph = ipow(chi.p, h);
    let ginv = g.recip();
    let mut acc = Cyclotomic::zero();
    let mut counts: std::collections::BTreeMap<RootExp, i64> = Default::default();
    for x in 0..ph {
        let Some(c) = (if chi.m == 0 { Some(RootExp::zero()) } else { chi.unit_exp(x) }) else {
            continue;
        };
        let e = norm_exp(c + psi_exp(&(Rat::from_integer(x as i128) * ginv), chi.p));
        *counts.entry(e).or_default() += 1;
    }
    for (e, c) in counts {
        acc = &acc + &root_value(e).scale(&crate::scalars::big(c));
    }
    Ok(acc)
}

/// The closed form: `χ(g/f) G(χ)` when `gZ_p = 𝔣`, else `0`.
pub fn twisted_sum_closed_form(chi: &MultChar, g: &Rat) -> Result<Cyclotomic> {
    let j = val(g, chi.p).ok_or_else(|| Error::Precondition("twisted sum needs g ≠ 0".into()))?;
    if j != chi.m as i64 || chi.m == 0 {
        return Ok(Cyclotomic::zero());
    }
    let u = g * crate::scalars::p_pow(chi.p, -j);
    Ok(&root_value(chi.exp_of_unit(&u)) * &gauss_sum(chi)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128) -> Rat {
        Rat::from_integer(n)
    }

    #[test]
    fn psi_examples() {
        assert!(psi_eval(&r(7), 5).is_one());
        assert_eq!(psi_eval(&Rat::new(1, 5), 5), Cyclotomic::root_of_unity(5, 1));
        assert_eq!(psi_eval(&Rat::new(3, 4), 2), Cyclotomic::root_of_unity(4, 3));
        let mut u = GMatrix::identity(2, 3);
        u[(0, 1)] = Rat::new(1, 3);
        assert_eq!(psi_unipotent(&u, 1).unwrap(), Cyclotomic::root_of_unity(3, 1));
        assert_eq!(psi_unipotent(&u, -1).unwrap(), Cyclotomic::root_of_unity(3, -1));
        assert!(psi_unipotent(&GMatrix::identity(3, 3), 1).unwrap().is_one());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_chars(3, 1).len(), 1);
        assert_eq!(enumerate_chars(5, 1).len(), 3);
        assert_eq!(enumerate_chars(2, 2).len(), 1);
        assert_eq!(enumerate_chars(2, 1).len(), 0);
        assert_eq!(enumerate_chars(2, 3).len(), 2);
        assert_eq!(enumerate_chars(3, 2).len(), 4);
        assert_eq!(generators(2, 4), vec![15, 5]);
        assert_eq!(generators(7, 1), vec![3]);
    }

    #[test]
    fn gauss_sum_examples() {
        let chi = &enumerate_chars(3, 1)[0];
        let g = gauss_sum(chi).unwrap();
        assert_eq!(&g * &g, Cyclotomic::from_int(-3));
        let chi4 = &enumerate_chars(2, 2)[0];
        assert_eq!(gauss_sum(chi4).unwrap(), Cyclotomic::root_of_unity(4, 1).scale(&crate::scalars::big(2)));
    }

    #[test]
    fn multiplicativity() {
        for chi in enumerate_chars(3, 2).into_iter().chain(enumerate_chars(2, 4)) {
            let pm = chi.conductor();
            for x in (1..pm).filter(|x| x % chi.p != 0) {
                for y in (1..pm).filter(|y| y % chi.p != 0) {
                    let lhs = chi.unit_exp(x * y % pm).unwrap();
                    let rhs = norm_exp(chi.unit_exp(x).unwrap() + chi.unit_exp(y).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
