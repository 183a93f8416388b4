//! Laurent polynomials in Satake parameters `x_1..x_n` and a symbol `q½`
//! with `q½² = p`, over cyclotomic coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use super::{Cyclotomic, Ring};

/// `x^a · q½^h` with `h ∈ {0, 1}`; larger powers of `q½` are folded into
/// the coefficient as powers of `p`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    pub x: Vec<i32>,
    pub half: u8,
}

#[derive(Clone, PartialEq, Debug)]
pub struct SymbolicScalar {
    nvars: usize,
    p: u64,
    terms: BTreeMap<Monomial, Cyclotomic>,
}

fn p_power_big(p: u64, e: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        num_traits::pow(b.recip(), (-e) as usize)
    }
}

impl SymbolicScalar {
    pub fn zero(nvars: usize, p: u64) -> Self {
        Self { nvars, p, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, p: u64, c: Cyclotomic) -> Self {
        let mut s = Self::zero(nvars, p);
        s.add_term(Monomial { x: vec![0; nvars], half: 0 }, c);
        s
    }

    pub fn one(nvars: usize, p: u64) -> Self {
        Self::constant(nvars, p, Cyclotomic::one())
    }

    /// `c · x^a · q½^h` for arbitrary integer `h`.
    pub fn monomial(nvars: usize, p: u64, x: Vec<i32>, h: i64, c: Cyclotomic) -> Self {
        assert_eq!(x.len(), nvars);
        let c = c.scale(&p_power_big(p, h.div_euclid(2)));
        let mut s = Self::zero(nvars, p);
        s.add_term(Monomial { x, half: h.rem_euclid(2) as u8 }, c);
        s
    }

    /// The variable `x_i`, 1-based.
    pub fn var(nvars: usize, p: u64, i: usize) -> Self {
        let mut x = vec![0; nvars];
        x[i - 1] = 1;
        Self::monomial(nvars, p, x, 0, Cyclotomic::one())
    }

    /// `q½^h`.
    pub fn q_half(nvars: usize, p: u64, h: i64) -> Self {
        Self::monomial(nvars, p, vec![0; nvars], h, Cyclotomic::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn compatible(&self, o: &Self) {
        assert!(self.nvars == o.nvars && self.p == o.p, "mixed symbolic rings");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.compatible(o);
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.compatible(o);
        let mut out = Self::zero(self.nvars, self.p);
        let pb = BigRational::from_integer(BigInt::from(self.p));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let x = m1.x.iter().zip(&m2.x).map(|(a, b)| a + b).collect();
                let h = m1.half + m2.half;
                let mut c = c1 * c2;
                if h == 2 {
                    c = c.scale(&pb);
                }
                out.add_term(Monomial { x, half: h % 2 }, c);
            }
        }
        out
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = Self::zero(self.nvars, self.p);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars, self.p);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute values for every `x_i` and for `q½`.  The `x_i` must be
    /// nonzero whenever a negative exponent occurs.
    pub fn eval(&self, xs: &[Cyclotomic], q_half: &Cyclotomic) -> Cyclotomic {
        assert_eq!(xs.len(), self.nvars);
        let mut acc = Cyclotomic::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &a) in xs.iter().zip(&m.x) {
                t = &t * &x.pow(a as i64).expect("nonzero substitution");
            }
            if m.half == 1 {
                t = &t * q_half;
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitute for the `x_i` only, keeping `q½` formal.
    pub fn eval_x(&self, xs: &[Cyclotomic]) -> Self {
        let mut out = Self::zero(0, self.p);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &a) in xs.iter().zip(&m.x) {
                t = &t * &x.pow(a as i64).expect("nonzero substitution");
            }
            out.add_term(Monomial { x: vec![], half: m.half }, t);
        }
        out
    }

    /// Elementary symmetric polynomial `σ_k(x_1..x_n)`.
    pub fn elementary(nvars: usize, p: u64, k: usize) -> Self {
        let mut out = Self::zero(nvars, p);
        for subset in crate::localgroup::weyl::subsets(nvars, k) {
            let mut x = vec![0; nvars];
            for i in subset {
                x[i] = 1;
            }
            out.add_term(Monomial { x, half: 0 }, Cyclotomic::one());
        }
        out
    }

    /// Whether every coefficient is rational and the value has no `q½`.
    pub fn as_constant(&self) -> Option<Cyclotomic> {
        match self.terms.len() {
            0 => Some(Cyclotomic::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.half == 0 && m.x.iter().all(|&a| a == 0)).then(|| c.clone())
            }
            _ => None,
        }
    }
}

impl Ring for SymbolicScalar {
    fn zero_like(&self) -> Self {
        Self::zero(self.nvars, self.p)
    }
    fn one_like(&self) -> Self {
        Self::one(self.nvars, self.p)
    }
    fn add(&self, o: &Self) -> Self {
        SymbolicScalar::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        SymbolicScalar::mul(self, o)
    }
    fn neg(&self) -> Self {
        SymbolicScalar::neg(self)
    }
    fn is_zero(&self) -> bool {
        SymbolicScalar::is_zero(self)
    }
    fn scale_rat(&self, q: &BigRational) -> Self {
        self.scale(&Cyclotomic::from_rational(q.clone()))
    }
}

impl fmt::Display for SymbolicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = m
                .x
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(i, &a)| if a == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, a) })
                .chain((m.half == 1).then(|| "q½".to_string()))
                .collect();
            let one = c.is_one();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if one {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}
