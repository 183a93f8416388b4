//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored at an explicit level `N` as the coefficient vector
//! of a polynomial in `ζ_N` of degree `< φ(N)`, i.e. reduced modulo the
//! `N`-th cyclotomic polynomial.  Binary operations lift both operands to
//! the lcm of their levels and re-reduce eagerly, so equality at a common
//! level is plain vector comparison.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Levels above this are refused; nothing in the kernel needs them.
const MAX_LEVEL: u64 = 1 << 14;

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            while n.is_multiple_of(q) {
                n /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Per-level data: `Φ_N` and the reductions of `x^k`, `0 ≤ k < N`.
struct LevelData {
    phi: usize,
    /// Coefficients of `Φ_N`, low degree first, length `phi + 1`.
    poly: Vec<i64>,
    powers: Vec<Vec<i64>>,
    /// The nonzero entries of each row of `powers`.
    sparse: Vec<Vec<(usize, i64)>>,
}

fn level_cache() -> &'static Mutex<HashMap<u64, Arc<LevelData>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<LevelData>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cyclotomic_poly(n: u64) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let den = level(d).poly.clone();
        num = poly_div_exact(&num, &den);
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut q = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &b) in den.iter().enumerate() {
                rem[i + j] -= c * b;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

fn level(n: u64) -> Arc<LevelData> {
    assert!((1..=MAX_LEVEL).contains(&n), "cyclotomic level {n} out of range");
    if let Some(d) = level_cache().lock().unwrap().get(&n) {
        return d.clone();
    }
    let poly = if n == 1 { vec![-1, 1] } else { cyclotomic_poly(n) };
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce the overflow coefficient.
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..phi {
                cur[i] -= top * poly[i];
            }
        }
    }
    let sparse = powers
        .iter()
        .map(|row| row.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, &c)| (i, c)).collect())
        .collect();
    let data = Arc::new(LevelData { phi, poly, powers, sparse });
    level_cache().lock().unwrap().insert(n, data.clone());
    data
}

/// An exact element of `Q(ζ_N)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    level: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self { level: 1, coeffs: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(q: &Ratio<i128>) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom())))
    }

    /// `ζ_N^k`, with `N / gcd(N, k)` as the stored level.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as u64;
        let g = n.gcd(&k);
        let (n, k) = if k == 0 { (1, 0) } else { (n / g, k / g) };
        let data = level(n);
        Self {
            level: n,
            coeffs: data.powers[k as usize]
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    /// Builds `Σ counts[k]·ζ_N^k` with integer multiplicities.
    pub fn from_power_counts(n: u64, counts: impl IntoIterator<Item = (u64, i64)>) -> Self {
        let data = level(n);
        let mut acc = vec![0i128; data.phi];
        for (k, c) in counts {
            if c == 0 {
                continue;
            }
            for &(i, r) in &data.sparse[(k % n) as usize] {
                acc[i] += c as i128 * r as i128;
            }
        }
        Self {
            level: n,
            coeffs: acc
                .into_iter()
                .map(|c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    /// Builds `Σ q_k·ζ_N^k` with rational weights.
    pub fn from_power_sums<'a>(n: u64, sums: impl IntoIterator<Item = (u64, &'a BigRational)>) -> Self {
        let data = level(n);
        let mut acc = vec![BigRational::zero(); data.phi];
        for (k, q) in sums {
            if q.is_zero() {
                continue;
            }
            for &(i, r) in &data.sparse[(k % n) as usize] {
                acc[i] += q * BigRational::from_integer(BigInt::from(r));
            }
        }
        Self { level: n, coeffs: acc }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        let r = self.reduce_level();
        (r.level == 1).then(|| r.coeffs[0].clone())
    }

    /// Re-express at level `m`, a multiple of the current level.
    pub fn lift(&self, m: u64) -> Self {
        assert!(m.is_multiple_of(self.level), "cannot lift level {} to {}", self.level, m);
        if m == self.level {
            return self.clone();
        }
        let data = level(m);
        let step = m / self.level;
        let mut out = vec![BigRational::zero(); data.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &data.powers[(i as u64 * step % m) as usize];
            for (o, &r) in out.iter_mut().zip(row) {
                if r != 0 {
                    *o += c * BigInt::from(r);
                }
            }
        }
        Self { level: m, coeffs: out }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let m = a.level.lcm(&b.level);
        (a.lift(m), b.lift(m))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self { level: self.level, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Galois action `ζ_N ↦ ζ_N^a`, `gcd(a, N) = 1`.
    pub fn galois(&self, a: i64) -> Self {
        let n = self.level;
        let a = a.rem_euclid(n as i64) as u64;
        assert!(n == 1 || a.gcd(&n) == 1);
        let data = level(n);
        let mut out = vec![BigRational::zero(); data.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &data.powers[(i as u64 * a % n) as usize];
            for (o, &r) in out.iter_mut().zip(row) {
                if r != 0 {
                    *o += c * BigInt::from(r);
                }
            }
        }
        Self { level: n, coeffs: out }
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inversion of zero in Q(ζ_N)".into()));
        }
        let data = level(self.level);
        let modulus: Vec<BigRational> = data
            .poly
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let s = poly_inverse_mod(&self.coeffs, &modulus);
        let mut coeffs = vec![BigRational::zero(); data.phi];
        for (i, c) in s.into_iter().enumerate() {
            coeffs[i] = c;
        }
        Ok(Self { level: self.level, coeffs })
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> BigRational {
        let n = self.level;
        let mut acc = Self::one();
        for a in 1..n.max(2) {
            if a.gcd(&n) == 1 || n == 1 {
                acc = &acc * &self.galois(a as i64);
                if n == 1 {
                    break;
                }
            }
        }
        acc.as_rational().expect("norm is rational")
    }

    /// Normalized p-adic valuation `val_p(N(x)) / [Q(ζ_N) : Q]`, taken at
    /// the minimal level.  On the p-power cyclotomic tower this is the
    /// unique extension of `val_p`; `None` is `+∞`.
    pub fn valuation(&self, p: u64) -> Option<Ratio<i64>> {
        if self.is_zero() {
            return None;
        }
        let r = self.reduce_level();
        let nm = r.norm();
        let v = crate::scalars::padic::val_int(nm.numer().to_i128().expect("norm fits"), p) as i64
            - crate::scalars::padic::val_int(nm.denom().to_i128().expect("norm fits"), p) as i64;
        Some(Ratio::new(v, r.coeffs.len() as i64))
    }

    /// The same element at the smallest level `d | N` containing it.
    pub fn reduce_level(&self) -> Self {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            return Self::from_rational(self.coeffs[0].clone());
        }
        for d in divisors(self.level) {
            if d == self.level {
                break;
            }
            if let Some(c) = self.try_descend(d) {
                return c;
            }
        }
        self.clone()
    }

    fn try_descend(&self, d: u64) -> Option<Self> {
        // Cheap Galois test first: x must be fixed by ζ ↦ ζ^a, a ≡ 1 mod d.
        let n = self.level;
        let mut a = 1 + d;
        while a < n {
            if a.gcd(&n) == 1 {
                if self.galois(a as i64) != *self {
                    return None;
                }
                break;
            }
            a += d;
        }
        let dd = level(d);
        let basis: Vec<Vec<BigRational>> = (0..dd.phi)
            .map(|i| Self::root_of_unity(d, i as i64).lift(n).coeffs)
            .collect();
        let sol = solve_linear(&basis, &self.coeffs)?;
        let cand = Self { level: d, coeffs: sol };
        (cand.lift(n) == *self).then_some(cand)
    }

    pub fn to_repr(&self) -> CyclotomicRepr {
        let r = self.reduce_level();
        CyclotomicRepr { level: r.level, coeffs: r.coeffs.iter().map(|c| c.to_string()).collect() }
    }

    pub fn from_repr(repr: &CyclotomicRepr) -> Result<Self> {
        let data = level(repr.level);
        if repr.coeffs.len() != data.phi {
            return Err(Error::Domain(format!(
                "level {} needs {} coefficients, got {}",
                repr.level,
                data.phi,
                repr.coeffs.len()
            )));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(|e| Error::Domain(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { level: repr.level, coeffs })
    }
}

/// Serialized form: minimal level plus coefficient strings `"n/d"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicRepr {
    pub level: u64,
    pub coeffs: Vec<String>,
}

/// Solve `Σ x_i basis[i] = target` over `Q`, if consistent.
fn solve_linear(basis: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = target.len();
    let cols = basis.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    if r.len() - 1 < db || (r.len() == 1 && r[0].is_zero()) {
        return (vec![BigRational::zero()], r);
    }
    let lead_inv = b[db].recip();
    let mut q = vec![BigRational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] * &lead_inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                let sub = &c * bj;
                r[i + j] -= sub;
            }
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Inverse of `a` modulo the irreducible `m` via the extended Euclidean
/// algorithm over `Q[x]`.
fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant since m is irreducible and a ≠ 0 mod m.
    let c = r0[0].recip();
    let (_, s) = poly_divmod(&s0, m);
    s.into_iter().map(|x| x * &c).collect()
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::common(self, o);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs) {
            *x += y;
        }
        a
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: &Cyclotomic) -> Cyclotomic {
        self + &(-o)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { level: self.level, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::common(self, o);
        let n = a.level;
        let data = level(n);
        let phi = data.phi;
        let prod = poly_mul(&a.coeffs, &b.coeffs);
        // Reduce by the monic Φ_N from the top down.
        let mut r = prod;
        for i in (phi..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut r[i], BigRational::zero());
            for (j, &pj) in data.poly[..phi].iter().enumerate() {
                if pj != 0 {
                    r[i - phi + j] -= &c * BigInt::from(pj);
                }
            }
        }
        r.resize(phi, BigRational::zero());
        Cyclotomic { level: n, coeffs: r }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, o: Cyclotomic) -> Cyclotomic {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduce_level();
        let mut first = true;
        for (i, c) in r.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    write!(f, "z{}", r.level)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn basic_relations() {
        assert_eq!(&z(4, 1) * &z(4, 1), Cyclotomic::from_int(-1));
        let s = &(&Cyclotomic::one() + &z(3, 1)) + &z(3, 2);
        assert!(s.is_zero());
        assert!((&z(5, 1) * &z(5, 4)).is_one());
        assert!(z(1, 0).is_one());
        assert_eq!(z(2, 1), Cyclotomic::from_int(-1));
        let r = z(8, 2);
        assert_eq!(r.level(), 4);
        assert_eq!(r, z(4, 1));
    }

    #[test]
    fn phi_values() {
        assert_eq!(level(12).phi, 4);
        assert_eq!(level(9).poly, vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(euler_phi(1458), 486);
    }

    #[test]
    fn inverse_and_level_reduction() {
        let x = &(&z(12, 1) + &Cyclotomic::from_int(3)) * &z(5, 2);
        let xi = x.inv().unwrap();
        assert!((&x * &xi).is_one());
        assert!(Cyclotomic::zero().inv().is_err());
        // ζ_6 = -ζ_3^2 lives at level 3.
        assert_eq!(z(6, 1).reduce_level().level(), 3);
        let lifted = z(4, 1).lift(24);
        assert_eq!(lifted.reduce_level().level(), 4);
    }

    #[test]
    fn norm_and_valuation() {
        // N(1 - ζ_3) = 3.
        let x = &Cyclotomic::one() - &z(3, 1);
        assert_eq!(x.norm(), BigRational::from_integer(3.into()));
        assert_eq!(x.valuation(3), Some(Ratio::new(1, 2)));
        let y = &Cyclotomic::one() - &z(9, 1);
        assert_eq!(y.valuation(3), Some(Ratio::new(1, 6)));
    }

    #[test]
    fn repr_round_trip() {
        let x = &z(20, 3) + &Cyclotomic::from_int(7);
        let r = x.to_repr();
        assert_eq!(Cyclotomic::from_repr(&r).unwrap(), x);
    }
}
