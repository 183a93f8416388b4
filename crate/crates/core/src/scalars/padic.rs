//! Exact rationals viewed inside `Q_p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// Exact rational used for matrix entries.  Every matrix in this crate has
/// entries in `Z_(p)[1/p]`, small enough for 128-bit numerators.
pub type Rat = Ratio<i128>;

pub fn rat(n: i128) -> Rat {
    Rat::from_integer(n)
}

/// `p^e` as an exact rational, `e` of either sign.
pub fn p_pow(p: u64, e: i64) -> Rat {
    let base = rat(p as i128);
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base, (-e) as usize).recip()
    }
}

pub fn ipow(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("p-power overflows u64")
}

/// Multiplicity of `p` in a nonzero integer.
pub fn val_int(mut n: i128, p: u64) -> u32 {
    debug_assert!(n != 0);
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// p-adic valuation; `None` stands for `+∞` (the zero element).
pub fn val(q: &Rat, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(val_int(*q.numer(), p) as i64 - val_int(*q.denom(), p) as i64)
}

/// Whether `q` lies in `Z_p`.
pub fn is_integral(q: &Rat, p: u64) -> bool {
    val_int_denom(q, p) == 0
}

fn val_int_denom(q: &Rat, p: u64) -> u32 {
    val_int(*q.denom(), p)
}

/// Inverse of `a` modulo `m` (`gcd(a, m) = 1` required).
pub fn inv_mod(a: i128, m: i128) -> i128 {
    let e = a.mod_floor(&m).extended_gcd(&m);
    assert!(e.gcd == 1, "{a} is not invertible modulo {m}");
    e.x.mod_floor(&m)
}

/// Residue of a p-integral rational modulo `p^k`, in `[0, p^k)`.
pub fn residue(q: &Rat, p: u64, k: u32) -> i128 {
    assert!(is_integral(q, p), "residue of non-integral {q}");
    let m = ipow(p, k) as i128;
    if m == 1 {
        return 0;
    }
    let num = q.numer().mod_floor(&m);
    let den = q.denom().mod_floor(&m);
    (num * inv_mod(den, m)).mod_floor(&m)
}

/// Class of `q` in `Q_p / Z_p`, returned as `(a, j)` with `q ≡ a / p^j`,
/// `0 ≤ a < p^j`, and `j = max(0, -val(q))`.
pub fn fractional_part(q: &Rat, p: u64) -> (i128, u32) {
    let j = val_int_denom(q, p);
    if j == 0 {
        return (0, 0);
    }
    let pj = ipow(p, j) as i128;
    // q = a / (p^j d) with d a p-unit; q ≡ a d^{-1} / p^j mod Z_p.
    let d = *q.denom() / pj;
    let a = (q.numer().mod_floor(&pj) * inv_mod(d, pj)).mod_floor(&pj);
    (a, j)
}

/// Canonical representative of `q + p^e Z_p`: an element of `Z[1/p]`
/// in `[0, p^e)` built from the p-adic digits of `q` below `p^e`.
pub fn reduce_mod_p_power(q: &Rat, p: u64, e: i64) -> Rat {
    let j = val_int_denom(q, p) as i64;
    if e + j <= 0 {
        return Rat::zero();
    }
    // q * p^j is p-integral; reduce it modulo p^(e + j) and scale back.
    let scaled = q * p_pow(p, j);
    let r = residue(&scaled, p, (e + j) as u32);
    Rat::from_integer(r) * p_pow(p, -j)
}

/// An exact element of `Q_p` with denominators in `Z_(p)[1/p]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PAdicRational {
    pub value: Rat,
    pub prime: u64,
}

impl PAdicRational {
    pub fn new(value: Rat, prime: u64) -> Self {
        Self { value, prime }
    }

    pub fn from_int(n: i128, prime: u64) -> Self {
        Self::new(rat(n), prime)
    }

    /// `p^e`.
    pub fn p_power(prime: u64, e: i64) -> Self {
        Self::new(p_pow(prime, e), prime)
    }

    /// `None` is `+∞`, the valuation of zero.
    pub fn valuation(&self) -> Option<i64> {
        val(&self.value, self.prime)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// `x / p^val(x)`.
    pub fn unit_part(&self) -> Rat {
        match self.valuation() {
            None => Rat::zero(),
            Some(v) => self.value * p_pow(self.prime, -v),
        }
    }

    pub fn abs_value(&self) -> Rat {
        match self.valuation() {
            None => Rat::zero(),
            Some(v) => p_pow(self.prime, -v),
        }
    }

    pub fn recip(&self) -> Self {
        Self::new(self.value.recip(), self.prime)
    }

    pub fn pow(&self, e: i64) -> Self {
        let v = if e >= 0 {
            num_traits::pow(self.value, e as usize)
        } else {
            num_traits::pow(self.value.recip(), (-e) as usize)
        };
        Self::new(v, self.prime)
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_positive()
    }
}

impl fmt::Display for PAdicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for PAdicRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        debug_assert_eq!(self.prime, o.prime);
        Self::new(self.value + o.value, self.prime)
    }
}

impl Sub for PAdicRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        debug_assert_eq!(self.prime, o.prime);
        Self::new(self.value - o.value, self.prime)
    }
}

impl Mul for PAdicRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        debug_assert_eq!(self.prime, o.prime);
        Self::new(self.value * o.value, self.prime)
    }
}

impl Neg for PAdicRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, self.prime)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(PAdicRational::from_int(1, 5).valuation(), Some(0));
        assert_eq!(PAdicRational::from_int(12, 2).valuation(), Some(2));
        assert_eq!(
            PAdicRational::new(Rat::new(5, 49), 7).valuation(),
            Some(-2)
        );
        assert_eq!(PAdicRational::from_int(0, 3).valuation(), None);
    }

    #[test]
    fn fractional_parts() {
        assert_eq!(fractional_part(&rat(7), 3), (0, 0));
        assert_eq!(fractional_part(&Rat::new(1, 3), 3), (1, 1));
        assert_eq!(fractional_part(&Rat::new(3, 4), 2), (3, 2));
        // 1/6 in Q_3: 1/6 = (1/2)/3 and 1/2 ≡ 2 mod 3.
        assert_eq!(fractional_part(&Rat::new(1, 6), 3), (2, 1));
    }

    #[test]
    fn reduce_mod_examples() {
        assert_eq!(reduce_mod_p_power(&rat(8), 5, 1), rat(3));
        assert_eq!(reduce_mod_p_power(&rat(-1), 5, 1), rat(4));
        assert_eq!(reduce_mod_p_power(&Rat::new(7, 5), 5, 1), Rat::new(7, 5));
        assert_eq!(reduce_mod_p_power(&rat(7), 5, 0), rat(0));
        assert_eq!(reduce_mod_p_power(&Rat::new(1, 25), 5, -1), Rat::new(1, 25));
        assert_eq!(reduce_mod_p_power(&Rat::new(6, 5), 5, -1), rat(0));
    }

    #[test]
    fn residue_of_fraction() {
        // 1/2 mod 9 = 5.
        assert_eq!(residue(&Rat::new(1, 2), 3, 2), 5);
        assert_eq!(residue(&rat(-1), 3, 2), 8);
    }
}
