//! Exact coefficient arithmetic.

pub mod cyclotomic;
pub mod padic;
pub mod residue;
pub mod symbolic;

pub use cyclotomic::{Cyclotomic, CyclotomicRepr};
pub use padic::{p_pow, rat, val, PAdicRational, Rat};
pub use residue::ResidueClass;
pub use symbolic::{Monomial, SymbolicScalar};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// The commutative-ring interface shared by every coefficient type.
pub trait Ring: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplication by an exact rational.
    fn scale_rat(&self, q: &BigRational) -> Self;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

impl Ring for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn scale_rat(&self, q: &BigRational) -> Self {
        self * q
    }
}

impl Ring for Cyclotomic {
    fn zero_like(&self) -> Self {
        Cyclotomic::zero()
    }
    fn one_like(&self) -> Self {
        Cyclotomic::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn scale_rat(&self, q: &BigRational) -> Self {
        self.scale(q)
    }
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big_of(q: &Rat) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// `√p` inside a cyclotomic field: `ζ_8 + ζ_8^{-1}` for `p = 2`, and the
/// quadratic Gauss sum times `ζ_4^{-1}` when `p ≡ 3 mod 4`.
pub fn sqrt_p(p: u64) -> Cyclotomic {
    if p == 2 {
        return &Cyclotomic::root_of_unity(8, 1) + &Cyclotomic::root_of_unity(8, -1);
    }
    let mut g = Cyclotomic::zero();
    for a in 1..p {
        let leg = legendre(a, p);
        g = &g + &Cyclotomic::root_of_unity(p, a as i64).scale(&big(leg));
    }
    if p % 4 == 1 {
        g
    } else {
        &g * &Cyclotomic::root_of_unity(4, -1)
    }
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots_of_primes() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let s = sqrt_p(p);
            assert_eq!(&s * &s, Cyclotomic::from_int(p as i64), "p = {p}");
        }
    }
}
