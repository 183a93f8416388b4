//! The rings `Z / p^k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use super::padic::{inv_mod, ipow};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ResidueClass {
    pub p: u64,
    pub k: u32,
    pub rep: u64,
}

impl ResidueClass {
    pub fn new(p: u64, k: u32, n: i128) -> Self {
        let m = ipow(p, k) as i128;
        Self { p, k, rep: n.mod_floor(&m) as u64 }
    }

    pub fn modulus(&self) -> u64 {
        ipow(self.p, self.k)
    }

    pub fn is_unit(&self) -> bool {
        self.k == 0 || !self.rep.is_multiple_of(self.p)
    }

    pub fn inv(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        if self.k == 0 {
            return Some(*self);
        }
        let m = self.modulus() as i128;
        Some(Self { rep: inv_mod(self.rep as i128, m) as u64, ..*self })
    }

    /// All classes modulo `p^k`.
    pub fn all(p: u64, k: u32) -> impl Iterator<Item = Self> {
        (0..ipow(p, k)).map(move |r| Self { p, k, rep: r })
    }

    /// The unit classes modulo `p^k`.
    pub fn units(p: u64, k: u32) -> impl Iterator<Item = Self> {
        Self::all(p, k).filter(|x| x.is_unit())
    }

    fn check(&self, o: &Self) {
        debug_assert!(self.p == o.p && self.k == o.k, "mixed moduli");
    }
}

impl Add for ResidueClass {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.check(&o);
        Self::new(self.p, self.k, self.rep as i128 + o.rep as i128)
    }
}

impl Sub for ResidueClass {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.check(&o);
        Self::new(self.p, self.k, self.rep as i128 - o.rep as i128)
    }
}

impl Mul for ResidueClass {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.check(&o);
        Self::new(self.p, self.k, self.rep as i128 * o.rep as i128)
    }
}

impl Neg for ResidueClass {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.p, self.k, -(self.rep as i128))
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.rep, self.p, self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_and_inverses() {
        assert_eq!(ResidueClass::units(3, 2).count(), 6);
        for u in ResidueClass::units(2, 4) {
            let v = u.inv().unwrap();
            assert_eq!((u * v).rep, 1);
        }
        assert!(ResidueClass::new(5, 1, 10).inv().is_none());
        assert_eq!(ResidueClass::new(3, 2, -1).rep, 8);
    }
}
