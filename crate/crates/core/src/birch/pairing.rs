//! Formal values of the zeta integrand: sums of `[w-cell ⊗ v-cell] X^k`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::characters::{norm_exp, RootExp};
use crate::scalars::{Cyclotomic, CyclotomicRepr};
use crate::whittaker::WhittakerKey;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct PairKey {
    pub w: WhittakerKey,
    pub v: WhittakerKey,
    /// Power of `X`.
    pub x: i64,
}

/// `Σ c · [w ⊗ v] X^k` with cyclotomic coefficients.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct PairingValue {
    terms: BTreeMap<PairKey, Cyclotomic>,
}

impl PairingValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(w: WhittakerKey, v: WhittakerKey, x: i64, c: Cyclotomic) -> Self {
        let mut out = Self::zero();
        out.add_term(PairKey { w, v, x }, c);
        out
    }

    pub fn add_term(&mut self, key: PairKey, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(Cyclotomic::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Cyclotomic::from_int(-1)))
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn scale_rat(&self, q: &BigRational) -> Self {
        self.scale(&Cyclotomic::from_rational(q.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PairKey, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical form with every coefficient at its minimal level, so
    /// equal values serialize identically.
    pub fn to_repr(&self) -> Vec<PairTerm> {
        self.terms
            .iter()
            .map(|(k, c)| PairTerm { key: k.clone(), coeff: c.reduce_level().to_repr() })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairTerm {
    pub key: PairKey,
    pub coeff: CyclotomicRepr,
}

impl fmt::Display for PairingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·[{}⊗{}]X^{}", k.w, k.v, k.x)?;
        }
        Ok(())
    }
}

/// Hot-loop accumulator: counts of root-of-unity exponents per w-cell.
#[derive(Clone, Debug, Default)]
pub struct Counts {
    map: HashMap<(WhittakerKey, RootExp), i64>,
}

impl Counts {
    pub fn bump(&mut self, w: WhittakerKey, e: RootExp) {
        *self.map.entry((w, norm_exp(e))).or_default() += 1;
    }

    pub fn merge(self, o: Self) -> Self {
        let (mut big, small) = if self.map.len() >= o.map.len() { (self, o) } else { (o, self) };
        for (k, c) in small.map {
            *big.map.entry(k).or_default() += c;
        }
        big
    }

    /// `Σ_w (Σ_e count · e^{2πi e}) [w ⊗ v] X^x`.
    pub fn into_value(self, v: &WhittakerKey, x: i64) -> PairingValue {
        let mut per_w: BTreeMap<WhittakerKey, Vec<(RootExp, i64)>> = BTreeMap::new();
        for ((w, e), c) in self.map {
            per_w.entry(w).or_default().push((e, c));
        }
        let mut out = PairingValue::zero();
        for (w, list) in per_w {
            let level = list.iter().fold(1i64, |acc, (e, _)| acc.lcm(e.denom())) as u64;
            let coeff = Cyclotomic::from_power_counts(
                level,
                list.iter().map(|(e, c)| ((*e.numer() as u64) * (level / *e.denom() as u64), *c)),
            );
            out.add_term(PairKey { w, v: v.clone(), x }, coeff);
        }
        out
    }
}
