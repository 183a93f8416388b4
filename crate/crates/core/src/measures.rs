//! p-adic distributions on `Z_p^×`, integration of characters, Fourier
//! inversion, order estimates and the interpolation constants.
//!
//! A distribution is stored through its values `μ_m(x) = μ(x + p^m Z_p)` on
//! the unit classes modulo `p^m`, `1 ≤ m ≤ M`.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::birch::reps::euler_factor;
use crate::characters::{enumerate_chars, MultChar};
use crate::error::{Error, Result};
use crate::hecke::satake::kappa_values;
use crate::scalars::cyclotomic::euler_phi;
use crate::scalars::padic::ipow;
use crate::scalars::{Cyclotomic, CyclotomicRepr};

/// Unit residues modulo `p^m`, ascending.
pub fn units(p: u64, m: u32) -> Vec<u64> {
    (1..ipow(p, m)).filter(|x| x % p != 0).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PAdicDistribution {
    pub p: u64,
    /// `levels[m - 1]` maps each unit residue mod `p^m` to `μ_m`.
    levels: Vec<BTreeMap<u64, Cyclotomic>>,
}

impl PAdicDistribution {
    pub fn from_levels(p: u64, levels: Vec<BTreeMap<u64, Cyclotomic>>) -> Result<Self> {
        for (i, lv) in levels.iter().enumerate() {
            let want = units(p, i as u32 + 1);
            if lv.len() != want.len() || !want.iter().all(|x| lv.contains_key(x)) {
                return Err(Error::Domain(format!("level {} must cover the units mod {p}^{}", i + 1, i + 1)));
            }
        }
        Ok(Self { p, levels })
    }

    /// The distribution with `μ_M = top`, extended down by summation.
    pub fn from_top(p: u64, depth: u32, top: impl Fn(u64) -> Cyclotomic) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Domain("depth must be at least 1".into()));
        }
        let mut levels = vec![BTreeMap::new(); depth as usize];
        levels[depth as usize - 1] = units(p, depth).into_iter().map(|x| (x, top(x))).collect();
        for m in (1..depth).rev() {
            let pm = ipow(p, m);
            let mut lv: BTreeMap<u64, Cyclotomic> = units(p, m).into_iter().map(|x| (x, Cyclotomic::zero())).collect();
            for (x, v) in &levels[m as usize] {
                let slot = lv.get_mut(&(x % pm)).expect("unit");
                *slot = &*slot + v;
            }
            levels[m as usize - 1] = lv;
        }
        Ok(Self { p, levels })
    }

    /// The point mass at `1`.
    pub fn dirac(p: u64, depth: u32) -> Result<Self> {
        Self::from_top(p, depth, |x| if x == 1 { Cyclotomic::one() } else { Cyclotomic::zero() })
    }

    /// `μ_m ≡ 1 / ((p - 1) p^{m-1})`.
    pub fn haar(p: u64, depth: u32) -> Result<Self> {
        let w = BigRational::new(BigInt::one(), BigInt::from(euler_phi(ipow(p, depth))));
        Self::from_top(p, depth, |_| Cyclotomic::from_rational(w.clone()))
    }

    /// `μ_m = λ^{-m} · [x ≡ 1]` level by level; not a distribution unless
    /// `λ = 1`, but a clean test case for order estimates.
    pub fn geometric(p: u64, depth: u32, lambda: &Cyclotomic) -> Result<Self> {
        let inv = lambda.inv()?;
        let levels = (1..=depth)
            .map(|m| {
                let scale = inv.pow(m as i64).expect("invertible");
                units(p, m)
                    .into_iter()
                    .map(|x| (x, if x == 1 { scale.clone() } else { Cyclotomic::zero() }))
                    .collect()
            })
            .collect();
        Ok(Self { p, levels })
    }

    pub fn depth(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn level(&self, m: u32) -> Option<&BTreeMap<u64, Cyclotomic>> {
        m.checked_sub(1).and_then(|i| self.levels.get(i as usize))
    }

    pub fn value(&self, m: u32, x: u64) -> Option<&Cyclotomic> {
        self.level(m)?.get(&(x % ipow(self.p, m)))
    }

    /// A copy with `δ` added to `μ_m(x)`.
    pub fn perturbed(&self, m: u32, x: u64, delta: &Cyclotomic) -> Result<Self> {
        let mut out = self.clone();
        let slot = out
            .levels
            .get_mut(m as usize - 1)
            .and_then(|lv| lv.get_mut(&x))
            .ok_or_else(|| Error::Domain(format!("no value at level {m}, class {x}")))?;
        *slot = &*slot + delta;
        Ok(out)
    }

    pub fn to_repr(&self) -> DistributionRepr {
        DistributionRepr {
            p: self.p,
            levels: self
                .levels
                .iter()
                .enumerate()
                .map(|(i, lv)| LevelRepr {
                    m: i as u32 + 1,
                    values: lv.iter().map(|(x, v)| (x.to_string(), v.reduce_level().to_repr())).collect(),
                })
                .collect(),
        }
    }

    pub fn from_repr(r: &DistributionRepr) -> Result<Self> {
        let mut levels = Vec::new();
        for (i, lv) in r.levels.iter().enumerate() {
            if lv.m != i as u32 + 1 {
                return Err(Error::Domain("levels must be 1, 2, … in order".into()));
            }
            let mut map = BTreeMap::new();
            for (k, v) in &lv.values {
                let x: u64 = k.parse().map_err(|_| Error::Domain(format!("bad residue {k}")))?;
                map.insert(x, Cyclotomic::from_repr(v)?);
            }
            levels.push(map);
        }
        Self::from_levels(r.p, levels)
    }
}

/// JSON shape: `{p, levels: [{m, values: {residue: coefficients}}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DistributionRepr {
    pub p: u64,
    pub levels: Vec<LevelRepr>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LevelRepr {
    pub m: u32,
    pub values: BTreeMap<String, CyclotomicRepr>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationWitness {
    pub m: u32,
    pub x: u64,
    pub value: CyclotomicRepr,
    pub sum_of_lifts: CyclotomicRepr,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub holds: bool,
    pub witness: Option<RelationWitness>,
}

/// `μ_m(x) = Σ_{a mod p} μ_{m+1}(x + a p^m)` at every pair of adjacent
/// stored levels.
pub fn check_relation(mu: &PAdicDistribution) -> Result<RelationCheck> {
    if mu.depth() < 2 {
        return Err(Error::Precondition("need at least two stored levels".into()));
    }
    let p = mu.p;
    for m in 1..mu.depth() {
        let pm = ipow(p, m);
        for (x, v) in mu.level(m).expect("stored") {
            let mut s = Cyclotomic::zero();
            for a in 0..p {
                s = &s + mu.value(m + 1, x + a * pm).expect("stored");
            }
            if &s != v {
                let witness = RelationWitness {
                    m,
                    x: *x,
                    value: v.reduce_level().to_repr(),
                    sum_of_lifts: s.reduce_level().to_repr(),
                };
                return Ok(RelationCheck { holds: false, witness: Some(witness) });
            }
        }
    }
    Ok(RelationCheck { holds: true, witness: None })
}

/// Numerators of a table of cyclotomic values over one common
/// denominator, lifted to `ζ_N` with `N` a common multiple of the levels.
struct Scaled {
    level: u64,
    den: BigInt,
    rows: Vec<Vec<(usize, i64)>>,
}

impl Scaled {
    /// `None` when a numerator does not fit in an `i64`.
    fn new<'a>(values: impl IntoIterator<Item = &'a Cyclotomic> + Clone, base: u64) -> Option<Self> {
        let level = values.clone().into_iter().fold(base, |a, v| a.lcm(&v.level()));
        let den = values
            .clone()
            .into_iter()
            .flat_map(|v| v.coeffs())
            .filter(|c| !c.is_zero())
            .fold(BigInt::one(), |a, c| a.lcm(c.denom()));
        let rows = values
            .into_iter()
            .map(|v| {
                let step = (level / v.level()) as usize;
                v.coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| Some((j * step, i64::try_from(c.numer() * (&den / c.denom())).ok()?)))
                    .collect()
            })
            .collect::<Option<_>>()?;
        Some(Self { level, den, rows })
    }

    /// `Σ_r ζ_N^{shift_r} · row_r`, divided by `den · extra`.
    fn combine(&self, terms: impl Iterator<Item = (usize, u64)>, extra: &BigInt) -> Cyclotomic {
        let n = self.level as usize;
        // twice the length so that shifted indices never wrap inside the loop
        let mut acc = vec![0i128; 2 * n];
        for (r, shift) in terms {
            let shift = shift as usize % n;
            for &(pos, v) in &self.rows[r] {
                acc[pos + shift] += v as i128;
            }
        }
        let (lo, hi) = acc.split_at_mut(n);
        for (a, b) in lo.iter_mut().zip(hi.iter()) {
            *a += b;
        }
        let d = &self.den * extra;
        let sums: Vec<(u64, BigRational)> = lo
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(k, v)| (k as u64, BigRational::new(BigInt::from(*v), d.clone())))
            .collect();
        Cyclotomic::from_power_sums(self.level, sums.iter().map(|(k, q)| (*k, q)))
    }
}

/// Exponent index of `χ(x)` (`χ(x) = ζ_order^k`) for a unit `x`.
fn char_index(chi: &MultChar, x: u64) -> u64 {
    if chi.m == 0 {
        0
    } else {
        chi.unit_index(x % chi.conductor()).expect("unit") as u64
    }
}

/// `Σ_{x mod p^m} χ(x) μ_m(x)`.
pub fn integrate_at(mu: &PAdicDistribution, chi: &MultChar, m: u32) -> Result<Cyclotomic> {
    if chi.m > m {
        return Err(Error::Precondition(format!("χ has conductor {}^{} beyond level {m}", chi.p, chi.m)));
    }
    let lv = mu.level(m).ok_or_else(|| Error::Precondition(format!("level {m} not stored")))?;
    let order = chi.order();
    let rational: Option<Vec<BigRational>> = lv.values().map(Cyclotomic::as_rational).collect();
    if let Some(vals) = rational {
        let mut acc = vec![BigRational::zero(); order as usize];
        for (x, q) in lv.keys().zip(&vals) {
            acc[char_index(chi, *x) as usize] += q;
        }
        return Ok(Cyclotomic::from_power_sums(order, acc.iter().enumerate().map(|(k, q)| (k as u64, q))));
    }
    let mut acc = vec![Cyclotomic::zero(); order as usize];
    for (x, v) in lv {
        let k = char_index(chi, *x) as usize;
        acc[k] = &acc[k] + v;
    }
    Ok(acc
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(Cyclotomic::zero(), |s, (k, c)| &s + &(c * &Cyclotomic::root_of_unity(order, k as i64))))
}

/// `∫ χ dμ`, computed at every stored level `m ≥ max(1, c)` and required
/// to agree there.
pub fn integrate_character(mu: &PAdicDistribution, chi: &MultChar) -> Result<Cyclotomic> {
    Ok(integrate_characters(mu, std::slice::from_ref(chi))?.remove(0))
}

/// `integrate_character` for many characters at once, sharing the work of
/// lifting each level's values to a common denominator.
pub fn integrate_characters(mu: &PAdicDistribution, chars: &[MultChar]) -> Result<Vec<Cyclotomic>> {
    for chi in chars {
        if chi.p != mu.p {
            return Err(Error::Domain("χ and μ live at different primes".into()));
        }
        if chi.m.max(1) > mu.depth() {
            return Err(Error::Precondition(format!("depth {} is insufficient for conductor {}^{}", mu.depth(), chi.p, chi.m)));
        }
    }
    let mut out: Vec<Option<(u32, Cyclotomic)>> = vec![None; chars.len()];
    for m in 1..=mu.depth() {
        let live: Vec<usize> = (0..chars.len()).filter(|&i| chars[i].m.max(1) <= m).collect();
        let subset: Vec<&MultChar> = live.iter().map(|&i| &chars[i]).collect();
        for (i, v) in live.into_iter().zip(integrate_level(mu, &subset, m)?) {
            match &out[i] {
                None => out[i] = Some((m, v)),
                Some((first, w)) if *w != v => {
                    return Err(Error::Contract(format!("∫χ dμ differs between levels {first} and {m}")));
                }
                Some(_) => {}
            }
        }
    }
    Ok(out.into_iter().map(|v| v.expect("every character meets some level").1).collect())
}

fn integrate_level(mu: &PAdicDistribution, chars: &[&MultChar], m: u32) -> Result<Vec<Cyclotomic>> {
    let lv = mu.level(m).ok_or_else(|| Error::Precondition(format!("level {m} not stored")))?;
    let base = chars.iter().fold(1u64, |a, c| a.lcm(&c.order()));
    match Scaled::new(lv.values(), base) {
        Some(sc) => Ok(chars
            .par_iter()
            .map(|chi| {
                let step = sc.level / chi.order();
                sc.combine(lv.keys().enumerate().map(|(r, x)| (r, char_index(chi, *x) * step)), &BigInt::one())
            })
            .collect()),
        None => chars.iter().map(|chi| integrate_at(mu, chi, m)).collect(),
    }
}

/// Every character of `(Z/p^M)^×`: the trivial one and the primitive
/// ones of each conductor `p^c`, `c ≤ M`.
pub fn all_characters(p: u64, depth: u32) -> Vec<MultChar> {
    let mut out = vec![MultChar::trivial(p)];
    for c in 1..=depth {
        out.extend(enumerate_chars(p, c));
    }
    out
}

/// The unique level-`M` function with `∫ χ dμ = L(χ)` for every character
/// of `(Z/p^M)^×`: `μ_M(x) = φ(p^M)^{-1} Σ_χ L(χ) χ(x)^{-1}`.
pub fn fourier_inverse(p: u64, depth: u32, targets: &[(MultChar, Cyclotomic)]) -> Result<PAdicDistribution> {
    let xs = units(p, depth);
    if targets.len() != xs.len() {
        return Err(Error::Precondition(format!("need {} targets, got {}", xs.len(), targets.len())));
    }
    let mut seen = HashSet::new();
    for (chi, _) in targets {
        if chi.p != p || chi.m > depth {
            return Err(Error::Precondition("target character outside the dual of (Z/p^M)^×".into()));
        }
        // values as reduced fractions k / order
        let table: Vec<(u64, u64)> = xs
            .iter()
            .map(|&x| {
                let (k, o) = (char_index(chi, x), chi.order());
                let g = k.gcd(&o);
                (k / g, o / g)
            })
            .collect();
        if !seen.insert(table) {
            return Err(Error::Precondition("repeated target character".into()));
        }
    }
    let base = targets.iter().fold(1u64, |acc, (chi, _)| acc.lcm(&chi.order()));
    let phi = BigInt::from(xs.len());
    let top: BTreeMap<u64, Cyclotomic> = match Scaled::new(targets.iter().map(|(_, l)| l), base) {
        Some(sc) => {
            let n = sc.level;
            let shift = |chi: &MultChar, x: u64| (n - (char_index(chi, x) * (n / chi.order())) % n) % n;
            xs.par_iter()
                .map(|&x| (x, sc.combine(targets.iter().enumerate().map(|(r, (chi, _))| (r, shift(chi, x))), &phi)))
                .collect()
        }
        None => xs
            .iter()
            .map(|&x| {
                let v = targets.iter().fold(Cyclotomic::zero(), |acc, (chi, l)| {
                    let k = char_index(chi, x) as i64;
                    &acc + &(l * &Cyclotomic::root_of_unity(chi.order(), -k))
                });
                (x, v.scale(&BigRational::new(BigInt::one(), phi.clone())))
            })
            .collect(),
    };
    PAdicDistribution::from_top(p, depth, |x| top[&x].clone())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "h")]
pub enum Order {
    Bounded,
    Order(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderEstimate {
    /// `β_m = min_x val μ_m(x)`; `None` for an identically zero level.
    pub betas: Vec<Option<String>>,
    pub order: Order,
    #[serde(skip)]
    pub h: Ratio<i64>,
}

/// `h = max_{m < m'} (β_m - β_{m'}) / (m' - m)`, reported as "bounded"
/// when `h ≤ 0`: the least slope with `β_m ≥ -h m + C` on the stored
/// levels.
pub fn order_estimate(mu: &PAdicDistribution) -> OrderEstimate {
    let p = mu.p;
    let betas: Vec<Option<Ratio<i64>>> = (1..=mu.depth())
        .map(|m| mu.level(m).expect("stored").values().filter_map(|v| v.valuation(p)).min())
        .collect();
    let mut h = Ratio::zero();
    for (i, a) in betas.iter().enumerate() {
        for (j, b) in betas.iter().enumerate().skip(i + 1) {
            if let (Some(a), Some(b)) = (a, b) {
                h = h.max((a - b) / Ratio::from_integer((j - i) as i64));
            }
        }
    }
    let order = if h.is_zero() { Order::Bounded } else { Order::Order(h.to_string()) };
    OrderEstimate { betas: betas.iter().map(|b| b.map(|b| b.to_string())).collect(), order, h }
}

#[derive(Clone, Debug)]
pub struct InterpolationConstants {
    pub n: usize,
    pub p: u64,
    pub c: u32,
    /// `[(n+1)n(n-1) + n(n-1)(n-2)] / 6`.
    pub kappa_exponent: u64,
    pub kappa_hat_lambda: Cyclotomic,
    pub kappa_hat_alpha: Cyclotomic,
    /// `κ(f) = N(f)^{kappa_exponent} / (κ̂_λ κ̂_α)^c`.
    pub kappa: Cyclotomic,
    /// `κ̂(f) = N(f)^{n(n-1)(n-2)/6} (κ̂_λ κ̂_α)^{-c}`.
    pub kappa_hat: Cyclotomic,
    /// `w(1) v(1) Π_{ν<n} (1 - p^{-ν})^{-1}`.
    pub delta: Cyclotomic,
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpolationRepr {
    pub n: usize,
    pub p: u64,
    pub c: u32,
    pub kappa_exponent: u64,
    pub kappa: CyclotomicRepr,
    pub kappa_hat: CyclotomicRepr,
    pub delta: CyclotomicRepr,
}

impl InterpolationConstants {
    pub fn to_repr(&self) -> InterpolationRepr {
        InterpolationRepr {
            n: self.n,
            p: self.p,
            c: self.c,
            kappa_exponent: self.kappa_exponent,
            kappa: self.kappa.reduce_level().to_repr(),
            kappa_hat: self.kappa_hat.reduce_level().to_repr(),
            delta: self.delta.reduce_level().to_repr(),
        }
    }
}

pub fn kappa_exponent(n: usize) -> u64 {
    let n = n as u64;
    ((n + 1) * n * n.saturating_sub(1) + n * n.saturating_sub(1) * n.saturating_sub(2)) / 6
}

/// Roots `λ` of `π` on `GL_{n+1}` and `α` of `σ` on `GL_n`, and the values
/// `w(1)`, `v(1)`.
pub fn interpolation_constants(
    n: usize,
    p: u64,
    c: u32,
    roots_pi: &[Cyclotomic],
    roots_sigma: &[Cyclotomic],
    w1: &Cyclotomic,
    v1: &Cyclotomic,
) -> Result<InterpolationConstants> {
    if roots_pi.len() != n + 1 || roots_sigma.len() != n {
        return Err(Error::Domain(format!("need {} and {n} roots", n + 1)));
    }
    if c == 0 {
        return Err(Error::Precondition("conductor exponent must be at least 1".into()));
    }
    let (_, kl) = kappa_values(p, roots_pi)?;
    let (_, ka) = kappa_values(p, roots_sigma)?;
    let k_inv_c = (&kl * &ka).inv()?.pow(c as i64)?;
    let e = kappa_exponent(n);
    let pp = |k: u64| Cyclotomic::from_rational(BigRational::from_integer(BigInt::from(p).pow(k as u32)));
    let nn = n as u64;
    let hat_e = nn * nn.saturating_sub(1) * nn.saturating_sub(2) / 6;
    Ok(InterpolationConstants {
        n,
        p,
        c,
        kappa_exponent: e,
        kappa: &pp(e * c as u64) * &k_inv_c,
        kappa_hat: &pp(hat_e * c as u64) * &k_inv_c,
        delta: (w1 * v1).scale(&euler_factor(n.saturating_sub(1), p)),
        kappa_hat_lambda: kl,
        kappa_hat_alpha: ka,
    })
}

/// `η_ν = p^{-ν(ν-1)/2} Π_{i≤ν} λ_i` at numeric roots.
pub fn eta(p: u64, roots: &[Cyclotomic], nu: usize) -> Cyclotomic {
    let corr = BigRational::new(BigInt::one(), BigInt::from(p).pow((nu * nu.saturating_sub(1) / 2) as u32));
    roots[..nu].iter().fold(Cyclotomic::from_rational(corr), |acc, l| &acc * l)
}

/// Stand-in for the automorphic periods: `P_c(x) = (p^{-E} β)^c ρ_c(x)`
/// with `ρ` the pushforward of an integer seed on `(Z/p^M)^×` and
/// `β = Π_{ν≤n} η_ν(λ) · Π_{ν<n} η_ν(α)` the eigenvalue of the
/// Hecke recursion, taken from the roots.
#[derive(Clone, Debug)]
pub struct SyntheticOracle {
    pub n: usize,
    pub p: u64,
    pub roots_pi: Vec<Cyclotomic>,
    pub roots_sigma: Vec<Cyclotomic>,
    pub depth: u32,
    pub seed: BTreeMap<u64, i64>,
}

impl SyntheticOracle {
    pub fn hecke_eigenvalue(&self) -> Cyclotomic {
        let a = (1..=self.n).fold(Cyclotomic::one(), |acc, nu| &acc * &eta(self.p, &self.roots_pi, nu));
        (1..self.n).fold(a, |acc, nu| &acc * &eta(self.p, &self.roots_sigma, nu))
    }

    fn seed_distribution(&self) -> Result<PAdicDistribution> {
        PAdicDistribution::from_top(self.p, self.depth, |x| Cyclotomic::from_int(self.seed.get(&x).copied().unwrap_or(0)))
    }

    /// `μ_c(x) = κ(p^c) P_c(x)`.
    pub fn measure(&self) -> Result<PAdicDistribution> {
        let rho = self.seed_distribution()?;
        let e = kappa_exponent(self.n);
        let step = self.hecke_eigenvalue().scale(&BigRational::new(BigInt::one(), BigInt::from(self.p).pow(e as u32)));
        let one = Cyclotomic::one();
        let mut levels = Vec::new();
        for c in 1..=self.depth {
            let k = interpolation_constants(self.n, self.p, c, &self.roots_pi, &self.roots_sigma, &one, &one)?;
            let scale = &k.kappa * &step.pow(c as i64)?;
            levels.push(rho.level(c).expect("stored").iter().map(|(x, v)| (*x, v * &scale)).collect());
        }
        PAdicDistribution::from_levels(self.p, levels)
    }
}

/// `k` residues prime to `p`, cycling through the units mod `p^3`.
pub fn sample_units(p: u64, k: usize) -> Vec<i64> {
    units(p, 3).into_iter().cycle().take(k).map(|x| x as i64).collect()
}

/// Ordinary roots `λ_i = p^{i-1} u_i` for `i = 1..size`, units `u_i` taken
/// from `units`.
pub fn ordinary_roots(p: u64, size: usize, units: &[i64]) -> Vec<Cyclotomic> {
    (0..size)
        .map(|i| {
            let u = units.get(i).copied().unwrap_or(1);
            assert!(u % p as i64 != 0, "{u} is not a unit at {p}");
            Cyclotomic::from_rational(BigRational::from_integer(BigInt::from(p).pow(i as u32) * BigInt::from(u)))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexCheck {
    pub n: usize,
    pub p: u64,
    pub counted: u64,
    pub expected: u64,
    pub holds: bool,
}

/// `(U_n : t_p U_n t_p^{-1})` by enumerating `U_n(Z/p^n)` and testing which
/// elements conjugate back into `U_n(Z_p)` under `t_p^{-1} · t_p`.
pub fn index_formula_check(n: usize, p: u64) -> Result<IndexCheck> {
    if n > 4 {
        return Err(Error::Precondition("enumeration is limited to n ≤ 4".into()));
    }
    let modulus = ipow(p, n.max(1) as u32);
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total = modulus.checked_pow(slots.len() as u32).ok_or_else(|| Error::Precondition("too many elements".into()))?;
    if total > 50_000_000 {
        return Err(Error::Precondition(format!("{total} elements is beyond enumeration")));
    }
    // t_p = diag(p^{n-1}, …, 1): (t^{-1} u t)_{ij} = p^{i-j}·… integral iff p^{j-i} | u_ij
    let mut inside = 0u64;
    for mut idx in 0..total {
        let mut ok = true;
        for &(i, j) in &slots {
            let u = idx % modulus;
            idx /= modulus;
            ok &= u.is_multiple_of(ipow(p, (j - i) as u32));
        }
        inside += u64::from(ok);
    }
    let counted = total / inside;
    let expected = ipow(p, ((n + 1) * n * n.saturating_sub(1) / 6) as u32);
    Ok(IndexCheck { n, p, counted, expected, holds: counted == expected && total % inside == 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Cyclotomic {
        Cyclotomic::from_rational(BigRational::new(BigInt::from(a), BigInt::from(b)))
    }

    #[test]
    fn haar_and_dirac_satisfy_the_relation() {
        for p in [2, 3, 5] {
            assert!(check_relation(&PAdicDistribution::haar(p, 3).unwrap()).unwrap().holds);
            assert!(check_relation(&PAdicDistribution::dirac(p, 3).unwrap()).unwrap().holds);
        }
    }

    #[test]
    fn perturbation_is_caught_with_witness() {
        let mu = PAdicDistribution::haar(3, 3).unwrap().perturbed(2, 4, &q(1, 7)).unwrap();
        let c = check_relation(&mu).unwrap();
        assert!(!c.holds);
        let w = c.witness.unwrap();
        assert!((w.m, w.x) == (1, 1) || (w.m, w.x) == (2, 4));
    }

    #[test]
    fn haar_kills_nontrivial_characters() {
        let mu = PAdicDistribution::haar(5, 2).unwrap();
        for chi in all_characters(5, 2) {
            let v = integrate_character(&mu, &chi).unwrap();
            assert_eq!(v.is_zero(), chi.m > 0, "{:?}", chi.describe());
        }
    }

    #[test]
    fn dirac_integrates_to_one() {
        let mu = PAdicDistribution::dirac(3, 3).unwrap();
        for chi in all_characters(3, 3) {
            assert!(integrate_character(&mu, &chi).unwrap().is_one());
        }
    }

    #[test]
    fn shallow_depth_is_rejected() {
        let mu = PAdicDistribution::haar(3, 1).unwrap();
        let chi = enumerate_chars(3, 2).remove(0);
        assert!(matches!(integrate_character(&mu, &chi), Err(Error::Precondition(_))));
    }

    #[test]
    fn fourier_round_trip() {
        for (p, depth) in [(3, 2), (5, 1), (2, 3)] {
            let chars = all_characters(p, depth);
            let targets: Vec<_> = chars
                .iter()
                .enumerate()
                .map(|(i, chi)| (chi.clone(), &q(i as i64 + 1, 3) + &Cyclotomic::root_of_unity(chi.order().max(1), 1)))
                .collect();
            let mu = fourier_inverse(p, depth, &targets).unwrap();
            assert!(check_relation(&mu).map(|c| c.holds).unwrap_or(true));
            for (chi, l) in &targets {
                assert_eq!(&integrate_character(&mu, chi).unwrap(), l);
            }
        }
    }

    #[test]
    fn fourier_rejects_wrong_counts() {
        let mut targets: Vec<_> = all_characters(3, 2).into_iter().map(|c| (c, Cyclotomic::one())).collect();
        targets.pop();
        assert!(fourier_inverse(3, 2, &targets).is_err());
        let dup = targets[0].clone();
        targets.push(dup);
        assert!(fourier_inverse(3, 2, &targets).is_err());
    }

    #[test]
    fn order_estimates() {
        assert_eq!(order_estimate(&PAdicDistribution::dirac(3, 4).unwrap()).order, Order::Bounded);
        assert_eq!(order_estimate(&PAdicDistribution::haar(3, 4).unwrap()).h, Ratio::from_integer(1));
        let g = PAdicDistribution::geometric(3, 4, &Cyclotomic::from_int(9)).unwrap();
        assert_eq!(order_estimate(&g).h, Ratio::from_integer(2));
    }

    #[test]
    fn repr_round_trip() {
        let mu = PAdicDistribution::haar(3, 2).unwrap().perturbed(1, 2, &Cyclotomic::root_of_unity(3, 1)).unwrap();
        let json = serde_json::to_string(&mu.to_repr()).unwrap();
        let back: DistributionRepr = serde_json::from_str(&json).unwrap();
        assert_eq!(PAdicDistribution::from_repr(&back).unwrap(), mu);
    }

    #[test]
    fn kappa_exponents() {
        assert_eq!(kappa_exponent(1), 0);
        assert_eq!(kappa_exponent(2), 1);
        assert_eq!(kappa_exponent(3), 5);
        assert_eq!(kappa_exponent(4), 14);
    }

    #[test]
    fn synthetic_oracle_is_a_distribution() {
        for n in 1..=3 {
            let p = 3;
            let oracle = SyntheticOracle {
                n,
                p,
                roots_pi: ordinary_roots(p, n + 1, &[1, 2, 4, 5]),
                roots_sigma: ordinary_roots(p, n, &[7, 1, 2]),
                depth: 3,
                seed: units(p, 3).into_iter().map(|x| (x, (x as i64 * 7) % 11 - 5)).collect(),
            };
            let (_, kl) = kappa_values(p, &oracle.roots_pi).unwrap();
            let (_, ka) = kappa_values(p, &oracle.roots_sigma).unwrap();
            assert_eq!(oracle.hecke_eigenvalue(), &kl * &ka);
            assert!(check_relation(&oracle.measure().unwrap()).unwrap().holds);
        }
    }

    #[test]
    fn index_formula() {
        for (n, p) in [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (2, 5)] {
            let c = index_formula_check(n, p).unwrap();
            assert!(c.holds, "{c:?}");
        }
    }
}
