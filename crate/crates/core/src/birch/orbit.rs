//! Torus-orbit partial sums `Z(r)`.
//!
//! The compact torus acts on `R_{l,n}^ω` by scaling columns.  Along an
//! orbit only `ψ(λ_n(·))` and `χ(det ·)` move, so the orbit sum factors
//! into the cell value at `r` times a product of one-variable character
//! sums `S(t) = Σ_{γ ∈ (Z/f^l)^×} χ(γ) ψ(t γ)`.  This keeps `n = 3` exact
//! at a size where the full enumeration is out of reach.

use std::collections::HashMap;
use std::sync::Mutex;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::pairing::{PairKey, PairingValue};
use super::reps::{enumerate_reps, to_matrix, Level, RepSet};
use super::sums::{embed_to, l_min, lemma_closed_form};
use crate::characters::{psi_exp, root_value, MultChar};
use crate::error::{Error, Result};
use crate::localgroup::{special_matrix, torus_weyl, Kind, WeylElement};
use crate::scalars::padic::{fractional_part, ipow, p_pow, Rat};
use crate::scalars::Cyclotomic;
use crate::whittaker::{formal_eval_exp, supported, WhittakerKey};

/// Cached `S(t)`, keyed by the class of `t` in `Q_p / Z_p`.
pub struct UnitSums {
    chi: MultChar,
    level: Level,
    cache: Mutex<HashMap<(i128, u32), Cyclotomic>>,
}

impl UnitSums {
    pub fn new(chi: &MultChar, level: &Level) -> Self {
        Self { chi: chi.clone(), level: level.clone(), cache: Mutex::new(HashMap::new()) }
    }

    /// `S(t)`; needs `t ∈ f^{-l} Z_p` so that the sum is well defined.
    pub fn get(&self, t: &Rat) -> Result<Cyclotomic> {
        let (a, j) = fractional_part(t, self.level.p);
        if j > self.level.m * self.level.l {
            return Err(Error::Precondition(format!("S(t) undefined for t = {t} at this level")));
        }
        if let Some(v) = self.cache.lock().unwrap().get(&(a, j)) {
            return Ok(v.clone());
        }
        let p = self.level.p;
        let modulus = self.level.modulus();
        let mut counts: HashMap<_, i64> = HashMap::new();
        for g in (1..modulus).filter(|g| g % p as i128 != 0) {
            let e = self.chi.unit_exp(g as u64).expect("unit") + psi_exp(&(t * Rat::from_integer(g)), p);
            *counts.entry(crate::characters::norm_exp(e)).or_default() += 1;
        }
        let v = counts
            .into_iter()
            .fold(Cyclotomic::zero(), |acc, (e, c)| &acc + &root_value(e).scale(&crate::scalars::big(c)));
        self.cache.lock().unwrap().insert((a, j), v.clone());
        Ok(v)
    }
}

/// Everything `Z(r)` needs for one block `(e, ω)`.
pub struct OrbitBlock {
    pub n: usize,
    pub e: Vec<i64>,
    pub omega: WeylElement,
    pub set: RepSet,
    chi: MultChar,
    sums: UnitSums,
}

impl OrbitBlock {
    pub fn new(n: usize, m: u32, l: u32, e: &[i64], omega: &WeylElement, chi: &MultChar) -> Result<Self> {
        if l < l_min(n, m, e) {
            return Err(Error::Precondition(format!("l = {l} below the admissible bound for e = {e:?}")));
        }
        if chi.m != m {
            return Err(Error::Precondition("χ must have conductor p^m".into()));
        }
        let set = enumerate_reps(n, l, m, chi.p, omega)?;
        let sums = UnitSums::new(chi, &set.level);
        Ok(Self { n, e: e.to_vec(), omega: omega.clone(), set, chi: chi.clone(), sums })
    }

    /// `r · diag(γ)`, reduced into `R_l`.
    pub fn act(&self, r: &[i128], gamma: &[i128]) -> Vec<i128> {
        let n = self.n;
        (0..n * n).map(|k| self.set.level.rep(r[k] * gamma[k % n])).collect()
    }

    /// The orbit sum `Z(r)`.
    pub fn z_value(&self, r: &[i128]) -> Result<PairingValue> {
        let (n, p) = (self.n, self.chi.p);
        if !supported(&self.e, &self.omega) {
            return Ok(PairingValue::zero());
        }
        let f = self.set.level.f();
        let row = self.omega.sigma[n - 1];
        let scale = p_pow(p, self.e[n - 1]);
        let mut product = Cyclotomic::one();
        for nu in 0..n {
            let t = scale * f.pow(nu as i32 - n as i32) * Rat::from_integer(r[row * n + nu]);
            product = &product * &self.sums.get(&t)?;
            if product.is_zero() {
                return Ok(PairingValue::zero());
            }
        }
        let base = torus_weyl(p, &self.e, &self.omega);
        let g = &base * &to_matrix(n, p, r);
        let dw = &special_matrix(Kind::D, n, f, p)? * &special_matrix(Kind::W, n, f, p)?;
        let (w_exp, w_key) = formal_eval_exp(&embed_to(&(&g * &dw), n), 1)?;
        let Some(w_exp) = w_exp else {
            return Ok(PairingValue::zero());
        };
        let x: i64 = self.e.iter().sum();
        let pm = ipow(p, self.chi.m) as i128;
        let unit = (0..n).fold(self.omega.sign() as i128, |u, i| (u * r[i * n + i]).rem_euclid(pm));
        let phase = w_exp + self.chi.unit_exp(unit as u64).expect("unit determinant");
        let c = &(&root_value(phase) * &product) * &self.chi.value_at_p.pow(x)?;
        let mut out = PairingValue::zero();
        out.add_term(PairKey { w: w_key, v: WhittakerKey::new(self.e.clone(), &self.omega), x }, c);
        Ok(out)
    }

    fn random_units<R: Rng>(&self, rng: &mut R) -> Vec<i128> {
        let (modulus, p) = (self.set.level.modulus(), self.set.level.p as i128);
        (0..self.n)
            .map(|_| loop {
                let g = rng.gen_range(1..modulus);
                if g % p != 0 {
                    break g;
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstancyReport {
    pub samples: usize,
    pub nonzero_samples: usize,
    /// `Z(r) = Z(r·γ)` on every sample.
    pub constant: bool,
    /// `w(ϖ^e ω r D_n w_n)` unchanged along the orbit on every sample.
    pub cell_invariant: bool,
}

/// Samples `r` (half of them with a last row in the nonvanishing shape)
/// and `γ`, and compares `Z` and the `w`-cell at `r` and `r·γ`.
pub fn constancy_probe<R: Rng>(rng: &mut R, block: &OrbitBlock, samples: usize) -> Result<ConstancyReport> {
    let n = block.n;
    let p = block.chi.p;
    let f = block.set.level.f();
    let dw = &special_matrix(Kind::D, n, f, p)? * &special_matrix(Kind::W, n, f, p)?;
    let base = torus_weyl(p, &block.e, &block.omega);
    let target = super::reps::last_row_target(&block.set.level, n);
    let (mut constant, mut cell_invariant, mut nonzero) = (true, true, 0);
    for k in 0..samples {
        let mut r = block.set.sample(rng);
        if k % 2 == 0 && block.omega.sigma[n - 1] == n - 1 {
            let u = block.random_units(rng);
            for j in 0..n {
                r[(n - 1) * n + j] = block.set.level.rep(target[j] * u[j]);
            }
        }
        let gamma = block.random_units(rng);
        let s = block.act(&r, &gamma);
        let z = block.z_value(&r)?;
        nonzero += usize::from(!z.is_zero());
        constant &= z == block.z_value(&s)?;
        let cell = |x: &[i128]| formal_eval_exp(&(&(&base * &to_matrix(n, p, x)) * &dw), 1);
        cell_invariant &= cell(&r)? == cell(&s)?;
    }
    Ok(ConstancyReport { samples, nonzero_samples: nonzero, constant, cell_invariant })
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub samples: usize,
    pub all_zero: bool,
}

/// Blocks with `e_n ≠ (n - σ(n))·m`: `Z(r) = 0` on sampled orbits.
pub fn vanishing_e_n<R: Rng>(rng: &mut R, n: usize, m: u32, l: u32, chi: &MultChar, samples: usize) -> Result<VanishingReport> {
    let mut all_zero = true;
    let mut done = 0;
    let perms = WeylElement::all(n);
    while done < samples {
        let omega = perms[rng.gen_range(0..perms.len())].clone();
        let mut e: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let bad = (n - 1 - omega.sigma[n - 1]) as i64 * m as i64;
        if e[n - 1] == bad {
            e[n - 1] += if rng.gen_bool(0.5) { 1 } else { -1 };
        }
        let block = OrbitBlock::new(n, m, l.max(l_min(n, m, &e)), &e, &omega, chi)?;
        let r = block.set.sample(rng);
        all_zero &= block.z_value(&r)?.is_zero();
        done += 1;
    }
    Ok(VanishingReport { samples, all_zero })
}

/// Blocks with `σ(n) = n`, `e_n = 0` and some `|r_{nν}| ≠ |f^{n-ν}|`:
/// `Z(r) = 0` on sampled orbits.
pub fn vanishing_last_row<R: Rng>(rng: &mut R, n: usize, m: u32, l: u32, chi: &MultChar, samples: usize) -> Result<VanishingReport> {
    let fixing: Vec<WeylElement> = WeylElement::all(n).into_iter().filter(|w| w.sigma[n - 1] == n - 1).collect();
    let mut all_zero = true;
    for _ in 0..samples {
        let omega = fixing[rng.gen_range(0..fixing.len())].clone();
        let mut e: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        e[n - 1] = 0;
        let block = OrbitBlock::new(n, m, l.max(l_min(n, m, &e)), &e, &omega, chi)?;
        let mut r = block.set.sample(rng);
        let target = super::reps::last_row_target(&block.set.level, n);
        let nu = rng.gen_range(0..n - 1);
        let u = block.random_units(rng);
        for j in 0..n {
            r[(n - 1) * n + j] = block.set.level.rep(target[j] * u[j]);
        }
        // move entry ν off the valuation n - ν (keeping it in pZ_p)
        let p = chi.p as i128;
        let f = ipow(chi.p, m) as i128;
        let exact = f.pow((n - 1 - nu) as u32);
        let shifted = if rng.gen_bool(0.5) || (exact / p) % p != 0 { exact * p } else { exact / p };
        r[(n - 1) * n + nu] = block.set.level.rep(shifted * u[nu]);
        all_zero &= block.z_value(&r)?.is_zero();
    }
    Ok(VanishingReport { samples, all_zero })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitSumReport {
    pub n: usize,
    pub p: u64,
    pub m: u32,
    pub l: u32,
    pub orbits: u64,
    pub nonzero_orbits: u64,
    pub matches_closed_form: bool,
}

/// `Σ_{g ∈ R_{l,n}^{id}}` of the integrand, as a sum of `Z(r)` over orbit
/// representatives (unit diagonal `1`), against the closed form.
pub fn orbit_sum(n: usize, m: u32, l: u32, chi: &MultChar) -> Result<(OrbitSumReport, PairingValue)> {
    let e = vec![0; n];
    let block = OrbitBlock::new(n, m, l, &e, &WeylElement::identity(n), chi)?;
    let reps = block.set.unit_diagonal();
    let (total, nonzero) = (0..reps.count())
        .into_par_iter()
        .map(|i| block.z_value(&reps.entries(i)).map(|z| (u64::from(!z.is_zero()), z)))
        .try_fold(
            || (PairingValue::zero(), 0u64),
            |(acc, k), z| z.map(|(nz, z)| (acc.add(&z), k + nz)),
        )
        .try_reduce(|| (PairingValue::zero(), 0), |a, b| Ok((a.0.add(&b.0), a.1 + b.1)))?;
    let expected = lemma_closed_form(n, m, l, chi)?;
    let report = OrbitSumReport {
        n,
        p: chi.p,
        m,
        l,
        orbits: reps.count(),
        nonzero_orbits: nonzero,
        matches_closed_form: total == expected,
    };
    Ok((report, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_chars;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_sum_is_gauss_sum_at_conductor() {
        let chi = &enumerate_chars(5, 1)[0];
        let level = Level::new(5, 1, 2);
        let s = UnitSums::new(chi, &level);
        // t = 1/f: each class mod f is hit p^{l-1} times
        let g = crate::characters::gauss_sum(chi).unwrap();
        assert_eq!(s.get(&Rat::new(1, 5)).unwrap(), g.scale(&crate::scalars::big(5)));
        assert!(s.get(&Rat::new(1, 25)).unwrap().is_zero());
        assert!(s.get(&Rat::from_integer(1)).unwrap().is_zero());
    }

    #[test]
    fn n2_orbit_sum_matches_brute_force() {
        let chi = &enumerate_chars(3, 1)[0];
        let (rep, total) = orbit_sum(2, 1, 4, chi).unwrap();
        assert!(rep.matches_closed_form);
        let brute = crate::birch::block_sum(2, 1, 4, &[0, 0], &WeylElement::identity(2), chi).unwrap();
        assert_eq!(total, brute);
    }

    #[test]
    fn n2_constancy_and_vanishing() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let chi = &enumerate_chars(3, 1)[0];
        for w in WeylElement::all(2) {
            let block = OrbitBlock::new(2, 1, 4, &[0, 0], &w, chi).unwrap();
            let c = constancy_probe(&mut rng, &block, 20).unwrap();
            assert!(c.constant && c.cell_invariant);
        }
        assert!(vanishing_e_n(&mut rng, 2, 1, 4, chi, 20).unwrap().all_zero);
        assert!(vanishing_last_row(&mut rng, 2, 1, 4, chi, 20).unwrap().all_zero);
    }
}
