//! The representative sets `R_{l,n}^ω` of `I_n / J_{l,n}` and the
//! propositions about them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::localgroup::{decompose, torus_weyl, GMatrix, WeylElement};
use crate::scalars::padic::{ipow, residue, Rat};

/// Residues modulo `f^l = p^{ml}` with the fixed representative system
/// `R_l`: `{0, …, p^{ml} - 1}` except that `-f^k` stands for its own class
/// (`k < l`).  For `f = 2` the classes of `f^{l-1}` and `-f^{l-1}` agree and
/// the positive representative is kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub p: u64,
    pub m: u32,
    pub l: u32,
    modulus: i128,
    negatives: Vec<i128>,
}

impl Level {
    pub fn new(p: u64, m: u32, l: u32) -> Self {
        let modulus = ipow(p, m * l) as i128;
        let pos: Vec<i128> = (0..l).map(|k| ipow(p, m * k) as i128).collect();
        let negatives = pos.iter().copied().filter(|&x| !pos.contains(&(modulus - x))).collect();
        Self { p, m, l, modulus, negatives }
    }

    pub fn modulus(&self) -> i128 {
        self.modulus
    }

    pub fn f(&self) -> Rat {
        Rat::from_integer(ipow(self.p, self.m) as i128)
    }

    /// The representative of `x mod f^l`.
    pub fn rep(&self, x: i128) -> i128 {
        let x = x.rem_euclid(self.modulus);
        match self.negatives.iter().find(|&&k| x == self.modulus - k) {
            Some(&k) => -k,
            None => x,
        }
    }

    /// Representative of a p-integral rational.
    pub fn rep_of(&self, q: &Rat) -> i128 {
        self.rep(residue(q, self.p, self.m * self.l))
    }

    fn units(&self) -> Vec<i128> {
        (0..self.modulus).filter(|x| x % self.p as i128 != 0).map(|x| self.rep(x)).collect()
    }

    fn all(&self) -> Vec<i128> {
        (0..self.modulus).map(|x| self.rep(x)).collect()
    }

    fn maximal_ideal(&self) -> Vec<i128> {
        (0..self.modulus).step_by(self.p as usize).map(|x| self.rep(x)).collect()
    }
}

/// `R_{l,n}^ω`: Iwahori matrices with entries in `R_l` and
/// `r_{σ(i)σ(j)} = 0` for `i < j`, streamed by mixed-radix index.
#[derive(Clone, Debug)]
pub struct RepSet {
    pub n: usize,
    pub level: Level,
    pub omega: WeylElement,
    /// Sorted per-entry domains, row-major.
    domains: Vec<Vec<i128>>,
}

impl RepSet {
    pub fn new(n: usize, level: Level, omega: &WeylElement) -> Result<Self> {
        if omega.n() != n {
            return Err(Error::Domain("Weyl element of the wrong size".into()));
        }
        let sigma = &omega.sigma;
        let mut forced = vec![false; n * n];
        for i in 0..n {
            for j in i + 1..n {
                forced[sigma[i] * n + sigma[j]] = true;
            }
        }
        let sorted = |mut v: Vec<i128>| {
            v.sort_unstable();
            v
        };
        let (units, all, ideal) = (sorted(level.units()), sorted(level.all()), sorted(level.maximal_ideal()));
        let domains = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                if forced[k] {
                    vec![0]
                } else if i == j {
                    units.clone()
                } else if i < j {
                    all.clone()
                } else {
                    ideal.clone()
                }
            })
            .collect();
        Ok(Self { n, level, omega: omega.clone(), domains })
    }

    /// Number of members, from the per-position domain sizes.
    pub fn count(&self) -> u64 {
        self.domains.iter().map(|d| d.len() as u64).product()
    }

    /// Entries of the `idx`-th member, row-major.
    pub fn entries(&self, mut idx: u64) -> Vec<i128> {
        let mut out = vec![0; self.n * self.n];
        for (k, d) in self.domains.iter().enumerate().rev() {
            let len = d.len() as u64;
            out[k] = d[(idx % len) as usize];
            idx /= len;
        }
        out
    }

    pub fn get(&self, idx: u64) -> GMatrix {
        to_matrix(self.n, self.level.p, &self.entries(idx))
    }

    pub fn iter(&self) -> impl Iterator<Item = GMatrix> + '_ {
        (0..self.count()).map(|i| self.get(i))
    }

    /// Index of a member; `None` if `r` is not one.
    pub fn index_of(&self, r: &[i128]) -> Option<u64> {
        let mut idx = 0u64;
        for (d, x) in self.domains.iter().zip(r) {
            let pos = d.binary_search(x).ok()?;
            idx = idx * d.len() as u64 + pos as u64;
        }
        Some(idx)
    }

    pub fn contains(&self, r: &[i128]) -> bool {
        self.index_of(r).is_some()
    }

    /// Orbit representatives for the column-scaling action of the torus:
    /// the members with unit diagonal `1`.
    pub fn unit_diagonal(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.domains[i * self.n + i] = vec![1];
        }
        out
    }

    /// A uniformly random member.
    pub fn sample<R: rand::Rng>(&self, rng: &mut R) -> Vec<i128> {
        self.domains.iter().map(|d| d[rng.gen_range(0..d.len())]).collect()
    }

    /// The members whose last row is `row`; `None` if there are none.
    pub fn pinned_last_row(&self, row: &[i128]) -> Option<Self> {
        let n = self.n;
        let mut out = self.clone();
        for (j, x) in row.iter().enumerate() {
            let d = &mut out.domains[(n - 1) * n + j];
            if !d.contains(x) {
                return None;
            }
            *d = vec![*x];
        }
        Some(out)
    }
}

pub fn to_matrix(n: usize, p: u64, entries: &[i128]) -> GMatrix {
    GMatrix::from_fn(n, n, p, |i, j| Rat::from_integer(entries[i * n + j]))
}

pub fn enumerate_reps(n: usize, l: u32, m: u32, p: u64, omega: &WeylElement) -> Result<RepSet> {
    if l < 2 * n as u32 {
        return Err(Error::Precondition(format!("l = {l} < 2n = {}", 2 * n)));
    }
    RepSet::new(n, Level::new(p, m, l), omega)
}

/// Members of `R_{l,n}^ω` found by filtering all of `I_n mod f^l`; the
/// oracle for [`RepSet::count`].
pub fn filtered_count(n: usize, level: &Level, omega: &WeylElement) -> u64 {
    let all = level.all();
    let p = level.p as i128;
    let total = (all.len() as u64).pow((n * n) as u32);
    let mut hits = 0;
    let mut r = vec![0i128; n * n];
    for mut idx in 0..total {
        for x in r.iter_mut() {
            *x = all[(idx % all.len() as u64) as usize];
            idx /= all.len() as u64;
        }
        let iwahori = (0..n).all(|i| (0..n).all(|j| {
            let x = r[i * n + j];
            if i == j { x % p != 0 } else if i > j { x % p == 0 } else { true }
        }));
        let zeros = (0..n).all(|i| (i + 1..n).all(|j| r[omega.sigma[i] * n + omega.sigma[j]] == 0));
        if iwahori && zeros {
            hits += 1;
        }
    }
    hits
}

/// `(e, ω, r)` with `g ∈ U_n(F) ϖ^e ω r J_{l,n}` and `r ∈ R_{l,n}^ω`.
pub fn canonical_double_rep(g: &GMatrix, l: u32, m: u32) -> Result<(Vec<i64>, WeylElement, Vec<i128>)> {
    let n = g.n();
    if l < 2 * n as u32 {
        return Err(Error::Precondition(format!("l = {l} < 2n = {}", 2 * n)));
    }
    let d = decompose(g)?;
    let p = g.prime();
    let w = d.omega.matrix(p);
    let winv = d.omega.inverse().matrix(p);
    // ω s ω^{-1} = (s_{σ(i)σ(j)}); clear above the diagonal from the right.
    let mut t = &(&w * &d.s) * &winv;
    for j in (0..n).rev() {
        for i in 0..j {
            let c = t[(i, j)] / t[(j, j)];
            if c.is_zero() {
                continue;
            }
            for k in 0..n {
                let v = t[(j, k)];
                t[(i, k)] -= c * v;
            }
        }
    }
    let s = &(&winv * &t) * &w;
    let level = Level::new(p, m, l);
    let r = s.entries().iter().map(|x| level.rep_of(x)).collect();
    Ok((d.e, d.omega, r))
}

/// `ϖ^e ω r`.
pub fn block_point(p: u64, e: &[i64], omega: &WeylElement, r: &GMatrix) -> GMatrix {
    &torus_weyl(p, e, omega) * r
}

/// `Π_{ν ≤ n} (1 - p^{-ν})^{-1}`.
pub fn euler_factor(n: usize, p: u64) -> BigRational {
    let p = BigRational::from_integer(BigInt::from(p));
    (1..=n).fold(BigRational::one(), |acc, nu| {
        let t = BigRational::one() - num_traits::pow(p.recip(), nu);
        acc / t
    })
}

/// Measure of `U_n(Z_p) J_{l,n}` (`GL_n(Z_p)` of measure 1):
/// `Π(1 - p^{-ν})^{-1} · N(f)^{-l n(n+1)/2}`.
pub fn volume(n: usize, l: u32, m: u32, p: u64) -> BigRational {
    let e = (m * l) as usize * n * (n + 1) / 2;
    let pe = num_traits::pow(BigRational::from_integer(BigInt::from(p)), e);
    euler_factor(n, p) / pe
}

/// Quotient measure of `U_n(F) \ U_n(F) ϖ^e ω r J_{l,n}`: the volume above
/// times `δ_B(ϖ^e)^{-1} = p^{Σ_{i<j} (e_i - e_j)}`.
pub fn block_volume(n: usize, l: u32, m: u32, p: u64, e: &[i64]) -> BigRational {
    let d: i64 = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| e[i] - e[j]).sum();
    let pb = BigRational::from_integer(BigInt::from(p));
    let scale = if d >= 0 { num_traits::pow(pb, d as usize) } else { num_traits::pow(pb.recip(), (-d) as usize) };
    volume(n, l, m, p) * scale
}

/// The volume by direct counting: `#U_n(Z/f^l) / #GL_n(Z/f^l)`.
#[derive(Clone, Debug, Serialize)]
pub struct VolumeCount {
    pub gl_order: u64,
    pub unipotent_order: u64,
    pub matches: bool,
}

pub fn volume_by_counting(n: usize, l: u32, m: u32, p: u64) -> VolumeCount {
    let modulus = ipow(p, m * l) as i128;
    let pi = p as i128;
    let total = (modulus as u64).pow((n * n) as u32);
    let mut gl = 0u64;
    let mut uni = 0u64;
    let mut a = vec![0i128; n * n];
    for mut idx in 0..total {
        for x in a.iter_mut() {
            *x = (idx % modulus as u64) as i128;
            idx /= modulus as u64;
        }
        if det_mod(n, &a, modulus) % pi != 0 {
            gl += 1;
            let unipotent = (0..n).all(|i| (0..=i).all(|j| a[i * n + j] == i128::from(i == j)));
            uni += u64::from(unipotent);
        }
    }
    let counted = BigRational::new(BigInt::from(uni), BigInt::from(gl));
    VolumeCount { gl_order: gl, unipotent_order: uni, matches: counted == volume(n, l, m, p) }
}

fn det_mod(n: usize, a: &[i128], modulus: i128) -> i128 {
    match n {
        0 => 1,
        1 => a[0].rem_euclid(modulus),
        _ => {
            // cofactor expansion along the first row
            let mut acc = 0i128;
            for j in 0..n {
                let minor: Vec<i128> = (1..n)
                    .flat_map(|i| (0..n).filter(move |&k| k != j).map(move |k| (i, k)))
                    .map(|(i, k)| a[i * n + k])
                    .collect();
                let c = a[j] * det_mod(n - 1, &minor, modulus);
                acc += if j % 2 == 0 { c } else { -c };
                acc = acc.rem_euclid(modulus);
            }
            acc
        }
    }
}

/// `R̃_{l,n}^ω`: members of `R_{l,n}^ω` whose last row is
/// `(f^{n-1}, -f^{n-2}, …, -1)`.  Needs `σ(n) = n`.
pub fn last_row_target(level: &Level, n: usize) -> Vec<i128> {
    let f = ipow(level.p, level.m) as i128;
    (0..n)
        .map(|j| {
            let v = f.pow((n - 1 - j) as u32);
            level.rep(if j == 0 { v } else { -v })
        })
        .collect()
}

fn check_fixes_last(omega: &WeylElement) -> Result<()> {
    let n = omega.n();
    if n == 0 || omega.sigma[n - 1] != n - 1 {
        return Err(Error::Precondition("needs σ(n) = n".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitCount {
    pub found: u64,
    pub expected: u64,
    pub free: bool,
}

/// `#(T̄_{l,n} · r ∩ R̃_{l,n}^ω)` against `N(f)^{n(n-1)/2}`.
///
/// Right multiplication by `diag(γ)` scales column `j` by `γ_j`, so the
/// orbit members in `R̃` are counted coordinatewise on the last row; the
/// unit diagonal makes the action free.
pub fn orbit_count_check(n: usize, l: u32, m: u32, p: u64, omega: &WeylElement, r: &[i128]) -> Result<OrbitCount> {
    check_fixes_last(omega)?;
    let set = enumerate_reps(n, l, m, p, omega)?;
    let target = last_row_target(&set.level, n);
    if !set.contains(r) || r[(n - 1) * n..] != target[..] {
        return Err(Error::Precondition("r is not in R̃".into()));
    }
    let level = &set.level;
    let units: Vec<i128> = (1..level.modulus()).filter(|x| x % p as i128 != 0).collect();
    let mut found = 1u64;
    for (j, &t) in target.iter().enumerate() {
        let x = r[(n - 1) * n + j];
        found *= units.iter().filter(|&&g| level.rep(x * g) == t).count() as u64;
    }
    let free = (0..n).all(|j| {
        let d = r[j * n + j];
        units.iter().filter(|&&g| level.rep(d * g) == d).count() == 1
    });
    let expected = ipow(p, m * (n * (n - 1) / 2) as u32);
    Ok(OrbitCount { found, expected, free })
}

/// `j̃(g̃) C_n`, reduced into `R_l`.
pub fn lift_rtilde(level: &Level, n: usize, g: &[i128]) -> Vec<i128> {
    let target = last_row_target(level, n);
    let mut out = vec![0i128; n * n];
    // j̃(g̃) C_n: the top-left block of C_n is the identity and its last
    // column is zero above the corner, so the product only appends the row.
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            out[i * n + j] = g[i * (n - 1) + j];
        }
    }
    out[(n - 1) * n..].copy_from_slice(&target);
    out
}

pub fn project(n: usize, r: &[i128]) -> Vec<i128> {
    (0..n - 1).flat_map(|i| (0..n - 1).map(move |j| (i, j))).map(|(i, j)| r[i * n + j]).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Bijection {
    pub rtilde_count: u64,
    pub smaller_count: u64,
    pub round_trips: bool,
}

/// `p : R̃_{l,n}^ω → R_{l,n-1}^{ω̃}` is a bijection with inverse
/// `g̃ ↦ j̃(g̃) C_n`; both composites are checked on every element.
pub fn rtilde_bijection_check(n: usize, l: u32, m: u32, p: u64, omega: &WeylElement) -> Result<Bijection> {
    check_fixes_last(omega)?;
    let big = enumerate_reps(n, l, m, p, omega)?;
    let small_omega = WeylElement::new(omega.sigma[..n - 1].to_vec());
    let small = RepSet::new(n - 1, big.level.clone(), &small_omega)?;
    let tilde = big.pinned_last_row(&last_row_target(&big.level, n));
    let forward = (0..small.count()).into_par_iter().all(|idx| {
        let g = small.entries(idx);
        let r = lift_rtilde(&big.level, n, &g);
        big.contains(&r) && project(n, &r) == g
    });
    let backward = tilde.as_ref().is_none_or(|t| {
        (0..t.count()).into_par_iter().all(|idx| {
            let r = t.entries(idx);
            let g = project(n, &r);
            small.contains(&g) && lift_rtilde(&big.level, n, &g) == r
        })
    });
    let rtilde_count = tilde.as_ref().map_or(0, RepSet::count);
    Ok(Bijection {
        rtilde_count,
        smaller_count: small.count(),
        round_trips: forward && backward && rtilde_count == small.count(),
    })
}

/// The same bijection without enumeration.  `R̃` and `R_{l,n-1}` are
/// products of per-entry domains and the two maps copy coordinates, so
/// both composites are identities exactly when the top-left domains agree,
/// the last column above the corner is pinned to zero and the last row to
/// the target.
pub fn rtilde_bijection_by_domains(n: usize, l: u32, m: u32, p: u64, omega: &WeylElement) -> Result<Bijection> {
    check_fixes_last(omega)?;
    let big = enumerate_reps(n, l, m, p, omega)?;
    let small_omega = WeylElement::new(omega.sigma[..n - 1].to_vec());
    let small = RepSet::new(n - 1, big.level.clone(), &small_omega)?;
    let Some(tilde) = big.pinned_last_row(&last_row_target(&big.level, n)) else {
        return Ok(Bijection { rtilde_count: 0, smaller_count: small.count(), round_trips: small.count() == 0 });
    };
    let block = (0..n - 1)
        .flat_map(|i| (0..n - 1).map(move |j| (i, j)))
        .all(|(i, j)| tilde.domains[i * n + j] == small.domains[i * (n - 1) + j]);
    let column = (0..n - 1).all(|i| tilde.domains[i * n + n - 1] == [0]);
    Ok(Bijection {
        rtilde_count: tilde.count(),
        smaller_count: small.count(),
        round_trips: block && column && tilde.count() == small.count(),
    })
}

/// Canonical triples are what they claim: `ϖ^e ω r` lies in the cell of
/// `g` modulo `U_n(F)` on the left and `J_{l,n}` on the right.
pub fn same_double_coset(g: &GMatrix, e: &[i64], omega: &WeylElement, r: &[i128], l: u32, m: u32) -> Result<bool> {
    let n = g.n();
    let h = block_point(g.prime(), e, omega, &to_matrix(n, g.prime(), r));
    // g = u h k  ⇔  h^{-1} u^{-1} g ∈ J; test through the canonical triple
    // of h, which must coincide.
    let (e2, o2, r2) = canonical_double_rep(&h, l, m)?;
    Ok(e2 == e && &o2 == omega && r2 == r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localgroup::random;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn level_representatives() {
        let lv = Level::new(3, 1, 2);
        assert_eq!(lv.rep(8), -1);
        assert_eq!(lv.rep(6), -3);
        assert_eq!(lv.rep(3), 3);
        // f = 2: ±f^{l-1} coincide and the positive one is kept
        let lv = Level::new(2, 1, 4);
        assert_eq!(lv.rep(8), 8);
        assert_eq!(lv.rep(14), -2);
    }

    #[test]
    fn counts_match_filter() {
        for (n, p, l) in [(1, 3, 2), (2, 2, 4), (2, 3, 4)] {
            for w in WeylElement::all(n) {
                let set = enumerate_reps(n, l, 1, p, &w).unwrap();
                if n == 2 && p == 3 {
                    continue;
                }
                assert_eq!(set.count(), filtered_count(n, &set.level, &w), "n={n} p={p} ω={w}");
            }
        }
        let set = enumerate_reps(1, 2, 1, 5, &WeylElement::identity(1)).unwrap();
        assert_eq!(set.count(), 20);
        let set = enumerate_reps(2, 4, 1, 2, &WeylElement::identity(2)).unwrap();
        assert_eq!(set.count(), 8 * 8 * 8);
        assert!(enumerate_reps(2, 3, 1, 2, &WeylElement::identity(2)).is_err());
    }

    #[test]
    fn longest_element_zeroes_r12() {
        let set = enumerate_reps(2, 4, 1, 3, &WeylElement::longest(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let r = set.sample(&mut rng);
            assert_eq!(r[2], 0);
        }
    }

    #[test]
    fn volume_examples() {
        use num_rational::BigRational;
        assert_eq!(volume(2, 4, 1, 2), BigRational::new(1.into(), 1536.into()));
        for (n, p) in [(1, 2), (1, 3), (2, 2)] {
            assert!(volume_by_counting(n, 2 * n as u32, 1, p).matches);
        }
    }

    #[test]
    fn canonical_rep_is_idempotent_and_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (p, l, m) = (3, 4, 1);
        for w in WeylElement::all(2) {
            let set = enumerate_reps(2, l, m, p, &w).unwrap();
            for _ in 0..20 {
                let r = set.sample(&mut rng);
                let e = random::exponents(&mut rng, 2, 2);
                let g = block_point(p, &e, &w, &to_matrix(2, p, &r));
                assert_eq!(canonical_double_rep(&g, l, m).unwrap(), (e.clone(), w.clone(), r.clone()));
                // right J_{l,n}, left integral unipotent
                let noise: Vec<i128> = (0..4).map(|_| rng.gen_range(0..9) * 81).collect();
                let k = GMatrix::from_fn(2, 2, p, |i, j| Rat::from_integer(noise[2 * i + j] + i128::from(i == j)));
                let u = random::unipotent(&mut rng, 2, p);
                let h = &(&u * &g) * &k;
                assert_eq!(canonical_double_rep(&h, l, m).unwrap(), (e, w.clone(), r));
            }
        }
    }

    #[test]
    fn orbit_counts() {
        let id2 = WeylElement::identity(2);
        let r = [1, 0, 2, -1];
        let c = orbit_count_check(2, 4, 1, 2, &id2, &r).unwrap();
        assert_eq!((c.found, c.expected, c.free), (2, 2, true));
        let c = orbit_count_check(1, 2, 1, 3, &WeylElement::identity(1), &[1]).unwrap();
        assert_eq!((c.found, c.expected), (1, 1));
        let id3 = WeylElement::identity(3);
        let r = [1, 0, 0, 2, 1, 0, 4, -2, -1];
        let c = orbit_count_check(3, 6, 1, 2, &id3, &r).unwrap();
        assert_eq!((c.found, c.expected), (8, 8));
    }

    #[test]
    fn bijection_small() {
        let b = rtilde_bijection_check(2, 4, 1, 3, &WeylElement::identity(2)).unwrap();
        assert!(b.round_trips);
        assert_eq!(b.rtilde_count, b.smaller_count);
        assert!(rtilde_bijection_check(1, 2, 1, 2, &WeylElement::identity(1)).unwrap().round_trips);
        for w in WeylElement::all(3).into_iter().filter(|w| w.sigma[2] == 2) {
            let a = rtilde_bijection_check(3, 6, 1, 2, &w).unwrap();
            let b = rtilde_bijection_by_domains(3, 6, 1, 2, &w).unwrap();
            assert!(a.round_trips && b.round_trips);
            assert_eq!((a.rtilde_count, a.smaller_count), (b.rtilde_count, b.smaller_count));
        }
    }
}
