//! Permutations and Weyl elements.

use std::fmt;

use num_traits::{One, Zero};

use super::matrix::GMatrix;
use crate::scalars::padic::Rat;

/// A permutation `σ` of `{0..n-1}` with permutation matrix `ω`,
/// `ω_{i,σ(i)} = 1`.  Then `ω b_k = b_{σ^{-1}(k)}` and conjugating a
/// diagonal matrix permutes its entries: `(ω a ω^{-1})_i = a_{σ(i)}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WeylElement {
    pub sigma: Vec<usize>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        Self { sigma: (0..n).collect() }
    }

    pub fn new(sigma: Vec<usize>) -> Self {
        let mut seen = vec![false; sigma.len()];
        for &s in &sigma {
            assert!(s < sigma.len() && !seen[s], "not a permutation: {sigma:?}");
            seen[s] = true;
        }
        Self { sigma }
    }

    /// The longest element, `σ(i) = n - 1 - i`.
    pub fn longest(n: usize) -> Self {
        Self { sigma: (0..n).rev().collect() }
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn matrix(&self, p: u64) -> GMatrix {
        GMatrix::from_fn(self.n(), self.n(), p, |i, j| {
            if self.sigma[i] == j {
                Rat::one()
            } else {
                Rat::zero()
            }
        })
    }

    /// Read `σ` back off a permutation matrix.
    pub fn from_matrix(m: &GMatrix) -> Option<Self> {
        let n = m.n();
        let mut sigma = Vec::with_capacity(n);
        for i in 0..n {
            let row = m.row(i);
            let ones: Vec<usize> = (0..n).filter(|&j| !row[j].is_zero()).collect();
            if ones.len() != 1 || !row[ones[0]].is_one() {
                return None;
            }
            sigma.push(ones[0]);
        }
        let mut seen = vec![false; n];
        for &s in &sigma {
            if seen[s] {
                return None;
            }
            seen[s] = true;
        }
        Some(Self { sigma })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &s) in self.sigma.iter().enumerate() {
            inv[s] = i;
        }
        Self { sigma: inv }
    }

    /// The element whose matrix is `ω_self · ω_other`, i.e. `σ_other ∘ σ_self`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { sigma: self.sigma.iter().map(|&i| other.sigma[i]).collect() }
    }

    pub fn sign(&self) -> i64 {
        let inv = self.inversions();
        if inv.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn inversions(&self) -> usize {
        let n = self.n();
        (0..n).map(|i| (i + 1..n).filter(|&j| self.sigma[i] > self.sigma[j]).count()).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &s)| i == s)
    }

    /// All of `W_n` in lexicographic order of `σ`.
    pub fn all(n: usize) -> Vec<Self> {
        permutations(n).into_iter().map(|sigma| Self { sigma }).collect()
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.sigma.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// `k`-element subsets of `{0..n-1}`, each sorted, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(subsets(5, 2).len(), 10);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn matrix_round_trip_and_homomorphism() {
        for n in 1..=5 {
            let all = WeylElement::all(n);
            for w in &all {
                assert_eq!(WeylElement::from_matrix(&w.matrix(2)).as_ref(), Some(w));
            }
            for a in all.iter().take(7) {
                for b in all.iter().rev().take(7) {
                    let prod = &a.matrix(2) * &b.matrix(2);
                    assert_eq!(WeylElement::from_matrix(&prod).unwrap(), a.compose(b));
                    // ω ↦ σ^{-1} is a homomorphism.
                    let lhs = a.compose(b).inverse().sigma;
                    let rhs: Vec<usize> = (0..n).map(|k| a.inverse().sigma[b.inverse().sigma[k]]).collect();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn diagonal_convention() {
        let w = WeylElement::new(vec![2, 0, 1]);
        let om = w.matrix(3);
        let d = GMatrix::diag(3, &[Rat::from_integer(10), Rat::from_integer(20), Rat::from_integer(30)]);
        let conj = &(&om * &d) * &om.inverse().unwrap();
        for i in 0..3 {
            assert_eq!(conj[(i, i)], d[(w.sigma[i], w.sigma[i])]);
        }
    }
}
