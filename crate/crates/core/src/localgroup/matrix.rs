//! Dense matrices over `Q_p` with exact rational entries.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::padic::{is_integral, val, Rat};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GMatrix {
    rows: usize,
    cols: usize,
    p: u64,
    a: Vec<Rat>,
}

impl GMatrix {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        Self { rows, cols, p, a: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        Self::from_fn(n, n, p, |i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, p: u64, f: impl Fn(usize, usize) -> Rat) -> Self {
        let mut a = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                a.push(f(i, j));
            }
        }
        Self { rows, cols, p, a }
    }

    pub fn from_rows(p: u64, rows: &[Vec<Rat>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, p, a: rows.concat() }
    }

    pub fn from_ints(p: u64, rows: &[&[i128]]) -> Self {
        let v: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|&x| Rat::from_integer(x)).collect()).collect();
        Self::from_rows(p, &v)
    }

    pub fn diag(p: u64, d: &[Rat]) -> Self {
        Self::from_fn(d.len(), d.len(), p, |i, j| if i == j { d[i] } else { Rat::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Size of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &[Rat] {
        &self.a
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.p, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: Rat) -> Self {
        Self { a: self.a.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self { a: self.a.iter().zip(&o.a).map(|(x, y)| x - y).collect(), ..self.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self { a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(-Rat::one())
    }

    /// `diag(g, 1)`.
    pub fn embed(&self) -> Self {
        let n = self.n();
        Self::from_fn(n + 1, n + 1, self.p, |i, j| {
            if i < n && j < n {
                self[(i, j)]
            } else if i == j {
                Rat::one()
            } else {
                Rat::zero()
            }
        })
    }

    /// Upper-left `k × k` block.
    pub fn top_left(&self, k: usize) -> Self {
        Self::from_fn(k, k, self.p, |i, j| self[(i, j)])
    }

    pub fn det(&self) -> Rat {
        let n = self.n();
        let mut m = self.a.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| !m[r * n + c].is_zero()) else {
                return Rat::zero();
            };
            if r != c {
                for j in 0..n {
                    m.swap(r * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m[c * n + c];
            det *= piv;
            for r in c + 1..n {
                let f = m[r * n + c] / piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let s = f * m[c * n + j];
                    m[r * n + j] -= s;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n();
        let mut m = self.a.clone();
        let mut inv = Self::identity(n, self.p).a;
        for c in 0..n {
            let r = (c..n).find(|&r| !m[r * n + c].is_zero()).ok_or(Error::NotInvertible)?;
            if r != c {
                for j in 0..n {
                    m.swap(r * n + j, c * n + j);
                    inv.swap(r * n + j, c * n + j);
                }
            }
            let piv = m[c * n + c].recip();
            for j in 0..n {
                m[c * n + j] *= piv;
                inv[c * n + j] *= piv;
            }
            for r in 0..n {
                let f = m[r * n + c];
                if r == c || f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let (s, t) = (f * m[c * n + j], f * inv[c * n + j]);
                    m[r * n + j] -= s;
                    inv[r * n + j] -= t;
                }
            }
        }
        Ok(Self { rows: n, cols: n, p: self.p, a: inv })
    }

    /// Smallest valuation among the entries; `None` for the zero matrix.
    pub fn min_valuation(&self) -> Option<i64> {
        self.a.iter().filter_map(|x| val(x, self.p)).min()
    }

    pub fn is_integral(&self) -> bool {
        self.a.iter().all(|x| is_integral(x, self.p))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows, self.p)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)].is_zero()))
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }
}

impl Index<(usize, usize)> for GMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.a[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for GMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.a[i * self.cols + j]
    }
}

impl Mul for &GMatrix {
    type Output = GMatrix;
    fn mul(self, o: &GMatrix) -> GMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = GMatrix::zeros(self.rows, o.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self[(i, k)];
                if x.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let y = o[(k, j)];
                    if !y.is_zero() {
                        out[(i, j)] += x * y;
                    }
                }
            }
        }
        out
    }
}

impl Mul for GMatrix {
    type Output = GMatrix;
    fn mul(self, o: GMatrix) -> GMatrix {
        &self * &o
    }
}

impl fmt::Display for GMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        let w = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>w$}", cells[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Subgroups with an exact membership test.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Subgroup {
    GlnZp,
    Iwahori,
    /// Upper unipotent `U_n(F)`.
    Unipotent,
    /// Upper triangular `B_n(F)`.
    Borel,
    /// `B_n(Z_p)`, upper triangular with unit diagonal valuations.
    BorelIntegral,
    /// Kernel of reduction `GL_n(Z_p) → GL_n(Z / p^{ml})`.
    CongruenceKernel { l: u32, m: u32 },
}

pub fn membership(g: &GMatrix, h: Subgroup) -> bool {
    if !g.is_square() {
        return false;
    }
    let p = g.p;
    let n = g.n();
    let gl = || g.is_integral() && val(&g.det(), p) == Some(0);
    match h {
        Subgroup::GlnZp => gl(),
        Subgroup::Iwahori => {
            gl() && (0..n).all(|i| (0..i).all(|j| val(&g[(i, j)], p).is_none_or(|v| v >= 1)))
        }
        Subgroup::Unipotent => g.is_upper_triangular() && (0..n).all(|i| g[(i, i)].is_one()),
        Subgroup::Borel => g.is_upper_triangular() && !g.det().is_zero(),
        Subgroup::BorelIntegral => {
            g.is_upper_triangular() && g.is_integral() && (0..n).all(|i| val(&g[(i, i)], p) == Some(0))
        }
        Subgroup::CongruenceKernel { l, m } => {
            let k = (l * m) as i64;
            g.sub(&GMatrix::identity(n, p))
                .entries()
                .iter()
                .all(|x| val(x, p).is_none_or(|v| v >= k))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let g = GMatrix::from_ints(3, &[&[1, 2], &[3, 4]]);
        assert_eq!(g.det(), Rat::from_integer(-2));
        let gi = g.inverse().unwrap();
        assert!((&g * &gi).is_identity());
        assert!(GMatrix::from_ints(3, &[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn membership_examples() {
        let one = GMatrix::identity(3, 5);
        for h in [
            Subgroup::GlnZp,
            Subgroup::Iwahori,
            Subgroup::Unipotent,
            Subgroup::Borel,
            Subgroup::BorelIntegral,
            Subgroup::CongruenceKernel { l: 2, m: 1 },
        ] {
            assert!(membership(&one, h), "{h:?}");
        }
        let low = GMatrix::from_ints(5, &[&[1, 0], &[1, 1]]);
        assert!(!membership(&low, Subgroup::Iwahori));
        assert!(membership(&low, Subgroup::GlnZp));
        let k = GMatrix::from_ints(5, &[&[1, 0], &[125, 1]]);
        assert!(membership(&k, Subgroup::CongruenceKernel { l: 3, m: 1 }));
        assert!(!membership(&k, Subgroup::CongruenceKernel { l: 4, m: 1 }));
    }
}
