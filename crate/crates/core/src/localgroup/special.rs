//! The catalog of special matrices and the identities relating them.
//!
//! Indices in the formulas below are 1-based; `f` is a nonzero nonunit of
//! `Z_p` (in practice `p^m`).

use num_traits::{One, Zero};
use serde::Serialize;

use super::matrix::{membership, GMatrix, Subgroup};
use crate::error::{Error, Result};
use crate::scalars::padic::{val, Rat};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    D,
    /// `φ_n`, an `n × 1` column.
    Phi,
    C,
    A,
    ATilde,
    B,
    /// The displayed closed form of `B_n^{-1}`.
    BInv,
    E,
    /// The displayed closed form of `E_n^{-1}`.
    EInv,
    /// Anti-diagonal `w_n`.
    W,
    /// `h ∈ GL_n(Z)`; here `n` is the full size.
    H,
    /// `t = diag(f^{n-1}, …, f, 1)`, full size `n`.
    T,
    /// `h^{(f)} = t^{-1} h t`, full size `n`.
    HF,
    /// `t_(p) = diag(p^{n-1}, …, p, 1)`.
    TP,
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "D" => Kind::D,
            "phi" => Kind::Phi,
            "C" => Kind::C,
            "A" => Kind::A,
            "Atilde" => Kind::ATilde,
            "B" => Kind::B,
            "Binv" => Kind::BInv,
            "E" => Kind::E,
            "Einv" => Kind::EInv,
            "w" => Kind::W,
            "h" => Kind::H,
            "t" => Kind::T,
            "hf" => Kind::HF,
            "tp" => Kind::TP,
            _ => return Err(Error::Domain(format!("unknown matrix kind {s:?}"))),
        })
    }
}

fn fpow(f: Rat, e: i64) -> Rat {
    if e >= 0 {
        num_traits::pow(f, e as usize)
    } else {
        num_traits::pow(f.recip(), (-e) as usize)
    }
}

fn depends_on_f(k: Kind) -> bool {
    !matches!(k, Kind::W | Kind::H | Kind::TP)
}

pub fn special_matrix(kind: Kind, n: usize, f: Rat, p: u64) -> Result<GMatrix> {
    if depends_on_f(kind) && !val(&f, p).is_some_and(|v| v >= 1) {
        return Err(Error::Domain(format!("f = {f} must be a nonzero nonunit of Z_{p}")));
    }
    let z = Rat::zero;
    let one = Rat::one;
    let nn = n as i64;
    // 1-based entry builder
    let sq = |g: &dyn Fn(i64, i64) -> Rat| GMatrix::from_fn(n, n, p, |i, j| g(i as i64 + 1, j as i64 + 1));
    Ok(match kind {
        Kind::D => sq(&|i, j| if i == j { fpow(f, 2 * i - nn - 1) } else { z() }),
        Kind::Phi => GMatrix::from_fn(n, 1, p, |i, _| fpow(f, i as i64 + 1 - nn - 1)),
        Kind::C => sq(&|i, j| {
            if i < nn {
                if i == j { one() } else { z() }
            } else if j == 1 && nn > 1 {
                fpow(f, nn - 1)
            } else if j == 1 {
                one()
            } else {
                -fpow(f, nn - j)
            }
        }),
        Kind::A => sq(&|i, j| {
            if i == j {
                one()
            } else if j == i + 1 {
                if i == 1 { f.recip() } else { -f.recip() }
            } else {
                z()
            }
        }),
        Kind::ATilde => sq(&|i, j| {
            if i == 1 && j == 1 {
                f.recip()
            } else if i == j {
                -f.recip()
            } else if j + 1 == i {
                one()
            } else {
                z()
            }
        }),
        Kind::B => special_matrix(Kind::ATilde, n, f, p)?.scale(f),
        Kind::BInv => sq(&|i, j| {
            if j > i {
                z()
            } else if j == 1 {
                fpow(f, i - 1)
            } else {
                -fpow(f, i - j)
            }
        }),
        Kind::E => sq(&|i, j| {
            if i < nn {
                if j >= nn + 1 - i { fpow(f, i + j - nn - 1) } else { z() }
            } else if j == 1 {
                one()
            } else {
                -fpow(f, j - 1)
            }
        }),
        Kind::EInv => sq(&|i, j| {
            if i + j == nn + 1 {
                one()
            } else if i + j == nn {
                if i == 1 { f } else { -f }
            } else {
                z()
            }
        }),
        Kind::W => sq(&|i, j| if i + j == nn + 1 { one() } else { z() }),
        Kind::H => sq(&|i, j| {
            if j == nn {
                one()
            } else if i < nn && i + j == nn {
                one()
            } else {
                z()
            }
        }),
        Kind::T => sq(&|i, j| if i == j { fpow(f, nn - i) } else { z() }),
        Kind::HF => {
            let t = special_matrix(Kind::T, n, f, p)?;
            let h = special_matrix(Kind::H, n, f, p)?;
            &(&t.inverse()? * &h) * &t
        }
        Kind::TP => sq(&|i, j| if i == j { fpow(Rat::from_integer(p as i128), nn - i) } else { z() }),
    })
}

/// `ε_x = diag(x, 1, …, 1)`.
pub fn epsilon(n: usize, x: Rat, p: u64) -> GMatrix {
    GMatrix::from_fn(n, n, p, |i, j| {
        if i != j {
            Rat::zero()
        } else if i == 0 {
            x
        } else {
            Rat::one()
        }
    })
}

/// `λ_n(g) = Σ_ν g_{n,ν} f^{ν-n-1}`.
pub fn lambda_n(g: &GMatrix, f: Rat) -> Rat {
    let n = g.n();
    if n == 0 {
        return Rat::zero();
    }
    (0..n).map(|j| g[(n - 1, j)] * fpow(f, j as i64 - n as i64)).sum()
}

/// `d_i`: the identity with `-1` at `(i, i)`, 1-based.
fn d_sign(n: usize, i: usize, p: u64) -> GMatrix {
    let mut d = GMatrix::identity(n, p);
    d[(i - 1, i - 1)] = -Rat::one();
    d
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
}

/// Check the eight relations between the special matrices at size `n`.
pub fn verify_matrix_identities(n: usize, f: Rat, p: u64) -> Result<Vec<IdentityCheck>> {
    let sm = |k: Kind, size: usize| special_matrix(k, size, f, p);
    let mut out = Vec::new();
    let mut push = |name, holds| out.push(IdentityCheck { name, holds });

    let n1 = n + 1;
    // B_{n+1} h^{(f)} E_{n+1} = D_{n+1}
    let lhs = &(&sm(Kind::B, n1)? * &sm(Kind::HF, n1)?) * &sm(Kind::E, n1)?;
    push("B_{n+1} h^(f) E_{n+1} = D_{n+1}", lhs == sm(Kind::D, n1)?);

    // j(B_n) B_{n+1}^{-1} = C_{n+1}
    let lhs = &sm(Kind::B, n)?.embed() * &sm(Kind::B, n1)?.inverse()?;
    push("j(B_n) B_{n+1}^-1 = C_{n+1}", lhs == sm(Kind::C, n1)?);

    if n == 0 {
        // Statements about n × n matrices are vacuous for n = 0.
        for name in [
            "d_1 B_n d_n E_n d_1 = -w_n",
            "E_n E_n^-1 = 1",
            "B_n B_n^-1 = 1",
        ] {
            push(name, true);
        }
    } else {
        let lhs = &(&(&(&d_sign(n, 1, p) * &sm(Kind::B, n)?) * &d_sign(n, n, p)) * &sm(Kind::E, n)?)
            * &d_sign(n, 1, p);
        push("d_1 B_n d_n E_n d_1 = -w_n", lhs == sm(Kind::W, n)?.neg());
        push("E_n E_n^-1 = 1", (&sm(Kind::E, n)? * &sm(Kind::EInv, n)?).is_identity());
        push("B_n B_n^-1 = 1", (&sm(Kind::B, n)? * &sm(Kind::BInv, n)?).is_identity());
    }

    let w = sm(Kind::W, n1)?;
    let d = sm(Kind::D, n1)?;
    let conj = &(&(&(&w * &d.inverse()?) * &sm(Kind::A, n1)?) * &d) * &w;
    push("w D^-1 A D w in I_{n+1}", membership(&conj, Subgroup::Iwahori));

    let bphi = &sm(Kind::B, n)? * &sm(Kind::Phi, n)?;
    let target = GMatrix::from_fn(n, 1, p, |i, _| if i == 0 { fpow(f, -(n as i64)) } else { Rat::zero() });
    push("B_n phi_n = (f^-n, 0, ..., 0)^t", bphi == target);

    let lhs = (&sm(Kind::B, n1)? * &sm(Kind::C, n1)?).det();
    push("det(B_{n+1} C_{n+1}) = det(B_n)", lhs == sm(Kind::B, n)?.det());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128) -> Rat {
        Rat::from_integer(n)
    }

    #[test]
    fn displayed_examples() {
        let d = special_matrix(Kind::D, 2, r(5), 5).unwrap();
        assert_eq!(d, GMatrix::diag(5, &[Rat::new(1, 5), r(5)]));
        let w = special_matrix(Kind::W, 3, r(5), 5).unwrap();
        assert_eq!(w, GMatrix::from_ints(5, &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
        let hf = special_matrix(Kind::HF, 3, r(3), 3).unwrap();
        // t^{-1} g t has entries f^{i-j} g_ij.
        let h = special_matrix(Kind::H, 3, r(3), 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(hf[(i, j)], fpow(r(3), i as i64 - j as i64) * h[(i, j)]);
            }
        }
        assert_eq!(special_matrix(Kind::B, 1, r(2), 2).unwrap(), GMatrix::identity(1, 2));
        assert_eq!(special_matrix(Kind::C, 1, r(2), 2).unwrap(), GMatrix::identity(1, 2));
        assert!(special_matrix(Kind::D, 2, r(1), 5).is_err());
    }

    #[test]
    fn lambda_examples() {
        let f = r(3);
        assert_eq!(lambda_n(&GMatrix::identity(3, 3), f), Rat::new(1, 3));
        // Last row of B_2 is (f, -1): f·f^{-2} - f^{-1} = 0.
        let b2 = special_matrix(Kind::B, 2, f, 3).unwrap();
        assert_eq!(lambda_n(&b2, f), r(0));
        let z = GMatrix::from_ints(3, &[&[1, 1], &[0, 0]]);
        assert_eq!(lambda_n(&z, f), r(0));
    }

    #[test]
    fn identities_hold() {
        for (n, f, p) in [(0, r(2), 2), (1, r(3), 3), (2, r(4), 2), (3, r(5), 5), (4, r(9), 3), (5, r(7), 7)] {
            for c in verify_matrix_identities(n, f, p).unwrap() {
                assert!(c.holds, "n = {n}, f = {f}: {}", c.name);
            }
        }
    }
}
