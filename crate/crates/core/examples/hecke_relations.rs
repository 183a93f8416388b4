//! Parabolic Hecke relations at a given `(n, p)`: Gritsenko's
//! factorization, the V-operator lemma, Satake values and the
//! modification-operator eigen-relations.
//!
//!     cargo run --release --example hecke_relations -- [n] [p]

use std::time::Instant;

use rsbirch::hecke::satake::eigen_check;
use rsbirch::hecke::{modification_operator, HeckeRoots};
use rsbirch::hecke::{gritsenko_check, satake_eigenvalue, standard_op, t_p_coset, v_op, v_op_blocks, HeckeElement, Op};

fn main() -> rsbirch::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = *args.first().unwrap_or(&2) as usize;
    let p = *args.get(1).unwrap_or(&3);

    let t = Instant::now();
    let g = gritsenko_check(n, p)?;
    println!("gritsenko: {} ({:.1?})", g.iter().all(|l| l.holds), t.elapsed());

    let t = Instant::now();
    let mut ok = true;
    for nu in 0..=n {
        ok &= v_op(n, p, nu)?.cosets().eq(v_op_blocks(n, p, nu)?.cosets());
    }
    let mut prod = HeckeElement::identity(n, p);
    for nu in 1..n {
        prod = prod.convolve(&v_op(n, p, nu)?)?;
    }
    ok &= t_p_coset(n, p)?.cosets().eq(prod.cosets());
    println!("V constructions and K_B t K_B: {ok} ({:.1?})", t.elapsed());

    let t = Instant::now();
    for nu in 1..=n {
        println!("  T_{nu} ↦ {}", satake_eigenvalue(&standard_op(n, p, Op::T(nu))?)?);
    }
    println!("satake ({:.1?})", t.elapsed());

    let t = Instant::now();
    let t1 = standard_op(n, p, Op::T(1))?;
    let sq = t1.convolve(&t1)?;
    println!("T_1 * T_1: {} cosets ({:.1?})", sq.len(), t.elapsed());
    let t = Instant::now();
    let _ = satake_eigenvalue(&sq)?;
    println!("satake of T_1^2 ({:.1?})", t.elapsed());

    let t = Instant::now();
    let psi = modification_operator(&HeckeRoots::from_satake(n, p))?;
    println!("modification operator: {} cosets ({:.1?})", psi.len(), t.elapsed());

    let t = Instant::now();
    let lines = eigen_check(n, p, 1)?;
    println!("eigen-relations on {} keys: {} ({:.1?})", lines.len(), lines.iter().all(|l| l.holds), t.elapsed());
    Ok(())
}
