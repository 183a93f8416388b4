//! The special matrices, their identities and the Iwahori–Iwasawa
//! decomposition of random elements.
//!
//!     cargo run --release --example matrix_identities -- <n> <p> [samples]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rsbirch::localgroup::{decompose, random, verify_matrix_identities};
use rsbirch::scalars::p_pow;

fn main() -> rsbirch::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = *args.first().unwrap_or(&3) as usize;
    let p = *args.get(1).unwrap_or(&3);
    let samples = *args.get(2).unwrap_or(&20);
    for k in 1..=2 {
        let f = p_pow(p, k);
        for c in verify_matrix_identities(n, f, p)? {
            println!("f = {f}: {:<28} {}", c.name, c.holds);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut good = 0;
    for _ in 0..samples {
        let (g, e, w) = random::assembled(&mut rng, n, p);
        let d = decompose(&g)?;
        if d.e == e && d.omega == w && d.reconstruct() == g {
            good += 1;
        }
    }
    println!("decomposition recovered (e, ω) and g for {good}/{samples} random elements");
    Ok(())
}
