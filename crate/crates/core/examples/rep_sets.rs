//! Representative sets `R_{l,n}^ω`: the volume formula against direct
//! counting, torus-orbit counts in `R̃`, and the bijection
//! `R̃_{l,n}^ω → R_{l,n-1}^{ω̃}` walked element by element.
//!
//!     cargo run --release --example rep_sets -- [n] [p] [m]

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rsbirch::birch::reps::{
    enumerate_reps, last_row_target, orbit_count_check, rtilde_bijection_by_domains, rtilde_bijection_check, volume,
    volume_by_counting,
};
use rsbirch::localgroup::WeylElement;

fn main() -> rsbirch::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = *args.first().unwrap_or(&2) as usize;
    let p = *args.get(1).unwrap_or(&2);
    let m = *args.get(2).unwrap_or(&1) as u32;
    let l = 2 * n as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    println!("vol(U J_{{{l},{n}}}) = {}", volume(n, l, m, p));
    if n <= 2 && p.pow(l * m * (n * n) as u32) <= 100_000_000 {
        let t = Instant::now();
        let c = volume_by_counting(n, l, m, p);
        println!("  by counting in GL_{n}(Z/p^{}): {} ({:.1?})", l * m, c.matches, t.elapsed());
    }
    for w in WeylElement::all(n) {
        let set = enumerate_reps(n, l, m, p, &w)?;
        println!("ω = {:?}: |R| = {}", w.sigma, set.count());
        if w.sigma[n - 1] != n - 1 || n < 2 {
            continue;
        }
        if let Some(tilde) = set.pinned_last_row(&last_row_target(&set.level, n)) {
            let c = orbit_count_check(n, l, m, p, &w, &tilde.sample(&mut rng))?;
            println!("  orbit count {} (expected {}), free {}", c.found, c.expected, c.free);
        }
        let d = rtilde_bijection_by_domains(n, l, m, p, &w)?;
        println!("  |R̃| = {}, |R_{{n-1}}| = {}, domains agree {}", d.rtilde_count, d.smaller_count, d.round_trips);
        let t = Instant::now();
        let b = rtilde_bijection_check(n, l, m, p, &w)?;
        println!("  walked round trips {} ({:.1?})", b.round_trips, t.elapsed());
    }
    Ok(())
}
