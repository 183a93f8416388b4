//! Torus-orbit sums at `n = 3`: constancy along orbits, the two vanishing
//! criteria, and the exact orbit-level sum of the block `(0, id)`.
//!
//!     cargo run --release --example orbit_sums -- [p] [m] [samples]

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rsbirch::birch::orbit::{constancy_probe, orbit_sum, vanishing_e_n, vanishing_last_row, OrbitBlock};
use rsbirch::characters::enumerate_chars;
use rsbirch::localgroup::WeylElement;

fn main() -> rsbirch::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let p = *args.first().unwrap_or(&3);
    let m = *args.get(1).unwrap_or(&1) as u32;
    let samples = *args.get(2).unwrap_or(&100) as usize;
    let (n, l) = (3, 6);
    let Some(chi) = enumerate_chars(p, m).into_iter().next() else {
        println!("no primitive characters of conductor {p}^{m}");
        return Ok(());
    };
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let block = OrbitBlock::new(n, m, l, &[0, 0, 0], &WeylElement::identity(n), &chi)?;
    let c = constancy_probe(&mut rng, &block, samples)?;
    println!("constancy on {} orbits ({} nonzero): {} / cells {}", c.samples, c.nonzero_samples, c.constant, c.cell_invariant);
    println!("e_n criterion: {}", vanishing_e_n(&mut rng, n, m, l, &chi, samples)?.all_zero);
    println!("last-row criterion: {}", vanishing_last_row(&mut rng, n, m, l, &chi, samples)?.all_zero);
    let start = Instant::now();
    let (report, _) = orbit_sum(n, m, l, &chi)?;
    println!(
        "orbit sum over {} orbits ({} nonzero): closed form {} ({:.1?})",
        report.orbits,
        report.nonzero_orbits,
        report.matches_closed_form,
        start.elapsed()
    );
    Ok(())
}
