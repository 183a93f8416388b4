//! Brute-force the local Birch lemma for every primitive character.
//!
//!     cargo run --release --example birch_lemma -- <n> <p> <m> [l] [radius]

use std::time::Instant;

use rsbirch::birch::theorem_check;
use rsbirch::characters::enumerate_chars;

fn main() -> rsbirch::Result<()> {
    let args: Vec<i64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = *args.first().unwrap_or(&1) as usize;
    let p = *args.get(1).unwrap_or(&3) as u64;
    let m = *args.get(2).unwrap_or(&1) as u32;
    let l = args.get(3).map_or(2 * n as u32, |&x| x as u32);
    let radius = *args.get(4).unwrap_or(&2);
    let chars = enumerate_chars(p, m);
    if chars.is_empty() {
        println!("no primitive characters of conductor {p}^{m}");
    }
    for chi in chars {
        let start = Instant::now();
        let r = theorem_check(n, m, &chi, radius, l)?;
        println!(
            "χ = {:?}: total {} · blocks vanish {} · lemma block {:?} ({:.1?})",
            chi.describe().generator_images,
            if r.holds { "matches" } else { "DIFFERS" },
            r.blockwise_vanishing,
            r.lemma_block,
            start.elapsed()
        );
        if let Some(b) = r.witness() {
            println!("  first nonvanishing block: e = {:?}, ω = {:?}", b.e, b.omega);
        }
    }
    Ok(())
}
