//! The `h^(f)` corollary: brute force against the chain and the theorem form.
//!
//!     cargo run --release --example corollary -- <n> <p> <m> [radius]

use rsbirch::birch::corollary_check;
use rsbirch::characters::enumerate_chars;

fn main() -> rsbirch::Result<()> {
    let args: Vec<i64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = *args.first().unwrap_or(&1) as usize;
    let p = *args.get(1).unwrap_or(&3) as u64;
    let m = *args.get(2).unwrap_or(&1) as u32;
    let radius = *args.get(3).unwrap_or(&2);
    for chi in enumerate_chars(p, m) {
        let r = corollary_check(n, m, &chi, radius, 2 * (n as u32 + 1))?;
        println!(
            "χ = {:?}: closed form {} · chain {} · theorem form {}",
            chi.describe().generator_images,
            r.holds,
            r.chain_holds,
            r.theorem_form_holds
        );
    }
    Ok(())
}
