//! Primitive characters of conductor `p^m`, their Gauss sums and the
//! twisted sums against the closed form.
//!
//!     cargo run --release --example gauss_sums -- <p> <m>

use rsbirch::characters::{enumerate_chars, gauss_sum, twisted_sum, twisted_sum_closed_form};
use rsbirch::scalars::{p_pow, Cyclotomic, Rat};

fn main() -> rsbirch::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let p = *args.first().unwrap_or(&5);
    let m = *args.get(1).unwrap_or(&1) as u32;
    let pm = Cyclotomic::from_ratio(&p_pow(p, m as i64));
    for chi in enumerate_chars(p, m) {
        let g = gauss_sum(&chi)?;
        let norm_ok = &g * &g.conj() == pm;
        let twists_ok = [Rat::new(1, 1), Rat::new(2, 1), p_pow(p, 1)]
            .iter()
            .try_fold(true, |ok, x| Ok::<_, rsbirch::Error>(ok && twisted_sum(&chi, x)? == twisted_sum_closed_form(&chi, x)?))?;
        println!(
            "χ = {:?}: order {} · G(χ)G(χ)‾ = p^m {} · twisted sums {}",
            chi.describe().generator_images,
            chi.order(),
            norm_ok,
            twists_ok
        );
    }
    Ok(())
}
