//! Distributions on `Z_p^×`: the distribution relation, integration of
//! characters, Fourier inversion and growth-order estimates.
//!
//!     cargo run --release --example distributions -- <p> <depth>

use rsbirch::measures::{
    all_characters, check_relation, fourier_inverse, integrate_characters, order_estimate, PAdicDistribution,
};
use rsbirch::scalars::{p_pow, Cyclotomic};

fn main() -> rsbirch::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let p = *args.first().unwrap_or(&3);
    let depth = *args.get(1).unwrap_or(&3) as u32;
    let haar = PAdicDistribution::haar(p, depth)?;
    for (name, mu) in [("dirac", PAdicDistribution::dirac(p, depth)?), ("haar", haar)] {
        let chars = all_characters(p, depth);
        let ints = integrate_characters(&mu, &chars)?;
        let targets: Vec<_> = chars.into_iter().zip(ints).collect();
        let back = fourier_inverse(p, depth, &targets)?;
        let est = order_estimate(&mu);
        println!(
            "{name:>6}: relation {} · inversion {} · order {:?} · β {:?}",
            check_relation(&mu)?.holds,
            back == mu,
            est.order,
            est.betas
        );
    }
    // λ^{-m} on the class of 1: not a distribution, but with growth order v(λ).
    let lambda = Cyclotomic::from_ratio(&p_pow(p, 2));
    let geo = PAdicDistribution::geometric(p, depth, &lambda)?;
    println!("geometric λ = p^2: relation {} · order {:?}", check_relation(&geo)?.holds, order_estimate(&geo).order);
    Ok(())
}
