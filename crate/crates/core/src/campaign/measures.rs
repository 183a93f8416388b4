use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{CampaignConfig, Recorder, Report};
use crate::characters::gauss_sum;
use crate::error::Result;
use crate::measures::{
    all_characters, check_relation, fourier_inverse, index_formula_check, integrate_characters, interpolation_constants,
    kappa_exponent, order_estimate, ordinary_roots, sample_units, units, Order, PAdicDistribution, SyntheticOracle,
};
use crate::scalars::padic::ipow;
use crate::scalars::Cyclotomic;

fn q(a: i64, b: i64) -> Cyclotomic {
    Cyclotomic::from_rational(BigRational::new(BigInt::from(a), BigInt::from(b)))
}

pub fn cmd_measures(config: &CampaignConfig) -> Result<Report> {
    config.validate()?;
    let (p, depth, n) = (config.p, config.depth, config.n);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rec = Recorder::new();
    let chars = all_characters(p, depth);

    for (name, mu) in [("dirac", PAdicDistribution::dirac(p, depth)?), ("haar", PAdicDistribution::haar(p, depth)?)] {
        rec.run(format!("relation[{name}]"), || {
            let c = check_relation(&mu)?;
            Ok((c.holds, json!({ "depth": depth }), c.witness.map(|w| json!(w))))
        });
    }

    let bump = units(p, 2)[rng.gen_range(0..units(p, 2).len())];
    rec.run("relation[perturbed]", || {
        let mu = PAdicDistribution::haar(p, depth)?.perturbed(2, bump, &q(1, 7))?;
        let c = check_relation(&mu)?;
        // in test mode the perturbed table is claimed to be a distribution
        let ok = if config.corrupt { c.holds } else { !c.holds && c.witness.is_some() };
        Ok((ok, json!({ "perturbed_class": bump, "relation_holds": c.holds }), c.witness.map(|w| json!(w))))
    });

    rec.run("integrals[dirac,haar]", || {
        let dirac = PAdicDistribution::dirac(p, depth)?;
        let haar = PAdicDistribution::haar(p, depth)?;
        let ds = integrate_characters(&dirac, &chars)?;
        let hs = integrate_characters(&haar, &chars)?;
        for (i, ((chi, d), h)) in chars.iter().zip(&ds).zip(&hs).enumerate() {
            if !d.is_one() || h.is_zero() != (chi.m > 0) {
                return Ok((false, json!({}), Some(json!({ "character": i, "dirac": d.to_repr(), "haar": h.to_repr() }))));
            }
        }
        Ok((true, json!({ "characters": chars.len() }), None))
    });

    let top: BTreeMap<u64, Cyclotomic> = units(p, depth).into_iter().map(|x| (x, q(rng.gen_range(-9..10), rng.gen_range(1..6)))).collect();
    rec.run("inversion[distribution]", || {
        let mu = PAdicDistribution::from_top(p, depth, |x| top[&x].clone())?;
        let targets: Vec<_> = chars.iter().cloned().zip(integrate_characters(&mu, &chars)?).collect();
        let back = fourier_inverse(p, depth, &targets)?;
        Ok((back == mu, json!({ "characters": targets.len() }), None))
    });

    let consts: Vec<(i64, i64)> = chars.iter().map(|_| (rng.gen_range(-5..6), rng.gen_range(1..4))).collect();
    rec.run("inversion[targets]", || {
        let targets: Vec<_> = chars
            .iter()
            .zip(&consts)
            .map(|(c, &(a, b))| (c.clone(), &q(a, b) + &Cyclotomic::root_of_unity(c.order().max(1), 1)))
            .collect();
        let mu = fourier_inverse(p, depth, &targets)?;
        let relation = check_relation(&mu)?.holds;
        let back = integrate_characters(&mu, &chars)?;
        if let Some((chi, _)) = targets.iter().zip(&back).find(|((_, l), b)| l != *b).map(|(t, _)| t) {
            return Ok((false, json!({}), Some(json!({ "character": chi.describe() }))));
        }
        Ok((relation, json!({ "characters": targets.len(), "relation": relation }), None))
    });

    let roots_pi = ordinary_roots(p, n + 1, &sample_units(p, n + 1));
    let roots_sigma = ordinary_roots(p, n, &sample_units(p, n + 1)[1..]);
    rec.run("inversion[interpolation_shape]", || {
        let exp = (n * n.saturating_sub(1) / 2) as i64;
        // Gauss sums live in Q(ζ_{p^c}, ζ_{φ(p^c)}); keep the table small
        let shape_depth = (1..=depth).rev().find(|&d| units(p, d).len() <= 200).unwrap_or(1);
        let shape_chars = all_characters(p, shape_depth);
        let one = Cyclotomic::one();
        let mut targets = Vec::new();
        for chi in &shape_chars {
            let l = if chi.m == 0 {
                one.clone()
            } else {
                let k = interpolation_constants(n, p, chi.m, &roots_pi, &roots_sigma, &one, &one)?;
                &(&k.kappa_hat * &gauss_sum(chi)?.pow(exp)?) * &k.delta
            };
            targets.push((chi.clone(), l));
        }
        let mu = fourier_inverse(p, shape_depth, &targets)?;
        let back = integrate_characters(&mu, &shape_chars)?;
        let ok = targets.iter().zip(&back).all(|((_, l), b)| l == b);
        Ok((ok, json!({ "gauss_power": exp, "depth": shape_depth }), None))
    });

    rec.run("order_estimates", || {
        let dirac = order_estimate(&PAdicDistribution::dirac(p, depth)?);
        let haar = order_estimate(&PAdicDistribution::haar(p, depth)?);
        let mut ok = dirac.order == Order::Bounded && haar.h == Ratio::from_integer(1);
        let mut geometric = Vec::new();
        for h in 1..=2u32 {
            let lambda = Cyclotomic::from_int(ipow(p, h) as i64);
            let est = order_estimate(&PAdicDistribution::geometric(p, depth, &lambda)?);
            ok &= est.h == Ratio::from_integer(h as i64);
            geometric.push(json!({ "val_lambda": h, "estimate": est }));
        }
        // seed with a unit mass at 1 and p-divisible noise elsewhere
        let seed = units(p, depth).into_iter().map(|x| (x, if x == 1 { 1 } else { (p as i64) * ((x as i64 % 5) - 2) })).collect();
        let oracle = SyntheticOracle { n, p, roots_pi: roots_pi.clone(), roots_sigma: roots_sigma.clone(), depth, seed };
        let synthetic = oracle.measure()?;
        let synthetic_relation = check_relation(&synthetic)?.holds;
        let synthetic_order = order_estimate(&synthetic);
        ok &= synthetic_relation && synthetic_order.order == Order::Bounded;
        Ok((
            ok,
            json!({ "dirac": dirac, "haar": haar, "geometric": geometric, "ordinary_synthetic": synthetic_order, "synthetic_relation": synthetic_relation }),
            None,
        ))
    });

    for size in 1..=n.min(4) {
        rec.run(format!("index_formula[n={size}]"), || {
            let c = index_formula_check(size, p)?;
            Ok((c.holds, json!(c), None))
        });
    }

    rec.run("interpolation_constants", || {
        let one = Cyclotomic::one();
        let oracle = SyntheticOracle { n, p, roots_pi: roots_pi.clone(), roots_sigma: roots_sigma.clone(), depth, seed: BTreeMap::new() };
        let beta = oracle.hecke_eigenvalue();
        let hat_e = (n * n.saturating_sub(1) * n.saturating_sub(2) / 6) as i64;
        let euler = (1..n).fold(one.clone(), |acc, nu| &acc * &(&one - &q(1, ipow(p, nu as u32) as i64)).inv().expect("nonzero"));
        let mut lines = Vec::new();
        let mut ok = true;
        for c in 1..=depth {
            let k = interpolation_constants(n, p, c, &roots_pi, &roots_sigma, &one, &one)?;
            let pc = |e: i64| Cyclotomic::from_int(p as i64).pow(e * c as i64).expect("nonzero");
            let hat = &pc(hat_e) * &beta.pow(-(c as i64))?;
            let kappa = &pc(kappa_exponent(n) as i64) * &beta.pow(-(c as i64))?;
            let holds = k.kappa_hat == hat && k.kappa == kappa && k.delta == euler && k.kappa_hat.valuation(p) == Some(Ratio::from_integer(hat_e * c as i64));
            ok &= holds;
            lines.push(json!({ "c": c, "constants": k.to_repr(), "holds": holds }));
        }
        Ok((ok, json!({ "kappa_exponent": kappa_exponent(n), "lines": lines }), None))
    });

    Ok(rec.finish(
        config,
        vec!["distribution-relation", "character-integration", "fourier-inversion", "order-estimate", "index-formula", "interpolation-constants"],
    ))
}
