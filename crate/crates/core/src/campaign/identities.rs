use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{CampaignConfig, Recorder, Report};
use crate::birch::reps::{
    block_point, canonical_double_rep, enumerate_reps, last_row_target, orbit_count_check, rtilde_bijection_by_domains,
    rtilde_bijection_check, to_matrix, volume, volume_by_counting,
};
use crate::error::Result;
use crate::localgroup::{random, verify_matrix_identities, GMatrix, WeylElement};
use crate::scalars::padic::ipow;
use crate::scalars::Rat;

/// Largest `|GL_n(Z/p^{2nm})|`-style enumeration attempted for volumes.
const VOLUME_LIMIT: u64 = 60_000_000;
/// Largest `R̃` walked element by element; beyond it the product-domain
/// argument is used alone.
const BIJECTION_LIMIT: u64 = 5_000_000;

fn fixing_last(n: usize) -> Vec<WeylElement> {
    WeylElement::all(n).into_iter().filter(|w| w.sigma[n - 1] == n - 1).collect()
}

pub fn cmd_identities(config: &CampaignConfig) -> Result<Report> {
    config.validate()?;
    let (n, p, m) = (config.n, config.p, config.m);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rec = Recorder::new();

    for size in 0..=n {
        for k in 1..=2u32 {
            rec.run(format!("matrix_identities[n={size},f=p^{k}]"), || {
                let f = Rat::from_integer(ipow(p, k) as i128);
                let lines = verify_matrix_identities(size, f, p)?;
                let failing: Vec<_> = lines.iter().filter(|c| !c.holds).map(|c| c.name).collect();
                let witness = (!failing.is_empty()).then(|| json!({ "failing": failing }));
                Ok((failing.is_empty(), serde_json::to_value(&lines)?, witness))
            });
        }
    }

    for size in (1..=n).filter(|&s| ipow(p, 2 * s as u32 * m).checked_pow((s * s) as u32).is_some_and(|t| t <= VOLUME_LIMIT)) {
        rec.run(format!("volume[n={size}]"), || {
            let l = 2 * size as u32;
            let count = volume_by_counting(size, l, m, p);
            let counted = BigRational::new(BigInt::from(count.unipotent_order), BigInt::from(count.gl_order));
            let mut closed = volume(size, l, m, p);
            if config.corrupt {
                closed *= BigRational::from_integer(BigInt::from(p));
            }
            let ok = counted == closed;
            let detail = json!({ "l": l, "closed_form": closed.to_string(), "counted": counted.to_string() });
            Ok((ok, detail.clone(), (!ok).then_some(detail)))
        });
    }

    for size in 2..=n.min(3) {
        let l = 2 * size as u32;
        for w in fixing_last(size) {
            let set = enumerate_reps(size, l, m, p, &w)?;
            let target = last_row_target(&set.level, size);
            let samples: Vec<Vec<i128>> = match set.pinned_last_row(&target) {
                Some(t) => (0..5).map(|_| t.sample(&mut rng)).collect(),
                None => vec![],
            };
            rec.run(format!("orbit_count[n={size},ω={:?}]", w.sigma), || {
                let mut lines = Vec::new();
                let mut ok = true;
                for r in &samples {
                    let c = orbit_count_check(size, l, m, p, &w, r)?;
                    ok &= c.found == c.expected && c.free;
                    lines.push(json!({ "r": r, "count": c }));
                }
                Ok((ok, json!(lines), None))
            });
            rec.run(format!("bijection[n={size},ω={:?}]", w.sigma), || {
                let by_domains = rtilde_bijection_by_domains(size, l, m, p, &w)?;
                let walked = (by_domains.rtilde_count <= BIJECTION_LIMIT)
                    .then(|| rtilde_bijection_check(size, l, m, p, &w))
                    .transpose()?;
                let ok = by_domains.round_trips && walked.as_ref().is_none_or(|b| b.round_trips);
                Ok((ok, json!({ "product_domains": by_domains, "enumerated": walked }), None))
            });
        }
    }

    for size in 1..=n.min(3) {
        let l = 2 * size as u32;
        let fl = ipow(p, m * l) as i128;
        for w in WeylElement::all(size) {
            let set = enumerate_reps(size, l, m, p, &w)?;
            let trials: Vec<(Vec<i64>, Vec<i128>, GMatrix)> = (0..10)
                .map(|_| {
                    let r = set.sample(&mut rng);
                    let e = random::exponents(&mut rng, size, 2);
                    let g = block_point(p, &e, &w, &to_matrix(size, p, &r));
                    let noise: Vec<i128> = (0..size * size).map(|_| rng.gen_range(0..4) * fl).collect();
                    let k = GMatrix::from_fn(size, size, p, |i, j| Rat::from_integer(noise[i * size + j] + i128::from(i == j)));
                    let u = random::unipotent(&mut rng, size, p);
                    (e, r, &(&u * &g) * &k)
                })
                .collect();
            rec.run(format!("disjointness[n={size},ω={:?}]", w.sigma), || {
                for (e, r, h) in &trials {
                    let got = canonical_double_rep(h, l, m)?;
                    if got != (e.clone(), w.clone(), r.clone()) {
                        let witness = json!({ "e": e, "r": r, "recovered": { "e": got.0, "omega": got.1.sigma, "r": got.2 } });
                        return Ok((false, json!({ "trials": trials.len() }), Some(witness)));
                    }
                }
                Ok((true, json!({ "trials": trials.len() }), None))
            });
        }
    }

    Ok(rec.finish(config, vec!["matrix-identities", "volume", "orbit-count", "rtilde-bijection", "double-coset-disjointness"]))
}
