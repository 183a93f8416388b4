use num_rational::Ratio;
use serde_json::json;

use super::{CampaignConfig, Recorder, Report};
use crate::error::Result;
use crate::hecke::satake::{eigen_check, expected_t_eigenvalue, kappa_values};
use crate::hecke::{
    gritsenko_check, ordinarity_and_kappa, satake_eigenvalue, satake_normalization, standard_op, t_p_coset, v_op,
    v_op_blocks, v_op_product, HeckeElement, Op,
};
use crate::localgroup::weyl::permutations;
use crate::measures::{ordinary_roots, sample_units};
use crate::scalars::SymbolicScalar;

fn same(a: &HeckeElement, b: &HeckeElement) -> bool {
    a.cosets().eq(b.cosets())
}

/// `s(x_{π(1)}, …, x_{π(n)})`.
fn permuted(s: &SymbolicScalar, perm: &[usize]) -> SymbolicScalar {
    let (n, p) = (s.nvars(), s.prime());
    s.terms().fold(SymbolicScalar::zero(n, p), |acc, (mono, c)| {
        let mut x = vec![0; n];
        for (i, &k) in perm.iter().enumerate() {
            x[k] = mono.x[i];
        }
        acc.add(&SymbolicScalar::monomial(n, p, x, i64::from(mono.half), c.clone()))
    })
}

pub fn cmd_hecke(config: &CampaignConfig) -> Result<Report> {
    config.validate()?;
    let (n, p) = (config.n, config.p);
    let mut rec = Recorder::new();

    rec.run("gritsenko", || {
        let lines = gritsenko_check(n, p)?;
        let ok = lines.iter().all(|l| l.holds);
        let witness = lines.iter().find(|l| !l.holds).map(|l| json!(l));
        Ok((ok, json!(lines), witness))
    });

    rec.run("v_constructions", || {
        let mut lines = Vec::new();
        for nu in 0..=n {
            let a = v_op(n, p, nu)?;
            let blocks = same(&a, &v_op_blocks(n, p, nu)?);
            let product = same(&a, &v_op_product(n, p, nu)?);
            lines.push(json!({ "nu": nu, "cosets": a.len(), "blocks": blocks, "u_product": product }));
            if !(blocks && product) {
                return Ok((false, json!(lines), Some(json!({ "nu": nu }))));
            }
        }
        Ok((true, json!(lines), None))
    });

    rec.run("v_commute", || {
        let vs: Vec<HeckeElement> = (1..=n).map(|nu| v_op(n, p, nu)).collect::<Result<_>>()?;
        for i in 0..n {
            for j in i + 1..n {
                if !same(&vs[i].convolve(&vs[j])?, &vs[j].convolve(&vs[i])?) {
                    return Ok((false, json!({}), Some(json!({ "pair": [i + 1, j + 1] }))));
                }
            }
        }
        Ok((true, json!({ "pairs": n * n.saturating_sub(1) / 2 }), None))
    });

    rec.run("t_p_as_v_product", || {
        let mut prod = HeckeElement::identity(n, p);
        for nu in 1..n {
            prod = prod.convolve(&v_op(n, p, nu)?)?;
        }
        let tp = t_p_coset(n, p)?;
        Ok((same(&tp, &prod), json!({ "cosets": tp.len() }), None))
    });

    rec.run("satake_values", || {
        let mut lines = Vec::new();
        let mut ok = true;
        for nu in 0..=n {
            let got = satake_eigenvalue(&standard_op(n, p, Op::T(nu))?)?;
            let holds = got == expected_t_eigenvalue(n, p, nu);
            ok &= holds;
            lines.push(json!({ "nu": nu, "eigenvalue": got.to_string(), "holds": holds }));
        }
        Ok((ok, json!({ "values": lines, "normalization": satake_normalization(n) }), None))
    });

    rec.run("satake_morphism_and_symmetry", || {
        let ts: Vec<HeckeElement> = (1..=n).map(|nu| standard_op(n, p, Op::T(nu))).collect::<Result<_>>()?;
        let lambdas: Vec<SymbolicScalar> = ts.iter().map(satake_eigenvalue).collect::<Result<_>>()?;
        let perms = permutations(n);
        let mut products = 0;
        for a in 0..n {
            for b in a..n {
                let prod = satake_eigenvalue(&ts[a].convolve(&ts[b])?)?;
                if prod != lambdas[a].mul(&lambdas[b]) {
                    return Ok((false, json!({}), Some(json!({ "morphism_fails_at": [a + 1, b + 1] }))));
                }
                if let Some(perm) = perms.iter().find(|perm| permuted(&prod, perm) != prod) {
                    return Ok((false, json!({}), Some(json!({ "not_symmetric": [a + 1, b + 1], "perm": perm }))));
                }
                products += 1;
            }
        }
        Ok((true, json!({ "products": products }), None))
    });

    rec.run("modification_operator", || {
        let lines = eigen_check(n, p, 1)?;
        let ok = lines.iter().all(|l| l.holds);
        let witness = lines.iter().find(|l| !l.holds).map(|l| json!(l));
        Ok((ok, json!({ "keys": lines.len() }), witness))
    });

    rec.run("ordinarity_and_kappa", || {
        let vals: Vec<Ratio<i64>> = (0..n as i64).map(Ratio::from_integer).collect();
        let report = ordinarity_and_kappa(&vals);
        let roots = ordinary_roots(p, n, &sample_units(p, n));
        let (_, hat) = kappa_values(p, &roots)?;
        let hat_val = hat.valuation(p).map(|v| v.to_string());
        let ok = report.ordinary && report.kappa_hat_is_unit && hat_val.as_deref() == Some("0");
        Ok((ok, json!({ "report": report, "kappa_hat_at_sample_roots": hat.reduce_level().to_repr() }), None))
    });

    Ok(rec.finish(
        config,
        vec!["gritsenko-factorization", "v-operator-lemma", "satake-morphism", "modification-operator", "ordinarity-kappa"],
    ))
}
