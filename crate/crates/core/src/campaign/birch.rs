use serde_json::json;

use super::{CampaignConfig, Recorder, Report};
use crate::birch::{corollary_check, theorem_check};
use crate::error::Result;

pub fn cmd_birch(config: &CampaignConfig) -> Result<Report> {
    config.validate()?;
    let (n, m, l, radius) = (config.n, config.m, config.level(), config.radius);
    let chars = config.selected_characters();
    let mut rec = Recorder::new();
    if chars.is_empty() {
        rec.run("characters", || {
            Ok((true, json!({ "primitive_characters": 0, "note": "no primitive characters of this conductor; vacuous" }), None))
        });
    }
    for (i, chi) in &chars {
        rec.run(format!("theorem[χ{i}]"), || {
            let r = theorem_check(n, m, chi, radius, l)?;
            let witness = (!r.passed()).then(|| json!({ "lhs": r.lhs, "rhs": r.rhs, "nonvanishing_block": r.witness() }));
            Ok((r.passed(), serde_json::to_value(&r)?, witness))
        });
        if config.corollary {
            rec.run(format!("corollary[χ{i}]"), || {
                let r = corollary_check(n, m, chi, radius, l)?;
                Ok((r.passed(), serde_json::to_value(&r)?, None))
            });
        }
    }
    let mut statements = vec!["local-birch-lemma"];
    if config.corollary {
        statements.push("birch-corollary");
    }
    Ok(rec.finish(config, statements))
}
