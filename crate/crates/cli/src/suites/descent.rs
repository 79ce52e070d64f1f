//! Finite-prefix descent audits.

use nilrep_core::descent::{audit_with, AuditReport, DescentCase, ProbeBounds};
use nilrep_core::{Error, Result};
use serde_json::{json, Value};

use crate::catalog::CaseBody;
use crate::run::{Ctx, Job, Outcome, NOTES};

pub fn report_json(r: &AuditReport) -> Value {
    let indices: Vec<Value> = r
        .conditions
        .indices
        .iter()
        .map(|v| {
            json!({
                "index": v.index,
                "shrinking": v.shrinking,
                "char_coprime": v.char_coprime,
                "clause_i": v.clause_i,
                "clause_ii": v.clause_ii,
                "clause_iii": v.clause_iii,
                "mu": v.mu.render(),
            })
        })
        .collect();
    let trace = r.trace.as_ref().map(|t| {
        json!({
            "sizes": t.sizes,
            "mus": t.mus.iter().map(|m| m.render()).collect::<Vec<_>>(),
            "stabilization": t.stabilization,
        })
    });
    let lifting = r.lifting.as_ref().map(|l| {
        json!({
            "unique_lifts": l.unique_lifts,
            "plateau_start": l.plateau_start,
            "steps": l.steps.iter().map(|s| json!({
                "level": s.level,
                "prime": s.prime.render(),
                "contraction": s.contraction.render(),
                "extension": s.extension.render(),
                "degree": s.degree,
                "holds": s.holds,
            })).collect::<Vec<_>>(),
            "collapse": l.collapse.as_ref().map(|(i, why)| json!({"level": i, "reason": why})),
        })
    });
    json!({
        "depth": r.depth,
        "verdict": r.verdict.to_string(),
        "conditions": indices,
        "trace": trace,
        "lifting": lifting,
        "red_flag": r.red_flag,
        "note": NOTES[1],
    })
}

pub fn descent<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let bounds = ProbeBounds { levels: ctx.budgets.collapse_levels, degree: ctx.budgets.collapse_degree };
    ctx.catalog
        .cases()
        .filter_map(|(_, c)| {
            let CaseBody::Descent { ring, chain, ideals } = &c.body else { return None };
            let ring = ctx.built.rings[ring];
            let chain: Vec<_> = chain.iter().map(|e| ctx.built.embeds[e].clone()).collect();
            let ideals: Vec<_> = ideals.iter().map(|i| ctx.built.ideals[i].clone()).collect();
            Some(
                Job::new(format!("descent/{}", c.name), move || {
                    let case = DescentCase::new(ring, chain.clone(), ideals.clone())?;
                    let runs = (0..3).map(|_| audit_with(&case, bounds)).collect::<Result<Vec<_>>>()?;
                    let r = &runs[0];
                    if runs.iter().any(|x| x != r) {
                        return Err(Error::ConclusionFailed("audit is not deterministic".into()));
                    }
                    let monotone = r.trace.as_ref().is_none_or(|t| t.sizes.windows(2).all(|w| w[0] >= w[1]));
                    let sizes = r.trace.as_ref().map(|t| format!("{:?}", t.sizes)).unwrap_or_else(|| "[]".into());
                    let detail = format!("trace {sizes}{}", if r.red_flag { ", red flag" } else { "" });
                    let mut o = Outcome::labelled(r.verdict.to_string(), monotone && !r.red_flag, detail);
                    if !monotone {
                        o.verdict = "NON_MONOTONE_TRACE".into();
                    }
                    o.payload = Some(report_json(r));
                    Ok(o)
                })
                .expecting(c.expect.clone()),
            )
        })
        .collect()
}
