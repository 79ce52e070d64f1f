//! Suites over Laurent group algebras: eq3, lemma7, lemma8.

use nilrep_core::laurent::{
    contract, extend, lemma7_report, lemma8_lift, minimal_primes, mu_of_module, LaurentIdeal, LaurentPoly, LaurentRing,
    PrimeSet,
};
use nilrep_core::{Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::{CaseBody, EntryKind};
use crate::run::{Ctx, Job, Outcome};

fn catalog_ideals<'a>(ctx: &'a Ctx) -> Vec<(&'a str, &'a LaurentIdeal)> {
    ctx.catalog
        .entries
        .iter()
        .filter_map(|e| match &e.kind {
            EntryKind::Ideal(i) => Some((i.name.as_str(), &ctx.built.ideals[&i.name])),
            _ => None,
        })
        .collect()
}

fn random_poly(ring: LaurentRing, rng: &mut ChaCha8Rng) -> LaurentPoly {
    let terms: Vec<(Vec<i64>, _)> = (0..rng.gen_range(1..=3))
        .map(|_| ((0..ring.rank).map(|_| rng.gen_range(-2..=2)).collect(), ring.field.from_i64(rng.gen_range(-3..=3))))
        .collect();
    LaurentPoly::from_terms(ring, terms)
}

/// Saturation soundness, antichain and single-summand checks for one ideal.
fn ideal_invariants(ctx: &Ctx, k: usize, ideal: &LaurentIdeal) -> Result<Outcome> {
    let ring = ideal.ring;
    let mut rng = ctx.rng("eq3-ideal", k);
    let mut samples: Vec<LaurentPoly> = ideal.generators.clone();
    for g in &ideal.generators {
        samples.push(g.mul(&random_poly(ring, &mut rng)));
    }
    for _ in 0..4 {
        samples.push(random_poly(ring, &mut rng));
    }
    let mut saturated = true;
    for f in &samples {
        let unit = LaurentPoly::unit(ring, (0..ring.rank).map(|_| rng.gen_range(-3..=3)).collect());
        saturated &= ideal.contains(&f.mul(&unit))? == ideal.contains(f)?;
    }
    let mu = minimal_primes(ideal)?;
    let single = mu_of_module(ring, std::slice::from_ref(ideal))? == mu;
    let antichain = mu.is_antichain();
    let detail = format!("|mu| = {}, {} membership samples", mu.len(), samples.len());
    Ok(Outcome::check(saturated && single && antichain, detail))
}

pub fn eq3<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let ideals = catalog_ideals(ctx);
    let mut jobs: Vec<Job> = Vec::new();
    for (k, (name, ideal)) in ideals.iter().enumerate() {
        let ideal = *ideal;
        jobs.push(Job::new(format!("eq3/ideal/{name}"), move || ideal_invariants(ctx, k, ideal)));
    }
    let rings: Vec<LaurentRing> = {
        let mut v: Vec<LaurentRing> = Vec::new();
        for (_, i) in &ideals {
            if !v.contains(&i.ring) && ideals.iter().filter(|(_, j)| j.ring == i.ring).count() >= 2 {
                v.push(i.ring);
            }
        }
        v
    };
    if rings.is_empty() {
        return jobs;
    }
    for n in 0..ctx.budgets.random_or(40) {
        let ideals = ideals.clone();
        let rings = rings.clone();
        jobs.push(Job::new(format!("eq3/sum-{n}"), move || {
            let mut rng = ctx.rng("eq3", n);
            let ring = rings[rng.gen_range(0..rings.len())];
            let pool: Vec<_> = ideals.iter().filter(|(_, i)| i.ring == ring).collect();
            let count = rng.gen_range(2..=3.min(pool.len()));
            let picked: Vec<&(&str, &LaurentIdeal)> = (0..count).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
            let summands: Vec<LaurentIdeal> = picked.iter().map(|(_, i)| (*i).clone()).collect();
            let mu = mu_of_module(ring, &summands)?;
            let mut union = Vec::new();
            for j in &summands {
                union.extend(minimal_primes(j)?.members);
            }
            let ann = summands.iter().try_fold(LaurentIdeal::unit(ring), |acc, j| acc.intersect(j))?;
            let ok = PrimeSet::minimal_of(union) == mu && minimal_primes(&ann)? == mu;
            let names: Vec<&str> = picked.iter().map(|(n, _)| *n).collect();
            Ok(Outcome::check(ok, format!("{} -> {}", names.join(" + "), mu.render())))
        }));
    }
    jobs
}

pub fn lemma7<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    ctx.catalog
        .cases()
        .filter_map(|(_, c)| match &c.body {
            CaseBody::Lemma7 { ideal, embed } => {
                let i = &ctx.built.ideals[ideal];
                let b = &ctx.built.embeds[embed];
                Some(
                    Job::new(format!("lemma7/{}", c.name), move || {
                        let r = match lemma7_report(i, b) {
                            Ok(r) => r,
                            Err(Error::Lemma7Violation(why)) => return Ok(Outcome::labelled("VIOLATION", false, why)),
                            Err(e) => return Err(e),
                        };
                        let inside = i.contains_ideal(&extend(&contract(i, b)?, b)?)?;
                        let detail = format!(
                            "|mu_A| = {}, |mu_B| = {}, contraction {}",
                            r.mu_a.len(),
                            r.mu_b.len(),
                            r.contraction
                        );
                        Ok(Outcome::check(r.all_hold() && inside, detail))
                    })
                    .expecting(c.expect.clone()),
                )
            }
            _ => None,
        })
        .collect()
}

pub fn lemma8<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    ctx.catalog
        .cases()
        .filter_map(|(_, c)| match &c.body {
            CaseBody::Lemma8 { ideal, embed, prime } => {
                let i = &ctx.built.ideals[ideal];
                let b = &ctx.built.embeds[embed];
                let q = &ctx.built.ideals[prime];
                let expect = c.expect.clone().or_else(|| Some("LIFT".into()));
                Some(
                    Job::new(format!("lemma8/{}", c.name), move || match lemma8_lift(i, b, q) {
                        Ok(p) => {
                            let prime = minimal_primes(&p)?.members == vec![p.clone()];
                            let over = contract(&p, b)? == *q && minimal_primes(i)?.contains(&p);
                            let ok = prime && over && p == extend(q, b)?;
                            Ok(Outcome::labelled(if ok { "LIFT" } else { "BAD_LIFT" }, ok, format!("P = {p}")))
                        }
                        Err(Error::HypothesisFailed { clause, .. }) => {
                            Ok(Outcome::labelled(format!("HypothesisFailed(\"{clause}\")"), false, String::new()))
                        }
                        Err(e) => Err(e),
                    })
                    .expecting(expect),
                )
            }
            _ => None,
        })
        .collect()
}
