//! Suites over polycyclic groups: eq1, lemma1, lemma2, lemma3, prop1.

use std::sync::Arc;

use nilrep_core::nilgroup::library::{abelian, c4_times_heisenberg, free_abelian, heisenberg, heisenberg_mod};
use nilrep_core::nilgroup::{
    abelian_invariants, derived_subgroup, is_abelian, intersect_with_budget, is_torsion_free_abelian, lemma2_check,
    lemma3_central_subgroup, nilpotency_class, pprime_radical, prop1_refine, subgroup_product, torsion_preimage,
    GroupElement, PcPresentation, SubgroupChain, Subgroup,
};
use nilrep_core::Result;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::EntryKind;
use crate::run::{Ctx, Job, Outcome};

fn catalog_groups(ctx: &Ctx) -> Vec<(String, Arc<PcPresentation>)> {
    ctx.catalog
        .entries
        .iter()
        .filter_map(|e| match &e.kind {
            EntryKind::Group(g) => Some((g.name.clone(), ctx.built.groups[&g.name].clone())),
            _ => None,
        })
        .collect()
}

fn random_element(g: &PcPresentation, rng: &mut ChaCha8Rng, span: i64) -> GroupElement {
    (0..g.len())
        .map(|i| match g.orders[i] {
            0 => rng.gen_range(-span..=span),
            e => rng.gen_range(0..e as i64),
        })
        .collect()
}

/// `⟨g_i^{e_i} · (later generators)⟩`, which always has finite index.
fn random_finite_index(g: &Arc<PcPresentation>, rng: &mut ChaCha8Rng, max_step: i64) -> Subgroup {
    let n = g.len();
    let gens: Vec<GroupElement> = (0..n)
        .map(|i| {
            let mut x = vec![0; n];
            x[i] = rng.gen_range(1..=max_step);
            for v in x.iter_mut().skip(i + 1) {
                *v = rng.gen_range(-1..=1);
            }
            g.collect(&word_of(&x)).expect("valid word")
        })
        .collect();
    Subgroup::from_gens(g.clone(), &gens)
}

/// Signed 1-based generator word for an exponent vector.
fn word_of(x: &[i64]) -> Vec<i64> {
    x.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat((i as i64 + 1) * e.signum()).take(e.unsigned_abs() as usize)).collect()
}

pub fn eq1<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let extra = ctx.budgets.random_or(25);
    catalog_groups(ctx)
        .into_iter()
        .enumerate()
        .filter(|(_, (_, g))| nilpotency_class(g) <= 2)
        .map(|(k, (name, g))| {
            Job::new(format!("eq1/{name}"), move || {
                let mut checks = 0;
                let mut bad = Vec::new();
                let mut pairs: Vec<(GroupElement, GroupElement)> = Vec::new();
                for a in g.generators() {
                    for b in g.generators() {
                        pairs.push((a.clone(), b));
                    }
                }
                let mut rng = ctx.rng("eq1", k);
                for _ in 0..extra {
                    pairs.push((random_element(&g, &mut rng, 3), random_element(&g, &mut rng, 3)));
                }
                for (a, b) in &pairs {
                    for u in 1..=5 {
                        for v in 1..=5 {
                            checks += 1;
                            let lhs = g.commutator(&g.pow(a, u), &g.pow(b, v));
                            let rhs = g.pow(&g.commutator(a, b), u * v);
                            if lhs != rhs {
                                bad.push(format!("[{}^{u}, {}^{v}]", g.render(a), g.render(b)));
                            }
                        }
                    }
                }
                Ok(Outcome::check(bad.is_empty(), format!("{checks} checks; failures: {}", bad.join(", "))))
            })
        })
        .collect()
}

/// Group, central finite `D` and a label, for Lemma 1 instances.
fn lemma1_family(i: usize, rng: &mut ChaCha8Rng) -> (Arc<PcPresentation>, Subgroup, String) {
    match i % 3 {
        0 => {
            let k = rng.gen_range(2..=8u64);
            let g = heisenberg_mod(k);
            let d = Subgroup::from_gens(g.clone(), &[vec![0, 0, 1]]);
            (g, d, format!("Heisenberg mod c^{k}"))
        }
        1 => {
            let k = rng.gen_range(2..=8u64);
            let g = abelian(&[0, 0, k]);
            let d = Subgroup::from_gens(g.clone(), &[vec![0, 0, 1]]);
            (g, d, format!("Z^2 x C{k}"))
        }
        _ => {
            let g = c4_times_heisenberg();
            let d = Subgroup::from_gens(g.clone(), &[vec![1, 0, 0, 0]]);
            (g, d, "C4 x Heisenberg".into())
        }
    }
}

/// Drops the `D` coordinate from the generators of `h` and, when `D` is the
/// commutator subgroup, scales the first generator so commutators vanish.
fn avoiding_d(g: &Arc<PcPresentation>, h: &Subgroup, d: &Subgroup) -> Subgroup {
    let pos = d.igs[0].iter().position(|&e| e != 0).expect("D is nontrivial");
    let order = g.orders[pos] as i64;
    let gens: Vec<GroupElement> = h
        .igs
        .iter()
        .map(|x| {
            let mut y = x.clone();
            y[pos] = 0;
            if pos == 2 && !is_abelian(g) {
                y[0] *= order;
            }
            y
        })
        .collect();
    Subgroup::from_gens(g.clone(), &gens)
}

fn lemma1_instance(ctx: &Ctx, i: usize) -> Result<Outcome> {
    let mut rng = ctx.rng("lemma1", i);
    let (g, d, label) = lemma1_family(i, &mut rng);
    let budget = ctx.budgets.cosets;
    let meet = |a: &Subgroup, b: &Subgroup| intersect_with_budget(a, b, budget);
    let mut notes = vec![label];

    // (i): H_j <= H_i agreeing with H_i on D ∩ - and D · - must equal H_i
    let hi = random_finite_index(&g, &mut rng, 3);
    let sub_gens: Vec<GroupElement> = hi.igs.iter().map(|x| g.pow(x, if rng.gen_bool(0.75) { 1 } else { 2 })).collect();
    let hj = Subgroup::from_gens(g.clone(), &sub_gens);
    let same_meet = meet(&d, &hi)? == meet(&d, &hj)?;
    let same_product = subgroup_product(&d, &hi)? == subgroup_product(&d, &hj)?;
    let first = !(same_meet && same_product) || hi == hj;
    notes.push(format!("(i) hypotheses {}", if same_meet && same_product { "held" } else { "failed" }));

    // (ii): a descending chain H_1 > H_2 > H_3 avoiding D
    let mut chain = Vec::new();
    for attempt in 0..20 {
        let mut h = random_finite_index(&g, &mut rng, 4);
        if attempt > 0 {
            h = avoiding_d(&g, &h, &d);
        }
        if meet(&d, &h)?.is_trivial() {
            chain.push(h);
            break;
        }
    }
    while let Some(last) = chain.last().filter(|_| (1..3).contains(&chain.len())) {
        let gens: Vec<GroupElement> = last.igs.iter().map(|x| g.pow(x, rng.gen_range(1..=2))).collect();
        let next = Subgroup::from_gens(g.clone(), &gens);
        chain.push(next);
    }
    let second = if chain.len() == 3 {
        let mut lhs = subgroup_product(&d, &chain[0])?;
        let mut inner = chain[0].clone();
        for h in &chain[1..] {
            lhs = meet(&lhs, &subgroup_product(&d, h)?)?;
            inner = meet(&inner, h)?;
        }
        let ok = lhs == subgroup_product(&d, &inner)?;
        notes.push(format!("(ii) {}", if ok { "holds" } else { "FAILS" }));
        ok
    } else {
        notes.push("(ii) no D-avoiding subgroup drawn".into());
        true
    };
    if !first {
        notes.push("(i) FAILS".into());
    }
    Ok(Outcome::check(first && second, notes.join("; ")))
}

pub fn lemma1<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    (0..ctx.budgets.random_or(200)).map(|i| Job::new(format!("lemma1/random-{i}"), move || lemma1_instance(ctx, i))).collect()
}

fn lemma2_outcome(h: &Subgroup) -> Result<Outcome> {
    let c = lemma2_check(h)?;
    let direct = c.power.igs.iter().all(|x| c.derived_h.contains(x));
    let detail = format!("index {:?}, e = {}, (G')^(e^2) = {}", h.index(), c.exponent, c.power.render());
    Ok(Outcome::check(c.holds && direct, detail))
}

pub fn lemma2<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job> = Vec::new();
    for e in &ctx.catalog.entries {
        if let EntryKind::Subgroup(s) = &e.kind {
            let h = &ctx.built.subgroups[&s.name];
            if nilpotency_class(&h.group) == 2 && h.index().is_some() {
                jobs.push(Job::new(format!("lemma2/{}", s.name), move || lemma2_outcome(h)));
            }
        }
    }
    let g = heisenberg();
    for i in 0..ctx.budgets.random_or(50) {
        let g = g.clone();
        jobs.push(Job::new(format!("lemma2/random-{i}"), move || {
            let mut rng = ctx.rng("lemma2", i);
            let h = loop {
                let (e1, e2) = (rng.gen_range(1..=4i64), rng.gen_range(1..=4i64));
                let e3 = rng.gen_range(1..=(16 / (e1 * e2)).max(1));
                let gens = vec![
                    vec![e1, rng.gen_range(-2..=2), rng.gen_range(-2..=2)],
                    vec![0, e2, rng.gen_range(-2..=2)],
                    vec![0, 0, e3],
                ];
                let h = Subgroup::from_gens(g.clone(), &gens);
                if h.index().is_some_and(|k| k <= 16) {
                    break h;
                }
            };
            lemma2_outcome(&h)
        }));
    }
    jobs
}

fn lemma3_outcome(g: &Arc<PcPresentation>, d: &Subgroup) -> Result<Outcome> {
    let a = lemma3_central_subgroup(g, d)?;
    let central = a.igs.iter().all(|x| g.generators().iter().all(|s| PcPresentation::is_identity(&g.commutator(x, s))));
    let free = is_torsion_free_abelian(&a);
    let index = a.index();
    let detail = format!("|D| = {:?}, A = {}, index {:?}", d.order(), a.render(), index);
    Ok(Outcome::check(central && free && index.is_some(), detail))
}

fn lemma3_random(i: usize, rng: &mut ChaCha8Rng) -> Arc<PcPresentation> {
    let k = rng.gen_range(2..=6u64);
    match i % 4 {
        0 => heisenberg_mod(k),
        1 => abelian(&[k, 0, 0]),
        2 => abelian(&[0, k]),
        _ => free_abelian(rng.gen_range(1..=3)),
    }
}

pub fn lemma3<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job> = Vec::new();
    for (name, g) in catalog_groups(ctx) {
        let d = torsion_preimage(&derived_subgroup(&g));
        if d.order().is_some() {
            jobs.push(Job::new(format!("lemma3/{name}"), move || lemma3_outcome(&g, &d)));
        }
    }
    for i in 0..ctx.budgets.random_or(20) {
        jobs.push(Job::new(format!("lemma3/random-{i}"), move || {
            let g = lemma3_random(i, &mut ctx.rng("lemma3", i));
            let d = torsion_preimage(&derived_subgroup(&g));
            lemma3_outcome(&g, &d)
        }));
    }
    jobs
}

fn is_power_of(mut x: i128, p: i128) -> bool {
    while x > 1 && x % p == 0 {
        x /= p;
    }
    x == 1
}

fn prop1_instance(ctx: &Ctx, i: usize) -> Result<Outcome> {
    let mut rng = ctx.rng("prop1", i);
    let rank = rng.gen_range(1..=3);
    let orders: Vec<u64> = (0..rank).map(|_| [0, 0, 0, 2, 3, 4, 6][rng.gen_range(0..7)]).collect();
    let g = abelian(&orders);
    let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
    let h = loop {
        let h = random_finite_index(&g, &mut rng, 24);
        if h.index().is_some_and(|k| (2..=10_000).contains(&k)) {
            break h;
        }
    };
    let gp = pprime_radical(&h, p)?;
    let contains = h.is_subgroup_of(&gp);
    let top = abelian_invariants(&gp).iter().all(|&x| x > 0 && is_power_of(x, p as i128));
    let rel = h.relative_index(&gp);
    let bottom = rel.is_some_and(|k| k % p != 0);
    let mut brute = true;
    let index = h.index().expect("finite index");
    if index <= 64 {
        let mut coprime = 0;
        for x in h.transversal()? {
            let order = (1..=index as i64).find(|&n| h.contains(&g.pow(&x, n))).expect("order divides the index");
            let pprime = order as u64 % p != 0;
            coprime += usize::from(pprime);
            brute &= pprime == gp.contains(&x);
        }
        brute &= Some(coprime as u64) == rel;
    }
    let detail = format!("orders {orders:?}, p = {p}, |G:H| = {index}, |G_p:H| = {rel:?}");
    Ok(Outcome::check(contains && top && bottom && brute, detail))
}

pub fn prop1<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job> = (0..ctx.budgets.random_or(100))
        .map(|i| Job::new(format!("prop1/random-{i}"), move || prop1_instance(ctx, i)))
        .collect();
    for (name, odd) in [("chain-2^i", 1i64), ("chain-3*2^i", 3)] {
        jobs.push(
            Job::new(format!("prop1/{name}"), move || {
                let z = free_abelian(1);
                let prefix = (0..6).map(|i| Subgroup::from_gens(z.clone(), &[vec![odd << i]])).collect();
                let (refined, tag) = prop1_refine(&SubgroupChain::new(z.clone(), prefix), 6)?;
                let expected = (0..6).all(|i| refined.prefix[i] == Subgroup::from_gens(z.clone(), &[vec![1i64 << i]]));
                let label = if expected { tag.to_string() } else { format!("{tag} with unexpected terms") };
                Ok(Outcome::labelled(label, expected, format!("refined to 2^i Z: {expected}")))
            })
            .expecting(Some("P_GROUP(2)".into())),
        );
    }
    jobs
}
