//! Suites over group rings and modules: induction, culling, prop3, prop4.

use std::sync::Arc;

use nilrep_core::indmod::{
    culls, cyclic_submodule, i_dagger, induce, induction_transitive, is_induced_from, is_irreducible, prop3_embed,
    prop4_check_with, CullCondition, FDModule, GroupRingElem, InducedModule, InducedVerdict, InvariantIdealData,
    ScalarRing,
};
use nilrep_core::linalg::{Matrix, Subspace};
use nilrep_core::nilgroup::library::{free_abelian, heisenberg};
use nilrep_core::nilgroup::{GroupElement, PcPresentation, Subgroup};
use nilrep_core::{Error, Field, Result, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::build::parse_scalar;
use crate::catalog::CaseBody;
use crate::run::{Ctx, Job, Outcome};

fn spow(s: &Scalar, e: i64) -> Scalar {
    let b = if e < 0 { s.inv() } else { s.clone() };
    b.pow(e.unsigned_abs())
}

fn random_unit(f: Field, rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = f.from_i64(rng.gen_range(-6..=6));
        if !s.is_zero() {
            return s;
        }
    }
}

fn random_vector(f: Field, n: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..n).map(|_| f.from_i64(rng.gen_range(-4..=4))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn random_invertible(f: Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let m = Matrix::from_rows(f, (0..n).map(|_| (0..n).map(|_| f.from_i64(rng.gen_range(-4..=4))).collect()).collect());
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// Random invertible matrix commuting with `a`: a polynomial in `a`.
fn commuting_with(a: &Matrix, rng: &mut ChaCha8Rng) -> Matrix {
    let f = a.field;
    loop {
        let mut acc = Matrix::identity(f, a.rows).scale(&f.from_i64(rng.gen_range(-3..=3)));
        let mut power = Matrix::identity(f, a.rows);
        for _ in 0..rng.gen_range(1..=3) {
            power = power.mul(a);
            acc = acc.add(&power.scale(&f.from_i64(rng.gen_range(-3..=3))));
        }
        if acc.inverse().is_some() {
            return acc;
        }
    }
}

/// Finite-index subgroups of `Z^2` with index at most 4.
fn z2_subgroups() -> Vec<Vec<GroupElement>> {
    vec![
        vec![vec![1, 0], vec![0, 2]],
        vec![vec![2, 0], vec![0, 1]],
        vec![vec![1, 1], vec![0, 2]],
        vec![vec![1, 0], vec![0, 3]],
        vec![vec![3, 0], vec![1, 1]],
        vec![vec![2, 0], vec![0, 2]],
        vec![vec![1, 0], vec![0, 4]],
        vec![vec![1, 2], vec![0, 4]],
    ]
}

/// A random module `U` over a subgroup `H` of index at most 4, with `dim U·|G:H| ≤ 8`.
pub fn random_base(rng: &mut ChaCha8Rng) -> Result<(FDModule, Subgroup)> {
    if rng.gen_bool(0.6) {
        let g = free_abelian(2);
        let choices = z2_subgroups();
        let h = Subgroup::from_gens(g.clone(), &choices[rng.gen_range(0..choices.len())]);
        let idx = h.index().ok_or(Error::InfiniteIndex)? as usize;
        let f = Field::prime([3, 5][rng.gen_range(0..2)])?;
        let dim = rng.gen_range(1..=(8 / idx).min(3));
        let a = random_invertible(f, dim, rng);
        let b = commuting_with(&a, rng);
        let u = FDModule::new(h.clone(), f, dim, vec![a, b])?;
        Ok((u, Subgroup::whole(g)))
    } else {
        let g = heisenberg();
        let (p, k) = [(5u64, 2i64), (5, 4), (7, 2), (7, 3), (13, 3), (13, 4)][rng.gen_range(0..6)];
        let f = Field::prime(p)?;
        let h = Subgroup::from_gens(g.clone(), &[vec![k, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let (alpha, beta) = (random_unit(f, rng), random_unit(f, rng));
        // a root of unity of order dividing k
        let gamma = loop {
            let x = random_unit(f, rng);
            if x.pow(k as u64).is_one() {
                break x;
            }
        };
        let action = h
            .igs
            .iter()
            .map(|x| {
                let s = &(&spow(&alpha, x[0] / k) * &spow(&beta, x[1])) * &spow(&gamma, x[2]);
                Matrix::from_rows(f, vec![vec![s]])
            })
            .collect();
        let u = FDModule::new(h, f, 1, action)?;
        Ok((u, Subgroup::whole(g)))
    }
}

/// Subgroup generated by `h` and the squares of the generators of `g`.
fn square_closure(h: &Subgroup, g: &Subgroup) -> Subgroup {
    let grp = &h.group;
    let mut gens = h.igs.clone();
    gens.extend(g.igs.iter().map(|x| grp.pow(x, 2)));
    Subgroup::from_gens(grp.clone(), &gens)
}

/// Every check of the induction suite for one `(U, H ≤ G)`.
fn induction_checks(u: &FDModule, top: &Subgroup, budget: usize) -> Result<Outcome> {
    let h = &u.acting;
    let idx = h.relative_index(top).ok_or(Error::InfiniteIndex)? as usize;
    let w = induce(u, top)?;
    let dim_ok = w.total.dim == idx * u.dim && w.transversal.len() == idx;
    let round = is_induced_from(&w.total, h, budget)?;
    let round_ok = !matches!(round, InducedVerdict::NotInduced);
    let middle = square_closure(h, top);
    let t = induction_transitive(u, &middle, top)?;
    let x = &t.base_change;
    let trans_ok = x.inverse().is_some()
        && t.nested.total.dim == t.direct.total.dim
        && t.nested.total.action.iter().zip(&t.direct.total.action).all(|(a, b)| a.mul(x) == x.mul(b));
    let irr_w = is_irreducible(&w.total)?;
    let lemma9 = !irr_w || is_irreducible(u)?;
    let detail = format!(
        "|G:H| = {idx}, dim U = {}, round trip {}, |G:K| = {}, W irreducible {irr_w}",
        u.dim,
        round.label(),
        middle.relative_index(top).unwrap_or(0)
    );
    Ok(Outcome::check(dim_ok && round_ok && trans_ok && lemma9, detail))
}

pub fn induction<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let budget = ctx.budgets.vector_trials;
    let mut jobs: Vec<Job> = ctx
        .built
        .induces
        .iter()
        .map(|(name, spec)| Job::new(format!("induction/{name}"), move || induction_checks(&spec.base, &spec.over, budget)))
        .collect();
    jobs.sort_by(|a, b| a.name.cmp(&b.name));
    for n in 0..ctx.budgets.random_or(36) {
        jobs.push(Job::new(format!("induction/random-{n}"), move || {
            let mut rng = ctx.rng("induction", n);
            let (u, top) = random_base(&mut rng)?;
            induction_checks(&u, &top, budget)
        }));
    }
    jobs
}

fn refusal_label(c: CullCondition) -> &'static str {
    match c {
        CullCondition::Proper => "REFUSED(a)",
        CullCondition::Supplement => "REFUSED(b)",
        CullCondition::Field => "REFUSED(c)",
    }
}

fn is_normal_in(n: &Subgroup, g: &PcPresentation) -> bool {
    n.igs.iter().all(|x| {
        g.generators().iter().all(|y| n.contains(&g.mul(&g.mul(&g.inv(y), x), y)) && n.contains(&g.mul(&g.mul(y, x), &g.inv(y))))
    })
}

pub fn culling<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let mut jobs = Vec::new();
    for (k, (_, c)) in ctx.catalog.cases().enumerate() {
        let CaseBody::Culling { data, module, u } = &c.body else { continue };
        let data = &ctx.built.data[data];
        let v = &ctx.built.modules[module];
        let u = u.clone();
        jobs.push(
            Job::new(format!("culling/{}", c.name), move || {
                let u: Vec<Vec<Scalar>> = u
                    .iter()
                    .map(|r| r.iter().map(|s| parse_scalar(v.field, s)).collect::<Option<Vec<_>>>())
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::InvalidInput("vector entry outside the field".into()))?;
                if u.iter().any(|r| r.len() != v.dim) {
                    return Err(Error::InvalidInput(format!("vectors of U must have length {}", v.dim)));
                }
                match culls(data, &u, v) {
                    Ok(cert) => {
                        let mut rng = ctx.rng("culling", k);
                        let mut bigger = u.clone();
                        bigger.push(random_vector(v.field, v.dim, &mut rng));
                        let stable = culls(data, &bigger, v).is_ok();
                        let ok = cert.recheck() && stable;
                        let detail = format!("dim VI = {}, larger U still culled: {stable}", cert.vi.len());
                        Ok(Outcome::labelled(if ok { "CULLS" } else { "BAD_CERTIFICATE" }, ok, detail))
                    }
                    Err(r) => Ok(Outcome::labelled(refusal_label(r.failed), true, format!("{}: {}", r.failed, r.detail))),
                }
            })
            .expecting(c.expect.clone()),
        );
    }
    let mut names: Vec<&String> = ctx.built.data.keys().collect();
    names.sort();
    for name in names {
        let data = &ctx.built.data[name];
        jobs.push(Job::new(format!("culling/dagger/{name}"), move || {
            let d = i_dagger(data)?;
            let ok = d.is_subgroup_of(&data.k) && is_normal_in(&d, &data.group);
            Ok(Outcome::check(ok, format!("I† = {}", d.render())))
        }));
    }
    jobs
}

/// `a·c = b`, integrality of `c·d` and `b·d ∈ a·RG` for one pair.
fn prop3_pair(m: &FDModule, a: &[Scalar], b: &[Scalar]) -> Result<bool> {
    let e = prop3_embed(m, a, b)?;
    let hits = e.c.action_on(m)?.vec_mul(a) == b;
    let integral = e.c.terms.values().all(|c| {
        let scaled = c * &c.field().from_i64(e.d);
        scaled.as_rational().is_none_or(|q| q.is_integer())
    });
    let cyc = cyclic_submodule(m, a)?;
    let scaled: Vec<Scalar> = b.iter().map(|x| x * &m.field.from_i64(e.d)).collect();
    let inside = Subspace::from_vectors(m.field, m.dim, &cyc.basis).contains(&scaled);
    Ok(hits && integral && inside && e.d > 0)
}

fn prop3_pairs(m: &FDModule, rng: &mut ChaCha8Rng, pairs: usize) -> Result<Outcome> {
    if !is_irreducible(m)? {
        return Ok(Outcome::labelled("NOT_IRREDUCIBLE", false, m.render()));
    }
    let mut good = 0;
    for _ in 0..pairs {
        let a = random_vector(m.field, m.dim, rng);
        let b = random_vector(m.field, m.dim, rng);
        good += usize::from(prop3_pair(m, &a, &b)?);
    }
    Ok(Outcome::check(good == pairs, format!("{good}/{pairs} pairs, dim {} over {}", m.dim, m.field)))
}

/// Random irreducible module over `Z`: GF(p) by rejection, Q by a companion matrix.
fn random_irreducible(rng: &mut ChaCha8Rng) -> Result<FDModule> {
    let g = free_abelian(1);
    let whole = Subgroup::whole(g);
    if rng.gen_bool(0.7) {
        let f = Field::prime([5, 7, 11][rng.gen_range(0..3)])?;
        let dim = rng.gen_range(2..=3);
        loop {
            let m = FDModule::new(whole.clone(), f, dim, vec![random_invertible(f, dim, rng)])?;
            if is_irreducible(&m)? {
                return Ok(m);
            }
        }
    } else {
        let f = Field::Rationals;
        let (dim, n) = if rng.gen_bool(0.5) { (2, [2, 3, 5, 6, 7][rng.gen_range(0..5)]) } else { (3, [2, 3, 5][rng.gen_range(0..3)]) };
        // companion matrix of x^dim - n
        let mut rows = vec![vec![f.zero(); dim]; dim];
        for (i, row) in rows.iter_mut().enumerate().take(dim - 1) {
            row[i + 1] = f.one();
        }
        rows[dim - 1][0] = f.from_i64(n);
        FDModule::new(whole, f, dim, vec![Matrix::from_rows(f, rows)])
    }
}

pub fn prop3<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let mut jobs = Vec::new();
    for (k, (_, c)) in ctx.catalog.cases().enumerate() {
        let CaseBody::Prop3 { module } = &c.body else { continue };
        let m = &ctx.built.modules[module];
        jobs.push(
            Job::new(format!("prop3/{}", c.name), move || prop3_pairs(m, &mut ctx.rng("prop3", k), 20))
                .expecting(c.expect.clone()),
        );
    }
    for n in 0..ctx.budgets.random_or(12) {
        jobs.push(Job::new(format!("prop3/random-{n}"), move || {
            let mut rng = ctx.rng("prop3-random", n);
            let m = random_irreducible(&mut rng)?;
            prop3_pairs(&m, &mut rng, 20)
        }));
    }
    jobs
}

/// Smallest nonzero cyclic submodule among the basis vectors and a few random ones: irreducible.
fn irreducible_piece(m: &FDModule, rng: &mut ChaCha8Rng) -> Result<FDModule> {
    let mut best: Option<FDModule> = None;
    let mut candidates: Vec<Vec<Scalar>> = (0..m.dim).map(|i| m.basis_vector(i)).collect();
    candidates.extend((0..20).map(|_| random_vector(m.field, m.dim, rng)));
    for v in candidates {
        let s = cyclic_submodule(m, &v)?;
        if best.as_ref().is_none_or(|b| s.module.dim < b.dim) {
            best = Some(s.module);
        }
    }
    let piece = best.expect("module is nonzero");
    if !is_irreducible(&piece)? {
        return Err(Error::ConclusionFailed("no irreducible cyclic submodule found".into()));
    }
    Ok(piece)
}

/// prop4_check at `d`, then μ and verdict equality over random generating vectors, then Prop 3 pairs.
fn prop4_checks(ctx: &Ctx, stream: &str, k: usize, w: &InducedModule, data: &InvariantIdealData, d: &[Scalar]) -> Result<Outcome> {
    let mut rng = ctx.rng(stream, k);
    let delta = ctx.budgets.annihilator_degree;
    let r = prop4_check_with(w, data, d, delta)?;
    let f = w.total.field;
    let mut same = true;
    let mut tried = 0;
    while tried < 10 {
        let e = random_vector(f, w.total.dim, &mut rng);
        if w.total.spin(std::slice::from_ref(&e)).rank() < w.total.dim {
            continue;
        }
        tried += 1;
        let s = prop4_check_with(w, data, &e, delta)?;
        same &= s.mu_annihilator == r.mu_annihilator
            && s.mu_module == r.mu_module
            && s.torsion == r.torsion
            && s.all_hold() == r.all_hold();
    }
    let piece = irreducible_piece(&w.total, &mut rng)?;
    let p3 = prop3_pairs(&piece, &mut rng, 20)?;
    let ok = r.all_hold() && r.mu_module == r.mu_annihilator && same && p3.ok;
    let detail = format!(
        "J = {}, μ = {}, |K/I†| = {}, prop3 {}",
        r.annihilator,
        r.mu_annihilator.render(),
        r.dagger_index,
        p3.detail
    );
    Ok(Outcome::check(ok, detail))
}

/// `Z^2 = ⟨t⟩×⟨s⟩`, `H = ⟨t, s²⟩`, `U: t ↦ α, s² ↦ v` over GF(p), `I = (p, t − α)` over `Z` on `K = ⟨t⟩`.
pub fn random_prop4(rng: &mut ChaCha8Rng) -> Result<(InducedModule, InvariantIdealData)> {
    let g: Arc<PcPresentation> = free_abelian(2);
    let p = [5i64, 7][rng.gen_range(0..2)];
    let f = Field::prime(p as u64)?;
    let (alpha, v) = (random_unit(f, rng), random_unit(f, rng));
    let h = Subgroup::from_gens(g.clone(), &[vec![1, 0], vec![0, 2]]);
    let action = h
        .igs
        .iter()
        .map(|x| Matrix::from_rows(f, vec![vec![&spow(&alpha, x[0]) * &spow(&v, x[1] / 2)]]))
        .collect();
    let u = FDModule::new(h, f, 1, action)?;
    let w = induce(&u, &Subgroup::whole(g.clone()))?;
    let q = Field::Rationals;
    let a = alpha.residue().expect("prime field") as i64;
    let gens = vec![
        GroupRingElem::from_terms(g.clone(), ScalarRing::Integers, [(vec![0, 0], q.from_i64(p))]),
        GroupRingElem::from_terms(g.clone(), ScalarRing::Integers, [(vec![1, 0], q.one()), (vec![0, 0], q.from_i64(-a))]),
    ];
    let k = Subgroup::from_gens(g, &[vec![1, 0]]);
    Ok((w, InvariantIdealData::new(k, ScalarRing::Integers, gens)?))
}

pub fn prop4<'a>(ctx: &'a Ctx<'a>) -> Vec<Job<'a>> {
    let mut jobs = Vec::new();
    for (k, (_, c)) in ctx.catalog.cases().enumerate() {
        let CaseBody::Prop4 { induce: ind, data, d } = &c.body else { continue };
        let spec = &ctx.built.induces[ind];
        let data = &ctx.built.data[data];
        let d = d.clone();
        jobs.push(
            Job::new(format!("prop4/{}", c.name), move || {
                let w = induce(&spec.base, &spec.over)?;
                let d = d
                    .iter()
                    .map(|s| parse_scalar(w.total.field, s))
                    .collect::<Option<Vec<_>>>()
                    .filter(|v| v.len() == w.total.dim)
                    .ok_or_else(|| Error::InvalidInput("d is not a vector of W".into()))?;
                prop4_checks(ctx, "prop4", k, &w, data, &d)
            })
            .expecting(c.expect.clone()),
        );
    }
    for n in 0..ctx.budgets.random_or(12) {
        jobs.push(Job::new(format!("prop4/random-{n}"), move || {
            let mut rng = ctx.rng("prop4-random", n);
            let (w, data) = random_prop4(&mut rng)?;
            let d = loop {
                let e = random_vector(w.total.field, w.total.dim, &mut rng);
                if w.total.spin(std::slice::from_ref(&e)).rank() == w.total.dim {
                    break e;
                }
            };
            prop4_checks(ctx, "prop4-checks", n, &w, &data, &d)
        }));
    }
    jobs
}
