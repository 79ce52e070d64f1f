//! Acceptance criteria 1 to 12, one line each.

mod oracles;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use nilrep_cli::parse::parse_str;
use nilrep_cli::report::{Budgets, RunReport, Status, SuiteReport};
use nilrep_cli::run::run_suite;
use nilrep_cli::DEFAULT_CATALOG;
use nilrep_core::indmod::{induce, prop4_check, FDModule, GroupRingElem, InvariantIdealData, ScalarRing};
use nilrep_core::laurent::{contract, minimal_primes, FiniteIndexEmbedding, LaurentIdeal, LaurentPoly, LaurentRing};
use nilrep_core::linalg::Matrix;
use nilrep_core::nilgroup::library::{abelian, c4_times_heisenberg, heisenberg};
use nilrep_core::nilgroup::{intersect_with_budget, lemma2_check, subgroup_product, Subgroup, ORBIT_BUDGET};
use nilrep_core::Field;
use oracles::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;

type Check = fn() -> Result<String, String>;

struct Criterion {
    number: u32,
    title: &'static str,
    limit: Duration,
    check: Check,
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn default_run(suite: &str) -> Result<RunReport, String> {
    let cat = parse_str(DEFAULT_CATALOG).map_err(|e| e.to_string())?;
    run_suite(&cat, suite, Budgets::default(), SEED).map_err(|e| e.to_string())
}

fn suite<'r>(r: &'r RunReport, name: &str) -> &'r SuiteReport {
    r.suites.iter().find(|s| s.suite == name).expect("suite present")
}

fn all_pass(s: &SuiteReport) -> Result<(), String> {
    match s.cases.iter().find(|c| c.status != Status::Pass) {
        None => Ok(()),
        Some(c) => Err(format!("{} {:?}: {} {}", c.name, c.status, c.verdict, c.detail)),
    }
}

fn random_count(s: &SuiteReport) -> usize {
    s.cases.iter().filter(|c| c.name.contains("/random-")).count()
}

fn criterion_1() -> Result<String, String> {
    let mut checks = 0;
    for g in [heisenberg(), c4_times_heisenberg()] {
        let offset = g.len() - 3;
        let rep = |v: &[i64]| (if offset == 1 { v[0].rem_euclid(4) } else { 0 }, heis_rep(&v[offset..]));
        let gens = g.generators();
        // the representation is a homomorphism on the generators
        for x in &gens {
            for y in &gens {
                let (tx, mx) = rep(x);
                let (ty, my) = rep(y);
                let (tz, mz) = rep(&g.mul(x, y));
                ensure(tz == (tx + ty) % 4 && mz == m3_mul(&mx, &my), "matrix model is not a homomorphism")?;
            }
        }
        for a in &gens {
            for b in &gens {
                for u in 1..=5 {
                    for v in 1..=5 {
                        checks += 1;
                        let lhs = g.commutator(&g.pow(a, u), &g.pow(b, v));
                        let rhs = g.pow(&g.commutator(a, b), u * v);
                        let model = m3_comm(&m3_pow(&rep(a).1, u), &m3_pow(&rep(b).1, v));
                        let model_rhs = m3_pow(&m3_comm(&rep(a).1, &rep(b).1), u * v);
                        ensure(lhs == rhs, format!("[{}^{u},{}^{v}]", g.render(a), g.render(b)))?;
                        ensure(rep(&lhs).1 == model && model == model_rhs, "matrix model disagrees")?;
                    }
                }
            }
        }
    }
    ensure(checks >= 50, "too few checks")?;
    Ok(format!("{checks} commutator identities, each confirmed in a 3x3 matrix model"))
}

/// Each generator raised to the power 1 or 2.
fn powers(rng: &mut ChaCha8Rng, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    gens.iter()
        .map(|x| {
            let e = rng.gen_range(1..=2);
            x.iter().map(|c| c * e).collect()
        })
        .collect()
}

/// Lemma 1 on `Z^2 × C_k` against explicit subsets of `Z_6^2 × C_k`.
fn lemma1_brute(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let k = rng.gen_range(2..=8i64);
    let g = abelian(&[0, 0, k as u64]);
    let mods = [6, 6, k];
    let d_gens = vec![vec![0, 0, 1]];
    let draw = |rng: &mut ChaCha8Rng, avoid: bool| -> Vec<Vec<i64>> {
        let mut gens = vec![vec![6, 0, 0], vec![0, 6, 0]];
        for _ in 0..2 {
            gens.push(vec![rng.gen_range(0..6), rng.gen_range(0..6), if avoid { 0 } else { rng.gen_range(0..k) }]);
        }
        gens
    };
    let sub = |gens: &[Vec<i64>]| Subgroup::from_gens(g.clone(), gens);
    let as_set = |h: &Subgroup| -> BTreeSet<Vec<i64>> {
        let mut s = BTreeSet::new();
        for x in 0..6 {
            for y in 0..6 {
                for z in 0..k {
                    if h.contains(&[x, y, z]) {
                        s.insert(vec![x, y, z]);
                    }
                }
            }
        }
        s
    };
    let d = sub(&d_gens);
    let d_set = span(&mods, &d_gens);
    let meet = |a: &Subgroup, b: &Subgroup| intersect_with_budget(a, b, ORBIT_BUDGET).map_err(|e| e.to_string());
    let prod = |a: &Subgroup, b: &Subgroup| subgroup_product(a, b).map_err(|e| e.to_string());

    // (i): H_j ≤ H_i
    let gi = draw(rng, false);
    let mut gj = powers(rng, &gi);
    gj.extend([vec![6, 0, 0], vec![0, 6, 0]]);
    let (hi, hj) = (sub(&gi), sub(&gj));
    let (si, sj) = (span(&mods, &gi), span(&mods, &gj));
    ensure(as_set(&hi) == si && as_set(&hj) == sj, "subgroup membership disagrees with closure")?;
    let core_meet = (meet(&d, &hi)?, meet(&d, &hj)?);
    let core_prod = (prod(&d, &hi)?, prod(&d, &hj)?);
    let brute_meet: (BTreeSet<_>, BTreeSet<_>) =
        (d_set.intersection(&si).cloned().collect(), d_set.intersection(&sj).cloned().collect());
    let brute_prod = (set_product(&mods, &d_set, &si), set_product(&mods, &d_set, &sj));
    ensure(as_set(&core_meet.0) == brute_meet.0 && as_set(&core_meet.1) == brute_meet.1, "intersection disagrees")?;
    ensure(as_set(&core_prod.0) == brute_prod.0 && as_set(&core_prod.1) == brute_prod.1, "product disagrees")?;
    if brute_meet.0 == brute_meet.1 && brute_prod.0 == brute_prod.1 {
        ensure(si == sj && hi == hj, format!("(i) fails for {} > {}", hi.render(), hj.render()))?;
    }

    // (ii): a descending chain avoiding D
    let mut chain = vec![draw(rng, true)];
    for _ in 0..2 {
        let mut next = powers(rng, chain.last().expect("nonempty"));
        next.extend([vec![6, 0, 0], vec![0, 6, 0]]);
        chain.push(next);
    }
    let hs: Vec<Subgroup> = chain.iter().map(|c| sub(c)).collect();
    let mut lhs = prod(&d, &hs[0])?;
    let mut inner = hs[0].clone();
    for h in &hs[1..] {
        lhs = meet(&lhs, &prod(&d, h)?)?;
        inner = meet(&inner, h)?;
    }
    let sets: Vec<BTreeSet<Vec<i64>>> = chain.iter().map(|c| span(&mods, c)).collect();
    let brute_lhs = sets.iter().map(|s| set_product(&mods, &d_set, s)).reduce(|a, b| a.intersection(&b).cloned().collect());
    let brute_inner = sets.iter().cloned().reduce(|a, b| a.intersection(&b).cloned().collect()).expect("nonempty");
    let brute_rhs = set_product(&mods, &d_set, &brute_inner);
    ensure(brute_lhs.as_ref() == Some(&brute_rhs), "(ii) fails on explicit sets")?;
    ensure(as_set(&lhs) == brute_rhs && lhs == prod(&d, &inner)?, "(ii) fails")?;
    Ok(())
}

fn criterion_2() -> Result<String, String> {
    let r = run_suite(&parse_str("").map_err(|e| e.to_string())?, "lemma1", Budgets::default(), SEED)
        .map_err(|e| e.to_string())?;
    let s = suite(&r, "lemma1");
    all_pass(s)?;
    ensure(random_count(s) >= 200, "fewer than 200 instances")?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..60 {
        lemma1_brute(&mut rng)?;
    }
    Ok(format!("{} suite instances; 60 instances matched against explicit subsets", s.cases.len()))
}

fn criterion_3() -> Result<String, String> {
    let g = heisenberg();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut done = 0;
    while done < 50 {
        let (e1, e2) = (rng.gen_range(1..=4i64), rng.gen_range(1..=4i64));
        let gens = vec![
            vec![e1, rng.gen_range(-2..=2), rng.gen_range(-2..=2)],
            vec![0, e2, rng.gen_range(-2..=2)],
            vec![0, 0, rng.gen_range(1..=4)],
        ];
        let h = Subgroup::from_gens(g.clone(), &gens);
        if h.index().is_none_or(|k| k > 16) {
            continue;
        }
        done += 1;
        let c = lemma2_check(&h).map_err(|e| e.to_string())?;
        // [H, H] = <c^d>, d the gcd of the 2x2 minors of the (a, b) parts
        let mut d = 0i64;
        for (i, x) in h.igs.iter().enumerate() {
            for y in &h.igs[i + 1..] {
                d = num_gcd(d, x[0] * y[1] - x[1] * y[0]);
            }
        }
        let expected = Subgroup::from_gens(g.clone(), &[vec![0, 0, d]]);
        ensure(c.derived_h == expected, format!("[H,H] for {}", h.render()))?;
        let e = c.exponent as i64;
        ensure(d != 0 && (e * e) % d == 0 && c.holds, format!("(G')^(e^2) not in [H,H] for {}", h.render()))?;
        // every element of a box has its e-th power in H
        for _ in 0..20 {
            let x = vec![rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-5..=5)];
            ensure(h.contains(&g.pow(&x, e)), "e is not an exponent of G/H")?;
        }
    }
    Ok("50 subgroups of index <= 16; [H,H] matches the minor formula".into())
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

/// `|G:H|`, membership and the order of `x` modulo `H = row span of b` in `Z^2`.
fn lattice_order(b: &[[i64; 2]; 2], x: [i64; 2]) -> i64 {
    let det = (b[0][0] * b[1][1] - b[0][1] * b[1][0]).abs();
    // x = y b with y = x adj(b) / det(b)
    let y = [x[0] * b[1][1] - x[1] * b[1][0], -x[0] * b[0][1] + x[1] * b[0][0]];
    (1..=det).find(|n| y.iter().all(|c| (n * c) % det == 0)).expect("det annihilates G/H")
}

fn criterion_4() -> Result<String, String> {
    let r = default_run("prop1")?;
    let s = suite(&r, "prop1");
    all_pass(s)?;
    ensure(random_count(s) >= 100, "fewer than 100 random instances")?;
    let g = abelian(&[0, 0]);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut done = 0;
    while done < 80 {
        let b = [[rng.gen_range(1..=8i64), rng.gen_range(-8..=8)], [0, rng.gen_range(1..=8i64)]];
        let det = b[0][0] * b[1][1];
        if !(2..=64).contains(&det) {
            continue;
        }
        done += 1;
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let h = Subgroup::from_gens(g.clone(), &[b[0].to_vec(), b[1].to_vec()]);
        let gp = nilrep_core::nilgroup::pprime_radical(&h, p).map_err(|e| e.to_string())?;
        let mut coprime = 0;
        for x in 0..det {
            for y in 0..det {
                let n = lattice_order(&b, [x, y]);
                ensure(h.contains(&[x, y]) == (n == 1), "membership disagrees")?;
                let keep = n as u64 % p != 0;
                coprime += i64::from(keep);
                ensure(gp.contains(&[x, y]) == keep, format!("p = {p}, H = {b:?}, x = ({x},{y})"))?;
            }
        }
        // the box meets each coset of H exactly det times
        ensure(h.relative_index(&gp) == Some((coprime / det) as u64), "index |G_p : H| disagrees")?;
    }
    Ok(format!("{} suite cases; 80 lattices of index <= 64 checked element by element", s.cases.len()))
}

fn criterion_5() -> Result<String, String> {
    let r = default_run("lemma3")?;
    let s = suite(&r, "lemma3");
    all_pass(s)?;
    ensure(s.cases.len() >= 20, "fewer than 20 instances")?;
    for k in 2..=6u64 {
        let g = nilrep_core::nilgroup::library::heisenberg_mod(k);
        let d = Subgroup::from_gens(g.clone(), &[vec![0, 0, 1]]);
        let a = nilrep_core::nilgroup::lemma3_central_subgroup(&g, &d).map_err(|e| e.to_string())?;
        let k = k as i64;
        // a^x b^y c^z is central exactly when k divides x and y
        ensure(a.igs.iter().all(|x| x[0] % k == 0 && x[1] % k == 0), format!("A not central for k = {k}"))?;
        ensure(a.contains(&[k * k, 0, 0]) && a.contains(&[0, k * k, 0]), format!("A too small for k = {k}"))?;
        ensure(a.igs.iter().all(|x| x[0] != 0 || x[1] != 0), format!("A has torsion for k = {k}"))?;
    }
    Ok(format!("{} suite cases; Heis mod k checked for k = 2..6", s.cases.len()))
}

fn to_laurent(ring: LaurentRing, u: &U, shift: i64) -> LaurentPoly {
    LaurentPoly::from_terms(ring, u.c.iter().enumerate().map(|(i, c)| (vec![i as i64 + shift], c.clone())))
}

fn principal(ring: LaurentRing, u: &U, shift: i64) -> Result<LaurentIdeal, String> {
    LaurentIdeal::new(ring, vec![to_laurent(ring, u, shift)]).map_err(|e| e.to_string())
}

/// A product of pool irreducibles of degree at most `max_deg`, with its distinct factors.
fn random_product(rng: &mut ChaCha8Rng, pool: &[U], max_deg: usize) -> (U, Vec<U>) {
    let f = pool[0].f;
    let mut prod = U::from_i64(f, &[1]);
    let mut factors: Vec<U> = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let g = &pool[rng.gen_range(0..pool.len())];
        let e = rng.gen_range(1..=2);
        for _ in 0..e {
            if prod.deg() + g.deg() <= max_deg {
                prod = prod.mul(g);
                if !factors.contains(g) {
                    factors.push(g.clone());
                }
            }
        }
    }
    if factors.is_empty() {
        prod = pool[0].clone();
        factors.push(pool[0].clone());
    }
    (prod, factors)
}

fn fields() -> [Field; 3] {
    [Field::prime(5).expect("prime"), Field::prime(7).expect("prime"), Field::Rationals]
}

fn criterion_6() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pools: Vec<Vec<U>> = fields().iter().map(|&f| irreducible_pool(f)).collect();
    for n in 0..50 {
        let pool = &pools[n % 3];
        let ring = LaurentRing::new(1, pool[0].f);
        let (f, factors) = random_product(&mut rng, pool, 12);
        let shift = rng.gen_range(-2..=2);
        let ideal = principal(ring, &f, shift)?;
        let mu = minimal_primes(&ideal).map_err(|e| e.to_string())?;
        ensure(mu.len() == factors.len(), format!("|mu| = {} for {f:?}", mu.len()))?;
        for g in &factors {
            ensure(mu.contains(&principal(ring, g, 0)?), "a factor is missing from mu")?;
        }
        let m = rng.gen_range(2..=3);
        let emb = FiniteIndexEmbedding::new(vec![vec![m as i64]]).map_err(|e| e.to_string())?;
        let c = contract(&ideal, &emb).map_err(|e| e.to_string())?;
        let expected = contraction_oracle(&f, m, 12).ok_or("oracle found no dependency")?;
        ensure(c == principal(c.ring, &expected, 0)?, format!("contraction of {f:?} under x -> x^{m}"))?;
    }
    Ok("50 principal ideals over GF(5), GF(7) and Q agree on mu and contraction".into())
}

fn criterion_7() -> Result<String, String> {
    let r = default_run("lemma7")?;
    let s = suite(&r, "lemma7");
    all_pass(s)?;
    ensure(s.cases.len() >= 25, "fewer than 25 instances")?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let pools: Vec<Vec<U>> = fields().iter().map(|&f| irreducible_pool(f)).collect();
    for n in 0..30 {
        let pool = &pools[n % 3];
        let ring = LaurentRing::new(1, pool[0].f);
        let (f, factors) = random_product(&mut rng, pool, 9);
        let m = rng.gen_range(2..=3);
        let emb = FiniteIndexEmbedding::new(vec![vec![m as i64]]).map_err(|e| e.to_string())?;
        let rep = nilrep_core::laurent::lemma7_report(&principal(ring, &f, 0)?, &emb).map_err(|e| e.to_string())?;
        // P ∩ kB for P = (g) is generated by the minimal polynomial of a root of g raised to m
        let mut below: Vec<U> = Vec::new();
        for g in &factors {
            let h = contraction_oracle(g, m, 3).ok_or("oracle found no dependency")?;
            if !below.contains(&h) {
                below.push(h);
            }
        }
        ensure(rep.mu_b.len() == below.len(), format!("|mu(I ∩ kB)| = {} for {f:?}", rep.mu_b.len()))?;
        for h in &below {
            ensure(rep.mu_b.contains(&principal(rep.contraction.ring, h, 0)?), "contracted prime missing")?;
        }
        ensure(rep.all_hold() && rep.mu_b.len() <= rep.mu_a.len(), "clauses fail")?;
    }
    Ok(format!("{} suite cases; 30 principal ideals match the contraction oracle", s.cases.len()))
}

fn criterion_8() -> Result<String, String> {
    let r = default_run("lemma8")?;
    let s = suite(&r, "lemma8");
    all_pass(s)?;
    let lifts = s.cases.iter().filter(|c| c.verdict == "LIFT").count();
    let refused = s.cases.iter().filter(|c| c.verdict.starts_with("HypothesisFailed(")).count();
    ensure(lifts >= 10 && refused >= 5, format!("{lifts} lifts, {refused} refusals"))?;
    // Q = (q) lifts uniquely exactly when q(x^m) stays irreducible
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let (mut unique, mut split) = (0, 0);
    for n in 0..24 {
        let p = [5u64, 7][n % 2];
        let f = Field::prime(p).expect("prime");
        let pool = irreducible_pool(f);
        let ring = LaurentRing::new(1, f);
        let m = rng.gen_range(2..=3usize);
        let q = pool[rng.gen_range(0..pool.len())].clone();
        let lifted = q.inflate(m);
        let emb = FiniteIndexEmbedding::new(vec![vec![m as i64]]).map_err(|e| e.to_string())?;
        let ideal = principal(ring, &lifted, 0)?;
        let qi = principal(ring, &q, 0)?;
        let over = distinct_factors_mod_p(&lifted, p);
        for g in &over {
            ensure(contraction_oracle(g, m, 3).as_ref() == Some(&q.monic()), "factor does not lie over Q")?;
        }
        match nilrep_core::laurent::lemma8_lift(&ideal, &emb, &qi) {
            Ok(lift) => {
                ensure(over.len() == 1 && lift == ideal, format!("unexpected lift of {q:?} with m = {m}"))?;
                unique += 1;
            }
            Err(nilrep_core::Error::HypothesisFailed { clause, .. }) => {
                ensure(over.len() > 1 && clause == "unique P", format!("refused {q:?} with m = {m}: {clause}"))?;
                split += 1;
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    ensure(unique > 0 && split > 0, "oracle instances did not exercise both outcomes")?;
    Ok(format!("{lifts} lifts and {refused} refusals in the suite; oracle {unique} unique, {split} split"))
}

fn criterion_9() -> Result<String, String> {
    let r = default_run("induction")?;
    let s = suite(&r, "induction");
    all_pass(s)?;
    ensure(random_count(s) >= 30, "fewer than 30 random instances")?;
    // induce a character of <t, s^k> to Z^2 and compare with the explicit matrices
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let g = abelian(&[0, 0]);
    for _ in 0..20 {
        let p = [5u64, 7, 11][rng.gen_range(0..3)];
        let f = Field::prime(p).expect("prime");
        let k = rng.gen_range(2..=4i64);
        let (alpha, v) = (f.from_i64(rng.gen_range(1..p as i64)), f.from_i64(rng.gen_range(1..p as i64)));
        let h = Subgroup::from_gens(g.clone(), &[vec![1, 0], vec![0, k]]);
        let act = h.igs.iter().map(|x| Matrix::from_rows(f, vec![vec![&alpha.pow(x[0] as u64) * &v.pow((x[1] / k) as u64)]])).collect();
        let u = FDModule::new(h, f, 1, act).map_err(|e| e.to_string())?;
        let w = induce(&u, &Subgroup::whole(g.clone())).map_err(|e| e.to_string())?;
        ensure(w.total.dim == k as usize, "dimension is not the index")?;
        let t = w.total.matrix_of(&[1, 0]).map_err(|e| e.to_string())?;
        let sm = w.total.matrix_of(&[0, 1]).map_err(|e| e.to_string())?;
        let id = Matrix::identity(f, k as usize);
        ensure(t == id.scale(&alpha), "t does not act as alpha")?;
        ensure(sm.pow(k) == Some(id.scale(&v)), "s^k does not act as v")?;
        ensure((1..k).all(|j| sm.pow(j).is_some_and(|x| x != id.scale(&x.row(0)[0]))), "s^j scalar too early")?;
    }
    Ok(format!("{} suite cases; 20 induced characters match explicit matrices", s.cases.len()))
}

fn criterion_10() -> Result<String, String> {
    let r = default_run("prop3")?;
    let p3 = suite(&r, "prop3");
    all_pass(p3)?;
    let r = default_run("prop4")?;
    let p4 = suite(&r, "prop4");
    all_pass(p4)?;
    ensure(random_count(p3) >= 10 && random_count(p4) >= 10, "fewer than 10 random analogues")?;
    // Z^2 ≥ <t, s^2>, t -> alpha, s^2 -> v: s acts on W with minimal polynomial x^2 - v
    let g = abelian(&[0, 0]);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    let mut instances = vec![(5u64, 2i64, 3i64), (5, 2, 4)];
    for _ in 0..8 {
        let p = [5u64, 7][rng.gen_range(0..2)];
        instances.push((p, rng.gen_range(1..p as i64), rng.gen_range(1..p as i64)));
    }
    for &(p, a, vi) in &instances {
        let f = Field::prime(p).expect("prime");
        let (alpha, v) = (f.from_i64(a), f.from_i64(vi));
        let h = Subgroup::from_gens(g.clone(), &[vec![1, 0], vec![0, 2]]);
        let act = h.igs.iter().map(|x| Matrix::from_rows(f, vec![vec![&alpha.pow(x[0] as u64) * &v.pow((x[1] / 2) as u64)]])).collect();
        let u = FDModule::new(h, f, 1, act).map_err(|e| e.to_string())?;
        let w = induce(&u, &Subgroup::whole(g.clone())).map_err(|e| e.to_string())?;
        let sm = w.total.matrix_of(&[0, 1]).map_err(|e| e.to_string())?;
        ensure(sm.mul(&sm) == Matrix::identity(f, 2).scale(&v), "S^2 != v")?;
        let q = Field::Rationals;
        let gens = vec![
            GroupRingElem::from_terms(g.clone(), ScalarRing::Integers, [(vec![0, 0], q.from_i64(p as i64))]),
            GroupRingElem::from_terms(g.clone(), ScalarRing::Integers, [(vec![1, 0], q.one()), (vec![0, 0], q.from_i64(-a))]),
        ];
        let data = InvariantIdealData::new(Subgroup::from_gens(g.clone(), &[vec![1, 0]]), ScalarRing::Integers, gens)
            .map_err(|e| e.to_string())?;
        let d = vec![f.one(), f.zero()];
        let rep = prop4_check(&w, &data, &d).map_err(|e| e.to_string())?;
        let ring = rep.annihilator.ring;
        let x2v = U::new(f, vec![-&v, f.zero(), f.one()]);
        ensure(rep.annihilator == principal(ring, &x2v, 0)?, format!("J = {} for v = {vi} mod {p}", rep.annihilator))?;
        let expected_mu = if irreducible_mod_p(&x2v, p) { 1 } else { 2 };
        ensure(rep.mu_annihilator.len() == expected_mu && rep.all_hold(), format!("mu(J) for v = {vi} mod {p}"))?;
    }
    Ok(format!("{} + {} suite cases; worked family gives J = (x^2 - v) in {} instances", p3.cases.len(), p4.cases.len(), instances.len()))
}

const DESCENT_EXPECTED: [(&str, &str); 7] = [
    ("DFiii", "FAILS(iii,2)"),
    ("DFii", "FAILS(ii,1)"),
    ("DFi", "FAILS(i,2)"),
    ("DLemma8", "HypothesisFailed(2,\"unique P\")"),
    ("DDepth1", "CONSISTENT_TO_DEPTH"),
    ("DLift", "CONSISTENT_TO_DEPTH"),
    ("DPrefix", "FAILS(ii,3)"),
];

fn criterion_11() -> Result<String, String> {
    let runs: Vec<RunReport> = (0..3).map(|_| default_run("descent")).collect::<Result<_, _>>()?;
    let canon: Vec<String> = runs.iter().map(|r| r.without_timing().to_json()).collect();
    ensure(canon.iter().all(|c| c == &canon[0]), "descent reports differ between runs")?;
    let s = suite(&runs[0], "descent");
    all_pass(s)?;
    for (name, verdict) in DESCENT_EXPECTED {
        let case = s.cases.iter().find(|c| c.name == format!("descent/{name}")).ok_or(format!("{name} missing"))?;
        ensure(case.verdict == verdict, format!("{name}: {} instead of {verdict}", case.verdict))?;
        let payload = runs[0].descent.get(&case.name).ok_or(format!("{name} has no payload"))?;
        if let Some(sizes) = payload["trace"]["sizes"].as_array() {
            let sizes: Vec<u64> = sizes.iter().filter_map(|x| x.as_u64()).collect();
            ensure(sizes.windows(2).all(|w| w[0] >= w[1]), format!("{name}: trace {sizes:?} increases"))?;
        }
    }
    Ok(format!("{} audits with the expected verdicts; 3 runs byte-identical", DESCENT_EXPECTED.len()))
}

fn criterion_12() -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_nilrep"))
        .args(["check", "default.catalog", "--suite", "all", "--seed", "42"])
        .current_dir(std::env::temp_dir())
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(0), format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
    let last = text.lines().last().unwrap_or_default().to_string();
    Ok(format!("exit 0; {last}"))
}

const CRITERIA: [Criterion; 12] = [
    Criterion { number: 1, title: "commutator identity", limit: Duration::from_secs(1), check: criterion_1 },
    Criterion { number: 2, title: "intersection and product with D", limit: Duration::from_secs(5), check: criterion_2 },
    Criterion { number: 3, title: "exponent bound on [H,H]", limit: Duration::from_secs(10), check: criterion_3 },
    Criterion { number: 4, title: "p'-radicals", limit: Duration::from_secs(10), check: criterion_4 },
    Criterion { number: 5, title: "central torsion-free subgroup", limit: Duration::from_secs(2), check: criterion_5 },
    Criterion { number: 6, title: "contraction and minimal primes", limit: Duration::from_secs(30), check: criterion_6 },
    Criterion { number: 7, title: "primes under contraction", limit: Duration::from_secs(30), check: criterion_7 },
    Criterion { number: 8, title: "unique lifts", limit: Duration::from_secs(10), check: criterion_8 },
    Criterion { number: 9, title: "induced modules", limit: Duration::from_secs(30), check: criterion_9 },
    Criterion { number: 10, title: "embeddings and annihilators", limit: Duration::from_secs(60), check: criterion_10 },
    Criterion { number: 11, title: "descent audits", limit: Duration::from_secs(30), check: criterion_11 },
    Criterion { number: 12, title: "full default run", limit: Duration::from_secs(180), check: criterion_12 },
];

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|d| {
            if elapsed <= c.limit {
                Ok(d)
            } else {
                Err(format!("{d}; over the time limit"))
            }
        });
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        failed += usize::from(result.is_err());
        println!(
            "criterion {:>2} {tag} {}: {detail} ({} ms, limit {} ms)",
            c.number,
            c.title,
            elapsed.as_millis(),
            c.limit.as_millis()
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", CRITERIA.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", CRITERIA.len());
}
