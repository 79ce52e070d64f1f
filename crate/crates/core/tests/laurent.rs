use nilrep_core::laurent::*;
use nilrep_core::{Error, Field};
use proptest::prelude::*;

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn poly(ring: LaurentRing, s: &str) -> LaurentPoly {
    LaurentPoly::parse(ring, s).unwrap()
}

fn ideal(ring: LaurentRing, gens: &[&str]) -> LaurentIdeal {
    LaurentIdeal::new(ring, gens.iter().map(|g| poly(ring, g)).collect()).unwrap()
}

fn emb(m: Vec<Vec<i64>>) -> FiniteIndexEmbedding {
    FiniteIndexEmbedding::new(m).unwrap()
}

// dense univariate polynomials over GF(p), low degree first

fn trim(mut a: Vec<i64>) -> Vec<i64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pmul(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut c = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % p;
        }
    }
    trim(c)
}

fn inv_mod(a: i64, p: i64) -> i64 {
    (1..p).find(|b| (a * b).rem_euclid(p) == 1).unwrap()
}

fn pdivrem(a: &[i64], d: &[i64], p: i64) -> (Vec<i64>, Vec<i64>) {
    let mut r = trim(a.to_vec());
    let lead = inv_mod(*d.last().unwrap(), p);
    let mut q = vec![0; r.len().saturating_sub(d.len()) + 1];
    while r.len() >= d.len() {
        let k = r[r.len() - 1] * lead % p;
        let s = r.len() - d.len();
        for (i, x) in d.iter().enumerate() {
            r[s + i] = (r[s + i] - k * x).rem_euclid(p);
        }
        q[s] = k;
        r = trim(r);
    }
    (trim(q), r)
}

fn monics(p: i64, d: usize) -> impl Iterator<Item = Vec<i64>> {
    (0..p.pow(d as u32)).map(move |code| {
        let mut c: Vec<i64> = (0..d).map(|i| code / p.pow(i as u32) % p).collect();
        c.push(1);
        c
    })
}

/// Distinct monic irreducible factors, by trial division in increasing degree.
fn factor_oracle(f: &[i64], p: i64) -> Vec<Vec<i64>> {
    let mut rest = f.to_vec();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.len() > 1 {
        if 2 * d > rest.len() - 1 {
            let l = inv_mod(*rest.last().unwrap(), p);
            out.push(rest.iter().map(|c| c * l % p).collect());
            break;
        }
        for m in monics(p, d) {
            let mut hit = false;
            loop {
                let (q, r) = pdivrem(&rest, &m, p);
                if !r.is_empty() {
                    break;
                }
                rest = q;
                hit = true;
            }
            if hit {
                out.push(m);
            }
        }
        d += 1;
    }
    out
}

/// Monic generator of `{g : f | g(x^m)}`: first linear dependence among `x^{mj} mod f`.
fn contraction_oracle(f: &[i64], m: usize, p: i64) -> Vec<i64> {
    let n = f.len() - 1;
    // rows kept in echelon form, each with its combination of powers
    let mut rows: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    for j in 0..=12 {
        let mut x = vec![0; m * j + 1];
        x[m * j] = 1;
        let mut v = pdivrem(&x, f, p).1;
        v.resize(n, 0);
        let mut comb = vec![0; j + 1];
        comb[j] = 1;
        for (r, c) in &rows {
            let lead = r.iter().position(|&e| e != 0).unwrap();
            let k = v[lead];
            if k != 0 {
                for i in 0..n {
                    v[i] = (v[i] - k * r[i]).rem_euclid(p);
                }
                for (i, ci) in c.iter().enumerate() {
                    comb[i] = (comb[i] - k * ci).rem_euclid(p);
                }
            }
        }
        match v.iter().position(|&e| e != 0) {
            None => return trim(comb),
            Some(lead) => {
                let l = inv_mod(v[lead], p);
                rows.push((v.iter().map(|e| e * l % p).collect(), comb.iter().map(|e| e * l % p).collect()));
            }
        }
    }
    panic!("no dependency up to degree 12");
}

fn from_dense(ring: LaurentRing, c: &[i64]) -> LaurentPoly {
    LaurentPoly::from_terms(ring, c.iter().enumerate().map(|(i, &k)| (vec![i as i64], ring.field.from_i64(k))))
}

fn principal(ring: LaurentRing, c: &[i64]) -> LaurentIdeal {
    LaurentIdeal::new(ring, vec![from_dense(ring, c)]).unwrap()
}

#[test]
fn saturated_bases() {
    let r = LaurentRing::new(1, gf(5));
    let i = ideal(r, &["x1 - x1^3"]);
    assert_eq!(i.basis_laurent(), vec![poly(r, "x1^2 - 1")]);
    assert_eq!(i, ideal(r, &["x1^2 - 1"]));
    assert!(ideal(r, &["0"]).is_zero());
    assert!(ideal(r, &["x1^3"]).is_unit());
    let q2 = LaurentRing::new(2, Field::Rationals);
    let j = ideal(q2, &["x1 - 1", "x2 - 1"]);
    assert_eq!(j.basis_laurent().len(), 2);
    assert_eq!(j.quotient_dim(), Some(1));
}

#[test]
fn membership_examples() {
    let r = LaurentRing::new(1, gf(5));
    let i = ideal(r, &["x1^2 - 1"]);
    assert!(i.contains(&LaurentPoly::zero(r)).unwrap());
    assert!(i.contains(&poly(r, "x1^4 - 1")).unwrap());
    assert!(i.contains(&poly(r, "x1^-2 - 1")).unwrap());
    assert!(!i.contains(&poly(r, "x1 - 1")).unwrap());
    assert!(LaurentIdeal::unit(r).contains(&poly(r, "x1 + 3")).unwrap());
    let other = LaurentRing::new(1, gf(7));
    assert!(matches!(i.contains(&poly(other, "x1")), Err(Error::RingMismatch)));
}

#[test]
fn contraction_examples() {
    let r = LaurentRing::new(1, gf(5));
    let sq = emb(vec![vec![2]]);
    assert!(contract(&LaurentIdeal::zero(r), &sq).unwrap().is_zero());
    assert!(contract(&LaurentIdeal::unit(r), &sq).unwrap().is_unit());
    assert_eq!(contract(&ideal(r, &["x1^2 - 2"]), &sq).unwrap(), ideal(r, &["x1 - 2"]));
    let c = contract(&ideal(r, &["x1 - 1"]), &sq).unwrap();
    assert_eq!(c, ideal(r, &["x1 - 1"]));
    let e = extend(&c, &sq).unwrap();
    assert_eq!(e, ideal(r, &["x1^2 - 1"]));
    assert!(ideal(r, &["x1 - 1"]).contains_ideal(&e).unwrap());
    assert_ne!(e, ideal(r, &["x1 - 1"]));
    assert!(extend(&LaurentIdeal::zero(r), &sq).unwrap().is_zero());
}

#[test]
fn minimal_prime_examples() {
    let r = LaurentRing::new(1, gf(5));
    assert_eq!(minimal_primes(&LaurentIdeal::zero(r)).unwrap().members, vec![LaurentIdeal::zero(r)]);
    assert!(minimal_primes(&LaurentIdeal::unit(r)).unwrap().is_empty());
    let mu = minimal_primes(&ideal(r, &["x1^2 - 1"])).unwrap();
    assert_eq!(mu.len(), 2);
    assert!(mu.contains(&ideal(r, &["x1 - 1"])) && mu.contains(&ideal(r, &["x1 + 1"])));
    assert_eq!(minimal_primes(&ideal(r, &["x1^2 - 2"])).unwrap().members, vec![ideal(r, &["x1^2 - 2"])]);
    let q2 = LaurentRing::new(2, Field::Rationals);
    let mu = minimal_primes(&ideal(q2, &["x1*x2 - x1 - x2 + 1"])).unwrap();
    assert_eq!(mu.len(), 2);
    assert!(mu.contains(&ideal(q2, &["x1 - 1"])) && mu.contains(&ideal(q2, &["x2 - 1"])));
    assert!(mu_proper(&mu, true));
    assert!(!mu_proper(&minimal_primes(&LaurentIdeal::zero(q2)).unwrap(), true));
}

#[test]
fn char_coprime_examples() {
    assert!(char_coprime_index(&emb(vec![vec![6]]), &LaurentRing::new(1, Field::Rationals)));
    assert!(char_coprime_index(&emb(vec![vec![2]]), &LaurentRing::new(1, gf(5))));
    assert!(!char_coprime_index(&emb(vec![vec![2]]), &LaurentRing::new(1, gf(2))));
    assert!(!char_coprime_index(&emb(vec![vec![2, 0], vec![0, 3]]), &LaurentRing::new(2, gf(3))));
}

#[test]
fn embeddings_compose() {
    let a = emb(vec![vec![2, 1], vec![0, 3]]);
    let b = emb(vec![vec![1, 0], vec![1, 2]]);
    assert_eq!(a.index(), 6);
    assert_eq!(a.compose(&b).index(), a.index() * b.index());
    assert!(FiniteIndexEmbedding::new(vec![vec![1, 2], vec![2, 4]]).is_err());
}

#[test]
fn lemma7_examples() {
    let r = LaurentRing::new(1, gf(5));
    let sq = emb(vec![vec![2]]);
    let rep = lemma7_report(&ideal(r, &["x1^2 - 1"]), &sq).unwrap();
    assert_eq!(rep.mu_b.members, vec![ideal(r, &["x1 - 1"])]);
    assert_eq!(rep.covers, vec![vec![0, 1]]);
    let rep = lemma7_report(&ideal(r, &["x1^2 - 2"]), &sq).unwrap();
    assert_eq!((rep.mu_a.len(), rep.mu_b.len()), (1, 1));
    assert_eq!(rep.mu_b.members, vec![ideal(r, &["x1 - 2"])]);
    let rep = lemma7_report(&LaurentIdeal::zero(r), &sq).unwrap();
    assert_eq!(rep.mu_b.members, vec![LaurentIdeal::zero(r)]);
}

#[test]
fn lemma8_examples() {
    let r = LaurentRing::new(1, gf(5));
    let sq = emb(vec![vec![2]]);
    let lift = lemma8_lift(&ideal(r, &["x1^2 - 2"]), &sq, &ideal(r, &["x1 - 2"])).unwrap();
    assert_eq!(lift, ideal(r, &["x1^2 - 2"]));
    let clause = |i: &str, q: &str| match lemma8_lift(&ideal(r, &[i]), &sq, &ideal(r, &[q])) {
        Err(Error::HypothesisFailed { clause, .. }) => clause,
        other => panic!("expected a failed hypothesis, got {other:?}"),
    };
    assert_eq!(clause("x1 - 1", "x1 - 1"), CLAUSE_EXTENSION);
    assert_eq!(clause("x1^2 - 1", "x1 - 1"), CLAUSE_UNIQUE);
    assert_eq!(clause("x1^2 - 2", "x1 - 3"), CLAUSE_MINIMAL);
    let r2 = LaurentRing::new(1, gf(2));
    let res = lemma8_lift(&ideal(r2, &["x1^2 + x1 + 1"]), &sq, &ideal(r2, &["x1 + 1"]));
    assert!(matches!(res, Err(Error::HypothesisFailed { clause, .. }) if clause == CLAUSE_CHAR));
}

#[test]
fn module_mu_examples() {
    let r = LaurentRing::new(1, gf(5));
    let single = ideal(r, &["x1^2 - 2"]);
    assert_eq!(mu_of_module(r, std::slice::from_ref(&single)).unwrap(), minimal_primes(&single).unwrap());
    let mu = mu_of_module(r, &[ideal(r, &["x1 - 1"]), ideal(r, &["x1^2 - 1"])]).unwrap();
    assert_eq!(mu.len(), 2);
    let mu = mu_of_module(r, &[LaurentIdeal::unit(r), ideal(r, &["x1 - 1"])]).unwrap();
    assert_eq!(mu.members, vec![ideal(r, &["x1 - 1"])]);
}

#[test]
fn rank_zero() {
    let r = LaurentRing::new(0, Field::Rationals);
    let one = LaurentIdeal::unit(r);
    assert!(one.is_unit());
    assert!(minimal_primes(&one).unwrap().is_empty());
    assert_eq!(minimal_primes(&LaurentIdeal::zero(r)).unwrap().len(), 1);
    let e = FiniteIndexEmbedding::identity(0);
    assert_eq!(contract(&one, &e).unwrap(), one);
}

fn dense_poly(p: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0..p, 1..=4).prop_map(move |mut c| {
        c.push(1);
        c[0] = c[0].max(1);
        c
    })
}

fn laurent(ring: LaurentRing) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-2i64..=2, -2i64..=2, -3i64..=3), 0..4).prop_map(move |ts| {
        LaurentPoly::from_terms(ring, ts.into_iter().map(|(a, b, c)| (vec![a, b], ring.field.from_i64(c))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn primes_match_factorization(fs in prop::collection::vec(dense_poly(5), 1..=3)) {
        let r = LaurentRing::new(1, gf(5));
        let f = fs.iter().fold(vec![1], |acc, g| pmul(&acc, g, 5));
        prop_assume!(f.len() <= 13);
        let mu = minimal_primes(&principal(r, &f)).unwrap();
        let expected = factor_oracle(&f, 5);
        prop_assert_eq!(mu.len(), expected.len());
        for g in &expected {
            prop_assert!(mu.contains(&principal(r, g)));
        }
        prop_assert!(mu.is_antichain());
    }

    #[test]
    fn contraction_matches_oracle(f in dense_poly(7), m in 2usize..=3) {
        let r = LaurentRing::new(1, gf(7));
        let c = contract(&principal(r, &f), &emb(vec![vec![m as i64]])).unwrap();
        prop_assert_eq!(c, principal(r, &contraction_oracle(&f, m, 7)));
    }

    #[test]
    fn units_do_not_change_membership(f in laurent(LaurentRing::new(2, gf(5))), a in -3i64..=3, b in -3i64..=3) {
        let r = LaurentRing::new(2, gf(5));
        let i = ideal(r, &["x1^2 - x2", "x2^2 - 1"]);
        let shifted = f.mul(&LaurentPoly::unit(r, vec![a, b]));
        prop_assert_eq!(i.contains(&f).unwrap(), i.contains(&shifted).unwrap());
        let g = LaurentIdeal::new(r, vec![f.clone()]).unwrap();
        prop_assert_eq!(g, LaurentIdeal::new(r, vec![shifted]).unwrap());
    }

    #[test]
    fn extension_of_contraction_is_smaller(f in laurent(LaurentRing::new(2, gf(3))), g in laurent(LaurentRing::new(2, gf(3)))) {
        let r = LaurentRing::new(2, gf(3));
        let i = LaurentIdeal::new(r, vec![f, g]).unwrap();
        for e in [emb(vec![vec![2, 0], vec![0, 1]]), emb(vec![vec![1, 1], vec![-1, 1]])] {
            let c = contract(&i, &e).unwrap();
            let back = extend(&c, &e).unwrap();
            prop_assert!(i.contains_ideal(&back).unwrap());
            // contracting the extension recovers the contraction
            prop_assert_eq!(contract(&back, &e).unwrap(), c);
        }
    }

    #[test]
    fn covering_bound(fs in prop::collection::vec(dense_poly(5), 1..=3), m in 2i64..=3) {
        let r = LaurentRing::new(1, gf(5));
        let f = fs.iter().fold(vec![1], |acc, g| pmul(&acc, g, 5));
        prop_assume!(f.len() <= 10);
        let rep = lemma7_report(&principal(r, &f), &emb(vec![vec![m]])).unwrap();
        prop_assert!(rep.mu_b.len() <= rep.mu_a.len());
        prop_assert!(rep.mu_a.is_antichain() && rep.mu_b.is_antichain());
    }

    #[test]
    fn ring_axioms(f in laurent(LaurentRing::new(2, gf(7))), g in laurent(LaurentRing::new(2, gf(7))), h in laurent(LaurentRing::new(2, gf(7)))) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.add(&g), g.add(&f));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert!(f.terms.values().all(|c| !c.is_zero()));
    }
}
