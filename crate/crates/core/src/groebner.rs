//! Buchberger's algorithm with the product and chain criteria, reduced
//! bases, variable saturation by Bayer's method, and elimination.

use crate::poly::{divides, lcm_mono, mono_div, Monomial, MonomialOrder, Poly};

/// Full reduction of `f` modulo `basis` (every term, not just the head).
pub fn reduce(f: &Poly, basis: &[Poly]) -> Poly {
    let mut p = f.clone();
    let mut rem: Vec<(Monomial, crate::scalar::Scalar)> = Vec::new();
    'outer: while !p.is_zero() {
        let (m, c) = p.terms[0].clone();
        for g in basis {
            if divides(g.lm(), &m) {
                let t = mono_div(&m, g.lm());
                let k = &c / g.lc();
                p = p.sub_mul_term(g, &t, &k);
                continue 'outer;
            }
        }
        rem.push((m, c));
        p.terms.remove(0);
    }
    Poly { terms: rem, ..f.clone() }
}

fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let l = lcm_mono(f.lm(), g.lm());
    let tf = mono_div(&l, f.lm());
    let tg = mono_div(&l, g.lm());
    let a = f.mul_term(&tf, &f.lc().inv());
    a.sub_mul_term(g, &tg, &g.lc().inv())
}

/// Reduced Gröbner basis, monic, sorted ascending by leading monomial.
pub fn groebner(gens: &[Poly], order: MonomialOrder) -> Vec<Poly> {
    let mut basis: Vec<Poly> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut input: Vec<Poly> = gens
        .iter()
        .map(|g| g.with_order(order))
        .filter(|g| !g.is_zero())
        .collect();
    input.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for g in input {
        let r = reduce(&g, &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return vec![r.monic()];
        }
        let idx = basis.len();
        basis.push(r.monic());
        for i in 0..idx {
            pairs.push((i, idx));
        }
    }
    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm first
        let (pos, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let la = lcm_mono(basis[a.0].lm(), basis[a.1].lm());
                let lb = lcm_mono(basis[b.0].lm(), basis[b.1].lm());
                order.cmp(&la, &lb)
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(pos);
        let (fi, fj) = (&basis[i], &basis[j]);
        let l = lcm_mono(fi.lm(), fj.lm());
        // product criterion
        if fi.lm().iter().zip(fj.lm()).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        // chain criterion
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(basis[k].lm(), &l)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_poly(fi, fj);
        let r = reduce(&s, &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return vec![r.monic()];
        }
        let idx = basis.len();
        basis.push(r.monic());
        for k in 0..idx {
            pairs.push((k, idx));
        }
    }
    interreduce(basis, order)
}

/// Minimalizes and fully interreduces a Gröbner basis.
pub fn interreduce(basis: Vec<Poly>, order: MonomialOrder) -> Vec<Poly> {
    let mut b: Vec<Poly> = basis.into_iter().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
    b.sort_by(|x, y| order.cmp(x.lm(), y.lm()));
    let mut minimal: Vec<Poly> = Vec::new();
    for p in b {
        if !minimal.iter().any(|q| divides(q.lm(), p.lm())) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> =
            minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        out.push(reduce(&minimal[i], &others).monic());
    }
    out.sort_by(|x, y| order.cmp(x.lm(), y.lm()));
    out
}

/// Saturation `I : x_var^∞`, returned as a reduced grevlex basis.
pub fn saturate_var(gens: &[Poly], var: usize) -> Vec<Poly> {
    if gens.is_empty() {
        return Vec::new();
    }
    let n = gens[0].nvars;
    let last = n - 1;
    let perm: Vec<usize> = (0..n)
        .map(|i| if i == var { last } else if i == last { var } else { i })
        .collect();
    let permuted: Vec<Poly> =
        gens.iter().map(|g| g.with_order(MonomialOrder::Grevlex).permute(&perm)).collect();
    let gb = groebner(&permuted, MonomialOrder::Grevlex);
    let divided: Vec<Poly> = gb
        .iter()
        .map(|g| {
            let k = g.terms.iter().map(|(m, _)| m[last]).min().unwrap_or(0);
            let mut m = vec![0; n];
            m[last] = k;
            g.div_monomial(&m)
        })
        .collect();
    let back: Vec<Poly> = divided.iter().map(|g| g.permute(&perm)).collect();
    groebner(&back, MonomialOrder::Grevlex)
}

/// Saturation at the product of the given variables.
pub fn saturate(gens: &[Poly], vars: &[usize]) -> Vec<Poly> {
    let mut cur: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    for &v in vars {
        if cur.is_empty() {
            break;
        }
        cur = saturate_var(&cur, v);
    }
    groebner(&cur, MonomialOrder::Grevlex)
}

/// Generators of `I ∩ k[x_k, ..., x_{n-1}]` (still in `n` variables).
pub fn eliminate(gens: &[Poly], k: usize) -> Vec<Poly> {
    let gb = groebner(gens, MonomialOrder::Block(k));
    gb.into_iter()
        .filter(|g| g.terms.iter().all(|(m, _)| m[..k].iter().all(|&e| e == 0)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn p(f: Field, n: usize, terms: &[(&[u32], i64)]) -> Poly {
        Poly::from_terms(
            f,
            n,
            MonomialOrder::Grevlex,
            terms.iter().map(|(m, c)| (m.to_vec(), f.from_i64(*c))),
        )
    }

    #[test]
    fn unit_ideal_collapses() {
        let f = Field::Rationals;
        let a = p(f, 1, &[(&[1], 1), (&[0], -1)]);
        let b = p(f, 1, &[(&[1], 1), (&[0], -2)]);
        let gb = groebner(&[a, b], MonomialOrder::Grevlex);
        assert_eq!(gb.len(), 1);
        assert!(gb[0].is_constant());
    }

    #[test]
    fn saturation_removes_unit_factor() {
        let f = Field::Prime(5);
        // x - x^3 saturated at x gives x^2 - 1
        let g = p(f, 1, &[(&[1], 1), (&[3], -1)]);
        let s = saturate(&[g], &[0]);
        assert_eq!(s, vec![p(f, 1, &[(&[2], 1), (&[0], -1)])]);
    }

    #[test]
    fn twisted_cubic_basis_size() {
        let f = Field::Rationals;
        // y - x^2, z - x^3
        let a = p(f, 3, &[(&[0, 1, 0], 1), (&[2, 0, 0], -1)]);
        let b = p(f, 3, &[(&[0, 0, 1], 1), (&[3, 0, 0], -1)]);
        let gb = groebner(&[a.clone(), b.clone()], MonomialOrder::Grevlex);
        for g in [&a, &b] {
            assert!(reduce(g, &gb).is_zero());
        }
        assert_eq!(gb.len(), 3);
    }
}
