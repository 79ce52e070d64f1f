//! Polynomial factorization: Berlekamp over GF(p), Zassenhaus over Q, and
//! multivariate factors by Kronecker substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{MonomialOrder, Poly};
use crate::scalar::{is_prime, Field, Scalar};
use crate::upoly::UPoly;

/// Distinct monic irreducible factors of `f`, sorted by degree then
/// coefficients.
pub fn irreducible_factors(f: &UPoly) -> Vec<UPoly> {
    let mut out = match f.field {
        Field::Prime(_) => fp_distinct(&f.monic()),
        Field::Rationals => q_distinct(f),
    };
    sort_factors(&mut out);
    out
}

/// Irreducible factorization with multiplicities.
pub fn factor(f: &UPoly) -> Vec<(UPoly, u32)> {
    let mut rest = f.monic();
    irreducible_factors(f)
        .into_iter()
        .map(|g| {
            let mut e = 0;
            while let Some(q) = rest.exact_div(&g) {
                rest = q;
                e += 1;
            }
            (g, e)
        })
        .collect()
}

pub fn is_irreducible(f: &UPoly) -> bool {
    f.deg() >= 1 && factor(f) == vec![(f.monic(), 1)]
}

fn sort_factors(v: &mut [UPoly]) {
    v.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| a.coeffs.cmp(&b.coeffs)));
}

fn fp_distinct(f: &UPoly) -> Vec<UPoly> {
    let p = f.field.characteristic();
    if f.deg() == 0 {
        return Vec::new();
    }
    let d = f.derivative();
    if d.is_zero() {
        // f = h(x^p) = h^p
        let root: Vec<Scalar> = f.coeffs.iter().step_by(p as usize).cloned().collect();
        return fp_distinct(&UPoly::new(f.field, root));
    }
    let g = f.gcd(&d);
    let sqf = f.exact_div(&g).unwrap();
    let mut out = berlekamp(&sqf);
    for h in fp_distinct(&g) {
        if !out.contains(&h) {
            out.push(h);
        }
    }
    out
}

/// Splits a squarefree monic polynomial over GF(p).
fn berlekamp(f: &UPoly) -> Vec<UPoly> {
    let n = f.deg();
    if n <= 1 {
        return if n == 1 { vec![f.clone()] } else { Vec::new() };
    }
    let field = f.field;
    let p = field.characteristic();
    let xp = UPoly::x(field).pow_mod(p as u128, f);
    let mut rows = Vec::with_capacity(n);
    let mut cur = UPoly::one(field);
    for i in 0..n {
        let mut row: Vec<Scalar> = (0..n).map(|j| cur.coeff(j)).collect();
        row[i] = &row[i] - &field.one();
        rows.push(row);
        cur = cur.mul(&xp).rem(f);
    }
    let kernel = Matrix::from_rows(field, rows).left_kernel();
    let k = kernel.len();
    if k == 1 {
        return vec![f.clone()];
    }
    let basis: Vec<UPoly> = kernel.into_iter().map(|v| UPoly::new(field, v)).collect();
    let mut factors = vec![f.clone()];
    if p <= 1000 {
        for g in basis.iter().filter(|g| g.deg() > 0) {
            for s in 0..p {
                let shifted = g.sub(&UPoly::constant(field, field.from_i64(s as i64)));
                let mut next = Vec::new();
                for h in factors {
                    if h.deg() <= 1 {
                        next.push(h);
                        continue;
                    }
                    let d = h.gcd(&shifted);
                    if d.deg() > 0 && d.deg() < h.deg() {
                        next.push(h.exact_div(&d).unwrap());
                        next.push(d);
                    } else {
                        next.push(h);
                    }
                }
                factors = next;
                if factors.len() == k {
                    return factors;
                }
            }
        }
        factors
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6265726c);
        while factors.len() < k {
            let mut r = UPoly::zero(field);
            for g in &basis {
                r = r.add(&g.scale(&field.from_i64(rng.gen_range(0..p) as i64)));
            }
            let mut next = Vec::new();
            for h in factors {
                if h.deg() <= 1 {
                    next.push(h);
                    continue;
                }
                let w = r.pow_mod(((p - 1) / 2) as u128, &h).sub(&UPoly::one(field));
                let d = h.gcd(&w);
                if d.deg() > 0 && d.deg() < h.deg() {
                    next.push(h.exact_div(&d).unwrap());
                    next.push(d);
                } else {
                    next.push(h);
                }
            }
            factors = next;
        }
        factors
    }
}

type ZPoly = Vec<BigInt>;

fn ztrim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zmod(v: &[BigInt], m: &BigInt) -> ZPoly {
    ztrim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    ztrim(v)
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with positive leading coefficient.
fn primitive(v: &[BigInt]) -> ZPoly {
    let c = content(v);
    if c.is_zero() {
        return Vec::new();
    }
    let c = if v.last().unwrap().is_negative() { -c } else { c };
    v.iter().map(|x| x / &c).collect()
}

fn to_fp(v: &[BigInt], p: u64) -> UPoly {
    let f = Field::Prime(p);
    UPoly::new(f, v.iter().map(|c| f.from_bigint(c)).collect())
}

fn from_fp(u: &UPoly) -> ZPoly {
    u.coeffs.iter().map(|c| BigInt::from(c.residue().unwrap())).collect()
}

fn to_q(v: &[BigInt]) -> UPoly {
    UPoly::new(
        Field::Rationals,
        v.iter().map(|c| Scalar::Rat(BigRational::from_integer(c.clone()))).collect(),
    )
}

/// Integer primitive form of a rational polynomial.
fn q_to_z(f: &UPoly) -> ZPoly {
    let den = f
        .coeffs
        .iter()
        .fold(BigInt::one(), |l, c| l.lcm(c.as_rational().unwrap().denom()));
    let v: ZPoly = f
        .coeffs
        .iter()
        .map(|c| {
            let q = c.as_rational().unwrap();
            q.numer() * (&den / q.denom())
        })
        .collect();
    primitive(&v)
}

fn q_distinct(f: &UPoly) -> Vec<UPoly> {
    if f.deg() == 0 {
        return Vec::new();
    }
    let g = f.gcd(&f.derivative());
    let sqf = f.exact_div(&g).unwrap();
    zassenhaus(&q_to_z(&sqf)).into_iter().map(|z| to_q(&z).monic()).collect()
}

/// One linear Hensel lifting pass: from `h ≡ a*b (mod p)` with `a` monic to
/// the same congruence modulo `p^k`.
fn hensel_pair(h: &[BigInt], a0: &UPoly, b0: &UPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (_, s, t) = a0.ext_gcd(b0);
    let pb = BigInt::from(p);
    let mut a = from_fp(a0);
    let mut b = from_fp(b0);
    let mut pj = pb.clone();
    for _ in 1..k {
        let diff = zsub(h, &zmul(&a, &b));
        let e: ZPoly = diff.iter().map(|c| c / &pj).collect();
        let e = to_fp(&e, p);
        let (q, da) = t.mul(&e).div_rem(a0);
        let db = s.mul(&e).add(&q.mul(b0));
        let next = &pj * &pb;
        let add = |x: &ZPoly, d: &UPoly| -> ZPoly {
            let d = from_fp(d);
            let n = x.len().max(d.len());
            let z = BigInt::zero();
            let v: ZPoly =
                (0..n).map(|i| x.get(i).unwrap_or(&z) + &pj * d.get(i).unwrap_or(&z)).collect();
            zmod(&v, &next)
        };
        a = add(&a, &da);
        b = add(&b, &db);
        pj = next;
    }
    (a, b)
}

/// Lifts the monic modular factors of `h` to modulus `p^k`.
fn hensel_multi(h: &[BigInt], factors: &[UPoly], p: u64, k: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let m = BigInt::from(p).pow(k);
        let lc = h.last().unwrap().clone();
        let inv = lc.modinv(&m).expect("leading coefficient invertible");
        return vec![zmod(&h.iter().map(|c| c * &inv).collect::<ZPoly>(), &m)];
    }
    let a0 = factors[0].clone();
    let lc = to_fp(&[h.last().unwrap().clone()], p);
    let b0 = factors[1..].iter().fold(lc, |acc, f| acc.mul(f));
    let (a, b) = hensel_pair(h, &a0, &b0, p, k);
    let mut out = vec![a];
    out.extend(hensel_multi(&b, &factors[1..], p, k));
    out
}

fn symmetric(v: &[BigInt], m: &BigInt) -> ZPoly {
    let half: BigInt = m / 2;
    ztrim(
        v.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Irreducible factors of a squarefree primitive integer polynomial.
fn zassenhaus(h: &[BigInt]) -> Vec<ZPoly> {
    let n = h.len() - 1;
    if n <= 1 {
        return vec![primitive(h)];
    }
    let lc = h[n].clone();
    // pick, among a few good primes, the one with fewest modular factors
    let mut best: Option<(u64, Vec<UPoly>)> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < 5 {
        p += 1;
        if !is_prime(p) || (&lc % p).is_zero() {
            continue;
        }
        let hp = to_fp(h, p);
        if hp.gcd(&hp.derivative()).deg() > 0 {
            continue;
        }
        tried += 1;
        let fs = berlekamp(&hp.monic());
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
    }
    let (p, mut modular) = best.unwrap();
    if modular.len() == 1 {
        return vec![primitive(h)];
    }
    sort_factors(&mut modular);
    let norm2: BigInt = h.iter().map(|c| c * c).sum();
    let bound = lc.abs() * BigInt::from(2).pow(n as u32) * (norm2.sqrt() + 1u32) * 2u32;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut m = pb.clone();
    while m <= bound {
        m *= &pb;
        k += 1;
    }
    let mut lifted = hensel_multi(h, &modular, p, k);
    let mut cur: ZPoly = h.to_vec();
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut hit = None;
        for subset in combinations(lifted.len(), s) {
            let lcc = cur.last().unwrap().clone();
            let g = subset.iter().fold(vec![lcc], |acc, &i| zmod(&zmul(&acc, &lifted[i]), &m));
            let g = primitive(&symmetric(&g, &m));
            if let Some(q) = to_q(&cur).exact_div(&to_q(&g)) {
                let q = q_to_z(&q);
                hit = Some((subset, g, q));
                break;
            }
        }
        match hit {
            Some((subset, g, q)) => {
                found.push(g);
                cur = q;
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, f)| f)
                    .collect();
            }
            None => s += 1,
        }
    }
    if cur.len() > 1 {
        found.push(primitive(&cur));
    }
    found
}

/// Subset products tried during multivariate recombination before giving up.
pub const FACTOR_BUDGET: usize = 200_000;

/// Views `f` as a univariate polynomial in variable `var`; other variables
/// must not occur.
pub fn to_upoly(f: &Poly, var: usize) -> UPoly {
    let d = f.degree_in(var) as usize;
    let mut v = vec![f.field.zero(); d + 1];
    for (m, c) in &f.terms {
        v[m[var] as usize] = c.clone();
    }
    UPoly::new(f.field, v)
}

pub fn from_upoly(u: &UPoly, nvars: usize, var: usize, order: MonomialOrder) -> Poly {
    Poly::from_terms(
        u.field,
        nvars,
        order,
        u.coeffs.iter().enumerate().map(|(i, c)| {
            let mut m = vec![0; nvars];
            m[var] = i as u32;
            (m, c.clone())
        }),
    )
}

/// Distinct irreducible factors of `f` up to units of the Laurent ring:
/// monomial factors are discarded and every factor is made monic.
pub fn laurent_factors(f: &Poly) -> Result<Vec<Poly>> {
    let f = f.div_monomial(&f.monomial_content());
    if f.is_zero() || f.is_constant() {
        return Ok(Vec::new());
    }
    let n = f.nvars;
    let used: Vec<usize> = (0..n).filter(|&i| f.degree_in(i) > 0).collect();
    if used.len() == 1 {
        let v = used[0];
        return Ok(irreducible_factors(&to_upoly(&f, v))
            .into_iter()
            .filter(|g| g.coeffs.len() > 1 && !g.coeff(0).is_zero())
            .map(|g| from_upoly(&g, n, v, f.order).monic())
            .collect());
    }
    let mut out = Vec::new();
    let mut rest = f.monic();
    while !rest.is_constant() {
        let g = smallest_factor(&rest)?;
        while let Some(q) = rest.exact_div(&g) {
            rest = q;
        }
        out.push(g.monic());
    }
    out.sort_by(|a, b| a.terms.cmp(&b.terms));
    Ok(out)
}

/// An irreducible factor of `f` (which has no monomial content).
fn smallest_factor(f: &Poly) -> Result<Poly> {
    let n = f.nvars;
    let d = (0..n).map(|i| f.degree_in(i)).max().unwrap() as u64 + 1;
    let weights: Vec<u64> = (0..n).map(|i| d.pow(i as u32)).collect();
    let deg = |m: &[u32]| -> usize { m.iter().zip(&weights).map(|(&e, &w)| e as u64 * w).sum::<u64>() as usize };
    let top = f.terms.iter().map(|(m, _)| deg(m)).max().unwrap();
    let mut image = vec![f.field.zero(); top + 1];
    for (m, c) in &f.terms {
        image[deg(m)] = c.clone();
    }
    let image = UPoly::new(f.field, image);
    let parts = factor(&image);
    // every sub-multiset of the univariate factors, by image degree
    let mut candidates: Vec<(usize, Vec<u32>)> = vec![(0, vec![0; parts.len()])];
    for (j, (g, e)) in parts.iter().enumerate() {
        let mut next = Vec::new();
        for (dg, ex) in &candidates {
            for k in 0..=*e {
                let mut ex2 = ex.clone();
                ex2[j] = k;
                next.push((dg + g.deg() * k as usize, ex2));
                if next.len() > FACTOR_BUDGET {
                    return Err(Error::FactorBudget);
                }
            }
        }
        candidates = next;
    }
    candidates.sort();
    for (dg, ex) in candidates {
        if dg == 0 || dg == top {
            continue;
        }
        let mut prod = UPoly::one(f.field);
        for ((g, _), &k) in parts.iter().zip(&ex) {
            prod = prod.mul(&g.pow(k));
        }
        let back = Poly::from_terms(
            f.field,
            n,
            f.order,
            prod.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
                let mut m = vec![0u32; n];
                let mut k = k as u64;
                for slot in m.iter_mut() {
                    *slot = (k % d) as u32;
                    k /= d;
                }
                (m, c.clone())
            }),
        );
        if back.is_constant() || !back.monomial_content().iter().all(|&e| e == 0) {
            continue;
        }
        if f.exact_div(&back).is_some() {
            return Ok(back);
        }
    }
    Ok(f.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(f: Field, c: &[i64]) -> UPoly {
        UPoly::from_i64(f, c)
    }

    #[test]
    fn gf5_quadratics() {
        let f = Field::Prime(5);
        assert_eq!(irreducible_factors(&up(f, &[-1, 0, 1])), vec![up(f, &[1, 1]), up(f, &[-1, 1])]);
        assert!(is_irreducible(&up(f, &[-2, 0, 1])));
    }

    #[test]
    fn gf3_x4_minus_1_has_three_factors() {
        let f = Field::Prime(3);
        let fs = irreducible_factors(&up(f, &[-1, 0, 0, 0, 1]));
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[2], up(f, &[1, 0, 1]));
    }

    #[test]
    fn inseparable_input() {
        let f = Field::Prime(2);
        // (x+1)^4 = x^4 + 1
        assert_eq!(factor(&up(f, &[1, 0, 0, 0, 1])), vec![(up(f, &[1, 1]), 4)]);
    }

    #[test]
    fn rational_factorization() {
        let q = Field::Rationals;
        // x^4 - 1 = (x-1)(x+1)(x^2+1)
        let fs = irreducible_factors(&up(q, &[-1, 0, 0, 0, 1]));
        assert_eq!(fs, vec![up(q, &[-1, 1]), up(q, &[1, 1]), up(q, &[1, 0, 1])]);
        // x^4 + 1 is irreducible over Q but splits mod every prime
        assert!(is_irreducible(&up(q, &[1, 0, 0, 0, 1])));
        // (2x+1)^2 (x^2-2)
        let g = up(q, &[1, 2]).pow(2).mul(&up(q, &[-2, 0, 1]));
        assert_eq!(factor(&g).iter().map(|(_, e)| *e).collect::<Vec<_>>(), vec![2, 1]);
    }

    #[test]
    fn large_prime_field() {
        let f = Field::Prime(1_000_003);
        let g = up(f, &[-1, 1]).mul(&up(f, &[5, 1])).mul(&up(f, &[2, 0, 1]));
        let expected = if is_square(-2, 1_000_003) { 4 } else { 3 };
        assert_eq!(irreducible_factors(&g).len(), expected);
    }

    fn is_square(a: i64, p: u64) -> bool {
        let f = Field::Prime(p);
        f.from_i64(a).pow((p - 1) / 2).is_one()
    }

    #[test]
    fn bivariate_split() {
        let q = Field::Rationals;
        let o = MonomialOrder::Grevlex;
        let x = Poly::var(q, 2, o, 0);
        let y = Poly::var(q, 2, o, 1);
        let one = Poly::one(q, 2, o);
        let f = x.sub(&one).mul(&y.sub(&one)).mul(&x.sub(&y));
        let fs = laurent_factors(&f).unwrap();
        assert_eq!(fs.len(), 3);
        for g in &fs {
            assert!(f.exact_div(g).is_some());
        }
        let irr = x.mul(&y).sub(&one.scale(&q.from_i64(2)));
        assert_eq!(laurent_factors(&irr).unwrap().len(), 1);
    }
}
