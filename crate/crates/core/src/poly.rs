//! Sparse multivariate polynomials with nonnegative exponents over a
//! [`Field`], kept sorted in descending order for a fixed monomial order.

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::{Field, Scalar};

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// Elimination order for the first `k` variables: compare the first
    /// block by grevlex, break ties on the remaining block by grevlex.
    Block(usize),
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Block(k) => {
                grevlex(&a[..*k], &b[..*k]).then_with(|| grevlex(&a[*k..], &b[*k..]))
            }
        }
    }
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm_mono(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mono_div(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    pub field: Field,
    pub nvars: usize,
    pub order: MonomialOrder,
    /// Descending by `order`, no zero coefficients.
    pub terms: Vec<(Monomial, Scalar)>,
}

impl Poly {
    pub fn zero(field: Field, nvars: usize, order: MonomialOrder) -> Poly {
        Poly { field, nvars, order, terms: Vec::new() }
    }

    pub fn constant(field: Field, nvars: usize, order: MonomialOrder, c: Scalar) -> Poly {
        let mut p = Poly::zero(field, nvars, order);
        if !c.is_zero() {
            p.terms.push((vec![0; nvars], c));
        }
        p
    }

    pub fn one(field: Field, nvars: usize, order: MonomialOrder) -> Poly {
        Poly::constant(field, nvars, order, field.one())
    }

    pub fn monomial(field: Field, order: MonomialOrder, m: Monomial, c: Scalar) -> Poly {
        let nvars = m.len();
        let mut p = Poly::zero(field, nvars, order);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    pub fn var(field: Field, nvars: usize, order: MonomialOrder, i: usize) -> Poly {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Poly::monomial(field, order, m, field.one())
    }

    /// Builds a polynomial from unsorted terms, merging duplicates.
    pub fn from_terms(
        field: Field,
        nvars: usize,
        order: MonomialOrder,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Poly {
        let mut ts: Vec<(Monomial, Scalar)> = terms.into_iter().collect();
        ts.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(ts.len());
        for (m, c) in ts {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = &*lc + &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { field, nvars, order, terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.iter().all(|&e| e == 0))
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Scalar {
        &self.terms[0].1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m[var]).max().unwrap_or(0)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Poly {
        if order == self.order {
            return self.clone();
        }
        Poly::from_terms(self.field, self.nvars, order, self.terms.iter().cloned())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv();
        self.scale(&inv)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field, self.nvars, self.order);
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
            ..self.clone()
        }
    }

    pub fn mul_term(&self, m: &[u32], c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field, self.nvars, self.order);
        }
        Poly {
            terms: self.terms.iter().map(|(t, a)| (mono_mul(t, m), a * c)).collect(),
            ..self.clone()
        }
    }

    /// `self - c * x^m * other`, merging sorted term lists.
    pub fn sub_mul_term(&self, other: &Poly, m: &[u32], c: &Scalar) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted: Vec<(Monomial, Scalar)> =
            other.terms.iter().map(|(t, a)| (mono_mul(t, m), a * c)).collect();
        while i < self.terms.len() || j < shifted.len() {
            if j == shifted.len() {
                out.push(self.terms[i].clone());
                i += 1;
            } else if i == self.terms.len() {
                out.push((shifted[j].0.clone(), -&shifted[j].1));
                j += 1;
            } else {
                match self.order.cmp(&self.terms[i].0, &shifted[j].0) {
                    Ordering::Greater => {
                        out.push(self.terms[i].clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push((shifted[j].0.clone(), -&shifted[j].1));
                        j += 1;
                    }
                    Ordering::Equal => {
                        let c = &self.terms[i].1 - &shifted[j].1;
                        if !c.is_zero() {
                            out.push((self.terms[i].0.clone(), c));
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        Poly { terms: out, ..self.clone() }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let minus_one = -self.field.one();
        self.sub_mul_term(other, &vec![0; self.nvars], &minus_one)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.sub_mul_term(other, &vec![0; self.nvars], &self.field.one())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc = Poly::zero(self.field, self.nvars, self.order);
        let minus_one = -self.field.one();
        for (m, c) in &other.terms {
            acc = acc.sub_mul_term(self, m, &(c * &minus_one));
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.field, self.nvars, self.order);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-self.field.one())
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut g: Option<Monomial> = None;
        for (m, _) in &self.terms {
            g = Some(match g {
                None => m.clone(),
                Some(g) => g.iter().zip(m).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        g.unwrap_or_else(|| vec![0; self.nvars])
    }

    pub fn div_monomial(&self, m: &[u32]) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(t, c)| (mono_div(t, m), c.clone())).collect(),
            ..self.clone()
        }
    }

    /// Reorders variables: new variable `perm[i]` takes old variable `i`.
    pub fn permute(&self, perm: &[usize]) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut n = vec![0; self.nvars];
            for (i, &e) in m.iter().enumerate() {
                n[perm[i]] = e;
            }
            (n, c.clone())
        });
        Poly::from_terms(self.field, self.nvars, self.order, terms)
    }

    /// Embeds into a ring with more variables; old variable `i` becomes `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize], order: MonomialOrder) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut n = vec![0; nvars];
            for (i, &e) in m.iter().enumerate() {
                n[map[i]] += e;
            }
            (n, c.clone())
        });
        Poly::from_terms(self.field, nvars, order, terms)
    }

    /// Exact quotient by `d` when `d` divides `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Division by a single polynomial, reducing leading terms only until
    /// the leading term is no longer divisible, then moving it to the
    /// remainder.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero());
        let mut q = Poly::zero(self.field, self.nvars, self.order);
        let mut r = Poly::zero(self.field, self.nvars, self.order);
        let mut p = self.clone();
        let dinv = d.lc().inv();
        while !p.is_zero() {
            let (m, c) = p.terms[0].clone();
            if divides(d.lm(), &m) {
                let t = mono_div(&m, d.lm());
                let k = &c * &dinv;
                p = p.sub_mul_term(d, &t, &k);
                q.terms.push((t, k));
            } else {
                r.terms.push((m, c));
                p.terms.remove(0);
            }
        }
        (q, r)
    }

    pub fn eval_vars(&self, values: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                t = &t * &values[i].pow(e as u64);
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Display with variable names.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_rendered();
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect();
            if mono.is_empty() {
                s.push_str(&abs.render());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.render());
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_order_basics() {
        let o = MonomialOrder::Grevlex;
        assert_eq!(o.cmp(&[2, 0], &[1, 0]), Ordering::Greater);
        // x*y > y^2 ... x*z? grevlex: x y vs x z with three vars: x y > x z
        assert_eq!(o.cmp(&[1, 1, 0], &[1, 0, 1]), Ordering::Greater);
        let b = MonomialOrder::Block(1);
        assert_eq!(b.cmp(&[1, 0], &[0, 5]), Ordering::Greater);
    }

    #[test]
    fn multiply_and_divide() {
        let f = Field::Prime(5);
        let o = MonomialOrder::Grevlex;
        let x = Poly::var(f, 2, o, 0);
        let y = Poly::var(f, 2, o, 1);
        let one = Poly::one(f, 2, o);
        let a = x.sub(&one);
        let b = y.sub(&one);
        let p = a.mul(&b);
        assert_eq!(p.terms.len(), 4);
        assert_eq!(p.exact_div(&a), Some(b.clone()));
        assert!(p.exact_div(&x).is_none());
    }
}
