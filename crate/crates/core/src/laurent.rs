//! Group algebras of free abelian groups as Laurent polynomial rings.
//!
//! An ideal is stored through its polynomial model: the ideal of
//! `k[x_1..x_r]` obtained by clearing monomial denominators and saturating at
//! `x_1 * ... * x_r`. Its reduced grevlex basis is canonical, so equality of
//! Laurent ideals is equality of bases.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::factor::{laurent_factors, to_upoly, is_irreducible};
use crate::groebner::{eliminate, reduce, saturate};
use crate::lattice;
use crate::poly::{Monomial, MonomialOrder, Poly};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentRing {
    pub rank: usize,
    pub field: Field,
}

impl LaurentRing {
    pub fn new(rank: usize, field: Field) -> LaurentRing {
        LaurentRing { rank, field }
    }

    pub fn var_names(&self) -> Vec<String> {
        (1..=self.rank).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for LaurentRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[A], rank {}", self.field, self.rank)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    pub ring: LaurentRing,
    pub terms: BTreeMap<Vec<i64>, Scalar>,
}

impl LaurentPoly {
    pub fn zero(ring: LaurentRing) -> LaurentPoly {
        LaurentPoly { ring, terms: BTreeMap::new() }
    }

    pub fn monomial(ring: LaurentRing, exp: Vec<i64>, c: Scalar) -> LaurentPoly {
        assert_eq!(exp.len(), ring.rank);
        let mut p = LaurentPoly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn constant(ring: LaurentRing, c: Scalar) -> LaurentPoly {
        LaurentPoly::monomial(ring, vec![0; ring.rank], c)
    }

    pub fn one(ring: LaurentRing) -> LaurentPoly {
        LaurentPoly::constant(ring, ring.field.one())
    }

    /// The group element `x^v`.
    pub fn unit(ring: LaurentRing, v: Vec<i64>) -> LaurentPoly {
        LaurentPoly::monomial(ring, v, ring.field.one())
    }

    pub fn from_terms(ring: LaurentRing, terms: impl IntoIterator<Item = (Vec<i64>, Scalar)>) -> LaurentPoly {
        let mut p = LaurentPoly::zero(ring);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<i64>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get(&e) {
            Some(old) => {
                let s = old + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &LaurentPoly) -> LaurentPoly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly { ring: self.ring, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &LaurentPoly) -> LaurentPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Scalar) -> LaurentPoly {
        LaurentPoly::from_terms(self.ring, self.terms.iter().map(|(e, c)| (e.clone(), c * k)))
    }

    pub fn mul(&self, o: &LaurentPoly) -> LaurentPoly {
        let mut p = LaurentPoly::zero(self.ring);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one(self.ring);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Largest total span of exponents, used as a size measure.
    pub fn degree(&self) -> i64 {
        (0..self.ring.rank)
            .map(|i| {
                let lo = self.terms.keys().map(|e| e[i]).min().unwrap_or(0);
                let hi = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
                hi - lo
            })
            .sum()
    }

    /// Polynomial model: multiplied by the unit that makes every exponent
    /// nonnegative with some exponent zero in each variable.
    pub fn to_model(&self) -> Poly {
        let r = self.ring.rank;
        let mins: Vec<i64> = (0..r).map(|i| self.terms.keys().map(|e| e[i]).min().unwrap_or(0)).collect();
        Poly::from_terms(
            self.ring.field,
            r,
            MonomialOrder::Grevlex,
            self.terms.iter().map(|(e, c)| {
                let m: Monomial = e.iter().zip(&mins).map(|(a, b)| (a - b) as u32).collect();
                (m, c.clone())
            }),
        )
    }

    pub fn from_model(ring: LaurentRing, p: &Poly) -> LaurentPoly {
        LaurentPoly::from_terms(
            ring,
            p.terms.iter().map(|(m, c)| (m.iter().map(|&e| e as i64).collect(), c.clone())),
        )
    }

    /// Image under the homomorphism sending `x_j` to the unit `x^{cols[j]}` of
    /// `target`.
    pub fn substitute(&self, target: LaurentRing, cols: &[Vec<i64>]) -> LaurentPoly {
        LaurentPoly::from_terms(
            target,
            self.terms.iter().map(|(e, c)| {
                let v: Vec<i64> = (0..target.rank)
                    .map(|i| e.iter().zip(cols).map(|(a, col)| a * col[i]).sum())
                    .collect();
                (v, c.clone())
            }),
        )
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_rendered();
            let abs = if neg { (-c).render() } else { c.render() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(x, _)| **x != 0)
                .map(|(x, n)| if *x == 1 { n.clone() } else { format!("{n}^{x}") })
                .collect();
            if vars.is_empty() {
                out.push_str(&abs);
            } else {
                if abs != "1" {
                    out.push_str(&abs);
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&self.ring.var_names()))
    }
}

/// External storage for saturated bases, keyed by [`LaurentIdeal::cache_key`].
pub trait BasisStore: Send + Sync {
    fn load(&self, key: &str) -> Option<String>;
    fn store(&self, key: &str, value: &str);
}

static STORE: OnceLock<Box<dyn BasisStore>> = OnceLock::new();

/// Installs a process-wide basis store; later calls are ignored.
pub fn set_basis_store(store: Box<dyn BasisStore>) {
    let _ = STORE.set(store);
}

fn encode_basis(basis: &[Poly]) -> String {
    basis
        .iter()
        .map(|p| {
            p.terms
                .iter()
                .map(|(m, c)| {
                    let e: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                    format!("{}:{}", e.join(","), c.render())
                })
                .collect::<Vec<_>>()
                .join(";")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_scalar(field: Field, s: &str) -> Option<Scalar> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let q = match s.split_once('/') {
        Some((a, b)) => BigRational::new(a.parse::<BigInt>().ok()?, b.parse::<BigInt>().ok()?),
        None => BigRational::from_integer(s.parse::<BigInt>().ok()?),
    };
    field.from_rational(&q)
}

fn decode_basis(ring: LaurentRing, text: &str) -> Option<Vec<Poly>> {
    let mut out = Vec::new();
    for line in text.lines().filter(|l| !l.is_empty()) {
        let mut terms = Vec::new();
        for t in line.split(';') {
            let (e, c) = t.split_once(':')?;
            let m: Monomial = if e.is_empty() {
                Vec::new()
            } else {
                e.split(',').map(|x| x.parse().ok()).collect::<Option<_>>()?
            };
            if m.len() != ring.rank {
                return None;
            }
            terms.push((m, parse_scalar(ring.field, c)?));
        }
        out.push(Poly::from_terms(ring.field, ring.rank, MonomialOrder::Grevlex, terms));
    }
    Some(out)
}

#[derive(Debug, Clone)]
pub struct LaurentIdeal {
    pub ring: LaurentRing,
    pub generators: Vec<LaurentPoly>,
    basis: Vec<Poly>,
}

impl PartialEq for LaurentIdeal {
    fn eq(&self, o: &LaurentIdeal) -> bool {
        self.ring == o.ring && self.basis == o.basis
    }
}

impl Eq for LaurentIdeal {}

impl LaurentIdeal {
    pub fn new(ring: LaurentRing, generators: Vec<LaurentPoly>) -> Result<LaurentIdeal> {
        if generators.iter().any(|g| g.ring != ring) {
            return Err(Error::RingMismatch);
        }
        let key = LaurentIdeal::cache_key(ring, &generators);
        if let Some(store) = STORE.get() {
            if let Some(basis) = store.load(&key).and_then(|t| decode_basis(ring, &t)) {
                return Ok(LaurentIdeal { ring, generators, basis });
            }
        }
        let models: Vec<Poly> = generators.iter().filter(|g| !g.is_zero()).map(|g| g.to_model()).collect();
        let vars: Vec<usize> = (0..ring.rank).collect();
        let basis = saturate(&models, &vars);
        if let Some(store) = STORE.get() {
            store.store(&key, &encode_basis(&basis));
        }
        Ok(LaurentIdeal { ring, generators, basis })
    }

    fn from_model_basis(ring: LaurentRing, gens: &[Poly]) -> LaurentIdeal {
        let generators = gens.iter().map(|p| LaurentPoly::from_model(ring, p)).collect();
        LaurentIdeal::new(ring, generators).expect("same ring")
    }

    pub fn zero(ring: LaurentRing) -> LaurentIdeal {
        LaurentIdeal::new(ring, Vec::new()).unwrap()
    }

    pub fn unit(ring: LaurentRing) -> LaurentIdeal {
        LaurentIdeal::new(ring, vec![LaurentPoly::one(ring)]).unwrap()
    }

    /// Canonical text identifying the basis computation.
    pub fn cache_key(ring: LaurentRing, generators: &[LaurentPoly]) -> String {
        let mut gens: Vec<String> = generators.iter().map(|g| g.to_string()).collect();
        gens.sort();
        format!("sat-grevlex|{}|{}|{}", ring.field, ring.rank, gens.join(","))
    }

    /// Reduced grevlex basis of the saturated polynomial model.
    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn basis_laurent(&self) -> Vec<LaurentPoly> {
        self.basis.iter().map(|p| LaurentPoly::from_model(self.ring, p)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    pub fn is_proper(&self) -> bool {
        !self.is_unit()
    }

    /// `dim_k kA/I` when finite.
    pub fn quotient_dim(&self) -> Option<usize> {
        if self.is_unit() {
            return Some(0);
        }
        if self.ring.rank == 0 {
            return Some(1);
        }
        let pure = |i: usize| self.basis.iter().any(|p| p.lm().iter().enumerate().all(|(j, &e)| j == i || e == 0));
        if self.basis.is_empty() || !(0..self.ring.rank).all(pure) {
            return None;
        }
        Some(standard_monomial_count(&self.basis))
    }

    pub fn contains(&self, f: &LaurentPoly) -> Result<bool> {
        if f.ring != self.ring {
            return Err(Error::RingMismatch);
        }
        Ok(f.is_zero() || reduce(&f.to_model(), &self.basis).is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &LaurentIdeal) -> Result<bool> {
        if other.ring != self.ring {
            return Err(Error::RingMismatch);
        }
        Ok(other.basis.iter().all(|p| reduce(p, &self.basis).is_zero()))
    }

    pub fn add(&self, extra: &[LaurentPoly]) -> Result<LaurentIdeal> {
        let mut gens = self.basis_laurent();
        gens.extend(extra.iter().cloned());
        LaurentIdeal::new(self.ring, gens)
    }

    pub fn sum(&self, other: &LaurentIdeal) -> Result<LaurentIdeal> {
        self.add(&other.basis_laurent())
    }

    pub fn product(&self, other: &LaurentIdeal) -> Result<LaurentIdeal> {
        if other.ring != self.ring {
            return Err(Error::RingMismatch);
        }
        let mut gens = Vec::new();
        for a in self.basis_laurent() {
            for b in other.basis_laurent() {
                gens.push(a.mul(&b));
            }
        }
        LaurentIdeal::new(self.ring, gens)
    }

    pub fn intersect(&self, other: &LaurentIdeal) -> Result<LaurentIdeal> {
        if other.ring != self.ring {
            return Err(Error::RingMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(LaurentIdeal::zero(self.ring));
        }
        let r = self.ring.rank;
        let f = self.ring.field;
        // t*I + (1-t)*J in k[t, x], then eliminate t
        let map: Vec<usize> = (1..=r).collect();
        let order = MonomialOrder::Block(1);
        let t = Poly::var(f, r + 1, order, 0);
        let one_minus_t = Poly::one(f, r + 1, order).sub(&t);
        let mut gens = Vec::new();
        for p in &self.basis {
            gens.push(p.embed(r + 1, &map, order).mul(&t));
        }
        for p in &other.basis {
            gens.push(p.embed(r + 1, &map, order).mul(&one_minus_t));
        }
        let elim = eliminate(&gens, 1);
        let back: Vec<Poly> = elim.iter().map(|p| drop_leading_vars(p, 1)).collect();
        Ok(LaurentIdeal::from_model_basis(self.ring, &back))
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "(0)".to_string();
        }
        let names = self.ring.var_names();
        let parts: Vec<String> = self.basis_laurent().iter().map(|p| p.render(&names)).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for LaurentIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Removes the first `k` variables, which must not occur.
fn drop_leading_vars(p: &Poly, k: usize) -> Poly {
    let n = p.nvars - k;
    Poly::from_terms(
        p.field,
        n,
        MonomialOrder::Grevlex,
        p.terms.iter().map(|(m, c)| (m[k..].to_vec(), c.clone())),
    )
}

/// A finite-index subgroup `B = <x^{m_1}, ..., x^{m_r}>` of `A`, given by the
/// integer matrix whose columns are the `m_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteIndexEmbedding {
    pub matrix: Vec<Vec<i64>>,
}

impl FiniteIndexEmbedding {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<FiniteIndexEmbedding> {
        let r = matrix.len();
        if matrix.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidInput("embedding matrix must be square".into()));
        }
        let e = FiniteIndexEmbedding { matrix };
        if r > 0 && e.det() == 0 {
            return Err(Error::InvalidInput("embedding matrix is singular".into()));
        }
        Ok(e)
    }

    pub fn identity(r: usize) -> FiniteIndexEmbedding {
        FiniteIndexEmbedding { matrix: (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect() }
    }

    /// `diag(d, ..., d)`-style scaling in rank 1 is the common case.
    pub fn scalar(r: usize, d: i64) -> FiniteIndexEmbedding {
        FiniteIndexEmbedding { matrix: (0..r).map(|i| (0..r).map(|j| if i == j { d } else { 0 }).collect()).collect() }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn det(&self) -> i64 {
        let m: Vec<Vec<i128>> = self.matrix.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        lattice::det(&m) as i64
    }

    /// `|A : B|`.
    pub fn index(&self) -> u64 {
        self.det().unsigned_abs()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        (0..r).map(|j| (0..r).map(|i| self.matrix[i][j]).collect()).collect()
    }

    /// `C <= B <= A` from `B <= A` (self) and `C <= B` in `B`-coordinates.
    pub fn compose(&self, inner: &FiniteIndexEmbedding) -> FiniteIndexEmbedding {
        let r = self.rank();
        let matrix = (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| self.matrix[i][k] * inner.matrix[k][j]).sum()).collect())
            .collect();
        FiniteIndexEmbedding { matrix }
    }

    /// Expresses `deeper <= self` (both relative to `A`) in the coordinates
    /// of `self`; fails unless the columns of `deeper` lie in `self`.
    pub fn relative(&self, deeper: &FiniteIndexEmbedding) -> Result<FiniteIndexEmbedding> {
        let r = self.rank();
        if deeper.rank() != r {
            return Err(Error::InvalidInput("embeddings of different rank".into()));
        }
        let field = Field::Rationals;
        let a = crate::linalg::Matrix::from_i64(field, &self.matrix);
        let inv = a.inverse().ok_or_else(|| Error::InvalidInput("singular embedding".into()))?;
        let n = inv.mul(&crate::linalg::Matrix::from_i64(field, &deeper.matrix));
        let mut matrix = vec![vec![0i64; r]; r];
        for i in 0..r {
            for j in 0..r {
                let q = n[(i, j)].as_rational().unwrap();
                if !q.is_integer() {
                    return Err(Error::InvalidInput("chain is not descending: lattice not contained".into()));
                }
                matrix[i][j] = num_traits::ToPrimitive::to_i64(q.numer()).unwrap();
            }
        }
        FiniteIndexEmbedding::new(matrix)
    }

    /// True when `deeper` (relative to `A`) lies inside `self`.
    pub fn contains(&self, deeper: &FiniteIndexEmbedding) -> bool {
        self.relative(deeper).is_ok()
    }

    pub fn render(&self) -> String {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        format!("[{}]", rows.join("; "))
    }
}

/// `I ∩ kB`, as an ideal of `kB` in the coordinates given by `emb`.
pub fn contract(ideal: &LaurentIdeal, emb: &FiniteIndexEmbedding) -> Result<LaurentIdeal> {
    let ring = ideal.ring;
    let r = ring.rank;
    if emb.rank() != r {
        return Err(Error::RingMismatch);
    }
    if ideal.is_zero() || ideal.is_unit() || r == 0 {
        return Ok(ideal.clone());
    }
    let f = ring.field;
    let order = MonomialOrder::Block(r);
    // variables: x_0..x_{r-1} then u_0..u_{r-1}
    let xmap: Vec<usize> = (0..r).collect();
    let mut gens: Vec<Poly> = ideal.basis.iter().map(|p| p.embed(2 * r, &xmap, order)).collect();
    for (j, col) in emb.columns().iter().enumerate() {
        let mut neg = vec![0u32; 2 * r];
        let mut pos = vec![0u32; 2 * r];
        for (i, &c) in col.iter().enumerate() {
            if c > 0 {
                pos[i] = c as u32;
            } else {
                neg[i] = (-c) as u32;
            }
        }
        neg[r + j] += 1;
        let g = Poly::from_terms(f, 2 * r, order, [(neg, f.one()), (pos, -f.one())]);
        gens.push(g);
    }
    let sat = saturate(&gens, &xmap);
    let elim = eliminate(&sat, r);
    let back: Vec<Poly> = elim.iter().map(|p| drop_leading_vars(p, r)).collect();
    Ok(LaurentIdeal::from_model_basis(ring, &back))
}

/// `Q kA` for an ideal `Q` of `kB`.
pub fn extend(q: &LaurentIdeal, emb: &FiniteIndexEmbedding) -> Result<LaurentIdeal> {
    if emb.rank() != q.ring.rank {
        return Err(Error::RingMismatch);
    }
    let cols = emb.columns();
    let gens = q.basis_laurent().iter().map(|g| g.substitute(q.ring, &cols)).collect();
    LaurentIdeal::new(q.ring, gens)
}

/// True when the characteristic does not divide `|A : B|`.
pub fn char_coprime_index(emb: &FiniteIndexEmbedding, ring: &LaurentRing) -> bool {
    match ring.field.characteristic() {
        0 => true,
        p => emb.index() % p != 0,
    }
}

/// Minimal primes over an ideal, as an antichain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSet {
    pub members: Vec<LaurentIdeal>,
}

impl PrimeSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &LaurentIdeal) -> bool {
        self.members.contains(p)
    }

    pub fn is_antichain(&self) -> bool {
        self.members.iter().enumerate().all(|(i, a)| {
            self.members
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !a.contains_ideal(b).unwrap_or(true))
        })
    }

    /// Minimal members of an arbitrary collection of primes.
    pub fn minimal_of(primes: Vec<LaurentIdeal>) -> PrimeSet {
        let mut uniq: Vec<LaurentIdeal> = Vec::new();
        for p in primes {
            if !uniq.contains(&p) {
                uniq.push(p);
            }
        }
        let mut members: Vec<LaurentIdeal> = uniq
            .iter()
            .filter(|p| !uniq.iter().any(|q| q != *p && p.contains_ideal(q).unwrap_or(false)))
            .cloned()
            .collect();
        members.sort_by_key(|p| p.render());
        PrimeSet { members }
    }

    pub fn render(&self) -> String {
        let v: Vec<String> = self.members.iter().map(|p| p.render()).collect();
        format!("{{{}}}", v.join(", "))
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

const SPLIT_DEPTH: usize = 64;

pub fn minimal_primes(ideal: &LaurentIdeal) -> Result<PrimeSet> {
    let comps = prime_components(ideal, 0)?;
    Ok(PrimeSet::minimal_of(comps))
}

/// Proper members only, and nonempty; with `torsion`, the zero ideal is
/// excluded as well.
pub fn mu_proper(ps: &PrimeSet, torsion: bool) -> bool {
    !ps.is_empty() && ps.members.iter().all(|p| p.is_proper() && !(torsion && p.is_zero()))
}

fn with_model(ideal: &LaurentIdeal, f: &Poly) -> Result<LaurentIdeal> {
    ideal.add(&[LaurentPoly::from_model(ideal.ring, f)])
}

fn split_on(ideal: &LaurentIdeal, factors: &[Poly], depth: usize) -> Result<Vec<LaurentIdeal>> {
    let mut out = Vec::new();
    for f in factors {
        out.extend(prime_components(&with_model(ideal, f)?, depth + 1)?);
    }
    Ok(out)
}

/// Prime ideals whose intersection has the radical of `ideal`; every
/// minimal prime occurs among them.
fn prime_components(ideal: &LaurentIdeal, depth: usize) -> Result<Vec<LaurentIdeal>> {
    if ideal.is_unit() {
        return Ok(Vec::new());
    }
    if ideal.is_zero() {
        return Ok(vec![ideal.clone()]);
    }
    if depth > SPLIT_DEPTH {
        return Err(Error::IndecisivePrimality(format!("splitting depth exceeded at {ideal}")));
    }
    let mut basis: Vec<Poly> = ideal.basis.to_vec();
    basis.sort_by_key(|p| (p.total_degree(), p.terms.len()));
    for g in &basis {
        let fs = laurent_factors(g)?;
        if fs.len() >= 2 {
            return split_on(ideal, &fs, depth);
        }
        if fs.len() == 1 && fs[0] != g.monic() {
            return split_on(ideal, &fs, depth);
        }
    }
    if basis.len() == 1 || basis.iter().all(|p| p.total_degree() <= 1) {
        return Ok(vec![ideal.clone()]);
    }
    let r = ideal.ring.rank;
    let mut elims = Vec::new();
    for i in 0..r {
        let e = eliminant(&ideal.basis, i);
        if let Some(e) = &e {
            let u = to_upoly(e, i);
            let fs = crate::factor::factor(&u);
            if fs.len() > 1 || fs.iter().any(|(_, m)| *m > 1) {
                let polys: Vec<Poly> = fs
                    .iter()
                    .map(|(g, _)| crate::factor::from_upoly(g, r, i, MonomialOrder::Grevlex))
                    .collect();
                return split_on(ideal, &polys, depth);
            }
        }
        elims.push(e);
    }
    if elims.iter().all(|e| e.is_some()) {
        let dim = standard_monomial_count(&ideal.basis);
        if elims.iter().any(|e| e.as_ref().unwrap().total_degree() as usize == dim) {
            return Ok(vec![ideal.clone()]);
        }
        for c in 1..=(8 * r as i64) {
            let weights: Vec<Scalar> = (0..r).map(|i| ideal.ring.field.from_i64(c.pow(i as u32))).collect();
            if weights.iter().any(|w| w.is_zero()) {
                continue;
            }
            let (m, ell) = linear_form_minpoly(&ideal.basis, &weights);
            if m.deg() != dim {
                continue;
            }
            if is_irreducible(&m) {
                return Ok(vec![ideal.clone()]);
            }
            let polys: Vec<Poly> =
                crate::factor::irreducible_factors(&m).iter().map(|g| compose_upoly(g, &ell)).collect();
            return split_on(ideal, &polys, depth);
        }
    }
    Err(Error::IndecisivePrimality(format!("no certificate applies to {ideal}")))
}

/// Generator of `I ∩ k[x_i]` for a saturated model basis, if nonzero.
fn eliminant(basis: &[Poly], i: usize) -> Option<Poly> {
    let n = basis[0].nvars;
    let last = n - 1;
    let perm: Vec<usize> = (0..n).map(|v| if v == i { last } else if v == last { i } else { v }).collect();
    let moved: Vec<Poly> = basis.iter().map(|p| p.permute(&perm)).collect();
    let elim = eliminate(&moved, last);
    elim.into_iter()
        .find(|p| !p.is_zero())
        .map(|p| p.with_order(MonomialOrder::Grevlex).permute(&perm))
}

fn standard_monomial_count(basis: &[Poly]) -> usize {
    let n = basis[0].nvars;
    let bounds: Vec<u32> = (0..n)
        .map(|i| {
            basis
                .iter()
                .filter(|p| p.lm().iter().enumerate().all(|(j, &e)| j == i || e == 0))
                .map(|p| p.lm()[i])
                .min()
                .unwrap_or(0)
        })
        .collect();
    let mut count = 0;
    let mut m = vec![0u32; n];
    loop {
        if !basis.iter().any(|p| crate::poly::divides(p.lm(), &m)) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            m[k] += 1;
            if m[k] < bounds[k] {
                break;
            }
            m[k] = 0;
            k += 1;
        }
    }
}

/// Minimal polynomial of `sum w_i x_i` modulo the ideal, and the form itself.
fn linear_form_minpoly(basis: &[Poly], weights: &[Scalar]) -> (crate::upoly::UPoly, Poly) {
    let n = basis[0].nvars;
    let f = basis[0].field;
    let order = MonomialOrder::Block(n);
    let map: Vec<usize> = (0..n).collect();
    let mut gens: Vec<Poly> = basis.iter().map(|p| p.embed(n + 1, &map, order)).collect();
    let mut ell = Poly::zero(f, n, MonomialOrder::Grevlex);
    let mut rel = Poly::var(f, n + 1, order, n);
    for (i, w) in weights.iter().enumerate() {
        ell = ell.add(&Poly::var(f, n, MonomialOrder::Grevlex, i).scale(w));
        rel = rel.sub(&Poly::var(f, n + 1, order, i).scale(w));
    }
    gens.push(rel);
    let elim = eliminate(&gens, n);
    let t = elim.into_iter().find(|p| !p.is_zero()).expect("zero-dimensional");
    (to_upoly(&t, n), ell)
}

/// `g(ell)` for a univariate `g`.
fn compose_upoly(g: &crate::upoly::UPoly, ell: &Poly) -> Poly {
    let mut acc = Poly::zero(ell.field, ell.nvars, ell.order);
    for c in g.coeffs.iter().rev() {
        acc = acc.mul(ell).add(&Poly::constant(ell.field, ell.nvars, ell.order, c.clone()));
    }
    acc
}

/// One minimal prime of `I` and the fate of its contraction.
#[derive(Debug, Clone)]
pub struct ContractionEntry {
    pub prime: LaurentIdeal,
    pub contraction: LaurentIdeal,
    pub minimal_below: bool,
    /// Index of some `S` in `mu_a` with `S ∩ kB ⊊ P ∩ kB`.
    pub smaller_witness: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Lemma7Report {
    pub contraction: LaurentIdeal,
    pub mu_a: PrimeSet,
    pub mu_b: PrimeSet,
    /// For each `Q` in `mu_b`, the indices of the primes of `mu_a` over it.
    pub covers: Vec<Vec<usize>>,
    pub entries: Vec<ContractionEntry>,
    pub clause_i: bool,
    pub clause_ii: bool,
    pub clause_iii: bool,
    pub clause_iv: bool,
    pub covering_bound: bool,
}

impl Lemma7Report {
    pub fn all_hold(&self) -> bool {
        self.clause_i && self.clause_ii && self.clause_iii && self.clause_iv && self.covering_bound
    }
}

pub fn lemma7_report(ideal: &LaurentIdeal, emb: &FiniteIndexEmbedding) -> Result<Lemma7Report> {
    let contraction = contract(ideal, emb)?;
    let mu_a = minimal_primes(ideal)?;
    let mu_b = minimal_primes(&contraction)?;
    let contracted: Vec<LaurentIdeal> =
        mu_a.members.iter().map(|p| contract(p, emb)).collect::<Result<_>>()?;
    let covers: Vec<Vec<usize>> = mu_b
        .members
        .iter()
        .map(|q| (0..contracted.len()).filter(|&i| &contracted[i] == q).collect())
        .collect();
    let clause_i = covers.iter().all(|c| !c.is_empty());
    let mut entries = Vec::new();
    let mut clause_ii = true;
    for (i, p) in mu_a.members.iter().enumerate() {
        let c = &contracted[i];
        let minimal_below = mu_b.contains(c);
        let smaller_witness = (0..contracted.len())
            .find(|&j| contracted[j] != *c && c.contains_ideal(&contracted[j]).unwrap_or(false));
        // P ∩ kB is minimal exactly when no other lift contracts strictly below it
        if minimal_below == smaller_witness.is_some() {
            clause_ii = false;
        }
        entries.push(ContractionEntry { prime: p.clone(), contraction: c.clone(), minimal_below, smaller_witness });
    }
    let radical = mu_a
        .members
        .iter()
        .try_fold(LaurentIdeal::unit(ideal.ring), |acc, p| acc.intersect(p))?;
    let clause_iii = minimal_primes(&contract(&radical, emb)?)? == mu_b;
    let clause_iv = !mu_a.members.iter().all(|p| p.is_proper()) || mu_b.members.iter().all(|q| q.is_proper());
    let covering_bound = mu_b.len() <= mu_a.len();
    let report = Lemma7Report {
        contraction,
        mu_a,
        mu_b,
        covers,
        entries,
        clause_i,
        clause_ii,
        clause_iii,
        clause_iv,
        covering_bound,
    };
    if !report.all_hold() {
        let failed: Vec<&str> = [
            ("i", report.clause_i),
            ("ii", report.clause_ii),
            ("iii", report.clause_iii),
            ("iv", report.clause_iv),
            ("covering bound", report.covering_bound),
        ]
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| *n)
        .collect();
        return Err(Error::Lemma7Violation(format!("clauses {} fail for {ideal}", failed.join(", "))));
    }
    Ok(report)
}

pub const CLAUSE_CHAR: &str = "char";
pub const CLAUSE_EXTENSION: &str = "I = (I∩kB)kA";
pub const CLAUSE_MINIMAL: &str = "Q minimal";
pub const CLAUSE_UNIQUE: &str = "unique P";

/// Lifts `Q` to the unique minimal prime of `I` above it, which must be `QkA`.
pub fn lemma8_lift(ideal: &LaurentIdeal, emb: &FiniteIndexEmbedding, q: &LaurentIdeal) -> Result<LaurentIdeal> {
    lemma8_lift_at(ideal, emb, q, 0)
}

pub(crate) fn lemma8_lift_at(
    ideal: &LaurentIdeal,
    emb: &FiniteIndexEmbedding,
    q: &LaurentIdeal,
    index: usize,
) -> Result<LaurentIdeal> {
    let fail = |clause: &str| Error::HypothesisFailed { index, clause: clause.to_string() };
    if !char_coprime_index(emb, &ideal.ring) {
        return Err(fail(CLAUSE_CHAR));
    }
    let c = contract(ideal, emb)?;
    if extend(&c, emb)? != *ideal {
        return Err(fail(CLAUSE_EXTENSION));
    }
    if !minimal_primes(&c)?.contains(q) {
        return Err(fail(CLAUSE_MINIMAL));
    }
    let mu_a = minimal_primes(ideal)?;
    let mut lifts = Vec::new();
    for p in &mu_a.members {
        if contract(p, emb)? == *q {
            lifts.push(p.clone());
        }
    }
    if lifts.len() != 1 {
        return Err(fail(CLAUSE_UNIQUE));
    }
    let e = extend(q, emb)?;
    if e != lifts[0] || minimal_primes(&e)?.members != vec![e.clone()] {
        return Err(Error::ConclusionFailed(format!("{e} is not the unique lift {}", lifts[0])));
    }
    Ok(e)
}

/// `μ` of `⊕ kA/J_i`, computed from the annihilator `∩ J_i` and checked
/// against the minimal members of `∪ μ(J_i)`.
pub fn mu_of_module(ring: LaurentRing, ideals: &[LaurentIdeal]) -> Result<PrimeSet> {
    let mut ann = LaurentIdeal::unit(ring);
    let mut union = Vec::new();
    for j in ideals {
        if j.ring != ring {
            return Err(Error::RingMismatch);
        }
        ann = ann.intersect(j)?;
        union.extend(minimal_primes(j)?.members);
    }
    let mu = minimal_primes(&ann)?;
    if PrimeSet::minimal_of(union) != mu {
        return Err(Error::ConclusionFailed("mu of the annihilator differs from the summands".into()));
    }
    Ok(mu)
}

/// Parse failure with a 0-based character column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub expected: String,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    ring: LaurentRing,
}

impl Parser<'_> {
    fn err<T>(&self, expected: &str) -> std::result::Result<T, ParseError> {
        Err(ParseError { column: self.pos, expected: expected.to_string() })
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn int(&mut self) -> std::result::Result<i64, ParseError> {
        self.ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let t = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        match t.parse() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("integer")
            }
        }
    }

    fn expr(&mut self) -> std::result::Result<LaurentPoly, ParseError> {
        let mut acc = LaurentPoly::zero(self.ring);
        let mut sign = 1;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let t = self.product()?;
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn product(&mut self) -> std::result::Result<LaurentPoly, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.int()?;
                    let d = self.ring.field.from_i64(d);
                    if d.is_zero() {
                        return self.err("nonzero denominator");
                    }
                    acc = acc.scale(&d.inv());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn exponent(&mut self) -> std::result::Result<Option<i64>, ParseError> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            Ok(Some(self.int()?))
        } else {
            Ok(None)
        }
    }

    fn factor(&mut self) -> std::result::Result<LaurentPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("')'");
                }
                self.pos += 1;
                match self.exponent()? {
                    None => Ok(e),
                    Some(k) if k >= 0 => Ok(e.pow(k as u32)),
                    Some(_) => {
                        if e.terms.len() == 1 {
                            let (v, c) = e.terms.iter().next().unwrap();
                            Ok(LaurentPoly::monomial(self.ring, v.iter().map(|x| -x).collect(), c.inv()))
                        } else {
                            self.err("nonnegative exponent on a non-monomial")
                        }
                    }
                }
            }
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let idx: usize = match std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse() {
                    Ok(i) if i >= 1 && i <= self.ring.rank => i,
                    _ => {
                        self.pos = start;
                        return self.err(&format!("variable index in 1..={}", self.ring.rank));
                    }
                };
                let k = self.exponent()?.unwrap_or(1);
                let mut v = vec![0; self.ring.rank];
                v[idx - 1] = k;
                Ok(LaurentPoly::unit(self.ring, v))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.int()?;
                Ok(LaurentPoly::constant(self.ring, self.ring.field.from_i64(v)))
            }
            _ => self.err("term"),
        }
    }
}

impl LaurentPoly {
    /// Parses expressions such as `x1^2*x2^-1 - 3/2` or `(x1 - 1)*(x2 + 1)`.
    pub fn parse(ring: LaurentRing, text: &str) -> std::result::Result<LaurentPoly, ParseError> {
        let mut p = Parser { s: text.as_bytes(), pos: 0, ring };
        let e = p.expr()?;
        if p.peek().is_some() {
            return p.err("end of expression");
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(rank: usize, p: u64) -> LaurentRing {
        LaurentRing::new(rank, if p == 0 { Field::Rationals } else { Field::Prime(p) })
    }

    fn ideal(r: LaurentRing, gens: &[&str]) -> LaurentIdeal {
        LaurentIdeal::new(r, gens.iter().map(|g| LaurentPoly::parse(r, g).unwrap()).collect()).unwrap()
    }

    fn lp(r: LaurentRing, s: &str) -> LaurentPoly {
        LaurentPoly::parse(r, s).unwrap()
    }

    #[test]
    fn bases() {
        let r = ring(1, 5);
        assert!(ideal(r, &[]).basis().is_empty());
        assert_eq!(ideal(r, &["1"]).render(), "(1)");
        assert_eq!(ideal(r, &["x1 - x1^3"]).render(), "(x1^2 - 1)");
        let q = ring(2, 0);
        assert_eq!(ideal(q, &["x1 - 1", "x2 - 1"]).basis().len(), 2);
    }

    #[test]
    fn membership() {
        let r = ring(1, 5);
        let i = ideal(r, &["x1^2 - 1"]);
        assert!(i.contains(&LaurentPoly::zero(r)).unwrap());
        assert!(i.contains(&lp(r, "x1^4 - 1")).unwrap());
        assert!(!i.contains(&lp(r, "x1 - 1")).unwrap());
        assert!(i.contains(&lp(r, "x1^-3 - x1^-1")).unwrap());
        assert!(ideal(r, &["1"]).contains(&lp(r, "x1 + 3")).unwrap());
        assert_eq!(i.contains(&lp(ring(1, 7), "x1")), Err(Error::RingMismatch));
    }

    #[test]
    fn contraction_and_extension() {
        let r = ring(1, 5);
        let b = FiniteIndexEmbedding::new(vec![vec![2]]).unwrap();
        assert_eq!(contract(&ideal(r, &["x1^2 - 2"]), &b).unwrap(), ideal(r, &["x1 - 2"]));
        let c = contract(&ideal(r, &["x1 - 1"]), &b).unwrap();
        assert_eq!(c, ideal(r, &["x1 - 1"]));
        let e = extend(&c, &b).unwrap();
        assert_eq!(e, ideal(r, &["x1^2 - 1"]));
        assert!(ideal(r, &["x1 - 1"]).contains_ideal(&e).unwrap());
        assert_ne!(e, ideal(r, &["x1 - 1"]));
        assert!(contract(&ideal(r, &[]), &b).unwrap().is_zero());
        assert!(contract(&ideal(r, &["1"]), &b).unwrap().is_unit());
    }

    #[test]
    fn rank_two_contraction() {
        let r = ring(2, 3);
        let b = FiniteIndexEmbedding::new(vec![vec![1, 1], vec![-1, 1]]).unwrap();
        let i = ideal(r, &["x1*x2 - 2", "x2^2 - x1"]);
        let c = contract(&i, &b).unwrap();
        let e = extend(&c, &b).unwrap();
        assert!(i.contains_ideal(&e).unwrap());
    }

    #[test]
    fn minimal_primes_examples() {
        let r = ring(1, 5);
        let mu = minimal_primes(&ideal(r, &["x1^2 - 1"])).unwrap();
        assert_eq!(mu.members, vec![ideal(r, &["x1 + 1"]), ideal(r, &["x1 - 1"])]);
        assert_eq!(minimal_primes(&ideal(r, &["x1^2 - 2"])).unwrap().len(), 1);
        assert_eq!(minimal_primes(&ideal(r, &[])).unwrap().members, vec![ideal(r, &[])]);
        assert!(minimal_primes(&ideal(r, &["1"])).unwrap().is_empty());
        let q = ring(2, 0);
        let mu = minimal_primes(&ideal(q, &["(x1 - 1)*(x2 - 1)"])).unwrap();
        assert_eq!(mu.len(), 2);
        assert!(mu.is_antichain());
        let z = minimal_primes(&ideal(q, &["x1^2 - 2", "x2^2 - 2"])).unwrap();
        assert_eq!(z.len(), 2);
    }

    #[test]
    fn intersection() {
        let r = ring(1, 5);
        let i = ideal(r, &["x1 - 1"]).intersect(&ideal(r, &["x1^2 - 1"])).unwrap();
        assert_eq!(i, ideal(r, &["x1^2 - 1"]));
        let mu = mu_of_module(r, &[ideal(r, &["x1 - 1"]), ideal(r, &["x1^2 - 1"])]).unwrap();
        assert_eq!(mu.len(), 2);
        let mu = mu_of_module(r, &[ideal(r, &["1"]), ideal(r, &["x1 - 1"])]).unwrap();
        assert_eq!(mu.members, vec![ideal(r, &["x1 - 1"])]);
    }

    #[test]
    fn lemma7_and_8() {
        let r = ring(1, 5);
        let b = FiniteIndexEmbedding::new(vec![vec![2]]).unwrap();
        let rep = lemma7_report(&ideal(r, &["x1^2 - 1"]), &b).unwrap();
        assert_eq!(rep.covers, vec![vec![0, 1]]);
        let i = ideal(r, &["x1^2 - 2"]);
        let q = ideal(r, &["x1 - 2"]);
        assert_eq!(lemma8_lift(&i, &b, &q).unwrap(), i);
        let err = lemma8_lift(&ideal(r, &["x1 - 1"]), &b, &ideal(r, &["x1 - 1"])).unwrap_err();
        assert_eq!(err, Error::HypothesisFailed { index: 0, clause: CLAUSE_EXTENSION.into() });
        let err = lemma8_lift(&ideal(r, &["x1^2 - 1"]), &b, &ideal(r, &["x1 - 1"])).unwrap_err();
        assert_eq!(err, Error::HypothesisFailed { index: 0, clause: CLAUSE_UNIQUE.into() });
        assert!(!char_coprime_index(&b, &ring(1, 2)));
        let m = FiniteIndexEmbedding::new(vec![vec![2, 0], vec![0, 3]]).unwrap();
        assert!(!char_coprime_index(&m, &ring(2, 3)));
        assert!(char_coprime_index(&m, &ring(2, 0)));
    }

    #[test]
    fn parser_errors() {
        let r = ring(2, 0);
        assert_eq!(LaurentPoly::parse(r, "x3").unwrap_err().column, 1);
        assert!(LaurentPoly::parse(r, "x1 +").is_err());
        assert_eq!(lp(r, "x1^2*x2^-1 - 3/2").to_string(), "x1^2*x2^-1 - 3/2");
    }
}
