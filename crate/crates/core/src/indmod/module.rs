//! Finite-dimensional modules with explicit matrices, and induction.
//!
//! Vectors are rows and group elements act on the right, so `v * g` is
//! `v` times the matrix of `g` and the matrix of `gh` is that of `g` times
//! that of `h`.

use std::collections::HashSet;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::nilgroup::{GroupElement, PcPresentation, Subgroup};
use crate::scalar::{Field, Scalar};

/// A module over the subgroup `acting`, with one invertible matrix per
/// element of its igs.
#[derive(Debug, Clone)]
pub struct FDModule {
    pub acting: Subgroup,
    pub field: Field,
    pub dim: usize,
    pub action: Vec<Matrix>,
    inverse: Vec<Matrix>,
}

impl PartialEq for FDModule {
    fn eq(&self, o: &FDModule) -> bool {
        self.acting == o.acting && self.field == o.field && self.dim == o.dim && self.action == o.action
    }
}

impl FDModule {
    /// Checks invertibility and every relation of the igs presentation.
    pub fn new(acting: Subgroup, field: Field, dim: usize, action: Vec<Matrix>) -> Result<FDModule> {
        if action.len() != acting.igs.len() {
            return Err(Error::InvalidInput(format!(
                "{} matrices given for {} generators",
                action.len(),
                acting.igs.len()
            )));
        }
        let mut inverse = Vec::with_capacity(action.len());
        for m in &action {
            if m.rows != dim || m.cols != dim || m.field != field {
                return Err(Error::InvalidInput(format!("action matrix must be {dim}x{dim} over {field}")));
            }
            inverse.push(m.inverse().ok_or_else(|| Error::InvalidInput("action matrix is singular".into()))?);
        }
        let module = FDModule { acting, field, dim, action, inverse };
        module.check_relations()?;
        Ok(module)
    }

    /// Same as [`FDModule::new`] with matrices given in the column
    /// convention (`g` acts on column vectors from the left).
    pub fn from_columns(acting: Subgroup, field: Field, dim: usize, action: Vec<Matrix>) -> Result<FDModule> {
        FDModule::new(acting, field, dim, action.iter().map(Matrix::transpose).collect())
    }

    pub fn column_matrices(&self) -> Vec<Matrix> {
        self.action.iter().map(Matrix::transpose).collect()
    }

    fn check_relations(&self) -> Result<()> {
        let g = &self.acting.group;
        let igs = &self.acting.igs;
        for (i, y) in igs.iter().enumerate() {
            let d = g.depth(y);
            if g.orders[d] > 0 {
                let r = g.orders[d] as i64 / y[d];
                let lhs = self.action[i].pow(r).expect("invertible");
                if lhs != self.matrix_of(&g.pow(y, r))? {
                    return Err(Error::InvalidInput(format!("action violates the power relation of {}", g.render(y))));
                }
            }
            for (j, z) in igs.iter().enumerate().skip(i + 1) {
                let lhs = self.inverse[i].mul(&self.action[j]).mul(&self.action[i]);
                if lhs != self.matrix_of(&g.conjugate(z, y))? {
                    return Err(Error::InvalidInput(format!(
                        "action violates the relation for {}^{}",
                        g.render(z),
                        g.render(y)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &PcPresentation {
        &self.acting.group
    }

    /// Matrix of an element of the acting subgroup.
    pub fn matrix_of(&self, x: &[i64]) -> Result<Matrix> {
        let c = self
            .acting
            .coordinates(x)
            .ok_or_else(|| Error::InvalidInput(format!("{} does not act", self.group().render(x))))?;
        let mut acc = Matrix::identity(self.field, self.dim);
        for (i, &e) in c.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&self.action[i].pow(e).expect("invertible"));
            } else if e < 0 {
                acc = acc.mul(&self.inverse[i].pow(-e).expect("invertible"));
            }
        }
        Ok(acc)
    }

    pub fn act(&self, v: &[Scalar], x: &[i64]) -> Result<Vec<Scalar>> {
        Ok(self.matrix_of(x)?.vec_mul(v))
    }

    /// Module over a subgroup of the acting group.
    pub fn restrict(&self, to: &Subgroup) -> Result<FDModule> {
        let action = to.igs.iter().map(|y| self.matrix_of(y)).collect::<Result<Vec<_>>>()?;
        FDModule::new(to.clone(), self.field, self.dim, action)
    }

    pub fn zero_vector(&self) -> Vec<Scalar> {
        vec![self.field.zero(); self.dim]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = self.zero_vector();
        v[i] = self.field.one();
        v
    }

    /// Smallest invariant subspace containing `vs`.
    pub fn spin(&self, vs: &[Vec<Scalar>]) -> Subspace {
        let mut s = Subspace::new(self.field, self.dim);
        let mut queue: Vec<Vec<Scalar>> = Vec::new();
        for v in vs {
            if s.insert(v) {
                queue.push(v.clone());
            }
        }
        while let Some(v) = queue.pop() {
            for m in &self.action {
                let w = m.vec_mul(&v);
                if s.insert(&w) {
                    queue.push(w);
                }
            }
        }
        s
    }

    /// Submodule on an invariant subspace, in the coordinates of its
    /// echelon basis.
    pub fn submodule(&self, space: &Subspace) -> Result<Submodule> {
        let basis = space.basis();
        let mut action = Vec::new();
        for m in &self.action {
            let rows = basis
                .iter()
                .map(|b| space.coordinates(&m.vec_mul(b)).ok_or_else(|| Error::InvalidInput("subspace is not invariant".into())))
                .collect::<Result<Vec<_>>>()?;
            action.push(if rows.is_empty() { Matrix::zeros(self.field, 0, 0) } else { Matrix::from_rows(self.field, rows) });
        }
        let module = FDModule::new(self.acting.clone(), self.field, basis.len(), action)?;
        Ok(Submodule { basis, module })
    }

    /// Quotient by an invariant subspace.
    pub fn quotient(&self, space: &Subspace) -> Result<QuotientModule> {
        let mut full = space.clone();
        let mut complement = Vec::new();
        for i in 0..self.dim {
            let e = self.basis_vector(i);
            if full.insert(&e) {
                complement.push(e);
            }
        }
        let sub = space.basis();
        let mut all = sub.clone();
        all.extend(complement.iter().cloned());
        let k = sub.len();
        let change = if all.is_empty() { Matrix::zeros(self.field, 0, 0) } else { Matrix::from_rows(self.field, all) };
        let change_inv = change.inverse().expect("basis");
        let project = |v: &[Scalar]| -> Vec<Scalar> { change_inv.vec_mul(v)[k..].to_vec() };
        let q = complement.len();
        let mut action = Vec::new();
        for m in &self.action {
            let rows: Vec<Vec<Scalar>> = complement.iter().map(|c| project(&m.vec_mul(c))).collect();
            action.push(if q == 0 { Matrix::zeros(self.field, 0, 0) } else { Matrix::from_rows(self.field, rows) });
        }
        let module = FDModule::new(self.acting.clone(), self.field, q, action)?;
        Ok(QuotientModule { module, complement, change_inv, sub_dim: k })
    }

    /// Direct sum of copies of `self` with another module over the same group.
    pub fn direct_sum(&self, o: &FDModule) -> Result<FDModule> {
        let n = self.dim + o.dim;
        let action = self
            .action
            .iter()
            .zip(&o.action)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(self.field, n, n);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        m[(i, j)] = a[(i, j)].clone();
                    }
                }
                for i in 0..o.dim {
                    for j in 0..o.dim {
                        m[(self.dim + i, self.dim + j)] = b[(i, j)].clone();
                    }
                }
                m
            })
            .collect();
        FDModule::new(self.acting.clone(), self.field, n, action)
    }

    /// Matrices rendered in the column convention, `[[..],[..]]` per generator.
    pub fn render(&self) -> String {
        let g = self.group();
        let parts: Vec<String> = self
            .acting
            .igs
            .iter()
            .zip(self.column_matrices())
            .map(|(y, m)| format!("{} -> {}", g.render(y), m))
            .collect();
        format!("dim {} over {}: {}", self.dim, self.field, parts.join(", "))
    }
}

impl fmt::Display for FDModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// An invariant subspace with its own module structure.
#[derive(Debug, Clone)]
pub struct Submodule {
    pub basis: Vec<Vec<Scalar>>,
    pub module: FDModule,
}

impl Submodule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone)]
pub struct QuotientModule {
    pub module: FDModule,
    pub complement: Vec<Vec<Scalar>>,
    change_inv: Matrix,
    sub_dim: usize,
}

impl QuotientModule {
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.change_inv.vec_mul(v)[self.sub_dim..].to_vec()
    }
}

/// Submodule generated by one vector.
pub fn cyclic_submodule(m: &FDModule, a: &[Scalar]) -> Result<Submodule> {
    m.submodule(&m.spin(&[a.to_vec()]))
}

/// Right transversal of `k` inside `h`, `k <= h`, in the canonical order.
pub fn relative_transversal(k: &Subgroup, h: &Subgroup) -> Result<Vec<GroupElement>> {
    Ok(k.transversal()?.into_iter().filter(|t| h.contains(t)).collect())
}

/// `U ⊗ RH` written as `⊕_{t ∈ T} U t`.
#[derive(Debug, Clone)]
pub struct InducedModule {
    pub base: FDModule,
    pub transversal: Vec<GroupElement>,
    pub total: FDModule,
}

impl InducedModule {
    /// Coordinates of the block `U t_i`.
    pub fn block(&self, i: usize) -> Range<usize> {
        let d = self.base.dim;
        i * d..(i + 1) * d
    }

    /// Embeds a base vector into block `i`.
    pub fn embed(&self, i: usize, u: &[Scalar]) -> Vec<Scalar> {
        let mut v = self.total.zero_vector();
        for (k, c) in self.block(i).zip(u) {
            v[k] = c.clone();
        }
        v
    }
}

pub fn induce(u: &FDModule, over: &Subgroup) -> Result<InducedModule> {
    let k = &u.acting;
    if !k.is_subgroup_of(over) {
        return Err(Error::InvalidInput("base subgroup is not contained in the target".into()));
    }
    if k.relative_index(over).is_none() {
        return Err(Error::InfiniteIndex);
    }
    let g = over.group.clone();
    let t = relative_transversal(k, over)?;
    let pos = |x: &GroupElement| t.iter().position(|s| s == x).expect("coset representative");
    let d = u.dim;
    let n = t.len() * d;
    let mut action = Vec::new();
    for y in &over.igs {
        let mut m = Matrix::zeros(u.field, n, n);
        for (i, ti) in t.iter().enumerate() {
            let ty = g.mul(ti, y);
            let tj = k.coset_rep(&ty);
            let j = pos(&tj);
            let block = u.matrix_of(&g.mul(&ty, &g.inv(&tj)))?;
            for a in 0..d {
                for b in 0..d {
                    m[(i * d + a, j * d + b)] = block[(a, b)].clone();
                }
            }
        }
        action.push(m);
    }
    let total = FDModule::new(over.clone(), u.field, n, action)?;
    Ok(InducedModule { base: u.clone(), transversal: t, total })
}

/// Explicit isomorphism between `(U↑H)↑G` and `U↑G`.
#[derive(Debug, Clone)]
pub struct TransitivityWitness {
    pub nested: InducedModule,
    pub direct: InducedModule,
    /// Rows: basis of the nested module; `v ↦ v * base_change` intertwines.
    pub base_change: Matrix,
}

pub fn induction_transitive(u: &FDModule, middle: &Subgroup, top: &Subgroup) -> Result<TransitivityWitness> {
    let inner = induce(u, middle)?;
    let nested = induce(&inner.total, top)?;
    let direct = induce(u, top)?;
    let g = &top.group;
    let k = &u.acting;
    let d = u.dim;
    let n = nested.total.dim;
    let mut x = Matrix::zeros(u.field, n, n);
    for (j, tj) in nested.transversal.iter().enumerate() {
        for (i, si) in inner.transversal.iter().enumerate() {
            let st = g.mul(si, tj);
            let r = k.coset_rep(&st);
            let pos = direct.transversal.iter().position(|x| *x == r).expect("coset representative");
            let block = u.matrix_of(&g.mul(&st, &g.inv(&r)))?;
            let row0 = j * inner.total.dim + i * d;
            for a in 0..d {
                for b in 0..d {
                    x[(row0 + a, pos * d + b)] = block[(a, b)].clone();
                }
            }
        }
    }
    if x.inverse().is_none() {
        return Err(Error::ConclusionFailed("base change is singular".into()));
    }
    for (a, b) in nested.total.action.iter().zip(&direct.total.action) {
        if a.mul(&x) != x.mul(b) {
            return Err(Error::ConclusionFailed("base change does not intertwine".into()));
        }
    }
    Ok(TransitivityWitness { nested, direct, base_change: x })
}

/// All vectors of `F^n` with first nonzero entry 1, in lexicographic order.
pub(crate) fn projective_points(p: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
    (0..n).rev().flat_map(move |lead| {
        let tail = n - lead - 1;
        let count = p.pow(tail as u32);
        (0..count).map(move |mut c| {
            let mut v = vec![0u64; n];
            v[lead] = 1;
            for k in (lead + 1..n).rev() {
                v[k] = c % p;
                c /= p;
            }
            v
        })
    })
}

/// Exhaustive bound for irreducibility over GF(p).
pub const IRREDUCIBLE_ENUMERATION_LIMIT: u64 = 1_000_000;
/// Largest dimension handled over the rationals.
pub const RATIONAL_DIM_LIMIT: usize = 8;

pub fn is_irreducible(m: &FDModule) -> Result<bool> {
    match m.dim {
        0 => return Ok(false),
        1 => return Ok(true),
        _ => {}
    }
    match m.field {
        Field::Prime(p) => {
            let size = (p as u128).checked_pow(m.dim as u32).unwrap_or(u128::MAX);
            if size > IRREDUCIBLE_ENUMERATION_LIMIT as u128 {
                return Err(Error::TooLarge(format!("{p}^{} vectors", m.dim)));
            }
            for v in projective_points(p, m.dim) {
                let v: Vec<Scalar> = v.iter().map(|&x| m.field.from_i64(x as i64)).collect();
                if m.spin(&[v]).rank() < m.dim {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Field::Rationals => {
            if m.dim > RATIONAL_DIM_LIMIT {
                return Err(Error::TooLarge(format!("dimension {} over Q", m.dim)));
            }
            super::norton::norton_irreducible(m)
        }
    }
}

/// Outcome of the search for a base module.
#[derive(Debug, Clone)]
pub enum InducedVerdict {
    Induced(Box<Submodule>),
    NotInduced,
    BudgetExhausted,
}

impl InducedVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            InducedVerdict::Induced(_) => "INDUCED",
            InducedVerdict::NotInduced => "NOT_INDUCED",
            InducedVerdict::BudgetExhausted => "BUDGET_EXHAUSTED",
        }
    }
}

pub const INDUCED_SEARCH_BUDGET: usize = 100_000;

/// Searches for an `H`-submodule `U` with `M = ⊕_{t∈T} U t`.
pub fn is_induced_from(m: &FDModule, h: &Subgroup, budget: usize) -> Result<InducedVerdict> {
    let Field::Prime(p) = m.field else {
        return Err(Error::Unsupported("induced-module search needs GF(p) scalars".into()));
    };
    let top = &m.acting;
    if !h.is_subgroup_of(top) {
        return Err(Error::InvalidInput("subgroup is not contained in the acting group".into()));
    }
    let idx = h.relative_index(top).ok_or(Error::InfiniteIndex)? as usize;
    if m.dim % idx != 0 || m.dim == 0 {
        return Ok(InducedVerdict::NotInduced);
    }
    let res = m.restrict(h)?;
    let d = m.dim / idx;
    let t = relative_transversal(h, top)?;
    let t_mats = t.iter().map(|x| m.matrix_of(x)).collect::<Result<Vec<_>>>()?;
    let direct = |s: &Subspace| -> bool {
        let mut sum = Subspace::new(m.field, m.dim);
        for tm in &t_mats {
            for b in s.basis() {
                sum.insert(&tm.vec_mul(&b));
            }
        }
        sum.rank() == t_mats.len() * s.rank()
    };
    let found = |s: &Subspace| -> Result<InducedVerdict> {
        Ok(InducedVerdict::Induced(Box::new(res.submodule(s)?)))
    };
    let mut trials = 0usize;
    let mut seen: HashSet<Vec<Vec<Scalar>>> = HashSet::new();
    let mut cyclic: Vec<Subspace> = Vec::new();
    for v in projective_points(p, m.dim) {
        trials += 1;
        if trials > budget {
            return Ok(InducedVerdict::BudgetExhausted);
        }
        let v: Vec<Scalar> = v.iter().map(|&x| m.field.from_i64(x as i64)).collect();
        let s = res.spin(&[v]);
        if s.rank() > d || !seen.insert(s.basis()) || !direct(&s) {
            continue;
        }
        if s.rank() == d {
            return found(&s);
        }
        cyclic.push(s);
    }
    // sums of cyclic submodules, level by level
    let mut frontier: Vec<Subspace> = cyclic.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for c in &cyclic {
                trials += 1;
                if trials > budget {
                    return Ok(InducedVerdict::BudgetExhausted);
                }
                if c.basis().iter().all(|b| s.contains(b)) {
                    continue;
                }
                let mut sum = s.clone();
                for b in c.basis() {
                    sum.insert(&b);
                }
                if sum.rank() > d || !seen.insert(sum.basis()) || !direct(&sum) {
                    continue;
                }
                if sum.rank() == d {
                    return found(&sum);
                }
                next.push(sum);
            }
        }
        frontier = next;
    }
    Ok(InducedVerdict::NotInduced)
}
