//! G-invariant ideals of `RK`, the subgroup I†, G-largeness and culling.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::laurent::{LaurentIdeal, LaurentPoly, LaurentRing};
use crate::linalg::Subspace;
use crate::nilgroup::{GroupElement, PcPresentation, Subgroup};
use crate::scalar::{is_prime, Field, Scalar};

use super::module::FDModule;
use super::ring::{coerce, GroupRingElem, ScalarRing};

/// Largest finite `K` handled by linear algebra.
pub const FINITE_K_LIMIT: u64 = 512;
/// Search bound for the exponents `m` with `y^m - 1 ∈ I`.
pub const I_DAGGER_BOUND: i64 = 512;
const BOX_LIMIT: i64 = 100_000;

/// `R/(R∩I)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residue {
    Field(Field),
    ZeroRing,
    NotField(String),
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residue::Field(k) => write!(f, "{k}"),
            Residue::ZeroRing => write!(f, "zero ring"),
            Residue::NotField(why) => write!(f, "not a field ({why})"),
        }
    }
}

/// Exact model of `kK` for membership questions.
#[derive(Debug, Clone)]
enum Model {
    /// `K` free abelian: variables are the igs of `K`.
    Laurent { ring: LaurentRing },
    /// `K` finite: coordinates indexed by its elements.
    Finite { elems: Vec<GroupElement>, index: HashMap<GroupElement, usize> },
}

#[derive(Debug, Clone)]
enum ModelIdeal {
    Laurent(LaurentIdeal),
    Finite(Subspace),
}

/// Elements of a finite subgroup, as products of igs powers.
pub fn finite_elements(k: &Subgroup) -> Result<Vec<GroupElement>> {
    let order = k.order().ok_or(Error::InfiniteIndex)?;
    if order > FINITE_K_LIMIT {
        return Err(Error::TooLarge(format!("subgroup of order {order}")));
    }
    let g = &k.group;
    let mut out = vec![g.identity()];
    for y in k.igs.iter().rev() {
        let d = g.depth(y);
        let r = g.orders[d] as i64 / y[d];
        let mut next = Vec::with_capacity(out.len() * r as usize);
        let mut p = g.identity();
        for _ in 0..r {
            for x in &out {
                next.push(g.mul(&p, x));
            }
            p = g.mul(&p, y);
        }
        out = next;
    }
    out.sort();
    Ok(out)
}

fn is_free_abelian(k: &Subgroup) -> bool {
    let g = &k.group;
    let commute = k.igs.iter().all(|x| k.igs.iter().all(|y| PcPresentation::is_identity(&g.commutator(x, y))));
    commute && k.igs.iter().all(|y| g.orders[g.depth(y)] == 0)
}

impl Model {
    fn new(k: &Subgroup, field: Field) -> Result<Model> {
        if is_free_abelian(k) {
            return Ok(Model::Laurent { ring: LaurentRing::new(k.igs.len(), field) });
        }
        if k.order().is_some() {
            let elems = finite_elements(k)?;
            let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
            return Ok(Model::Finite { elems, index });
        }
        Err(Error::Unsupported("K must be free abelian or finite".into()))
    }

    fn laurent(&self, k: &Subgroup, x: &GroupRingElem, field: Field) -> Result<LaurentPoly> {
        let Model::Laurent { ring } = self else { unreachable!() };
        let terms = x
            .terms
            .iter()
            .map(|(g, c)| {
                let v = k.coordinates(g).ok_or_else(|| Error::InvalidInput("support outside K".into()))?;
                Ok((v, coerce(c, field)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LaurentPoly::from_terms(*ring, terms))
    }

    fn vector(&self, x: &GroupRingElem, field: Field) -> Result<Vec<Scalar>> {
        let Model::Finite { elems, index } = self else { unreachable!() };
        let mut v = vec![field.zero(); elems.len()];
        for (g, c) in &x.terms {
            let i = *index.get(g).ok_or_else(|| Error::InvalidInput("support outside K".into()))?;
            v[i] = &v[i] + &coerce(c, field)?;
        }
        Ok(v)
    }

    fn ideal(&self, k: &Subgroup, gens: &[GroupRingElem], field: Field) -> Result<ModelIdeal> {
        match self {
            Model::Laurent { ring } => {
                let polys = gens.iter().map(|x| self.laurent(k, x, field)).collect::<Result<Vec<_>>>()?;
                Ok(ModelIdeal::Laurent(LaurentIdeal::new(*ring, polys)?))
            }
            Model::Finite { elems, .. } => {
                let group = &k.group;
                let mut span = Subspace::new(field, elems.len());
                for x in gens {
                    for a in elems {
                        for b in elems {
                            let ax = GroupRingElem::element(group.clone(), x.ring, a.clone()).mul(x);
                            let axb = ax.mul(&GroupRingElem::element(group.clone(), x.ring, b.clone()));
                            span.insert(&self.vector(&axb, field)?);
                        }
                    }
                }
                Ok(ModelIdeal::Finite(span))
            }
        }
    }

    fn contains(&self, k: &Subgroup, ideal: &ModelIdeal, x: &GroupRingElem, field: Field) -> Result<bool> {
        match ideal {
            ModelIdeal::Laurent(i) => i.contains(&self.laurent(k, x, field)?),
            ModelIdeal::Finite(s) => Ok(s.contains(&self.vector(x, field)?)),
        }
    }
}

impl ModelIdeal {
    fn is_unit(&self) -> bool {
        match self {
            ModelIdeal::Laurent(i) => i.is_unit(),
            ModelIdeal::Finite(s) => s.rank() == s.dim,
        }
    }
}

/// A G-invariant ideal `I` of `RK`, `K` normal in `G`.
#[derive(Debug, Clone)]
pub struct InvariantIdealData {
    pub group: Arc<PcPresentation>,
    pub k: Subgroup,
    pub ring: ScalarRing,
    pub gens: Vec<GroupRingElem>,
    model: Model,
    residue: Residue,
    /// `I ⊗ k` over the residue field, when that field exists.
    reduced: Option<ModelIdeal>,
}

impl InvariantIdealData {
    pub fn new(k: Subgroup, ring: ScalarRing, gens: Vec<GroupRingElem>) -> Result<InvariantIdealData> {
        let group = k.group.clone();
        if !k.is_normal() {
            return Err(Error::NotNormal);
        }
        if ring == ScalarRing::Field(Field::Rationals) {
            return Err(Error::InvalidInput("ideal data needs R = Z or GF(p)".into()));
        }
        let mut gens_in = Vec::with_capacity(gens.len());
        for x in gens {
            if x.terms.keys().any(|g| !k.contains(g)) {
                return Err(Error::InvalidInput(format!("{x} is not supported on K")));
            }
            let bad = |c: &Scalar| match ring {
                ScalarRing::Integers => !ring.contains(c),
                ScalarRing::Field(f) => coerce(c, f).is_err(),
            };
            if x.terms.values().any(bad) {
                return Err(Error::InvalidInput(format!("{x} has coefficients outside {ring}")));
            }
            gens_in.push(x.change_ring(ring)?);
        }
        let gens = gens_in;
        let model = Model::new(&k, ring.field())?;
        let (residue, reduced) = residue_of(&k, &model, ring, &gens)?;
        let model = match &residue {
            Residue::Field(f) if *f != ring.field() => Model::new(&k, *f)?,
            _ => model,
        };
        let data = InvariantIdealData { group, k, ring, gens, model, residue, reduced };
        data.check_invariance()?;
        Ok(data)
    }

    pub fn residue(&self) -> &Residue {
        &self.residue
    }

    /// The field `k = R/(R∩I)`, if it is one.
    pub fn field(&self) -> Option<Field> {
        match self.residue {
            Residue::Field(f) => Some(f),
            _ => None,
        }
    }

    fn centralizes_k(&self) -> bool {
        let g = &self.group;
        (0..g.len()).all(|d| self.k.igs.iter().all(|y| g.conjugate(y, &g.generator(d)) == *y))
    }

    fn check_invariance(&self) -> Result<()> {
        if self.centralizes_k() || self.residue == Residue::ZeroRing {
            return Ok(());
        }
        let (Some(f), Some(ideal)) = (self.field(), &self.reduced) else {
            return Err(Error::Unsupported("G-invariance over Z needs R∩I to be a prime".into()));
        };
        let g = &self.group;
        for x in &self.gens {
            for d in 0..g.len() {
                let c = x.conjugate(&g.generator(d));
                if !self.model.contains(&self.k, ideal, &c, f)? {
                    return Err(Error::InvalidInput(format!("ideal is not G-invariant: {x} conjugated by {}", g.names[d])));
                }
            }
        }
        Ok(())
    }

    /// Decides `x ∈ I` for `x ∈ RK`, when `R∩I` is a prime or `I = RK`.
    pub fn contains(&self, x: &GroupRingElem) -> Result<bool> {
        match (&self.residue, &self.reduced) {
            (Residue::ZeroRing, _) => Ok(true),
            (Residue::Field(f), Some(ideal)) => self.model.contains(&self.k, ideal, x, *f),
            _ => Err(Error::Unsupported("membership over Z needs R∩I to be a prime".into())),
        }
    }

    pub fn render(&self) -> String {
        let gens: Vec<String> = self.gens.iter().map(|x| x.to_string()).collect();
        format!("({}) in {}[{}]", gens.join(", "), self.ring, self.k.render())
    }
}

impl fmt::Display for InvariantIdealData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn residue_of(
    k: &Subgroup,
    model: &Model,
    ring: ScalarRing,
    gens: &[GroupRingElem],
) -> Result<(Residue, Option<ModelIdeal>)> {
    match ring {
        ScalarRing::Field(f) => {
            let ideal = model.ideal(k, gens, f)?;
            if ideal.is_unit() {
                Ok((Residue::ZeroRing, None))
            } else {
                Ok((Residue::Field(f), Some(ideal)))
            }
        }
        ScalarRing::Integers => {
            if !model.ideal(k, gens, Field::Rationals)?.is_unit() {
                return Ok((Residue::NotField("R∩I = 0".into()), None));
            }
            let id = k.group.identity();
            let mut q = num_bigint::BigInt::from(0);
            for x in gens {
                if x.terms.len() == 1 {
                    if let Some(c) = x.terms.get(&id) {
                        q = q.gcd(c.as_rational().expect("integer").numer());
                    }
                }
            }
            if q == num_bigint::BigInt::from(0) {
                return Err(Error::Unsupported("R∩I over Z needs an integer generator".into()));
            }
            let q = q.abs().to_u64().ok_or_else(|| Error::TooLarge("integer generator".into()))?;
            let mut proper = Vec::new();
            for p in prime_divisors(q) {
                let f = Field::prime(p)?;
                let reduced = gens.iter().map(|x| x.change_ring(ScalarRing::Field(f))).collect::<Result<Vec<_>>>()?;
                let ideal = Model::new(k, f)?.ideal(k, &reduced, f)?;
                if !ideal.is_unit() {
                    proper.push((p, ideal));
                }
            }
            match proper.len() {
                0 => Ok((Residue::ZeroRing, None)),
                1 => {
                    let (p, ideal) = proper.pop().expect("one prime");
                    if q % (p * p) == 0 {
                        Err(Error::Unsupported(format!("R∩I lies between {q}Z and {p}Z")))
                    } else {
                        Ok((Residue::Field(Field::prime(p)?), Some(ideal)))
                    }
                }
                _ => {
                    let ps: Vec<String> = proper.iter().map(|(p, _)| p.to_string()).collect();
                    Ok((Residue::NotField(format!("R∩I is divisible by {}", ps.join(" and "))), None))
                }
            }
        }
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        debug_assert!(is_prime(n));
        out.push(n);
    }
    out
}

fn element_of(g: &PcPresentation, k: &Subgroup, v: &[i64]) -> GroupElement {
    k.igs.iter().zip(v).fold(g.identity(), |acc, (y, &e)| g.mul(&acc, &g.pow(y, e)))
}

/// `I† = K ∩ (I + 1)`, verified normal in `G`.
pub fn i_dagger(data: &InvariantIdealData) -> Result<Subgroup> {
    let g = &data.group;
    let k = &data.k;
    if data.residue == Residue::ZeroRing {
        return Ok(k.clone());
    }
    let gens: Vec<GroupElement> = match &data.model {
        Model::Laurent { .. } => {
            let r = k.igs.len();
            let mut gens = Vec::new();
            let mut m = Vec::with_capacity(r);
            for y in &k.igs {
                let mut found = None;
                for e in 1..=I_DAGGER_BOUND {
                    let x = g.pow(y, e);
                    if data.contains(&GroupRingElem::minus_one(g.clone(), data.ring, x.clone()))? {
                        found = Some(e);
                        gens.push(x);
                        break;
                    }
                }
                m.push(found.ok_or_else(|| Error::BoundExhausted(format!("no y^m - 1 in I with m <= {I_DAGGER_BOUND}")))?);
            }
            let size: i64 = m.iter().product();
            if size > BOX_LIMIT {
                return Err(Error::BoundExhausted(format!("quotient box of size {size}")));
            }
            for c in 1..size {
                let mut v = vec![0i64; r];
                let mut rest = c;
                for i in (0..r).rev() {
                    v[i] = rest % m[i];
                    rest /= m[i];
                }
                let x = element_of(g, k, &v);
                if data.contains(&GroupRingElem::minus_one(g.clone(), data.ring, x.clone()))? {
                    gens.push(x);
                }
            }
            gens
        }
        Model::Finite { elems, .. } => {
            let mut gens = Vec::new();
            for x in elems {
                if data.contains(&GroupRingElem::minus_one(g.clone(), data.ring, x.clone()))? {
                    gens.push(x.clone());
                }
            }
            gens
        }
    };
    let out = Subgroup::from_gens(g.clone(), &gens);
    if !out.is_normal() || !out.is_subgroup_of(k) {
        return Err(Error::ConclusionFailed("I† is not a normal subgroup of G inside K".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GLargeCertificate {
    pub large: bool,
    pub residue: Residue,
    pub i_dagger: Option<Subgroup>,
    pub index: Option<u64>,
    pub reason: String,
}

impl GLargeCertificate {
    pub fn field(&self) -> Option<Field> {
        match self.residue {
            Residue::Field(f) => Some(f),
            _ => None,
        }
    }
}

pub fn is_g_large(data: &InvariantIdealData) -> Result<GLargeCertificate> {
    let residue = data.residue.clone();
    let Residue::Field(k) = residue else {
        let reason = match &residue {
            Residue::NotField(why) => format!("R/(R∩I) is not a field: {why}"),
            _ => "R/(R∩I) is the zero ring".into(),
        };
        return Ok(GLargeCertificate { large: false, residue, i_dagger: None, index: None, reason });
    };
    let id = match i_dagger(data) {
        Ok(s) => s,
        Err(Error::BoundExhausted(why)) => {
            return Ok(GLargeCertificate {
                large: false,
                residue,
                i_dagger: None,
                index: None,
                reason: format!("no finite-index I† found: {why}"),
            })
        }
        Err(e) => return Err(e),
    };
    let index = id.relative_index(&data.k);
    let large = index.is_some();
    let reason = match index {
        Some(n) => format!("k = {k}, |K/I†| = {n}"),
        None => "K/I† is infinite".into(),
    };
    Ok(GLargeCertificate { large, residue, i_dagger: Some(id), index, reason })
}

/// Which of the three culling conditions failed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CullCondition {
    Proper,
    Supplement,
    Field,
}

impl fmt::Display for CullCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CullCondition::Proper => "(a) VI < V",
            CullCondition::Supplement => "(b) VI + U = V",
            CullCondition::Field => "(c) R/(R∩I) is a field",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CullingCertificate {
    pub ideal: InvariantIdealData,
    pub module: FDModule,
    pub submodule: Vec<Vec<Scalar>>,
    pub vi: Vec<Vec<Scalar>>,
    pub field: Field,
}

impl CullingCertificate {
    /// Re-derives all three conditions from the stored fields.
    pub fn recheck(&self) -> bool {
        culls(&self.ideal, &self.submodule, &self.module).is_ok()
    }
}

#[derive(Debug, Clone)]
pub struct CullRefusal {
    pub failed: CullCondition,
    pub detail: String,
}

/// `VI`: the submodule spanned by `v·x` for generators `x` of `I`.
pub fn module_times_ideal(data: &InvariantIdealData, v: &FDModule) -> Result<Subspace> {
    let mut rows = Vec::new();
    for x in &data.gens {
        rows.extend(x.action_on(v)?.to_rows());
    }
    Ok(v.spin(&rows))
}

pub fn culls(data: &InvariantIdealData, u: &[Vec<Scalar>], v: &FDModule) -> std::result::Result<CullingCertificate, CullRefusal> {
    let refuse = |failed, detail: String| CullRefusal { failed, detail };
    let vi = module_times_ideal(data, v).map_err(|e| refuse(CullCondition::Proper, e.to_string()))?;
    if vi.rank() == v.dim {
        return Err(refuse(CullCondition::Proper, format!("VI = V (dim {})", v.dim)));
    }
    let mut sum = vi.clone();
    for w in u {
        sum.insert(w);
    }
    if sum.rank() < v.dim {
        return Err(refuse(CullCondition::Supplement, format!("dim(VI + U) = {} < {}", sum.rank(), v.dim)));
    }
    let Some(field) = data.field() else {
        return Err(refuse(CullCondition::Field, format!("R/(R∩I) is {}", data.residue())));
    };
    Ok(CullingCertificate {
        ideal: data.clone(),
        module: v.clone(),
        submodule: u.to_vec(),
        vi: vi.basis(),
        field,
    })
}
