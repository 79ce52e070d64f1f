//! Cyclic-submodule embeddings and annihilators over a central subgroup.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::laurent::{
    contract, extend, minimal_primes, mu_of_module, mu_proper, FiniteIndexEmbedding, LaurentIdeal, LaurentPoly,
    LaurentRing, PrimeSet,
};
use crate::linalg::{Matrix, Subspace};
use crate::nilgroup::{
    derived_subgroup, intersect, is_abelian, is_torsion_free_abelian, lemma3_central_subgroup, torsion_preimage, GroupElement,
    Quotient, Subgroup,
};
use crate::scalar::{Field, Scalar};

use super::ideal::{is_g_large, module_times_ideal, InvariantIdealData};
use super::module::{is_irreducible, FDModule, InducedModule};
use super::ring::{GroupRingElem, ScalarRing};

/// `c ∈ FG` with `a·c = b`, and `d` with `c·d ∈ RG`.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub c: GroupRingElem,
    pub d: i64,
}

/// Group elements whose matrices span the image of `FG` in `End(M)`.
pub fn enveloping_basis(m: &FDModule) -> Vec<(GroupElement, Matrix)> {
    let g = m.group();
    let n = m.dim;
    let flat = |x: &Matrix| -> Vec<Scalar> { x.to_rows().into_iter().flatten().collect() };
    let mut span = Subspace::new(m.field, n * n);
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let id = Matrix::identity(m.field, n);
    span.insert(&flat(&id));
    queue.push_back((g.identity(), id));
    while let Some((x, mx)) = queue.pop_front() {
        for (y, my) in m.acting.igs.iter().zip(&m.action) {
            let p = mx.mul(my);
            if span.insert(&flat(&p)) {
                queue.push_back((g.mul(&x, y), p));
            }
        }
        out.push((x, mx));
    }
    out
}

pub fn prop3_embed(m: &FDModule, a: &[Scalar], b: &[Scalar]) -> Result<Embedding> {
    if a.iter().all(Scalar::is_zero) || b.iter().all(Scalar::is_zero) {
        return Err(Error::InvalidInput("a and b must be nonzero".into()));
    }
    if !is_irreducible(m)? {
        return Err(Error::NotIrreducible);
    }
    let basis = enveloping_basis(m);
    let images: Vec<Vec<Scalar>> = basis.iter().map(|(_, x)| x.vec_mul(a)).collect();
    let sys = Matrix::from_rows(m.field, images).transpose();
    let coeffs = sys.solve(b).ok_or(Error::NotIrreducible)?;
    let ring = ScalarRing::Field(m.field);
    let c = GroupRingElem::from_terms(
        m.acting.group.clone(),
        ring,
        basis.into_iter().zip(coeffs).map(|((x, _), k)| (x, k)),
    );
    let d = c.denominator();
    Ok(Embedding { c, d })
}

/// How the central subgroup `A` of `G/I†` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AChoice {
    Complement,
    CentralSubgroup,
}

impl std::fmt::Display for AChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AChoice::Complement => "free complement of the torsion",
            AChoice::CentralSubgroup => "central subgroup from the derived torsion",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Prop4Report {
    pub field: Field,
    pub i_dagger: Subgroup,
    pub dagger_index: u64,
    pub a_choice: AChoice,
    /// Generators of `A`, as elements of `G`.
    pub a_gens: Vec<GroupElement>,
    pub b: FiniteIndexEmbedding,
    pub quotient_dim: usize,
    pub w: Vec<Scalar>,
    pub annihilator: LaurentIdeal,
    pub contracted: LaurentIdeal,
    pub extended: LaurentIdeal,
    pub clause_i: bool,
    pub mu_module: PrimeSet,
    pub mu_annihilator: PrimeSet,
    pub clause_ii: bool,
    pub torsion: bool,
    pub clause_iii: bool,
}

impl Prop4Report {
    pub fn all_hold(&self) -> bool {
        self.clause_i && self.clause_ii && self.clause_iii
    }
}

fn choose_a(q: &Quotient) -> Result<(Subgroup, AChoice)> {
    let img = &q.image;
    if is_abelian(img) {
        let free: Vec<GroupElement> = (0..img.len()).filter(|&d| img.orders[d] == 0).map(|d| img.generator(d)).collect();
        let a = Subgroup::from_gens(img.clone(), &free);
        if is_torsion_free_abelian(&a) && a.index().is_some() {
            return Ok((a, AChoice::Complement));
        }
    }
    let d = torsion_preimage(&derived_subgroup(img));
    Ok((lemma3_central_subgroup(img, &d)?, AChoice::CentralSubgroup))
}

/// Monomial `X^e` of commuting invertible matrices.
fn monomial(xs: &[Matrix], e: &[i64], field: Field, n: usize) -> Matrix {
    xs.iter().zip(e).fold(Matrix::identity(field, n), |acc, (x, &k)| acc.mul(&x.pow(k).expect("invertible")))
}

/// Box of exponent vectors `[0, δ]^r`.
fn exponent_box(r: usize, delta: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=delta).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

/// `Ann_kA(w)` from relations supported in the box `[0, δ]^r`.
pub fn annihilator(xs: &[Matrix], w: &[Scalar], ring: LaurentRing, delta: i64) -> Result<LaurentIdeal> {
    let f = ring.field;
    let n = w.len();
    let monos = exponent_box(xs.len(), delta);
    let images: Vec<Vec<Scalar>> = monos.iter().map(|e| monomial(xs, e, f, n).vec_mul(w)).collect();
    let gens: Vec<LaurentPoly> = if n == 0 {
        vec![LaurentPoly::one(ring)]
    } else {
        Matrix::from_rows(f, images)
            .left_kernel()
            .into_iter()
            .map(|c| LaurentPoly::from_terms(ring, monos.iter().cloned().zip(c)))
            .collect()
    };
    let ideal = LaurentIdeal::new(ring, gens)?;
    let orbit = spin(xs, w, f, n);
    if ideal.quotient_dim() != Some(orbit) {
        return Err(Error::AnnihilatorDegreeBound(delta as usize));
    }
    Ok(ideal)
}

fn spin(xs: &[Matrix], w: &[Scalar], f: Field, n: usize) -> usize {
    let mut s = Subspace::new(f, n);
    let mut queue = vec![w.to_vec()];
    s.insert(w);
    while let Some(v) = queue.pop() {
        for x in xs {
            let u = x.vec_mul(&v);
            if s.insert(&u) {
                queue.push(u);
            }
        }
    }
    s.rank()
}

pub fn prop4_check(w: &InducedModule, data: &InvariantIdealData, d: &[Scalar]) -> Result<Prop4Report> {
    prop4_check_with(w, data, d, None)
}

/// [`prop4_check`] with an explicit annihilator degree bound (default `dim(W/WI) + 1`).
pub fn prop4_check_with(w: &InducedModule, data: &InvariantIdealData, d: &[Scalar], delta: Option<i64>) -> Result<Prop4Report> {
    let g = &data.group;
    let total = &w.total;
    if total.acting != Subgroup::whole(g.clone()) {
        return Err(Error::InvalidInput("W must be a module over the whole group".into()));
    }
    let h = &w.base.acting;
    if !data.k.is_subgroup_of(h) {
        return Err(Error::PreconditionFailed("K is not contained in H".into()));
    }
    let cert = is_g_large(data)?;
    let (Some(k), Some(dagger), Some(dagger_index)) = (cert.field(), cert.i_dagger.clone(), cert.index) else {
        return Err(Error::PreconditionFailed(format!("ideal is not G-large: {}", cert.reason)));
    };
    if total.field != k {
        return Err(Error::RingMismatch);
    }
    if d.len() != total.dim || total.spin(&[d.to_vec()]).rank() != total.dim {
        return Err(Error::InvalidInput("d does not generate W".into()));
    }
    let wi = module_times_ideal(data, total)?;
    let quo = total.quotient(&wi)?;
    let qm = &quo.module;
    if qm.dim == 0 {
        return Err(Error::PreconditionFailed("W/WI = 0".into()));
    }
    let q = Quotient::new(&dagger)?;
    let (a, a_choice) = choose_a(&q)?;
    let a_gens: Vec<GroupElement> = a.igs.iter().map(|x| q.lift(x)).collect();
    let b_sub = intersect(&q.project_subgroup(h), &a)?;
    let cols: Vec<Vec<i64>> = b_sub
        .igs
        .iter()
        .map(|x| a.coordinates(x).ok_or_else(|| Error::ConclusionFailed("B is not inside A".into())))
        .collect::<Result<_>>()?;
    let r = a.igs.len();
    let matrix = (0..r).map(|i| (0..r).map(|j| cols[j][i]).collect()).collect();
    let b = FiniteIndexEmbedding::new(matrix)?;
    let ring = LaurentRing::new(r, k);
    let xs = a_gens.iter().map(|x| qm.matrix_of(x)).collect::<Result<Vec<_>>>()?;
    let wv = quo.project(d);
    let delta = delta.unwrap_or(qm.dim as i64 + 1);
    let ann = annihilator(&xs, &wv, ring, delta)?;
    let contracted = contract(&ann, &b)?;
    let extended = extend(&contracted, &b)?;
    let clause_i = extended == ann;
    let summands = (0..qm.dim)
        .map(|i| annihilator(&xs, &qm.basis_vector(i), ring, delta))
        .collect::<Result<Vec<_>>>()?;
    let mu_module = mu_of_module(ring, &summands)?;
    let mu_annihilator = minimal_primes(&ann)?;
    let clause_ii = mu_module == mu_annihilator;
    let torsion = r >= 1;
    let clause_iii = !torsion || mu_proper(&mu_annihilator, torsion);
    Ok(Prop4Report {
        field: k,
        i_dagger: dagger,
        dagger_index,
        a_choice,
        a_gens,
        b,
        quotient_dim: qm.dim,
        w: wv,
        annihilator: ann,
        contracted,
        extended,
        clause_i,
        mu_module,
        mu_annihilator,
        clause_ii,
        torsion,
        clause_iii,
    })
}
