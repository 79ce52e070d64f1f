//! Resolves a parsed catalog into core values.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use nilrep_core::indmod::{FDModule, GroupRingElem, InvariantIdealData, ScalarRing};
use nilrep_core::laurent::{FiniteIndexEmbedding, LaurentIdeal, LaurentPoly, LaurentRing};
use nilrep_core::linalg::Matrix;
use nilrep_core::nilgroup::{GroupElement, PcPresentation, Subgroup};
use nilrep_core::{Field, Scalar};

use crate::catalog::*;
use crate::parse::{ring_of, CatalogError};

/// Module together with the catalog name of the group it lives in.
#[derive(Debug, Clone)]
pub struct InduceSpec {
    pub base: FDModule,
    pub over: Subgroup,
}

#[derive(Debug, Default)]
pub struct Built {
    pub groups: HashMap<String, Arc<PcPresentation>>,
    /// Subgroups, with every group also present as its whole subgroup.
    pub subgroups: HashMap<String, Subgroup>,
    pub rings: HashMap<String, LaurentRing>,
    pub embeds: HashMap<String, FiniteIndexEmbedding>,
    pub ideals: HashMap<String, LaurentIdeal>,
    pub modules: HashMap<String, FDModule>,
    pub induces: HashMap<String, InduceSpec>,
    pub data: HashMap<String, InvariantIdealData>,
}

pub fn parse_scalar(f: Field, s: &str) -> Option<Scalar> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<i64>().ok()?, d.parse::<i64>().ok()?),
        None => (s.parse::<i64>().ok()?, 1),
    };
    let d = f.from_i64(d);
    if d.is_zero() {
        return None;
    }
    Some(&f.from_i64(n) / &d)
}

pub fn parse_field(s: &str) -> Option<Field> {
    match s {
        "Q" => Some(Field::Rationals),
        _ => s.strip_prefix("GF(")?.strip_suffix(')')?.parse().ok().and_then(|p| Field::prime(p).ok()),
    }
}

pub fn word_element(g: &PcPresentation, w: &Word) -> GroupElement {
    w.iter().fold(g.identity(), |acc, (x, e)| {
        let i = g.names.iter().position(|n| n == x).expect("generator checked by the parser");
        g.mul(&acc, &g.pow(&g.generator(i), *e))
    })
}

/// Exponent vector of a word written in normal form.
fn normal_form(names: &[String], w: &Word) -> Option<GroupElement> {
    let mut v = vec![0; names.len()];
    let mut last = None;
    for (x, e) in w {
        let i = names.iter().position(|n| n == x)?;
        if last.is_some_and(|l| l >= i) {
            return None;
        }
        last = Some(i);
        v[i] = *e;
    }
    Some(v)
}

fn group_of(d: &GroupDecl) -> Result<PcPresentation, String> {
    let n = d.gens.len();
    let idx = |x: &str| d.gens.iter().position(|n| n == x).expect("generator checked by the parser");
    let mut orders = vec![0; n];
    let mut powers = BTreeMap::new();
    for (x, e, w) in &d.pows {
        let i = idx(x);
        orders[i] = *e;
        let v = normal_form(&d.gens, w).ok_or_else(|| format!("pow {x}: word is not in normal form"))?;
        powers.insert(i, v);
    }
    let mut conj = BTreeMap::new();
    for (x, y, w) in &d.conjs {
        let v = normal_form(&d.gens, w).ok_or_else(|| format!("conj {x}^{y}: word is not in normal form"))?;
        conj.insert((idx(y), idx(x)), v);
    }
    PcPresentation::new(d.gens.clone(), orders, powers, conj, d.class.unwrap_or(n)).map_err(|e| e.to_string())
}

fn ring_elem(g: &Arc<PcPresentation>, ring: ScalarRing, t: &RingText) -> Option<GroupRingElem> {
    let f = ring.field();
    let terms = t.iter().map(|(c, w)| Some((word_element(g, w), parse_scalar(f, c)?))).collect::<Option<Vec<_>>>()?;
    Some(GroupRingElem::from_terms(g.clone(), ring, terms))
}

fn module_of(b: &Built, m: &ModuleDecl) -> Result<FDModule, String> {
    let acting = b.subgroups[&m.over].clone();
    let g = acting.group.clone();
    let field = parse_field(&m.field).ok_or_else(|| format!("unknown field {}", m.field))?;
    let mut action = Vec::with_capacity(acting.igs.len());
    for x in &acting.igs {
        let (_, mat) = m
            .acts
            .iter()
            .find(|(w, _)| word_element(&g, w) == *x)
            .ok_or_else(|| format!("no `act` line for {}", g.render(x)))?;
        if mat.len() != m.dim || mat.iter().any(|r| r.len() != m.dim) {
            return Err(format!("matrix for {} is not {}x{}", g.render(x), m.dim, m.dim));
        }
        let rows = mat
            .iter()
            .map(|r| r.iter().map(|s| parse_scalar(field, s)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or("matrix entry not in the field")?;
        action.push(Matrix::from_rows(field, rows));
    }
    if let Some((w, _)) = m.acts.iter().find(|(w, _)| !acting.igs.contains(&word_element(&g, w))) {
        return Err(format!("`act {}` is not an igs element of {}", render_word(w), m.over));
    }
    FDModule::from_columns(acting, field, m.dim, action).map_err(|e| e.to_string())
}

impl Built {
    pub fn from_catalog(cat: &Catalog) -> Result<Built, CatalogError> {
        let mut b = Built::default();
        for e in &cat.entries {
            let invalid = |error: String| CatalogError::Invalid { line: e.line, name: e.kind.name().into(), error };
            match &e.kind {
                EntryKind::Group(d) => {
                    let g = Arc::new(group_of(d).map_err(invalid)?);
                    b.subgroups.insert(d.name.clone(), Subgroup::whole(g.clone()));
                    b.groups.insert(d.name.clone(), g);
                }
                EntryKind::Subgroup(d) => {
                    let g = b.groups[&d.group].clone();
                    let gens: Vec<GroupElement> = d.gens.iter().map(|w| word_element(&g, w)).collect();
                    b.subgroups.insert(d.name.clone(), Subgroup::from_gens(g, &gens));
                }
                EntryKind::Ring(d) => {
                    b.rings.insert(d.name.clone(), ring_of(e.line, d)?);
                }
                EntryKind::Embed(d) => {
                    let m = FiniteIndexEmbedding::new(d.rows.clone()).map_err(|x| invalid(x.to_string()))?;
                    b.embeds.insert(d.name.clone(), m);
                }
                EntryKind::Ideal(d) => {
                    let r = b.rings[&d.ring];
                    let gens = d.gens.iter().map(|t| LaurentPoly::parse(r, t).expect("checked by the parser")).collect();
                    let i = LaurentIdeal::new(r, gens).map_err(|x| invalid(x.to_string()))?;
                    b.ideals.insert(d.name.clone(), i);
                }
                EntryKind::Module(d) => {
                    let m = module_of(&b, d).map_err(invalid)?;
                    b.modules.insert(d.name.clone(), m);
                }
                EntryKind::Induce(d) => {
                    let base = b.modules[&d.base].clone();
                    let sub = &b.subgroups[&d.sub];
                    let over = b.subgroups[&d.group].clone();
                    if base.acting != *sub {
                        return Err(invalid(format!("{} is not a module over {}", d.base, d.sub)));
                    }
                    if !sub.is_subgroup_of(&over) {
                        return Err(invalid(format!("{} is not inside {}", d.sub, d.group)));
                    }
                    b.induces.insert(d.name.clone(), InduceSpec { base, over });
                }
                EntryKind::IdealData(d) => {
                    let k = b.subgroups[&d.k].clone();
                    let ring = ScalarRing::parse(&d.ring).map_err(|x| invalid(x.to_string()))?;
                    let gens = d
                        .gens
                        .iter()
                        .map(|t| ring_elem(&k.group, ring, t))
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| invalid("coefficient outside the ring".into()))?;
                    let data = InvariantIdealData::new(k, ring, gens).map_err(|x| invalid(x.to_string()))?;
                    b.data.insert(d.name.clone(), data);
                }
                EntryKind::Case(_) => {}
            }
        }
        Ok(b)
    }
}
