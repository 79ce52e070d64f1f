//! Descending chains, p'-radicals and the central subgroup construction.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice;

use super::presentation::{GroupElement, PcPresentation};
use super::subgroup::{
    abelian_relations, centralizer_of_finite, core, element_of_vector, is_abelian, quotient_exponent, Subgroup,
    ORBIT_BUDGET,
};

/// Rule producing the next term of a lazily extended chain.
pub type ChainRule = Arc<dyn Fn(&Subgroup) -> Subgroup + Send + Sync>;

/// Finite prefix of a descending chain of subgroups.
#[derive(Clone)]
pub struct SubgroupChain {
    pub group: Arc<PcPresentation>,
    pub prefix: Vec<Subgroup>,
    pub generator: Option<ChainRule>,
    pub depth_bound: usize,
}

impl fmt::Debug for SubgroupChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubgroupChain")
            .field("prefix", &self.prefix)
            .field("lazy", &self.generator.is_some())
            .field("depth_bound", &self.depth_bound)
            .finish()
    }
}

impl SubgroupChain {
    pub fn new(group: Arc<PcPresentation>, prefix: Vec<Subgroup>) -> SubgroupChain {
        let depth_bound = prefix.len();
        SubgroupChain { group, prefix, generator: None, depth_bound }
    }

    pub fn lazy(group: Arc<PcPresentation>, first: Subgroup, rule: ChainRule, depth_bound: usize) -> SubgroupChain {
        SubgroupChain { group, prefix: vec![first], generator: Some(rule), depth_bound }
    }

    /// Grows the prefix to `n` terms (capped by the depth bound).
    pub fn extend_to(&mut self, n: usize) {
        let n = n.min(self.depth_bound);
        if let Some(rule) = self.generator.clone() {
            while self.prefix.len() < n {
                let next = rule(self.prefix.last().expect("nonempty chain"));
                self.prefix.push(next);
            }
        }
    }

    pub fn is_descending(&self) -> bool {
        self.prefix.windows(2).all(|w| w[1].is_subgroup_of(&w[0]))
    }

    pub fn is_strictly_descending(&self) -> bool {
        self.is_descending() && self.prefix.windows(2).all(|w| w[0] != w[1])
    }

    /// `|H_i : H_{i+1}|` along the prefix.
    pub fn step_indices(&self) -> Vec<Option<u64>> {
        self.prefix.windows(2).map(|w| w[1].relative_index(&w[0])).collect()
    }
}

/// Outcome of the refinement: which branch of the dichotomy the prefix shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefineTag {
    PPrimeStable,
    PGroup(u64),
}

impl fmt::Display for RefineTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefineTag::PPrimeStable => write!(f, "P_PRIME_STABLE"),
            RefineTag::PGroup(p) => write!(f, "P_GROUP({p})"),
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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
        out.push(n);
    }
    out
}

/// Radical of `h` at `p` for `h` containing the derived subgroup and of
/// finite index: all `g` with `g^n` in `h` for some `n` prime to `p`.
fn radical_over(h: &Subgroup, p: u64) -> Result<Subgroup> {
    let g = &h.group;
    let inv = abelian_invariants(h);
    if inv.contains(&0) {
        return Err(Error::InfiniteIndex);
    }
    let e = inv.last().map_or(1, |&x| x as u64);
    let mut q = 1i64;
    let mut rest = e;
    while rest % p == 0 {
        rest /= p;
        q *= p as i64;
    }
    let mut gens = h.igs.clone();
    gens.extend(g.generators().iter().map(|x| g.pow(x, q)));
    Ok(Subgroup::from_gens(g.clone(), &gens))
}

/// Preimage of the `p'`-part of the finite abelian group `G/H`.
pub fn pprime_radical(h: &Subgroup, p: u64) -> Result<Subgroup> {
    if !is_abelian(&h.group) {
        return Err(Error::NotAbelian);
    }
    if h.index().is_none() {
        return Err(Error::InfiniteIndex);
    }
    radical_over(h, p)
}

/// Presentation lattice of `G/N` for normal `N` containing the derived
/// subgroup, in pc-exponent coordinates.
fn abelian_quotient_lattice(n: &Subgroup) -> Vec<Vec<i128>> {
    let g = &n.group;
    let mut rows = abelian_relations(g);
    rows.extend(n.igs.iter().map(|x| x.iter().map(|&e| e as i128).collect()));
    lattice::hnf(&rows, g.len())
}

/// Invariant factors of `G/N` (zeros mark free factors, ones are dropped).
pub fn abelian_invariants(n: &Subgroup) -> Vec<i128> {
    let l = abelian_quotient_lattice(n);
    lattice::smith_invariants(&l, n.group.len()).into_iter().filter(|&x| x != 1).collect()
}

/// Preimage of the torsion subgroup of `G/N`.
pub fn torsion_preimage(n: &Subgroup) -> Subgroup {
    let g = &n.group;
    let l = abelian_quotient_lattice(n);
    let sat = lattice::saturation(&l, g.len());
    let mut gens: Vec<GroupElement> = sat.iter().map(|v| element_of_vector(g, v)).collect();
    gens.extend(n.igs.iter().cloned());
    Subgroup::from_gens(g.clone(), &gens)
}

/// Replaces each `H_i` by `T D H_i` (`D` derived, `T/D` the torsion of
/// `G/D`), then, if a prime divides every step index, by its `p'`-radical.
pub fn prop1_refine(chain: &SubgroupChain, depth: usize) -> Result<(SubgroupChain, RefineTag)> {
    let mut chain = chain.clone();
    chain.extend_to(depth);
    let terms: Vec<Subgroup> = chain.prefix.iter().take(depth.max(2)).cloned().collect();
    if terms.len() < 2 {
        return Err(Error::DepthExhausted("prefix shorter than two terms".into()));
    }
    if terms.iter().any(|h| h.index().is_none()) {
        return Err(Error::InfiniteIndex);
    }
    let strict = SubgroupChain::new(chain.group.clone(), terms.clone());
    if !strict.is_strictly_descending() {
        return Err(Error::DepthExhausted("chain is not strictly descending".into()));
    }
    let g = &chain.group;
    let d = super::subgroup::derived_subgroup(g);
    let t = torsion_preimage(&d);
    let adjusted: Vec<Subgroup> = terms
        .iter()
        .map(|h| {
            let mut gens = t.igs.clone();
            gens.extend(h.igs.iter().cloned());
            Subgroup::from_gens(g.clone(), &gens)
        })
        .collect();
    let steps: Vec<u64> = adjusted
        .windows(2)
        .map(|w| w[1].relative_index(&w[0]).ok_or(Error::InfiniteIndex))
        .collect::<Result<_>>()?;
    let mut candidates: Vec<u64> = prime_factors(steps[0]);
    candidates.retain(|&p| steps.iter().all(|&s| s % p == 0));
    if let Some(&p) = candidates.first() {
        let prefix = adjusted.iter().map(|h| radical_over(h, p)).collect::<Result<Vec<_>>>()?;
        return Ok((SubgroupChain::new(g.clone(), prefix), RefineTag::PGroup(p)));
    }
    let mut seen: Vec<u64> = Vec::new();
    for &s in &steps {
        for p in prime_factors(s) {
            if seen.contains(&p) {
                return Err(Error::DepthExhausted(format!(
                    "prime {p} recurs without dividing every step within depth {}",
                    terms.len()
                )));
            }
            seen.push(p);
        }
    }
    Ok((SubgroupChain::new(g.clone(), adjusted), RefineTag::PPrimeStable))
}

/// Lower central series `G = γ_1 > γ_2 > ... > 1`, stopping at the trivial
/// group or after `limit` terms.
pub fn lower_central_series(group: &Arc<PcPresentation>, limit: usize) -> Vec<Subgroup> {
    let whole = Subgroup::whole(group.clone());
    let mut out = vec![whole.clone()];
    while !out.last().expect("nonempty").is_trivial() && out.len() <= limit {
        let next = out.last().expect("nonempty").commutator_subgroup(&whole);
        out.push(next);
    }
    out
}

/// Nilpotency class computed from the lower central series.
pub fn nilpotency_class(group: &Arc<PcPresentation>) -> usize {
    lower_central_series(group, group.len() + 1).len() - 1
}

/// Central, torsion-free subgroup of finite index `A = (C^m)^m` where
/// `C = C_G(G')` and `m = |D|`.
pub fn lemma3_central_subgroup(group: &Arc<PcPresentation>, d: &Subgroup) -> Result<Subgroup> {
    let g = group.as_ref();
    let m = d.order().ok_or_else(|| Error::PreconditionFailed("D is not finite".into()))?;
    if !d.is_normal() {
        return Err(Error::PreconditionFailed("D is not normal".into()));
    }
    let derived = super::subgroup::derived_subgroup(group);
    if !derived.is_subgroup_of(d) {
        return Err(Error::PreconditionFailed("G/D is not abelian".into()));
    }
    if abelian_invariants(d).iter().any(|&x| x != 0) {
        return Err(Error::PreconditionFailed("G/D is not torsion-free".into()));
    }
    let c = centralizer_of_finite(&derived, ORBIT_BUDGET)?;
    let b = c.power_subgroup(m as i64)?;
    let a = b.power_subgroup(m as i64)?;
    for x in &a.igs {
        for s in g.generators() {
            if !PcPresentation::is_identity(&g.commutator(x, &s)) {
                return Err(Error::PreconditionFailed("constructed subgroup is not central".into()));
            }
        }
    }
    if !is_torsion_free_abelian(&a) {
        return Err(Error::PreconditionFailed("constructed subgroup has torsion".into()));
    }
    if a.index().is_none() {
        return Err(Error::PreconditionFailed("constructed subgroup has infinite index".into()));
    }
    Ok(a)
}

/// Whether an abelian subgroup has no nontrivial elements of finite order.
pub fn is_torsion_free_abelian(a: &Subgroup) -> bool {
    let g = &a.group;
    let k = a.igs.len();
    let mut rows = Vec::new();
    for (i, x) in a.igs.iter().enumerate() {
        let d = g.depth(x);
        if g.orders[d] == 0 {
            continue;
        }
        let r = g.orders[d] as i64 / x[d];
        let c = a.coordinates(&g.pow(x, r)).expect("power lies in the subgroup");
        rows.push((0..k).map(|j| if j == i { r as i128 } else { 0 } - c[j] as i128).collect::<Vec<i128>>());
    }
    lattice::smith_invariants(&rows, k).iter().all(|&x| x == 0 || x == 1)
}

/// Data for the kernel inclusion `(G')^{e^2} <= [H, H]` with `e` the
/// exponent of `G / core(H)`.
#[derive(Debug, Clone)]
pub struct Lemma2Check {
    pub exponent: u64,
    pub power: Subgroup,
    pub derived_h: Subgroup,
    pub holds: bool,
}

pub fn lemma2_check(h: &Subgroup) -> Result<Lemma2Check> {
    let group = &h.group;
    let k = core(h, ORBIT_BUDGET)?;
    let e = quotient_exponent(&k)?;
    let derived = super::subgroup::derived_subgroup(group);
    let power = power_of_abelian(&derived, (e * e) as i64);
    let derived_h = h.derived();
    let holds = power.is_subgroup_of(&derived_h);
    Ok(Lemma2Check { exponent: e, power, derived_h, holds })
}

/// `{x^m}` for an abelian subgroup, generated by powers of its igs.
fn power_of_abelian(h: &Subgroup, m: i64) -> Subgroup {
    let g = &h.group;
    let gens: Vec<GroupElement> = h.igs.iter().map(|x| g.pow(x, m)).collect();
    Subgroup::from_gens(g.clone(), &gens)
}

/// Checks `[a^u, b^v] = [a, b]^{uv}`.
pub fn eq1_holds(g: &PcPresentation, a: &[i64], b: &[i64], u: i64, v: i64) -> bool {
    let lhs = g.commutator(&g.pow(a, u), &g.pow(b, v));
    let rhs = g.pow(&g.commutator(a, b), u * v);
    lhs == rhs
}
