//! Subgroups as canonical induced generating sequences.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice;

use super::presentation::{GroupElement, PcPresentation};

/// Default bound on orbit sizes in stabilizer computations.
pub const ORBIT_BUDGET: usize = 10_000;

/// A subgroup given by its canonical induced generating sequence: leaders at
/// strictly increasing depths, positive leading exponents dividing the
/// relative order, and entries at later leader depths reduced into
/// `[0, leader)`.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub group: Arc<PcPresentation>,
    pub igs: Vec<GroupElement>,
}

impl PartialEq for Subgroup {
    fn eq(&self, o: &Subgroup) -> bool {
        self.igs == o.igs && (Arc::ptr_eq(&self.group, &o.group) || self.group == o.group)
    }
}

impl Eq for Subgroup {}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        let q = (a - a.rem_euclid(b)) / b;
        (g, y, x - q * y)
    }
}

struct Table<'a> {
    g: &'a PcPresentation,
    rows: Vec<Option<GroupElement>>,
    queue: Vec<GroupElement>,
}

impl Table<'_> {
    fn set(&mut self, d: usize, mut x: GroupElement) {
        let g = self.g;
        if x[d] < 0 {
            x = g.inv(&x);
        }
        if g.orders[d] > 0 {
            let e = g.orders[d] as i64;
            let a = x[d];
            let (gc, s, _) = ext_gcd(a, e);
            if gc != a {
                // replace by a power with leading exponent gcd(a, e)
                let y = g.pow(&x, s.rem_euclid(e));
                let back = g.mul(&g.pow(&y, a / gc), &g.inv(&x));
                self.queue.push(back);
                x = y;
            }
            self.queue.push(g.pow(&x, e / x[d]));
        }
        for t in self.rows.iter().flatten() {
            self.queue.push(g.commutator(&x, t));
        }
        self.rows[d] = Some(x);
    }

    fn sift(&mut self, mut x: GroupElement) {
        let g = self.g;
        loop {
            let d = g.depth(&x);
            if d == g.len() {
                return;
            }
            let Some(y) = self.rows[d].clone() else {
                self.set(d, x);
                return;
            };
            let (a, b) = (x[d], y[d]);
            if a % b == 0 {
                x = g.mul(&x, &g.pow(&y, -(a / b)));
                continue;
            }
            let (gc, s, t) = ext_gcd(a, b);
            let _ = gc;
            let merged = g.mul(&g.pow(&x, s), &g.pow(&y, t));
            self.rows[d] = None;
            self.queue.push(y);
            self.queue.push(x);
            self.set(d, merged);
            return;
        }
    }

    fn run(&mut self) {
        while let Some(x) = self.queue.pop() {
            self.sift(x);
        }
    }
}

impl Subgroup {
    pub fn trivial(group: Arc<PcPresentation>) -> Subgroup {
        Subgroup { group, igs: Vec::new() }
    }

    pub fn whole(group: Arc<PcPresentation>) -> Subgroup {
        let gens = group.generators();
        Subgroup::from_gens(group, &gens)
    }

    /// Subgroup generated by `gens`.
    pub fn from_gens(group: Arc<PcPresentation>, gens: &[GroupElement]) -> Subgroup {
        let n = group.len();
        let queue = gens.iter().map(|x| group.normalize(x)).collect();
        let mut table = Table { g: &group, rows: vec![None; n], queue };
        loop {
            table.run();
            // closure check: commutators and relative powers must sift to 1
            let rows: Vec<GroupElement> = table.rows.iter().flatten().cloned().collect();
            for (i, x) in rows.iter().enumerate() {
                for y in &rows[i + 1..] {
                    table.queue.push(group.commutator(x, y));
                }
                let d = group.depth(x);
                if group.orders[d] > 0 {
                    table.queue.push(group.pow(x, group.orders[d] as i64 / x[d]));
                }
            }
            let snapshot = table.rows.clone();
            table.run();
            if table.rows == snapshot {
                break;
            }
        }
        let mut igs: Vec<GroupElement> = table.rows.into_iter().flatten().collect();
        // reduce entries at later leader depths
        for i in (0..igs.len()).rev() {
            for j in (i + 1)..igs.len() {
                let d = group.depth(&igs[j]);
                let q = igs[i][d].div_euclid(igs[j][d]);
                if q != 0 {
                    igs[i] = group.mul(&igs[i], &group.pow(&igs[j], -q));
                }
            }
        }
        Subgroup { group, igs }
    }

    pub fn gens(&self) -> &[GroupElement] {
        &self.igs
    }

    fn leader(&self, d: usize) -> Option<&GroupElement> {
        self.igs.iter().find(|x| self.group.depth(x) == d)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let g = &self.group;
        let mut x = g.normalize(x);
        for y in &self.igs {
            let d = g.depth(y);
            if g.depth(&x) < d {
                return false;
            }
            if x[d] % y[d] != 0 {
                return false;
            }
            x = g.mul(&x, &g.pow(y, -(x[d] / y[d])));
        }
        PcPresentation::is_identity(&x)
    }

    /// Exponents `c` with `x = igs_1^{c_1} ... igs_k^{c_k}`.
    pub fn coordinates(&self, x: &[i64]) -> Option<Vec<i64>> {
        let g = &self.group;
        let mut x = g.normalize(x);
        let mut out = Vec::with_capacity(self.igs.len());
        for y in &self.igs {
            let d = g.depth(y);
            if g.depth(&x) < d || x[d] % y[d] != 0 {
                return None;
            }
            let q = x[d] / y[d];
            out.push(q);
            x = g.mul(&g.pow(y, -q), &x);
        }
        PcPresentation::is_identity(&x).then_some(out)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.igs.iter().all(|x| other.contains(x))
    }

    pub fn is_trivial(&self) -> bool {
        self.igs.is_empty()
    }

    /// `|G : H|`, `None` when infinite.
    pub fn index(&self) -> Option<u64> {
        let g = &self.group;
        let mut idx: u64 = 1;
        for d in 0..g.len() {
            match (self.leader(d), g.orders[d]) {
                (Some(y), _) => idx = idx.checked_mul(y[d] as u64)?,
                (None, 0) => return None,
                (None, e) => idx = idx.checked_mul(e)?,
            }
        }
        Some(idx)
    }

    /// `|H|`, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        let g = &self.group;
        let mut o: u64 = 1;
        for y in &self.igs {
            let d = g.depth(y);
            if g.orders[d] == 0 {
                return None;
            }
            o *= g.orders[d] / y[d] as u64;
        }
        Some(o)
    }

    /// `|K : H|` for `H <= K`.
    pub fn relative_index(&self, over: &Subgroup) -> Option<u64> {
        match (self.index(), over.index()) {
            (Some(a), Some(b)) => Some(a / b),
            _ => {
                let g = &self.group;
                let mut idx: u64 = 1;
                for d in 0..g.len() {
                    match (over.leader(d), self.leader(d)) {
                        (Some(a), Some(b)) => idx *= (b[d] / a[d]) as u64,
                        (Some(a), None) => {
                            if g.orders[d] == 0 {
                                return None;
                            }
                            idx *= g.orders[d] / a[d] as u64;
                        }
                        (None, Some(_)) => return None,
                        (None, None) => {}
                    }
                }
                Some(idx)
            }
        }
    }

    /// Canonical representative of the right coset `H x`.
    pub fn coset_rep(&self, x: &[i64]) -> GroupElement {
        let g = &self.group;
        let mut x = x.to_vec();
        for y in &self.igs {
            let d = g.depth(y);
            let q = x[d].div_euclid(y[d]);
            if q != 0 {
                x = g.mul(&g.pow(y, -q), &x);
            }
        }
        x
    }

    /// Canonical right transversal, sorted lexicographically.
    pub fn transversal(&self) -> Result<Vec<GroupElement>> {
        let g = &self.group;
        let idx = self.index().ok_or(Error::InfiniteIndex)?;
        if idx as usize > ORBIT_BUDGET * 10 {
            return Err(Error::Unsupported(format!("transversal of size {idx}")));
        }
        let ranges: Vec<i64> = (0..g.len())
            .map(|d| match self.leader(d) {
                Some(y) => y[d],
                None => g.orders[d] as i64,
            })
            .collect();
        let mut out = Vec::with_capacity(idx as usize);
        let mut cur = vec![0i64; g.len()];
        loop {
            out.push(cur.clone());
            let mut k = g.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < ranges[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.group;
        g.generators().iter().all(|s| {
            let si = g.inv(s);
            self.igs.iter().all(|x| self.contains(&g.conjugate(x, s)) && self.contains(&g.conjugate(x, &si)))
        })
    }

    /// Smallest subgroup containing `self` that is normalised by `by`.
    pub fn closure_under(&self, by: &[GroupElement]) -> Subgroup {
        let g = &self.group;
        let mut cur = self.clone();
        loop {
            let mut extra = Vec::new();
            for s in by {
                let si = g.inv(s);
                for x in &cur.igs {
                    for c in [g.conjugate(x, s), g.conjugate(x, &si)] {
                        if !cur.contains(&c) {
                            extra.push(c);
                        }
                    }
                }
            }
            if extra.is_empty() {
                return cur;
            }
            extra.extend(cur.igs.iter().cloned());
            cur = Subgroup::from_gens(self.group.clone(), &extra);
        }
    }

    pub fn normal_closure(&self) -> Subgroup {
        self.closure_under(&self.group.generators())
    }

    /// `[H, K]` as the normal closure in `<H, K>` of generator commutators.
    pub fn commutator_subgroup(&self, other: &Subgroup) -> Subgroup {
        let g = &self.group;
        let mut comms = Vec::new();
        for x in &self.igs {
            for y in &other.igs {
                comms.push(g.commutator(x, y));
            }
        }
        let mut by = self.igs.clone();
        by.extend(other.igs.iter().cloned());
        Subgroup::from_gens(self.group.clone(), &comms).closure_under(&by)
    }

    /// `[H, H]`.
    pub fn derived(&self) -> Subgroup {
        self.commutator_subgroup(self)
    }

    /// Conjugate subgroup `H^y`.
    pub fn conjugate(&self, y: &[i64]) -> Subgroup {
        let g = &self.group;
        let gens: Vec<GroupElement> = self.igs.iter().map(|x| g.conjugate(x, y)).collect();
        Subgroup::from_gens(self.group.clone(), &gens)
    }

    /// Subgroup generated by all `m`-th powers of elements of `self`: the
    /// smallest normal subgroup of `self` whose quotient has exponent
    /// dividing `m`.
    pub fn power_subgroup(&self, m: i64) -> Result<Subgroup> {
        let g = &self.group;
        let mut gens = Vec::new();
        for (i, x) in self.igs.iter().enumerate() {
            gens.push(g.pow(x, m));
            for y in &self.igs[i + 1..] {
                gens.push(g.pow(&g.mul(x, y), m));
            }
        }
        let mut n = Subgroup::from_gens(self.group.clone(), &gens).closure_under(&self.igs);
        loop {
            let mut extra = Vec::new();
            for t in n.transversal()? {
                if self.contains(&t) {
                    let p = g.pow(&t, m);
                    if !n.contains(&p) {
                        extra.push(p);
                    }
                }
            }
            if extra.is_empty() {
                return Ok(n);
            }
            extra.extend(n.igs.iter().cloned());
            n = Subgroup::from_gens(self.group.clone(), &extra).closure_under(&self.igs);
        }
    }

    pub fn render(&self) -> String {
        let v: Vec<String> = self.igs.iter().map(|x| self.group.render(x)).collect();
        format!("<{}>", v.join(", "))
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn derived_subgroup(group: &Arc<PcPresentation>) -> Subgroup {
    Subgroup::whole(group.clone()).derived()
}

/// `D H`, requiring `D` normal.
pub fn subgroup_product(d: &Subgroup, h: &Subgroup) -> Result<Subgroup> {
    if !d.is_normal() {
        return Err(Error::NotNormal);
    }
    let mut gens = d.igs.clone();
    gens.extend(h.igs.iter().cloned());
    Ok(Subgroup::from_gens(d.group.clone(), &gens))
}

/// Stabilizer of `start` in the group generated by `gens` under a right
/// action, by Schreier generators; fails when the orbit exceeds `budget`.
pub fn stabilizer<P, F>(
    group: &Arc<PcPresentation>,
    gens: &[GroupElement],
    start: P,
    act: F,
    budget: usize,
) -> Result<Subgroup>
where
    P: Clone + Eq + std::hash::Hash,
    F: Fn(&P, &GroupElement) -> P,
{
    let g = group.as_ref();
    let mut reps: HashMap<P, GroupElement> = HashMap::new();
    let mut order = vec![start.clone()];
    reps.insert(start, g.identity());
    let mut schreier = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let p = order[i].clone();
        let up = reps[&p].clone();
        for s in gens {
            let q = act(&p, s);
            let us = g.mul(&up, s);
            match reps.get(&q) {
                Some(uq) => {
                    let w = g.mul(&us, &g.inv(uq));
                    if !PcPresentation::is_identity(&w) {
                        schreier.push(w);
                    }
                }
                None => {
                    if reps.len() >= budget {
                        return Err(Error::Unsupported(format!("orbit exceeds budget {budget}")));
                    }
                    reps.insert(q.clone(), us);
                    order.push(q);
                }
            }
        }
        i += 1;
    }
    Ok(Subgroup::from_gens(group.clone(), &schreier))
}

pub fn is_abelian(g: &PcPresentation) -> bool {
    let gens = g.generators();
    gens.iter().enumerate().all(|(i, x)| gens[i + 1..].iter().all(|y| PcPresentation::is_identity(&g.commutator(x, y))))
}

/// Relations of the abelianization `G/G' = Z^n / R`: power relations and
/// the commutator parts of the conjugation relations.
pub(crate) fn abelian_relations(g: &PcPresentation) -> Vec<Vec<i128>> {
    let n = g.len();
    let mut rows: Vec<Vec<i128>> = (0..n)
        .filter(|&i| g.orders[i] > 0)
        .map(|i| {
            let w = g.power_word(i);
            (0..n).map(|k| if k == i { g.orders[i] as i128 } else { 0 } - w[k] as i128).collect()
        })
        .collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let w = g.conj_word(i, j);
            let row: Vec<i128> = (0..n).map(|k| w[k] as i128 - i128::from(k == j)).collect();
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    rows
}

pub(crate) fn element_of_vector(g: &PcPresentation, v: &[i128]) -> GroupElement {
    let mut acc = g.identity();
    for (k, &e) in v.iter().enumerate() {
        acc = g.mul_gen_pow(&acc, k, e as i64);
    }
    acc
}

pub fn intersect(h1: &Subgroup, h2: &Subgroup) -> Result<Subgroup> {
    intersect_with_budget(h1, h2, ORBIT_BUDGET)
}

pub fn intersect_with_budget(h1: &Subgroup, h2: &Subgroup, budget: usize) -> Result<Subgroup> {
    let g = &h1.group;
    if h1 == h2 {
        return Ok(h1.clone());
    }
    if h1.is_subgroup_of(h2) {
        return Ok(h1.clone());
    }
    if h2.is_subgroup_of(h1) {
        return Ok(h2.clone());
    }
    if is_abelian(g) && (h1.index().is_none() || h2.index().is_none()) {
        let n = g.len();
        let rel = abelian_relations(g);
        let lat = |h: &Subgroup| {
            let mut rows: Vec<Vec<i128>> = h.igs.iter().map(|x| x.iter().map(|&e| e as i128).collect()).collect();
            rows.extend(rel.iter().cloned());
            lattice::hnf(&rows, n)
        };
        let both = lattice::intersect(&lat(h1), &lat(h2), n);
        let gens: Vec<GroupElement> = both.iter().map(|v| element_of_vector(g, v)).collect();
        return Ok(Subgroup::from_gens(g.clone(), &gens));
    }
    // act with the smaller-orbit side on cosets of the other
    let (a, b) = match (h1.index(), h2.index(), h1.order(), h2.order()) {
        (_, Some(_), _, _) => (h1, h2),
        (Some(_), None, _, _) => (h2, h1),
        (_, _, Some(_), _) => (h1, h2),
        (_, _, _, Some(_)) => (h2, h1),
        _ => return Err(Error::Unsupported("intersection of infinite-index subgroups".into())),
    };
    let start = b.coset_rep(&g.identity());
    stabilizer(g, &a.igs, start, |p, s| b.coset_rep(&g.mul(p, s)), budget)
}

/// Centralizer of a finite subgroup, as the stabilizer of its generating
/// tuple under conjugation.
pub fn centralizer_of_finite(k: &Subgroup, budget: usize) -> Result<Subgroup> {
    let g = &k.group;
    let gens = g.generators();
    let start: Vec<GroupElement> = k.igs.clone();
    stabilizer(g, &gens, start, |p, s| p.iter().map(|x| g.conjugate(x, s)).collect(), budget)
}

/// Normal core of a finite-index subgroup: the kernel of the action on its
/// right cosets.
pub fn core(h: &Subgroup, budget: usize) -> Result<Subgroup> {
    let g = &h.group;
    let t = h.transversal()?;
    let gens = g.generators();
    stabilizer(g, &gens, t, |p, s| p.iter().map(|x| h.coset_rep(&g.mul(x, s))).collect(), budget)
}

/// Exponent of the finite group `G / N` for normal `N` of finite index.
pub fn quotient_exponent(n: &Subgroup) -> Result<u64> {
    let g = &n.group;
    let mut e: u64 = 1;
    for t in n.transversal()? {
        let mut k: u64 = 1;
        let mut x = t.clone();
        while !n.contains(&x) {
            x = g.mul(&x, &t);
            k += 1;
        }
        e = num_integer::lcm(e, k);
    }
    Ok(e)
}
