//! Quotients of a pc-presented group by a normal subgroup.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::presentation::{GroupElement, PcPresentation};
use super::subgroup::Subgroup;

/// `G/N` with maps in both directions.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: Arc<PcPresentation>,
    pub kernel: Subgroup,
    pub image: Arc<PcPresentation>,
    /// Depths of `G` that survive, in order.
    pub kept: Vec<usize>,
}

impl Quotient {
    pub fn new(n: &Subgroup) -> Result<Quotient> {
        if !n.is_normal() {
            return Err(Error::NotNormal);
        }
        let g = n.group.clone();
        let len = g.len();
        let mut leader = vec![None; len];
        for y in &n.igs {
            leader[g.depth(y)] = Some(y[g.depth(y)] as u64);
        }
        let kept: Vec<usize> = (0..len).filter(|&d| leader[d] != Some(1)).collect();
        let orders: Vec<u64> = kept.iter().map(|&d| leader[d].unwrap_or(g.orders[d])).collect();
        let names: Vec<String> = kept.iter().map(|&d| g.names[d].clone()).collect();
        let project = |x: &[i64]| -> GroupElement {
            let r = n.coset_rep(x);
            kept.iter().map(|&d| r[d]).collect()
        };
        let mut powers = BTreeMap::new();
        for (i, &d) in kept.iter().enumerate() {
            if orders[i] > 0 {
                let w = project(&g.pow(&g.generator(d), orders[i] as i64));
                if w.iter().any(|&e| e != 0) {
                    powers.insert(i, w);
                }
            }
        }
        let mut conj = BTreeMap::new();
        for (i, &di) in kept.iter().enumerate() {
            for (j, &dj) in kept.iter().enumerate().skip(i + 1) {
                let w = project(&g.conjugate(&g.generator(dj), &g.generator(di)));
                let mut plain = vec![0; kept.len()];
                plain[j] = 1;
                if w != plain {
                    conj.insert((i, j), w);
                }
            }
        }
        let image = Arc::new(PcPresentation::new(names, orders, powers, conj, g.class_bound)?);
        Ok(Quotient { group: g, kernel: n.clone(), image, kept })
    }

    pub fn project(&self, x: &[i64]) -> GroupElement {
        let r = self.kernel.coset_rep(x);
        self.kept.iter().map(|&d| r[d]).collect()
    }

    /// A preimage of a quotient element.
    pub fn lift(&self, y: &[i64]) -> GroupElement {
        let mut x = self.group.identity();
        for (i, &d) in self.kept.iter().enumerate() {
            x[d] = y[i];
        }
        x
    }

    pub fn project_subgroup(&self, h: &Subgroup) -> Subgroup {
        let gens: Vec<GroupElement> = h.igs.iter().map(|x| self.project(x)).collect();
        Subgroup::from_gens(self.image.clone(), &gens)
    }

    pub fn lift_subgroup(&self, h: &Subgroup) -> Subgroup {
        let mut gens: Vec<GroupElement> = h.igs.iter().map(|y| self.lift(y)).collect();
        gens.extend(self.kernel.igs.iter().cloned());
        Subgroup::from_gens(self.group.clone(), &gens)
    }
}
