//! Small named presentations used by tests and the default catalog.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::presentation::PcPresentation;

/// Abelian group with the given relative orders (0 = infinite cyclic).
pub fn abelian(orders: &[u64]) -> Arc<PcPresentation> {
    let names = (1..=orders.len()).map(|i| format!("g{i}")).collect();
    let class = usize::from(orders.iter().any(|&e| e != 1));
    Arc::new(PcPresentation::new(names, orders.to_vec(), BTreeMap::new(), BTreeMap::new(), class).expect("abelian"))
}

pub fn free_abelian(rank: usize) -> Arc<PcPresentation> {
    abelian(&vec![0; rank])
}

/// `<a, b, c | b^a = b c, c central>`, with `c` of order `c_order` (0 = infinite).
pub fn heisenberg_mod(c_order: u64) -> Arc<PcPresentation> {
    let mut conj = BTreeMap::new();
    conj.insert((0, 1), vec![0, 1, 1]);
    let names = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    Arc::new(PcPresentation::new(names, vec![0, 0, c_order], BTreeMap::new(), conj, 2).expect("heisenberg"))
}

pub fn heisenberg() -> Arc<PcPresentation> {
    heisenberg_mod(0)
}

/// `C_4 x H` with the cyclic factor `t` placed first.
pub fn c4_times_heisenberg() -> Arc<PcPresentation> {
    let mut conj = BTreeMap::new();
    conj.insert((1, 2), vec![0, 0, 1, 1]);
    let names = ["t", "a", "b", "c"].iter().map(|s| s.to_string()).collect();
    Arc::new(PcPresentation::new(names, vec![4, 0, 0, 0], BTreeMap::new(), conj, 2).expect("c4 x heisenberg"))
}

/// Upper unitriangular 4x4 integer matrices: class 3, Hirsch length 6.
pub fn unitriangular4() -> Arc<PcPresentation> {
    // x1 = e12, x2 = e23, x3 = e34, y1 = e13, y2 = e24, z = e14
    let n = 6;
    let names = ["x1", "x2", "x3", "y1", "y2", "z"].iter().map(|s| s.to_string()).collect();
    let mut conj = BTreeMap::new();
    let w = |pairs: &[(usize, i64)]| {
        let mut v = vec![0; n];
        for &(i, e) in pairs {
            v[i] = e;
        }
        v
    };
    // x2^{x1} = x2 [x2, x1] = x2 y1^{-1} in matrix terms
    conj.insert((0, 1), w(&[(1, 1), (3, -1)]));
    conj.insert((1, 2), w(&[(2, 1), (4, -1)]));
    conj.insert((0, 4), w(&[(4, 1), (5, -1)]));
    conj.insert((2, 3), w(&[(3, 1), (5, 1)]));
    Arc::new(PcPresentation::new(names, vec![0; n], BTreeMap::new(), conj, 3).expect("unitriangular"))
}
