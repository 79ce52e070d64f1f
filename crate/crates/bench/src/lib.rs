//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use nilrep_core::indmod::{induce, FDModule, InducedModule};
use nilrep_core::laurent::{FiniteIndexEmbedding, LaurentIdeal, LaurentPoly, LaurentRing};
use nilrep_core::linalg::Matrix;
use nilrep_core::nilgroup::library::{free_abelian, heisenberg};
use nilrep_core::nilgroup::{PcPresentation, Subgroup};
use nilrep_core::Field;

/// `<a^i, b^j, c^k>` in the Heisenberg group.
pub fn heis_box(i: i64, j: i64, k: i64) -> (Arc<PcPresentation>, Subgroup) {
    let g = heisenberg();
    let h = Subgroup::from_gens(g.clone(), &[vec![i, 0, 0], vec![0, j, 0], vec![0, 0, k]]);
    (g, h)
}

pub fn ideal(rank: usize, field: Field, gens: &[&str]) -> LaurentIdeal {
    let ring = LaurentRing::new(rank, field);
    let polys = gens.iter().map(|g| LaurentPoly::parse(ring, g).expect("fixture parses")).collect();
    LaurentIdeal::new(ring, polys).expect("fixture ideal")
}

pub fn square_embedding(rank: usize) -> FiniteIndexEmbedding {
    FiniteIndexEmbedding::scalar(rank, 2)
}

/// A character of `<t, s^k>` over GF(p) induced to `Z^2`.
pub fn induced_character(p: u64, k: i64, alpha: i64, v: i64) -> InducedModule {
    let f = Field::prime(p).expect("prime");
    let g = free_abelian(2);
    let h = Subgroup::from_gens(g.clone(), &[vec![1, 0], vec![0, k]]);
    let action = h
        .igs
        .iter()
        .map(|x| Matrix::from_rows(f, vec![vec![&f.from_i64(alpha).pow(x[0] as u64) * &f.from_i64(v).pow((x[1] / k) as u64)]]))
        .collect();
    let u = FDModule::new(h, f, 1, action).expect("character");
    induce(&u, &Subgroup::whole(g)).expect("finite index")
}
