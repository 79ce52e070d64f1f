//! Finitely generated nilpotent groups given by polycyclic presentations.

pub mod chain;
pub mod library;
pub mod presentation;
pub mod quotient;
pub mod subgroup;

pub use chain::{
    abelian_invariants, eq1_holds, is_torsion_free_abelian, lemma2_check, lemma3_central_subgroup, lower_central_series,
    nilpotency_class, pprime_radical, prop1_refine, torsion_preimage, ChainRule, Lemma2Check, RefineTag, SubgroupChain,
};
pub use presentation::{GroupElement, PcPresentation};
pub use quotient::Quotient;
pub use subgroup::{
    centralizer_of_finite, core, derived_subgroup, intersect, intersect_with_budget, is_abelian, quotient_exponent, stabilizer,
    subgroup_product, Subgroup, ORBIT_BUDGET,
};
