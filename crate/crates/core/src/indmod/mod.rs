//! Group rings, finite-dimensional modules, induction and invariant ideals.

pub mod ideal;
pub mod module;
mod norton;
pub mod prop;
pub mod ring;

pub use module::{
    cyclic_submodule, induce, induction_transitive, is_induced_from, is_irreducible, relative_transversal,
    FDModule, InducedModule, InducedVerdict, QuotientModule, Submodule, TransitivityWitness,
    INDUCED_SEARCH_BUDGET,
};
pub use ideal::{
    culls, finite_elements, i_dagger, is_g_large, module_times_ideal, CullCondition, CullRefusal, CullingCertificate,
    GLargeCertificate, InvariantIdealData, Residue,
};
pub use prop::{annihilator, enveloping_basis, prop3_embed, prop4_check, prop4_check_with, AChoice, Embedding, Prop4Report};
pub use ring::{coerce, GroupRingElem, ScalarRing};
