//! Low-degree homology of finite groups from the normalized bar complex,
//! induced maps, and the homological criteria built on them.

mod bar;
mod criteria;
mod h2;

pub use bar::BarComplexSlice;
pub use criteria::{
    homology_sphere_criterion, knot_group_criterion, moore_criterion, witness_kills_presentation, KnotVerdict,
    KnotVerdictKind, ProbeResult,
};
pub use h2::{dim_h2_mod_p, h2_group, h2_induced_map, presentation_h2_epi, word_chain, H2Method, H2Report, InducedH2};
