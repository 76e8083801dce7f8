//! Presented groups, finite realizations and subgroup predicates.

mod abelian;
mod cosets;
mod finite;
mod hom;
mod presentation;
mod subgroup;
mod word;

pub use abelian::AbelianQuotient;
pub use cosets::{enumerate_cosets, presents, realize_hom, CosetTable};
pub use finite::{FiniteGroup, GroupSpec};
pub use hom::{GroupHom, RealizationHom};
pub use presentation::{FinitePresentation, PresentationSpec};
pub use subgroup::{
    commutator_subgroup_with, derived_subgroup, enumerate_perfect_normal_subgroups, is_perfect, is_superperfect,
    is_relatively_perfect, normal_closure, normal_subgroups, quotient, sylow, weight_le_one, Subgroup,
};
pub use word::Word;
