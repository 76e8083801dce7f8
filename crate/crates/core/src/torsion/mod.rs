//! Whitehead torsion of acyclic based complexes over `Z[G]`, with
//! detectors for (non)triviality in `Wh(G)`.

mod class;
mod invariant;
mod pair;
mod search;

pub use class::{compose, conjugate, dual_sign, glue_formula, TorsionClass, TorsionClassSpec};
pub use invariant::{det_abelianized, invariant, CharacterMagnitude, TorsionInvariant};
pub use pair::torsion_of_pair;
pub use search::{is_trivial_candidate, TrivialityVerdict, TrivialityKind};
