//! Cell attachments realizing homology targets and prescribed torsion, and
//! the F_2 framing system.

mod framing;
mod plus;
mod target;

pub use framing::{corrected_evaluations, framing_correction, FramingProblem};
pub(crate) use plus::seed_closure;
pub use plus::{plus_with_torsion, PlusReport, PlusResult};
pub use target::{alpha_h2_epi, homology_equivalence_target, homology_equivalence_target_with, HomologyTargetResult, TargetOptions, TargetReport};
