//! Chain models of one-sided h-cobordisms `(W; M, N)` and their
//! classification by a perfect normal subgroup and a torsion class.

mod model;
mod ops;

pub use model::{torsion_of_inclusion, verify_one_sided_h, ChainCobordismModel, CobordismModelSpec, OneSidedReport};
pub use ops::{classify, enumerate_classes, glue, realize, same_invariant, whitehead_rank, ClassIndex, CobordismClass, GlueReport};
