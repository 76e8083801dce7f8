//! Based free chain complexes, their homology, maps and cones.

mod complex;
mod homology;
mod les;

pub use complex::{mapping_cone, BasedChainComplex, ChainMap, ComplexSpec};
pub use homology::{int_homology, CoefficientMode, DegreeHomology, HomologyReport};
pub(crate) use homology::reduce_rows;
pub use les::{les_consistency, LesReport};
