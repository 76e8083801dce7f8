//! Cellular chains of presentation 2-complexes over `R[G]` and chain-level
//! cell attachment.

mod attach;
mod fox;

pub use attach::{attach_cells, kernel_lift_solve, AttachmentRecord};
pub use fox::{build_presentation_complex, fox_derivative, fox_row, PresentationComplex, PresentationComplexSpec};
