//! Exact linear algebra: integer matrices, Smith normal form, lattices and
//! prime-field elimination.

mod matrix;
pub mod lattice;
pub mod modp;
pub mod snf;

pub use matrix::IntMatrix;
pub use snf::{smith, Smith};
