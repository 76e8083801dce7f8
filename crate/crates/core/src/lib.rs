pub mod chains;
pub mod cobordism;
pub mod config;
pub mod grouprings;
pub mod grouphomology;
pub mod groups;
pub mod error;
pub mod foxcw;
pub mod linalg;
pub mod plusconstruction;
pub mod torsion;
pub mod ring;
pub(crate) mod serde_int;

pub use config::Config;
pub use error::{Error, Result};
pub use ring::RingSpec;
