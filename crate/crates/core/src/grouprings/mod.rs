//! Exact arithmetic in group rings of finite groups.

mod character;
mod cyclotomic;
mod element;
mod matrix;
mod parse;

pub use character::{character_eval, Character, CharacterValue};
pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic};
pub use element::{element_namer, GroupRingElement};
pub(crate) use element::same_group;
pub use matrix::GroupRingMatrix;
pub use parse::parse_element;
