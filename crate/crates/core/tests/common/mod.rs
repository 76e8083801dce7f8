//! Independent brute-force helpers shared by the integration tests.
#![allow(dead_code)]

pub mod bar;
pub mod brute;
