use serde::{Deserialize, Serialize};

/// Enumeration bounds and computational budgets. Every bound is a value
/// here rather than a constant in the algorithms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Largest order for which group axioms are checked triple by triple.
    pub exhaustive_check_bound: usize,
    /// Largest order for normal-subgroup enumeration.
    pub enumeration_bound: usize,
    /// Largest number of degree-3 bar columns, i.e. (|G|-1)^3.
    pub bar_column_budget: usize,
    /// Largest (|G|-1)^3 for which H2 over Z is computed by a dense Smith form.
    pub dense_snf_column_budget: usize,
    /// Abort when any intermediate integer grows past this many bits.
    pub bit_bound: u64,
    /// Step budget of the elementary-operation search for trivial torsion.
    pub triviality_search_steps: usize,
    /// Largest stabilization the triviality search may use.
    pub stabilization_cap: usize,
    /// Digits printed for float magnitudes in reports.
    pub float_digits: usize,
    /// Most cosets a Todd-Coxeter run may define.
    pub coset_limit: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            exhaustive_check_bound: 5040,
            enumeration_bound: 60,
            bar_column_budget: 1_000_000,
            dense_snf_column_budget: 1500,
            bit_bound: 1 << 16,
            triviality_search_steps: 4000,
            stabilization_cap: 2,
            float_digits: 12,
            coset_limit: 200_000,
        }
    }
}
