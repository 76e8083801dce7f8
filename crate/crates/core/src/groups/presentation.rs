use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::word::Word;
use crate::error::{Error, Result};
use crate::linalg::{snf, IntMatrix};

/// A finite presentation `<generators | relators>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePresentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
}

/// Wire form used in job files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationSpec {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<String>,
}

impl FinitePresentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let n = generator_names.len();
        for r in &relators {
            if r.max_generator().is_some_and(|g| g >= n) {
                return Err(Error::InvalidInput(format!("relator uses a generator index >= {n}")));
            }
        }
        Ok(FinitePresentation { generator_names, relators })
    }

    /// Parses relator strings against the given generator names.
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self> {
        let names: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let rels = relators.iter().map(|r| Word::parse(r, &names)).collect::<Result<Vec<_>>>()?;
        Self::new(names, rels)
    }

    pub fn from_spec(spec: &PresentationSpec) -> Result<Self> {
        let gens: Vec<&str> = spec.generators.iter().map(String::as_str).collect();
        let rels: Vec<&str> = spec.relators.iter().map(String::as_str).collect();
        Self::parse(&gens, &rels)
    }

    pub fn to_spec(&self) -> PresentationSpec {
        PresentationSpec {
            generators: self.generator_names.clone(),
            relators: self.relators.iter().map(|r| r.display(&self.generator_names).to_string()).collect(),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Same generators, extra relators appended.
    pub fn with_relators(&self, extra: &[Word]) -> Result<Self> {
        let mut rels = self.relators.clone();
        rels.extend_from_slice(extra);
        Self::new(self.generator_names.clone(), rels)
    }

    /// Relator-by-generator matrix of exponent sums.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let n = self.generator_count();
        let rows: Vec<Vec<BigInt>> = self
            .relators
            .iter()
            .map(|r| r.exponent_sums(n).into_iter().map(BigInt::from).collect())
            .collect();
        IntMatrix::from_row_vecs(n, rows)
    }

    /// Invariant factors of H_1; `0` marks a free summand and units are
    /// dropped.
    pub fn abelianization(&self, bit_bound: u64) -> Result<Vec<BigInt>> {
        let n = self.generator_count();
        let m = self.exponent_matrix();
        let s = snf::smith(&m, bit_bound)?;
        let mut out: Vec<BigInt> = s.diagonal[..s.rank].iter().filter(|d| **d != BigInt::from(1)).cloned().collect();
        out.extend(std::iter::repeat_n(BigInt::from(0), n - s.rank));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn abelianization_examples() {
        let p = FinitePresentation::parse(&["x"], &["x^5"]).unwrap();
        assert_eq!(p.abelianization(1 << 16).unwrap(), ints(&[5]));
        let p = FinitePresentation::parse(&["x", "y"], &["x y x^-1 y^-1"]).unwrap();
        assert_eq!(p.abelianization(1 << 16).unwrap(), ints(&[0, 0]));
        let p = FinitePresentation::parse(&["a", "b"], &["a^2", "b^3", "(a b)^5"]).unwrap();
        assert_eq!(p.abelianization(1 << 16).unwrap(), ints(&[]));
        let p = FinitePresentation::parse(&["x", "y"], &[]).unwrap();
        assert_eq!(p.abelianization(1 << 16).unwrap(), ints(&[0, 0]));
    }

    #[test]
    fn spec_roundtrip() {
        let p = FinitePresentation::parse(&["a", "b"], &["a^2", "b^3", "(a b)^5"]).unwrap();
        let q = FinitePresentation::from_spec(&p.to_spec()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn bad_generator_index_is_rejected() {
        assert!(FinitePresentation::new(vec!["x".into()], vec![Word::generator(1)]).is_err());
    }
}
