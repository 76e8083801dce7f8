use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::modp::Echelon;
use crate::linalg::IntMatrix;

/// The F_2 system `w + a ε = 0`: rows of `a` are spheres, columns are
/// handles, `w` holds the second Stiefel-Whitney evaluations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramingProblem {
    pub a_mod2: Vec<Vec<u8>>,
    pub w: Vec<u8>,
    /// An integer unimodular matrix whose first rows reduce to `a_mod2`,
    /// witnessing that the rows span a direct summand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summand_certificate: Option<Vec<Vec<i64>>>,
}

impl FramingProblem {
    pub fn new(a_mod2: Vec<Vec<u8>>, w: Vec<u8>) -> Result<Self> {
        let fp = FramingProblem { a_mod2, w, summand_certificate: None };
        fp.check_shape()?;
        Ok(fp)
    }

    pub fn spheres(&self) -> usize {
        self.a_mod2.len()
    }

    pub fn handles(&self) -> usize {
        self.a_mod2.first().map_or(0, Vec::len)
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.handles();
        if self.w.len() != self.spheres() || self.a_mod2.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("framing matrix and evaluation vector have inconsistent sizes".into()));
        }
        if self.a_mod2.iter().flatten().chain(&self.w).any(|&x| x > 1) {
            return Err(Error::InvalidInput("framing entries must be 0 or 1".into()));
        }
        Ok(())
    }

    fn check_certificate(&self) -> Result<()> {
        let Some(c) = &self.summand_certificate else { return Ok(()) };
        let m = IntMatrix::from_rows(c);
        if m.rows() != m.cols() || m.rows() < self.spheres() || m.cols() != self.handles() {
            return Err(Error::InvalidInput("summand certificate must be a square matrix of handle size".into()));
        }
        let det = m.det();
        if det != 1.into() && det != (-1).into() {
            return Err(Error::InvalidInput("summand certificate is not unimodular".into()));
        }
        for (i, row) in self.a_mod2.iter().enumerate() {
            if c[i].iter().zip(row).any(|(&x, &y)| x.rem_euclid(2) as u8 != y) {
                return Err(Error::InvalidInput(format!("summand certificate row {i} does not reduce to the framing matrix")));
            }
        }
        Ok(())
    }
}

/// Handle corrections `ε` with `w + a ε = 0` over F_2; free handles get 0.
pub fn framing_correction(fp: &FramingProblem) -> Result<Vec<u8>> {
    fp.check_shape()?;
    fp.check_certificate()?;
    let (m, n) = (fp.spheres(), fp.handles());
    // ε^T a^T = w^T
    let at: Vec<Vec<u64>> = (0..n).map(|k| (0..m).map(|i| fp.a_mod2[i][k] as u64).collect()).collect();
    let e = Echelon::new(&at, m, 2);
    let w: Vec<u64> = fp.w.iter().map(|&x| x as u64).collect();
    match e.solve(&w) {
        Some(eps) => Ok(eps.into_iter().map(|x| x as u8).collect()),
        None => Err(Error::NotASummand(format!(
            "rank {} of {} sphere rows; the evaluations are not in the column space",
            e.rank(),
            m
        ))),
    }
}

/// `w + a ε` over F_2.
pub fn corrected_evaluations(fp: &FramingProblem, eps: &[u8]) -> Vec<u8> {
    fp.a_mod2
        .iter()
        .zip(&fp.w)
        .map(|(row, &w)| row.iter().zip(eps).fold(w, |acc, (&a, &e)| acc ^ (a & e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let id = FramingProblem::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], vec![1, 0, 1]).unwrap();
        assert_eq!(framing_correction(&id).unwrap(), vec![1, 0, 1]);
        let lower = FramingProblem::new(vec![vec![1, 0], vec![1, 1]], vec![1, 0]).unwrap();
        assert_eq!(framing_correction(&lower).unwrap(), vec![1, 1]);
        let dep = FramingProblem::new(vec![vec![1, 1], vec![1, 1]], vec![1, 0]).unwrap();
        assert!(matches!(framing_correction(&dep), Err(Error::NotASummand(_))));
    }

    /// Brute force over F_2^n agrees with the solver on all 2x2 systems.
    #[test]
    fn exhaustive_two_by_two() {
        for bits in 0..64u32 {
            let b = |i: u32| ((bits >> i) & 1) as u8;
            let fp = FramingProblem::new(vec![vec![b(0), b(1)], vec![b(2), b(3)]], vec![b(4), b(5)]).unwrap();
            let brute: Vec<Vec<u8>> = (0..4u8)
                .map(|e| vec![e & 1, e >> 1])
                .filter(|e| corrected_evaluations(&fp, e).iter().all(|&x| x == 0))
                .collect();
            match framing_correction(&fp) {
                Ok(eps) => assert!(brute.contains(&eps)),
                Err(_) => assert!(brute.is_empty()),
            }
        }
    }

    #[test]
    fn certificate_is_checked() {
        let mut fp = FramingProblem::new(vec![vec![1, 1]], vec![1]).unwrap();
        fp.summand_certificate = Some(vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(framing_correction(&fp).unwrap(), vec![1, 0]);
        fp.summand_certificate = Some(vec![vec![1, 1], vec![1, 1]]);
        assert!(matches!(framing_correction(&fp), Err(Error::InvalidInput(_))));
    }
}
