use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::lattice::describe_group;
use crate::linalg::modp::rank_mod_p;
use crate::linalg::{snf, IntMatrix};
use crate::ring::{to_u64, RingSpec};

/// How group-ring coefficients are turned into plain ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientMode {
    /// `R` with trivial action: each entry is replaced by its augmentation.
    Trivial,
    /// `R[G]` as an `R`-module: each entry becomes its regular representation.
    Regular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub degree: usize,
    /// Free rank, or dimension over a prime field.
    pub rank: usize,
    /// Non-unit invariant factors of the torsion part.
    #[serde(serialize_with = "crate::serde_int::vec")]
    pub torsion: Vec<BigInt>,
    pub description: String,
}

impl DegreeHomology {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Invariant factors with `0` for each free summand.
    pub fn factors(&self) -> Vec<BigInt> {
        let mut f = self.torsion.clone();
        f.extend(std::iter::repeat_n(BigInt::zero(), self.rank));
        f
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub ring: RingSpec,
    pub mode: CoefficientMode,
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyReport {
    pub fn degree(&self, d: usize) -> DegreeHomology {
        self.degrees.get(d).cloned().unwrap_or_else(|| DegreeHomology {
            degree: d,
            rank: 0,
            torsion: Vec::new(),
            description: "0".into(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.iter().all(DegreeHomology::is_zero)
    }

    /// Same groups in every degree (ignoring trailing zeros).
    pub fn same_groups(&self, other: &HomologyReport) -> bool {
        let n = self.degrees.len().max(other.degrees.len());
        (0..n).all(|d| {
            let (a, b) = (self.degree(d), other.degree(d));
            a.rank == b.rank && a.torsion == b.torsion
        })
    }
}

impl fmt::Display for HomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            CoefficientMode::Trivial => "trivial",
            CoefficientMode::Regular => "regular",
        };
        writeln!(f, "homology over {} ({mode} coefficients)", self.ring)?;
        for d in &self.degrees {
            writeln!(f, "  H_{:<2} = {}", d.degree, d.description)?;
        }
        Ok(())
    }
}

/// Homology of an integer complex `mats[d]: C_d -> C_{d-1}` (row vectors;
/// `mats[0]` has zero columns) read over `ring`.
pub fn int_homology(ranks: &[usize], mats: &[IntMatrix], ring: &RingSpec, mode: CoefficientMode, bit_bound: u64) -> Result<HomologyReport> {
    let top = ranks.len();
    let mut degrees = Vec::with_capacity(top);
    match ring {
        RingSpec::ModP(p) => {
            let rk: Vec<usize> = (0..=top)
                .map(|d| if d == 0 || d >= top { 0 } else { rank_mod_p(&reduce_rows(&mats[d], *p), mats[d].cols(), *p) })
                .collect();
            for d in 0..top {
                let dim = ranks[d] - rk[d] - rk[d + 1];
                degrees.push(DegreeHomology { degree: d, rank: dim, torsion: Vec::new(), description: describe_group(dim, &[], ring) });
            }
        }
        _ => {
            let mut rk = vec![0usize; top + 1];
            let mut tors: Vec<Vec<BigInt>> = vec![Vec::new(); top + 1];
            for d in 1..top {
                let diag = snf::invariant_factors(&mats[d], bit_bound)?;
                rk[d] = diag.len();
                tors[d - 1] = diag.iter().map(|x| ring.non_unit_part(x)).filter(|x| !x.is_one()).collect();
            }
            for d in 0..top {
                let free = ranks[d] - rk[d] - rk[d + 1];
                let t = std::mem::take(&mut tors[d]);
                degrees.push(DegreeHomology { degree: d, rank: free, description: describe_group(free, &t, ring), torsion: t });
            }
        }
    }
    Ok(HomologyReport { ring: ring.clone(), mode, degrees })
}

pub(crate) fn reduce_rows(m: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    let bp = BigInt::from(p);
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| to_u64(&num_integer::Integer::mod_floor(x, &bp))).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_and_lens_space_like_complexes() {
        let z = RingSpec::Integers;
        let ranks = [1, 1];
        let mats = [IntMatrix::zeros(1, 0), IntMatrix::zeros(1, 1)];
        let h = int_homology(&ranks, &mats, &z, CoefficientMode::Trivial, 64).unwrap();
        assert_eq!(h.degree(0).description, "Z");
        assert_eq!(h.degree(1).description, "Z");
        let ranks = [1, 1, 1];
        let mats = [IntMatrix::zeros(1, 0), IntMatrix::zeros(1, 1), IntMatrix::from_rows(&[vec![5]])];
        let h = int_homology(&ranks, &mats, &z, CoefficientMode::Trivial, 64).unwrap();
        assert_eq!(h.degree(1).description, "Z/5");
        assert!(h.degree(2).is_zero());
        let h5 = int_homology(&ranks, &mats, &RingSpec::ModP(5), CoefficientMode::Trivial, 64).unwrap();
        assert_eq!((h5.degree(0).rank, h5.degree(1).rank, h5.degree(2).rank), (1, 1, 1));
        let loc = int_homology(&ranks, &mats, &RingSpec::localized(&[5]).unwrap(), CoefficientMode::Trivial, 64).unwrap();
        assert!(loc.degree(1).is_zero());
    }
}
