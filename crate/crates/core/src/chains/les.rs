use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::complex::{BasedChainComplex, ChainMap};
use super::homology::{reduce_rows, CoefficientMode};
use crate::error::{Error, Result};
use crate::grouprings::{GroupRingElement, GroupRingMatrix};
use crate::linalg::lattice::kernel_basis;
use crate::linalg::modp::{rank_mod_p, Echelon};
use crate::linalg::IntMatrix;
use crate::ring::prime_factors;

#[derive(Debug, Clone, Serialize)]
pub struct LesReport {
    pub exact: bool,
    /// `"Q"` and the primes `"F_p"` at which exactness was checked.
    pub fields: Vec<String>,
    pub failures: Vec<String>,
}

#[derive(Clone, Copy)]
enum Field {
    Q,
    Fp(u64),
}

impl Field {
    fn name(self) -> String {
        match self {
            Field::Q => "Q".into(),
            Field::Fp(p) => format!("F_{p}"),
        }
    }

    fn rank(self, m: &IntMatrix) -> usize {
        match self {
            Field::Q => m.rank(),
            Field::Fp(p) => rank_mod_p(&reduce_rows(m, p), m.cols(), p),
        }
    }

    fn kernel(self, m: &IntMatrix, bits: u64) -> Result<IntMatrix> {
        match self {
            Field::Q => kernel_basis(m, bits),
            Field::Fp(p) => {
                let e = Echelon::new(&reduce_rows(m, p), m.cols(), p);
                let rows = e.kernel.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
                Ok(IntMatrix::from_row_vecs(m.rows(), rows))
            }
        }
    }
}

/// Integer complex in one coefficient mode.
struct Flat {
    ranks: Vec<usize>,
    mats: Vec<IntMatrix>,
}

impl Flat {
    fn of(c: &BasedChainComplex, top: usize, mode: CoefficientMode) -> Result<Self> {
        let (ranks, mats) = c.padded_to(top).int_boundaries(mode)?;
        Ok(Flat { ranks, mats })
    }

    fn rank(&self, d: usize) -> usize {
        self.ranks.get(d).copied().unwrap_or(0)
    }

    fn boundary(&self, d: usize) -> IntMatrix {
        self.mats.get(d).cloned().unwrap_or_else(|| IntMatrix::zeros(self.rank(d), if d == 0 { 0 } else { self.rank(d - 1) }))
    }

    fn cycles(&self, d: usize, f: Field, bits: u64) -> Result<IntMatrix> {
        let b = self.boundary(d);
        if b.cols() == 0 {
            return Ok(IntMatrix::identity(b.rows()));
        }
        f.kernel(&b, bits)
    }

    fn dim_h(&self, d: usize, f: Field, bits: u64) -> Result<usize> {
        Ok(self.cycles(d, f, bits)?.rows() - f.rank(&self.boundary(d + 1)))
    }
}

/// Rank of the map induced on degree-`d` homology by `m: S_d -> T_e`, where
/// `T_e` is the degree of `t` receiving it.
fn induced_rank(s: &Flat, d: usize, m: &IntMatrix, t: &Flat, e: usize, f: Field, bits: u64) -> Result<usize> {
    let z = s.cycles(d, f, bits)?;
    let image = z.mul(m);
    let b = t.boundary(e + 1);
    Ok(f.rank(&image.vstack(&b)) - f.rank(&b))
}

fn selection(c: &BasedChainComplex, rows: usize, cols: usize, pairs: &[(usize, usize)]) -> GroupRingMatrix {
    let mut m = GroupRingMatrix::zeros(c.group(), c.ring(), rows, cols);
    for &(i, j) in pairs {
        m.set(i, j, GroupRingElement::one(c.group(), c.ring()));
    }
    m
}

fn flat_map(m: &GroupRingMatrix, mode: CoefficientMode) -> Result<IntMatrix> {
    match mode {
        CoefficientMode::Trivial => Ok(m.augmented_scaled().1),
        CoefficientMode::Regular => Ok(m.regular_representation_scaled()?.1),
    }
}

/// Exactness of the sequence of the triple `A ⊆ B ⊆ C` of based
/// subcomplexes, checked over Q and over F_p for the primes in the torsion
/// of the three relative groups (and 2, 3).
pub fn les_consistency(a: &ChainMap, b: &ChainMap, mode: CoefficientMode, bit_bound: u64) -> Result<LesReport> {
    let ia = a.basis_inclusion().ok_or_else(|| Error::InvalidInput("first map is not a based inclusion".into()))?;
    let ib = b.basis_inclusion().ok_or_else(|| Error::InvalidInput("second map is not a based inclusion".into()))?;
    let c = b.target();
    let top = c.top_degree() + 1;
    // A's basis inside C
    let iac: Vec<Vec<usize>> = (0..=top)
        .map(|d| ia.get(d).map(|v| v.iter().map(|&j| ib[d][j]).collect()).unwrap_or_default())
        .collect();
    let in_b = |d: usize| -> Vec<usize> { ib.get(d).cloned().unwrap_or_default() };
    let ba_keep: Vec<Vec<usize>> = (0..=top)
        .map(|d| (0..b.source().rank(d)).filter(|j| !ia.get(d).is_some_and(|v| v.contains(j))).collect())
        .collect();
    let ca_keep: Vec<Vec<usize>> = (0..=top).map(|d| (0..c.rank(d)).filter(|j| !iac[d].contains(j)).collect()).collect();
    let cb_keep: Vec<Vec<usize>> = (0..=top).map(|d| (0..c.rank(d)).filter(|j| !in_b(d).contains(j)).collect()).collect();

    let ab = ChainMap::new(a.source().clone(), c.clone(), (0..=top).map(|d| a.map(d).mul(&b.map(d))).collect::<Result<_>>()?)?;
    let q_ba = Flat::of(&a.quotient_complex()?, top, mode)?;
    let q_ca = Flat::of(&ab.quotient_complex()?, top, mode)?;
    let q_cb = Flat::of(&b.quotient_complex()?, top, mode)?;

    let mut i_maps = Vec::new();
    let mut j_maps = Vec::new();
    let mut delta = Vec::new();
    for d in 0..=top {
        // B/A -> C/A
        let pairs: Vec<(usize, usize)> = ba_keep[d]
            .iter()
            .enumerate()
            .map(|(r, &jb)| (r, ca_keep[d].iter().position(|&x| x == ib[d][jb]).unwrap()))
            .collect();
        i_maps.push(flat_map(&selection(c, ba_keep[d].len(), ca_keep[d].len(), &pairs), mode)?);
        // C/A -> C/B
        let pairs: Vec<(usize, usize)> = ca_keep[d]
            .iter()
            .enumerate()
            .filter_map(|(r, x)| cb_keep[d].iter().position(|y| y == x).map(|col| (r, col)))
            .collect();
        j_maps.push(flat_map(&selection(c, ca_keep[d].len(), cb_keep[d].len(), &pairs), mode)?);
        // C/B_d -> B/A_{d-1}: boundary of C restricted
        if d == 0 {
            delta.push(IntMatrix::zeros(q_cb.rank(0), 0));
        } else {
            let cols: Vec<usize> = ba_keep[d - 1].iter().map(|&jb| ib[d - 1][jb]).collect();
            let m = c.padded_to(top).boundary(d).select_rows(&cb_keep[d]).select_cols(&cols);
            delta.push(flat_map(&m, mode)?);
        }
    }

    let mut primes: Vec<u64> = vec![2, 3];
    for q in [&q_ba, &q_ca, &q_cb] {
        for m in &q.mats {
            for d in crate::linalg::snf::invariant_factors(m, bit_bound)? {
                if let Some(v) = d.to_u64() {
                    primes.extend(prime_factors(v));
                }
            }
        }
    }
    primes.sort_unstable();
    primes.dedup();
    let mut fields = vec![Field::Q];
    fields.extend(primes.into_iter().map(Field::Fp));

    let mut failures = Vec::new();
    for &f in &fields {
        for d in 0..top {
            let ri = induced_rank(&q_ba, d, &i_maps[d], &q_ca, d, f, bit_bound)?;
            let rj = induced_rank(&q_ca, d, &j_maps[d], &q_cb, d, f, bit_bound)?;
            let rdelta = induced_rank(&q_cb, d, &delta[d], &q_ba, d.saturating_sub(1), f, bit_bound)?;
            let rdelta = if d == 0 { 0 } else { rdelta };
            let ri_below = if d == 0 { 0 } else { induced_rank(&q_ba, d - 1, &i_maps[d - 1], &q_ca, d - 1, f, bit_bound)? };
            if ri != q_ca.dim_h(d, f, bit_bound)? - rj {
                failures.push(format!("{}: not exact at H_{d}(C,A)", f.name()));
            }
            if rj != q_cb.dim_h(d, f, bit_bound)? - rdelta {
                failures.push(format!("{}: not exact at H_{d}(C,B)", f.name()));
            }
            if d > 0 && rdelta != q_ba.dim_h(d - 1, f, bit_bound)? - ri_below {
                failures.push(format!("{}: not exact at H_{}(B,A)", f.name(), d - 1));
            }
        }
    }
    Ok(LesReport { exact: failures.is_empty(), fields: fields.iter().map(|f| f.name()).collect(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    #[test]
    fn point_circle_disk() {
        let z = RingSpec::Integers;
        let point = BasedChainComplex::plain(&z, vec![1], &[]).unwrap();
        let circle = BasedChainComplex::plain(&z, vec![1, 1], &[IntMatrix::zeros(1, 1)]).unwrap();
        let disk = BasedChainComplex::plain(&z, vec![1, 1, 1], &[IntMatrix::zeros(1, 1), IntMatrix::from_rows(&[vec![1]])]).unwrap();
        let a = ChainMap::prefix_inclusion(&point, &circle).unwrap();
        let b = ChainMap::prefix_inclusion(&circle, &disk).unwrap();
        let r = les_consistency(&a, &b, CoefficientMode::Trivial, 64).unwrap();
        assert!(r.exact, "{:?}", r.failures);
        let same = ChainMap::identity(&disk);
        let r = les_consistency(&same, &same, CoefficientMode::Trivial, 64).unwrap();
        assert!(r.exact);
    }
}
