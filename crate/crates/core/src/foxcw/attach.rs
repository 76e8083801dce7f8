use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::chains::BasedChainComplex;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::grouprings::{GroupRingElement, GroupRingMatrix};
use crate::linalg::lattice::{kernel_basis, solve_left, Subquotient};
use crate::linalg::IntMatrix;

/// A cell to attach: its boundary in the basis one degree down.
#[derive(Debug, Clone, Serialize)]
pub struct AttachmentRecord {
    pub dimension: usize,
    #[serde(serialize_with = "serialize_row")]
    pub boundary_row: Vec<GroupRingElement>,
    pub label: String,
}

fn serialize_row<S: serde::Serializer>(row: &[GroupRingElement], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(row.iter().map(|e| e.to_string()))
}

impl AttachmentRecord {
    pub fn new(dimension: usize, boundary_row: Vec<GroupRingElement>, label: impl Into<String>) -> Self {
        AttachmentRecord { dimension, boundary_row, label: label.into() }
    }
}

/// Attaches the records in order; each must be a cycle of the complex
/// built so far.
pub fn attach_cells(c: &BasedChainComplex, records: &[AttachmentRecord]) -> Result<BasedChainComplex> {
    let mut out = c.clone();
    for r in records {
        let rows = GroupRingMatrix::from_rows(out.group(), out.ring(), r.boundary_row.len(), vec![r.boundary_row.clone()])?;
        out = out.attach(r.dimension, &rows, vec![r.label.clone()])?;
    }
    Ok(out)
}

fn coefficients(row: &[GroupRingElement], n: usize) -> Result<Vec<BigInt>> {
    let mut v = Vec::with_capacity(row.len() * n);
    for e in row {
        v.extend(e.to_dense_int()?);
    }
    Ok(v)
}

/// Degree-2 cycles whose coordinates on the 2-cells from index `new_from`
/// on are the rows of `targets`: each row `a` is completed to `(y, a)` with
/// `y ∂₂(old) = -a ∂₂(new)`, solved through the regular representation.
///
/// A row with no solution gives `NotLiftable` naming its class in
/// `H₁` of the old part.
pub fn kernel_lift_solve(
    c: &BasedChainComplex,
    new_from: usize,
    targets: &GroupRingMatrix,
    cfg: &Config,
) -> Result<GroupRingMatrix> {
    let g = c.group();
    let ring = c.ring();
    let n = g.order();
    let r2 = c.rank(2);
    if new_from > r2 || targets.cols() != r2 - new_from {
        return Err(Error::InvalidInput(format!(
            "targets have {} columns, the complex has {} new 2-cells",
            targets.cols(),
            r2.saturating_sub(new_from)
        )));
    }
    let d2 = c.boundary(2);
    let old_idx: Vec<usize> = (0..new_from).collect();
    let new_idx: Vec<usize> = (new_from..r2).collect();
    let d_old = d2.select_rows(&old_idx);
    let d_new = d2.select_rows(&new_idx);
    let rho_old = d_old.regular_representation()?;
    let mut out = GroupRingMatrix::zeros(g, ring, targets.rows(), r2);
    for i in 0..targets.rows() {
        let a = targets.select_rows(&[i]);
        for (k, e) in a.row(0).iter().enumerate() {
            out.set(i, new_from + k, e.clone());
        }
        let rhs_row = a.mul(&d_new)?.neg();
        let rhs = coefficients(rhs_row.row(0), n)?;
        if rhs.iter().all(Zero::is_zero) {
            continue;
        }
        let sol = if rho_old.rows() == 0 { None } else { solve_left(&rho_old, &rhs, ring, cfg.bit_bound)? };
        let Some(x) = sol else {
            return Err(Error::NotLiftable(obstruction(c, &rho_old, &rhs, i, cfg)?));
        };
        for j in 0..new_from {
            let terms = (0..n).map(|h| (h, x[j * n + h].clone()));
            out.set(i, j, GroupRingElement::from_terms(g, ring, terms)?);
        }
    }
    debug_assert!(out.mul(&d2)?.is_zero());
    Ok(out)
}

/// Class of the 1-cycle `rhs` modulo boundaries of the old 2-cells.
fn obstruction(c: &BasedChainComplex, rho_old: &IntMatrix, rhs: &[BigInt], row: usize, cfg: &Config) -> Result<String> {
    let rho1 = c.boundary(1).regular_representation()?;
    let cycles = if rho1.cols() == 0 { IntMatrix::identity(rho1.rows()) } else { kernel_basis(&rho1, cfg.bit_bound)? };
    let sq = Subquotient::new(&cycles, rho_old, c.ring(), cfg.bit_bound)?;
    let coords = sq.coordinates(rhs)?;
    let shown: Vec<String> = coords.iter().map(|x| x.to_string()).collect();
    Ok(format!(
        "target row {row} has boundary of class ({}) in H1 of the cover = {}",
        shown.join(", "),
        sq.describe()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::CoefficientMode;
    use crate::foxcw::{build_presentation_complex, fox_row};
    use crate::groups::{FiniteGroup, FinitePresentation, GroupHom, Word};
    use crate::ring::RingSpec;

    #[test]
    fn attaching_cells_changes_homology_as_expected() {
        let z = RingSpec::Integers;
        let circle = BasedChainComplex::plain(&z, vec![1, 1], &[IntMatrix::zeros(1, 1)]).unwrap();
        let g = circle.group().clone();
        let five = GroupRingElement::from_int(&g, &z, 5);
        let c = attach_cells(&circle, &[AttachmentRecord::new(2, vec![five], "disk")]).unwrap();
        let h = c.homology(&z, CoefficientMode::Trivial, 64).unwrap();
        assert_eq!(h.degree(1).description, "Z/5");
        let zero = GroupRingElement::zero(&g, &z);
        let c2 = attach_cells(&c, &[AttachmentRecord::new(2, vec![zero], "sphere")]).unwrap();
        let h = c2.homology(&z, CoefficientMode::Trivial, 64).unwrap();
        assert_eq!(h.degree(2).description, "Z");
        let bad = GroupRingElement::from_int(&g, &z, 1);
        let one_cell = attach_cells(&circle, &[AttachmentRecord::new(2, vec![bad.clone()], "d")]).unwrap();
        assert!(matches!(
            attach_cells(&one_cell, &[AttachmentRecord::new(3, vec![bad], "e")]),
            Err(Error::InvalidBoundary(_))
        ));
    }

    /// Killing all of Z/3 = <s | s^3>: the kernel is not perfect.
    #[test]
    fn lift_fails_over_non_perfect_kernel() {
        let z = RingSpec::Integers;
        let p = FinitePresentation::parse(&["s"], &["s^3"]).unwrap();
        let triv = FiniteGroup::trivial().into_arc();
        let hom = GroupHom::trivial(p.clone(), triv.clone());
        let pc = build_presentation_complex(&p, &hom, &z);
        let seed = Word::generator(0);
        let rec = AttachmentRecord::new(2, fox_row(&seed, &hom, &z), "kill s");
        let y = attach_cells(pc.complex(), &[rec]).unwrap();
        let target = GroupRingMatrix::identity(&triv, &z, 1);
        let err = kernel_lift_solve(&y, 1, &target, &Config::default()).unwrap_err();
        assert!(matches!(err, Error::NotLiftable(ref m) if m.contains("Z/3")), "{err}");
        let zero = GroupRingMatrix::zeros(&triv, &z, 1, 1);
        assert!(kernel_lift_solve(&y, 1, &zero, &Config::default()).unwrap().is_zero());
    }

    #[test]
    fn lift_succeeds_for_a_perfect_kernel() {
        let z = RingSpec::Integers;
        let p = FinitePresentation::parse(&["a", "b"], &["a^2", "b^3", "(ab)^5"]).unwrap();
        let triv = FiniteGroup::trivial().into_arc();
        let hom = GroupHom::trivial(p.clone(), triv.clone());
        let pc = build_presentation_complex(&p, &hom, &z);
        let recs: Vec<AttachmentRecord> = (0..2)
            .map(|i| AttachmentRecord::new(2, fox_row(&Word::generator(i), &hom, &z), format!("kill {i}")))
            .collect();
        let y = attach_cells(pc.complex(), &recs).unwrap();
        let target = GroupRingMatrix::identity(&triv, &z, 2);
        let x = kernel_lift_solve(&y, 3, &target, &Config::default()).unwrap();
        assert!(x.mul(&y.boundary(2)).unwrap().is_zero());
        assert_eq!(x.select_cols(&[3, 4]), target);
    }
}
