use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use super::class::TorsionClass;
use crate::error::{Error, Result};
use crate::grouprings::{character_eval, Character, GroupRingElement, GroupRingMatrix};
use crate::groups::{AbelianQuotient, FiniteGroup, RealizationHom};

/// Largest size for the Laplace determinant over `Z[G_ab]`.
const LAPLACE_LIMIT: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct CharacterMagnitude {
    /// Coordinates of the character in the dual of `G_ab`.
    pub character: Vec<u64>,
    pub value: String,
    pub abs_squared: String,
    pub norm: String,
    pub magnitude: f64,
    /// Additive coordinate.
    pub log_magnitude: f64,
    /// Exact test `|χ(det)|² = 1`.
    pub unimodular: bool,
}

/// Homomorphic images of a torsion class, enough to tell classes apart in
/// examples but not a complete invariant of `Wh(G)`.
#[derive(Debug, Clone, Serialize)]
pub struct TorsionInvariant {
    #[serde(serialize_with = "crate::serde_int::one")]
    pub aug_det: BigInt,
    #[serde(serialize_with = "crate::serde_int::one")]
    pub rho_det: BigInt,
    pub abelianization: Vec<u64>,
    /// Determinant in `Z[G_ab]`, normalized modulo `±g`.
    pub det_abelianized: String,
    /// Whether that determinant is `±g`.
    pub det_is_trivial_unit: bool,
    /// Nontrivial characters of `G_ab` in label order.
    pub characters: Vec<CharacterMagnitude>,
}

impl TorsionInvariant {
    pub fn magnitudes(&self) -> Vec<f64> {
        self.characters.iter().map(|c| c.magnitude).collect()
    }

    /// Some character detects a nonzero class.
    pub fn detects_nontrivial(&self) -> bool {
        self.characters.iter().any(|c| !c.unimodular) || !self.det_is_trivial_unit
    }
}

fn abelianizer(g: &Arc<FiniteGroup>) -> Result<(Vec<u64>, RealizationHom)> {
    let ab = AbelianQuotient::of(g)?;
    if g.is_abelian() {
        return Ok((ab.factors().to_vec(), RealizationHom::identity(g.clone())));
    }
    Ok((ab.factors().to_vec(), ab.projection().clone()))
}

fn laplace(m: &[Vec<GroupRingElement>], cols: &mut Vec<usize>, row: usize) -> Result<GroupRingElement> {
    if row == m.len() {
        return Ok(GroupRingElement::one(m[0][0].group(), m[0][0].ring()));
    }
    let mut acc = GroupRingElement::zero(m[0][0].group(), m[0][0].ring());
    for k in 0..cols.len() {
        let c = cols[k];
        if m[row][c].is_zero() {
            continue;
        }
        cols.remove(k);
        let minor = laplace(m, cols, row + 1)?;
        cols.insert(k, c);
        let term = m[row][c].checked_mul(&minor)?;
        acc = if k % 2 == 0 { acc.checked_add(&term)? } else { acc.checked_sub(&term)? };
    }
    Ok(acc)
}

/// Determinant after pushing to `Z[G_ab]`, as an element there.
pub fn det_abelianized(m: &GroupRingMatrix) -> Result<GroupRingElement> {
    let (_, proj) = abelianizer(m.group())?;
    let a = m.map_group(&proj)?;
    let n = a.rows();
    if n == 0 {
        return Ok(GroupRingElement::one(proj.target(), a.ring()));
    }
    if n > LAPLACE_LIMIT {
        return Err(Error::BudgetExceeded(format!("abelianized determinant of a {n}x{n} matrix")));
    }
    let rows: Vec<Vec<GroupRingElement>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    laplace(&rows, &mut (0..n).collect(), 0)
}

/// Representative of `{±g d}` with lexicographically largest dense
/// coefficient vector.
fn normalize_mod_trivial_units(d: &GroupRingElement) -> Result<GroupRingElement> {
    let g = d.group();
    let mut best: Option<(Vec<BigInt>, GroupRingElement)> = None;
    for x in 0..g.order() {
        for sign in [1i64, -1] {
            let c = d.left_mul_group(x);
            let c = if sign < 0 { c.neg() } else { c };
            let key = c.to_dense_int()?;
            if best.as_ref().is_none_or(|(k, _)| key > *k) {
                best = Some((key, c));
            }
        }
    }
    Ok(best.expect("nonempty group").1)
}

pub fn invariant(t: &TorsionClass) -> Result<TorsionInvariant> {
    let m = t.representative();
    let rho_det = m.regular_representation()?.det();
    if !rho_det.abs().is_one() {
        return Err(Error::NotInvertible(format!("regular representation determinant is {rho_det}")));
    }
    let aug_det = m.augmented()?.det();
    let (factors, _) = abelianizer(m.group())?;
    let det = det_abelianized(m)?;
    let canon = normalize_mod_trivial_units(&det)?;
    let mut characters = Vec::new();
    for chi in Character::all(det.group())?.iter().filter(|c| !c.is_trivial()) {
        let v = character_eval(&det, chi)?;
        let abs2 = v.exact.abs_squared();
        characters.push(CharacterMagnitude {
            character: chi.label().to_vec(),
            value: v.exact.to_string(),
            abs_squared: abs2.to_string(),
            norm: v.exact.norm().to_string(),
            magnitude: v.magnitude,
            log_magnitude: v.magnitude.ln(),
            unimodular: abs2.is_one(),
        });
    }
    Ok(TorsionInvariant {
        aug_det,
        rho_det,
        abelianization: factors,
        det_abelianized: canon.to_string(),
        det_is_trivial_unit: canon.is_one(),
        characters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;
    use crate::torsion::{compose, conjugate};

    fn class(g: &Arc<FiniteGroup>, rows: &[&[&str]]) -> TorsionClass {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        TorsionClass::new(GroupRingMatrix::parse(g, &RingSpec::Integers, &rows).unwrap(), 0).unwrap()
    }

    #[test]
    fn identity_and_elementary_are_invisible() {
        let g = FiniteGroup::cyclic(5).into_arc();
        let inv = invariant(&class(&g, &[&["1", "0"], &["0", "1"]])).unwrap();
        assert_eq!(inv.aug_det, BigInt::one());
        assert!(inv.magnitudes().iter().all(|m| (m - 1.0).abs() < 1e-12));
        let e = invariant(&class(&g, &[&["1", "3 - t^2 + 4*t^3"], &["0", "1"]])).unwrap();
        assert_eq!(e.det_abelianized, "1");
        assert!(!e.detects_nontrivial());
    }

    #[test]
    fn golden_unit() {
        let g = FiniteGroup::cyclic(5).into_arc();
        let inv = invariant(&class(&g, &[&["t + t^4 - 1"]])).unwrap();
        let want = [0.381966011250105, 2.618033988749895, 2.618033988749895, 0.381966011250105];
        for (m, w) in inv.magnitudes().iter().zip(want) {
            assert!((m - w).abs() < 1e-12);
        }
        assert!(inv.detects_nontrivial());
        // canonical form is a ±t^k multiple of t + t^4 - 1
        let u = GroupRingElement::from_int_terms(&g, &RingSpec::Integers, &[(1, 1), (4, 1), (0, -1)]);
        let canon = normalize_mod_trivial_units(&u).unwrap();
        assert_eq!(inv.det_abelianized, canon.to_string());
        let shifted = normalize_mod_trivial_units(&u.left_mul_group(3).neg()).unwrap();
        assert_eq!(shifted, canon);
    }

    #[test]
    fn magnitudes_multiply_and_conjugate() {
        let g = FiniteGroup::cyclic(5).into_arc();
        let u = class(&g, &[&["t + t^4 - 1"]]);
        let sq = invariant(&compose(&u, &u).unwrap()).unwrap();
        assert!((sq.magnitudes()[0] - 0.145898033750315).abs() < 1e-12);
        let c = invariant(&conjugate(&u)).unwrap();
        assert_eq!(c.magnitudes(), invariant(&u).unwrap().magnitudes());
    }

    #[test]
    fn nonabelian_groups_use_the_abelianization() {
        let g = FiniteGroup::symmetric(3).into_arc();
        let s = g.symbol("s").unwrap();
        let m = GroupRingMatrix::from_rows(
            &g,
            &RingSpec::Integers,
            1,
            vec![vec![GroupRingElement::from_int_terms(&g, &RingSpec::Integers, &[(s, -1)])]],
        )
        .unwrap();
        let inv = invariant(&TorsionClass::new(m, 0).unwrap()).unwrap();
        assert_eq!(inv.abelianization, vec![2]);
        assert!(inv.det_is_trivial_unit);
        assert!(!inv.detects_nontrivial());
    }
}
