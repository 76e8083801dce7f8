use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::grouprings::{same_group, GroupRingMatrix};
use crate::groups::{FiniteGroup, GroupSpec};
use crate::ring::RingSpec;

/// A class in `Wh(G)` given by an invertible square matrix over `Z[G]`,
/// with the inverse kept as certificate. `parity` is the dimension mod 2
/// used by duality.
#[derive(Debug, Clone)]
pub struct TorsionClass {
    representative: GroupRingMatrix,
    inverse: GroupRingMatrix,
    parity: u8,
}

impl TorsionClass {
    /// Certifies invertibility through the regular representation.
    pub fn new(representative: GroupRingMatrix, parity: i64) -> Result<Self> {
        check_integral(&representative)?;
        let inverse = representative.inverse()?;
        Ok(TorsionClass { representative, inverse, parity: parity.rem_euclid(2) as u8 })
    }

    /// Uses a supplied inverse, checked on both sides.
    pub fn with_inverse(representative: GroupRingMatrix, inverse: GroupRingMatrix, parity: i64) -> Result<Self> {
        check_integral(&representative)?;
        if !representative.mul(&inverse)?.is_identity() || !inverse.mul(&representative)?.is_identity() {
            return Err(Error::NotInvertible("supplied inverse does not invert the representative".into()));
        }
        Ok(TorsionClass { representative, inverse, parity: parity.rem_euclid(2) as u8 })
    }

    pub fn trivial(group: &Arc<FiniteGroup>, size: usize, parity: i64) -> Self {
        let id = GroupRingMatrix::identity(group, &RingSpec::Integers, size);
        TorsionClass { representative: id.clone(), inverse: id, parity: parity.rem_euclid(2) as u8 }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.representative.group()
    }

    pub fn representative(&self) -> &GroupRingMatrix {
        &self.representative
    }

    pub fn inverse(&self) -> &GroupRingMatrix {
        &self.inverse
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn size(&self) -> usize {
        self.representative.rows()
    }

    pub fn with_parity(mut self, n: i64) -> Self {
        self.parity = n.rem_euclid(2) as u8;
        self
    }

    /// The class of the inverse matrix, i.e. `-τ`.
    pub fn negate(&self) -> Self {
        TorsionClass { representative: self.inverse.clone(), inverse: self.representative.clone(), parity: self.parity }
    }

    pub fn to_spec(&self) -> TorsionClassSpec {
        TorsionClassSpec {
            group: GroupSpec::of(self.group()),
            representative: self.representative.to_strings(),
            parity: self.parity,
        }
    }

    pub fn from_spec(spec: &TorsionClassSpec, cfg: &Config) -> Result<Self> {
        let g = spec.group.build(cfg.exhaustive_check_bound)?.into_arc();
        let m = GroupRingMatrix::parse(&g, &RingSpec::Integers, &spec.representative)?;
        Self::new(m, spec.parity as i64)
    }
}

impl Serialize for TorsionClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_spec().serialize(s)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TorsionClassSpec {
    pub group: GroupSpec,
    pub representative: Vec<Vec<String>>,
    #[serde(default)]
    pub parity: u8,
}

fn check_integral(m: &GroupRingMatrix) -> Result<()> {
    if *m.ring() != RingSpec::Integers {
        return Err(Error::MixedRings);
    }
    if !m.is_square() {
        return Err(Error::NotInvertible("representative is not square".into()));
    }
    Ok(())
}

/// Involution on entries followed by transpose.
pub fn conjugate(t: &TorsionClass) -> TorsionClass {
    TorsionClass {
        representative: t.representative.conjugate_transpose(),
        inverse: t.inverse.conjugate_transpose(),
        parity: t.parity,
    }
}

/// `(-1)^n τ̄`: the conjugate for even parity, its inverse for odd parity.
pub fn dual_sign(t: &TorsionClass) -> TorsionClass {
    let c = conjugate(t);
    if t.parity == 0 {
        c
    } else {
        c.negate()
    }
}

/// Block sum, the group operation of `Wh(G)`.
pub fn compose(a: &TorsionClass, b: &TorsionClass) -> Result<TorsionClass> {
    if !same_group(a.group(), b.group()) {
        return Err(Error::MixedGroups);
    }
    Ok(TorsionClass {
        representative: a.representative.block_diag(&b.representative)?,
        inverse: a.inverse.block_diag(&b.inverse)?,
        parity: a.parity,
    })
}

/// `τ + (-1)^n τ̄`.
pub fn glue_formula(t: &TorsionClass, n: i64) -> Result<TorsionClass> {
    let with_n = t.clone().with_parity(n);
    compose(&with_n, &dual_sign(&with_n))
}
