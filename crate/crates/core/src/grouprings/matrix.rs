use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::element::{same_group, GroupRingElement};
use super::parse::parse_element;
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, RealizationHom};
use crate::linalg::IntMatrix;
use crate::ring::RingSpec;

/// A dense matrix over `R[G]`. Acts on row vectors from the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingMatrix {
    group: Arc<FiniteGroup>,
    ring: RingSpec,
    rows: usize,
    cols: usize,
    entries: Vec<GroupRingElement>,
}

impl GroupRingMatrix {
    pub fn zeros(group: &Arc<FiniteGroup>, ring: &RingSpec, rows: usize, cols: usize) -> Self {
        let z = GroupRingElement::zero(group, ring);
        GroupRingMatrix { group: group.clone(), ring: ring.clone(), rows, cols, entries: vec![z; rows * cols] }
    }

    pub fn identity(group: &Arc<FiniteGroup>, ring: &RingSpec, n: usize) -> Self {
        let mut m = Self::zeros(group, ring, n, n);
        for i in 0..n {
            m.set(i, i, GroupRingElement::one(group, ring));
        }
        m
    }

    pub fn from_rows(group: &Arc<FiniteGroup>, ring: &RingSpec, cols: usize, rows: Vec<Vec<GroupRingElement>>) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::InvalidInput("ragged group ring matrix".into()));
            }
            for e in row {
                if e.ring() != ring {
                    return Err(Error::MixedRings);
                }
                if !same_group(e.group(), group) {
                    return Err(Error::MixedGroups);
                }
                entries.push(e);
            }
        }
        Ok(GroupRingMatrix { group: group.clone(), ring: ring.clone(), rows: nrows, cols, entries })
    }

    /// Parses rows of strings in the element grammar.
    pub fn parse(group: &Arc<FiniteGroup>, ring: &RingSpec, rows: &[Vec<String>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_element(s, group, ring)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(group, ring, cols, parsed)
    }

    /// Integer matrix read as a matrix of scalars.
    pub fn from_int(group: &Arc<FiniteGroup>, ring: &RingSpec, m: &IntMatrix) -> Self {
        let mut out = Self::zeros(group, ring, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    out.set(i, j, GroupRingElement::monomial(group, ring, 0, BigRational::from_integer(m[(i, j)].clone())));
                }
            }
        }
        out
    }

    /// Reads back a matrix from its regular representation; `None` if the
    /// blocks are not of the form `rho(a)`.
    pub fn from_regular(group: &Arc<FiniteGroup>, ring: &RingSpec, m: &IntMatrix) -> Option<Self> {
        let n = group.order();
        if !m.rows().is_multiple_of(n) || !m.cols().is_multiple_of(n) {
            return None;
        }
        let (rows, cols) = (m.rows() / n, m.cols() / n);
        let mut out = Self::zeros(group, ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                // first row of the block holds a_h at column h
                let dense: Vec<BigInt> = (0..n).map(|h| m[(i * n, j * n + h)].clone()).collect();
                let e = GroupRingElement::from_dense(group, ring, &dense);
                for g in 0..n {
                    for h in 0..n {
                        if m[(i * n + g, j * n + group.mul(g, h))] != dense[h] {
                            return None;
                        }
                    }
                }
                out.set(i, j, e);
            }
        }
        Some(out)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: GroupRingElement) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn row(&self, i: usize) -> &[GroupRingElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|e| e.to_string()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GroupRingElement::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::MixedRings);
        }
        if !same_group(&self.group, &other.group) {
            return Err(Error::MixedGroups);
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.cols != other.rows {
            return Err(Error::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.group, &self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let s = out.get(i, j).checked_add(&a.checked_mul(b)?)?;
                    out.set(i, j, s);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::InvalidInput("shape mismatch in matrix sum".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?;
        Ok(GroupRingMatrix { entries, ..self.clone() })
    }

    pub fn neg(&self) -> Self {
        GroupRingMatrix { entries: self.entries.iter().map(GroupRingElement::neg).collect(), ..self.clone() }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.group, &self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Entrywise involution.
    pub fn involution(&self) -> Self {
        GroupRingMatrix { entries: self.entries.iter().map(GroupRingElement::involution).collect(), ..self.clone() }
    }

    /// Involution followed by transpose.
    pub fn conjugate_transpose(&self) -> Self {
        self.involution().transpose()
    }

    pub fn block_diag(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zeros(&self.group, &self.ring, self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        Ok(out)
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut out = Self::zeros(&self.group, &self.ring, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.cols != other.cols {
            return Err(Error::InvalidInput("column mismatch in vstack".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(GroupRingMatrix { rows: self.rows + other.rows, entries, ..self.clone() })
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.rows != other.rows {
            return Err(Error::InvalidInput("row mismatch in hstack".into()));
        }
        let mut out = Self::zeros(&self.group, &self.ring, self.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, other);
        Ok(out)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            entries.extend_from_slice(self.row(i));
        }
        GroupRingMatrix { rows: idx.len(), entries, ..self.clone() }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        self.transpose().select_rows(idx).transpose()
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[GroupRingElement]) -> Result<Vec<GroupRingElement>> {
        let row = Self::from_rows(&self.group, &self.ring, v.len(), vec![v.to_vec()])?;
        Ok(row.mul(self)?.entries)
    }

    /// Block matrix of regular representations; needs integral entries.
    pub fn regular_representation(&self) -> Result<IntMatrix> {
        let n = self.group.order();
        let mut m = IntMatrix::zeros(self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                self.get(i, j).write_regular(&mut m, i * n, j * n)?;
            }
        }
        Ok(m)
    }

    /// Regular representation after clearing denominators with a common
    /// (unit) multiple. Returns the multiplier.
    pub fn regular_representation_scaled(&self) -> Result<(BigInt, IntMatrix)> {
        let den = self.common_denominator();
        let s = self.scaled(&den)?;
        Ok((den, s.regular_representation()?))
    }

    fn common_denominator(&self) -> BigInt {
        self.entries
            .iter()
            .flat_map(|e| e.terms().map(|(_, c)| c.denom().clone()).collect::<Vec<_>>())
            .fold(BigInt::one(), |a, b| a.lcm(&b))
    }

    fn scaled(&self, s: &BigInt) -> Result<Self> {
        let q = BigRational::from_integer(s.clone());
        let entries = self.entries.iter().map(|e| e.scale(&q)).collect::<Result<_>>()?;
        Ok(GroupRingMatrix { entries, ..self.clone() })
    }

    /// Entrywise augmentation, denominators cleared by a common multiple.
    pub fn augmented_scaled(&self) -> (BigInt, IntMatrix) {
        let den = self.common_denominator();
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j).augmentation() * BigRational::from_integer(den.clone());
                m[(i, j)] = a.to_integer();
            }
        }
        (den, m)
    }

    /// Entrywise augmentation; needs integral entries.
    pub fn augmented(&self) -> Result<IntMatrix> {
        let (den, m) = self.augmented_scaled();
        if !den.is_one() {
            return Err(Error::InvalidInput("matrix has non-integral entries".into()));
        }
        Ok(m)
    }

    pub fn map_group(&self, f: &RealizationHom) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.map_group(f)).collect::<Result<_>>()?;
        Ok(GroupRingMatrix { group: f.target().clone(), entries, ..self.clone() })
    }

    pub fn change_ring(&self, ring: &RingSpec) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.change_ring(ring)).collect::<Result<_>>()?;
        Ok(GroupRingMatrix { ring: ring.clone(), entries, ..self.clone() })
    }

    pub fn entries(&self) -> &[GroupRingElement] {
        &self.entries
    }

    /// Inverse over `Z[G]` through the regular representation, if it exists.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotInvertible("matrix is not square".into()));
        }
        let rho = self.regular_representation()?;
        let det = rho.det();
        if !(det.is_one() || (-&det).is_one()) {
            return Err(Error::NotInvertible(format!("regular representation determinant is {det}")));
        }
        let inv = rho.unimodular_inverse().ok_or_else(|| Error::NotInvertible("singular".into()))?;
        Self::from_regular(&self.group, &self.ring, &inv)
            .ok_or_else(|| Error::NotInvertible("inverse is not a group ring matrix".into()))
    }
}
