use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::homology::{int_homology, CoefficientMode, HomologyReport};
use crate::error::{Error, Result};
use crate::grouprings::{GroupRingElement, GroupRingMatrix};
use crate::groups::{FiniteGroup, GroupSpec};
use crate::linalg::IntMatrix;
use crate::ring::RingSpec;

/// A based free chain complex over `R[G]` in degrees `0..=top`. Boundary
/// matrices act on row vectors: `boundary(d)` is `rank(d) x rank(d-1)` and
/// `boundary(d) * boundary(d-1) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedChainComplex {
    ring: RingSpec,
    group: Arc<FiniteGroup>,
    equivariant: bool,
    ranks: Vec<usize>,
    /// Index `d` holds the boundary out of degree `d`; index 0 is `rank(0) x 0`.
    boundaries: Vec<GroupRingMatrix>,
    labels: Vec<Vec<String>>,
}

impl BasedChainComplex {
    /// `boundaries[i]` is the boundary out of degree `i + 1`.
    pub fn new(ring: &RingSpec, group: Option<&Arc<FiniteGroup>>, ranks: Vec<usize>, boundaries: Vec<GroupRingMatrix>) -> Result<Self> {
        let equivariant = group.is_some();
        let group = group.cloned().unwrap_or_else(|| FiniteGroup::trivial().into_arc());
        if ranks.is_empty() {
            return Err(Error::InvalidInput("a complex needs at least degree 0".into()));
        }
        if boundaries.len() + 1 != ranks.len() {
            return Err(Error::InvalidInput(format!("{} boundaries for {} degrees", boundaries.len(), ranks.len())));
        }
        let mut all = vec![GroupRingMatrix::zeros(&group, ring, ranks[0], 0)];
        for (i, b) in boundaries.into_iter().enumerate() {
            let d = i + 1;
            if b.rows() != ranks[d] || b.cols() != ranks[d - 1] {
                return Err(Error::InvalidInput(format!(
                    "boundary {d} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    ranks[d],
                    ranks[d - 1]
                )));
            }
            if b.ring() != ring {
                return Err(Error::MixedRings);
            }
            if !crate::grouprings::same_group(b.group(), &group) {
                return Err(Error::MixedGroups);
            }
            all.push(b);
        }
        for d in 2..all.len() {
            if !all[d].mul(&all[d - 1])?.is_zero() {
                return Err(Error::InvalidBoundary(format!("boundary {d} composed with boundary {} is not zero", d - 1)));
            }
        }
        let labels = ranks.iter().enumerate().map(|(d, &r)| (0..r).map(|i| format!("e{d}_{i}")).collect()).collect();
        Ok(BasedChainComplex { ring: ring.clone(), group, equivariant, ranks, boundaries: all, labels })
    }

    /// A complex of free `R`-modules given by integer matrices.
    pub fn plain(ring: &RingSpec, ranks: Vec<usize>, boundaries: &[IntMatrix]) -> Result<Self> {
        let g = FiniteGroup::trivial().into_arc();
        let mats = boundaries.iter().map(|m| GroupRingMatrix::from_int(&g, ring, m)).collect();
        let mut c = Self::new(ring, None, ranks, mats)?;
        c.group = g;
        Ok(c)
    }

    /// Replaces the cell names; one list per degree.
    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.ranks.len() || labels.iter().zip(&self.ranks).any(|(l, &r)| l.len() != r) {
            return Err(Error::InvalidInput("labels do not match ranks".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn is_equivariant(&self) -> bool {
        self.equivariant
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, d: usize) -> usize {
        self.ranks.get(d).copied().unwrap_or(0)
    }

    pub fn labels(&self, d: usize) -> &[String] {
        self.labels.get(d).map_or(&[], |v| v.as_slice())
    }

    /// Boundary out of degree `d`; zero outside the stored range.
    pub fn boundary(&self, d: usize) -> GroupRingMatrix {
        match self.boundaries.get(d) {
            Some(b) => b.clone(),
            None => GroupRingMatrix::zeros(&self.group, &self.ring, self.rank(d), if d == 0 { 0 } else { self.rank(d - 1) }),
        }
    }

    pub fn boundary_ref(&self, d: usize) -> Option<&GroupRingMatrix> {
        self.boundaries.get(d)
    }

    /// Same complex with zero-rank degrees appended up to `top`.
    pub fn padded_to(&self, top: usize) -> Self {
        let mut c = self.clone();
        while c.top_degree() < top {
            let d = c.top_degree() + 1;
            c.boundaries.push(GroupRingMatrix::zeros(&c.group, &c.ring, 0, c.rank(d - 1)));
            c.ranks.push(0);
            c.labels.push(Vec::new());
        }
        c
    }

    /// Drops zero-rank top degrees.
    pub fn trimmed(&self) -> Self {
        let mut c = self.clone();
        while c.ranks.len() > 1 && *c.ranks.last().unwrap() == 0 {
            c.ranks.pop();
            c.boundaries.pop();
            c.labels.pop();
        }
        c
    }

    /// Integer matrices for the chosen coefficient mode, indexed by degree.
    /// Denominators from a localized ring are cleared by unit multiples.
    pub fn int_boundaries(&self, mode: CoefficientMode) -> Result<(Vec<usize>, Vec<IntMatrix>)> {
        let n = self.group.order();
        let mut mats = Vec::with_capacity(self.ranks.len());
        for b in &self.boundaries {
            let m = match mode {
                CoefficientMode::Trivial => b.augmented_scaled().1,
                CoefficientMode::Regular => b.regular_representation_scaled()?.1,
            };
            mats.push(m);
        }
        let ranks = match mode {
            CoefficientMode::Trivial => self.ranks.clone(),
            CoefficientMode::Regular => self.ranks.iter().map(|r| r * n).collect(),
        };
        Ok((ranks, mats))
    }

    /// Homology over `ring`; the complex's entries are read in that ring.
    pub fn homology(&self, ring: &RingSpec, mode: CoefficientMode, bit_bound: u64) -> Result<HomologyReport> {
        let c = if ring == &self.ring { self.clone() } else { self.change_ring(ring)? };
        let (ranks, mats) = c.int_boundaries(mode)?;
        int_homology(&ranks, &mats, ring, mode, bit_bound)
    }

    pub fn is_acyclic(&self, ring: &RingSpec, mode: CoefficientMode, bit_bound: u64) -> Result<bool> {
        Ok(self.homology(ring, mode, bit_bound)?.is_zero())
    }

    pub fn change_ring(&self, ring: &RingSpec) -> Result<Self> {
        let mut c = self.clone();
        c.ring = ring.clone();
        c.boundaries = self.boundaries.iter().map(|b| b.change_ring(ring)).collect::<Result<_>>()?;
        Ok(c)
    }

    /// Collapses the group: entries are augmented, giving a plain complex.
    pub fn augmented(&self) -> Result<Self> {
        let (ranks, mats) = self.int_boundaries(CoefficientMode::Trivial)?;
        let c = Self::plain(&self.ring, ranks, &mats[1..])?;
        c.with_labels(self.labels.clone())
    }

    /// Appends new basis elements in degree `d` with the given boundary rows
    /// (in the basis of degree `d - 1`).
    pub fn attach(&self, d: usize, rows: &GroupRingMatrix, labels: Vec<String>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("cells are attached in positive degree".into()));
        }
        let c = self.padded_to(d);
        if rows.cols() != c.rank(d - 1) || labels.len() != rows.rows() {
            return Err(Error::InvalidInput("attachment rows do not match the complex".into()));
        }
        if d >= 2 && !rows.mul(&c.boundary(d - 1))?.is_zero() {
            return Err(Error::InvalidBoundary(format!("attached boundary in degree {d} is not a cycle")));
        }
        let mut out = c.clone();
        out.boundaries[d] = c.boundary(d).vstack(rows)?;
        out.ranks[d] += rows.rows();
        out.labels[d].extend(labels);
        if d < out.top_degree() {
            // higher boundary gains zero columns
            let z = GroupRingMatrix::zeros(&out.group, &out.ring, out.rank(d + 1), rows.rows());
            out.boundaries[d + 1] = c.boundary(d + 1).hstack(&z)?;
        }
        Ok(out)
    }

    pub fn to_spec(&self) -> ComplexSpec {
        ComplexSpec {
            ring: self.ring.clone(),
            group: self.equivariant.then(|| GroupSpec::of(&self.group)),
            ranks: self.ranks.clone(),
            boundaries: self.boundaries[1..].iter().map(GroupRingMatrix::to_strings).collect(),
            labels: Some(self.labels.clone()),
        }
    }

    pub fn from_spec(spec: &ComplexSpec, bound: usize) -> Result<Self> {
        let group = match &spec.group {
            Some(g) => Some(g.build(bound)?.into_arc()),
            None => None,
        };
        let g = group.clone().unwrap_or_else(|| FiniteGroup::trivial().into_arc());
        if spec.boundaries.len() + 1 != spec.ranks.len() {
            return Err(Error::InvalidInput("one boundary per positive degree expected".into()));
        }
        let mut mats = Vec::new();
        for (i, rows) in spec.boundaries.iter().enumerate() {
            let d = i + 1;
            let m = if rows.is_empty() {
                GroupRingMatrix::zeros(&g, &spec.ring, 0, spec.ranks[d - 1])
            } else if rows.iter().all(|r| r.is_empty()) {
                GroupRingMatrix::zeros(&g, &spec.ring, rows.len(), 0)
            } else {
                GroupRingMatrix::parse(&g, &spec.ring, rows)?
            };
            mats.push(m);
        }
        let mut c = Self::new(&spec.ring, group.as_ref(), spec.ranks.clone(), mats)?;
        c.group = g;
        match &spec.labels {
            Some(l) => c.with_labels(l.clone()),
            None => Ok(c),
        }
    }
}

/// JSON form of a complex; entries use the group-ring text grammar.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub ring: RingSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    pub ranks: Vec<usize>,
    /// Boundary matrices out of degrees 1, 2, ...
    pub boundaries: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<String>>>,
}

/// A degreewise map of based complexes: `maps[d]` is `rank_s(d) x rank_t(d)`
/// and `boundary_s(d) * maps[d-1] = maps[d] * boundary_t(d)`.
#[derive(Debug, Clone)]
pub struct ChainMap {
    source: BasedChainComplex,
    target: BasedChainComplex,
    maps: Vec<GroupRingMatrix>,
}

impl ChainMap {
    pub fn new(source: BasedChainComplex, target: BasedChainComplex, maps: Vec<GroupRingMatrix>) -> Result<Self> {
        let top = source.top_degree().max(target.top_degree());
        let mut full = Vec::with_capacity(top + 1);
        for d in 0..=top {
            let m = match maps.get(d) {
                Some(m) => m.clone(),
                None => GroupRingMatrix::zeros(source.group(), source.ring(), source.rank(d), target.rank(d)),
            };
            if m.rows() != source.rank(d) || m.cols() != target.rank(d) {
                return Err(Error::InvalidInput(format!("chain map in degree {d} has the wrong shape")));
            }
            full.push(m);
        }
        for d in 1..=top {
            let lhs = source.boundary(d).mul(&full[d - 1])?;
            let rhs = full[d].mul(&target.boundary(d))?;
            if lhs != rhs {
                return Err(Error::InvalidInput(format!("chain map does not commute with the boundary in degree {d}")));
            }
        }
        Ok(ChainMap { source, target, maps: full })
    }

    pub fn identity(c: &BasedChainComplex) -> Self {
        let maps = c.ranks().iter().map(|&r| GroupRingMatrix::identity(c.group(), c.ring(), r)).collect();
        ChainMap { source: c.clone(), target: c.clone(), maps }
    }

    /// Inclusion of `source` as the first basis elements of each degree of
    /// `target`.
    pub fn prefix_inclusion(source: &BasedChainComplex, target: &BasedChainComplex) -> Result<Self> {
        let mut maps = Vec::new();
        for d in 0..=target.top_degree().max(source.top_degree()) {
            let (rs, rt) = (source.rank(d), target.rank(d));
            if rs > rt {
                return Err(Error::InvalidInput("source is larger than target".into()));
            }
            let mut m = GroupRingMatrix::zeros(target.group(), target.ring(), rs, rt);
            for i in 0..rs {
                m.set(i, i, GroupRingElement::one(target.group(), target.ring()));
            }
            maps.push(m);
        }
        Self::new(source.clone(), target.clone(), maps)
    }

    pub fn source(&self) -> &BasedChainComplex {
        &self.source
    }

    pub fn target(&self) -> &BasedChainComplex {
        &self.target
    }

    pub fn map(&self, d: usize) -> GroupRingMatrix {
        match self.maps.get(d) {
            Some(m) => m.clone(),
            None => GroupRingMatrix::zeros(self.source.group(), self.source.ring(), self.source.rank(d), self.target.rank(d)),
        }
    }

    pub fn compose(&self, next: &ChainMap) -> Result<ChainMap> {
        let top = self.source.top_degree().max(next.target.top_degree());
        let maps = (0..=top).map(|d| self.map(d).mul(&next.map(d))).collect::<Result<Vec<_>>>()?;
        ChainMap::new(self.source.clone(), next.target.clone(), maps)
    }

    /// When every source basis element maps to a distinct target basis
    /// element with coefficient 1, the target indices per degree.
    pub fn basis_inclusion(&self) -> Option<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        for (d, m) in self.maps.iter().enumerate() {
            let mut used = vec![false; self.target.rank(d)];
            let mut idx = Vec::with_capacity(m.rows());
            for i in 0..m.rows() {
                let hits: Vec<usize> = (0..m.cols()).filter(|&j| !m.get(i, j).is_zero()).collect();
                if hits.len() != 1 || !m.get(i, hits[0]).is_one() || used[hits[0]] {
                    return None;
                }
                used[hits[0]] = true;
                idx.push(hits[0]);
            }
            out.push(idx);
        }
        Some(out)
    }

    /// `target / source` for a based subcomplex inclusion.
    pub fn quotient_complex(&self) -> Result<BasedChainComplex> {
        let inc = self.basis_inclusion().ok_or_else(|| Error::InvalidInput("map is not a based subcomplex inclusion".into()))?;
        let t = &self.target;
        let keep: Vec<Vec<usize>> = (0..=t.top_degree())
            .map(|d| {
                let used = inc.get(d).cloned().unwrap_or_default();
                (0..t.rank(d)).filter(|j| !used.contains(j)).collect()
            })
            .collect();
        // rows in the image must have boundary inside the image, which holds
        // because the inclusion is a chain map
        let ranks: Vec<usize> = keep.iter().map(Vec::len).collect();
        let mats = (1..=t.top_degree())
            .map(|d| t.boundary(d).select_rows(&keep[d]).select_cols(&keep[d - 1]))
            .collect();
        let group = t.is_equivariant().then(|| t.group().clone());
        let mut q = BasedChainComplex::new(t.ring(), group.as_ref(), ranks, mats)?;
        q.group = t.group().clone();
        let labels = keep.iter().enumerate().map(|(d, k)| k.iter().map(|&j| t.labels(d)[j].clone()).collect()).collect();
        q.with_labels(labels)
    }
}

/// Cone of `f: S -> T`: degree `d` is `S_{d-1} + T_d`, boundary
/// `[[-bS_{d-1}, f_{d-1}], [0, bT_d]]`.
pub fn mapping_cone(f: &ChainMap) -> Result<BasedChainComplex> {
    let (s, t) = (f.source(), f.target());
    let top = (s.top_degree() + 1).max(t.top_degree());
    let ranks: Vec<usize> = (0..=top).map(|d| (if d > 0 { s.rank(d - 1) } else { 0 }) + t.rank(d)).collect();
    let mut mats = Vec::with_capacity(top);
    for d in 1..=top {
        let sd1 = s.rank(d - 1);
        let sd2 = if d >= 2 { s.rank(d - 2) } else { 0 };
        let mut m = GroupRingMatrix::zeros(t.group(), t.ring(), ranks[d], ranks[d - 1]);
        if d >= 2 {
            m.set_block(0, 0, &s.boundary(d - 1).neg());
        }
        m.set_block(0, sd2, &f.map(d - 1));
        m.set_block(sd1, sd2, &t.boundary(d));
        mats.push(m);
    }
    let group = t.is_equivariant().then(|| t.group().clone());
    let mut c = BasedChainComplex::new(t.ring(), group.as_ref(), ranks, mats)?;
    c.group = t.group().clone();
    let labels = (0..=top)
        .map(|d| {
            let mut l: Vec<String> = if d > 0 { s.labels(d - 1).iter().map(|x| format!("c({x})")).collect() } else { Vec::new() };
            l.extend(t.labels(d).iter().cloned());
            l
        })
        .collect();
    c.with_labels(labels)
}
