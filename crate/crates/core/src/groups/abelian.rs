use std::collections::VecDeque;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::finite::FiniteGroup;
use super::hom::RealizationHom;
use super::subgroup::{derived_subgroup, quotient};
use crate::error::Result;
use crate::linalg::{snf, IntMatrix};

/// `G_ab` written as `Z/d_1 x ... x Z/d_k` with `d_1 | d_2 | ...`, together
/// with the coordinates of every element of `G`.
#[derive(Debug, Clone)]
pub struct AbelianQuotient {
    factors: Vec<u64>,
    coords: Vec<Vec<u64>>,
    group: Arc<FiniteGroup>,
    projection: RealizationHom,
}

impl AbelianQuotient {
    pub fn of(g: &Arc<FiniteGroup>) -> Result<Self> {
        let (q, proj) = quotient(g, &derived_subgroup(g))?;
        let gens = q.generating_set();
        let k = gens.len();
        // spanning-tree coordinates in Z^k and the cycle relations
        let mut tree: Vec<Option<Vec<i64>>> = vec![None; q.order()];
        tree[0] = Some(vec![0; k]);
        let mut relations: Vec<Vec<BigInt>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let cx = tree[x].clone().unwrap();
            for (i, &s) in gens.iter().enumerate() {
                let y = q.mul(x, s);
                let mut cy = cx.clone();
                cy[i] += 1;
                match &tree[y] {
                    None => {
                        tree[y] = Some(cy);
                        queue.push_back(y);
                    }
                    Some(existing) => {
                        let rel: Vec<BigInt> = cy.iter().zip(existing).map(|(a, b)| BigInt::from(a - b)).collect();
                        if rel.iter().any(|r| !r.is_zero()) {
                            relations.push(rel);
                        }
                    }
                }
            }
        }
        let rel = IntMatrix::from_row_vecs(k, relations);
        let s = snf::smith(&rel, 1 << 16)?;
        let keep: Vec<usize> = (0..k).filter(|&i| i < s.rank && s.diagonal[i] != BigInt::from(1)).collect();
        debug_assert_eq!(s.rank, k, "finite quotient has full-rank relations");
        let factors: Vec<u64> = keep.iter().map(|&i| s.diagonal[i].to_u64().unwrap()).collect();
        let qcoords: Vec<Vec<u64>> = tree
            .iter()
            .map(|c| {
                let c: Vec<BigInt> = c.as_ref().unwrap().iter().map(|&x| BigInt::from(x)).collect();
                let cv = s.v.left_apply(&c);
                keep.iter()
                    .zip(&factors)
                    .map(|(&i, &d)| cv[i].mod_floor(&BigInt::from(d)).to_u64().unwrap())
                    .collect()
            })
            .collect();
        let coords: Vec<Vec<u64>> = (0..g.order()).map(|x| qcoords[proj.apply(x)].clone()).collect();
        let group = factors
            .iter()
            .map(|&d| FiniteGroup::cyclic(d as usize))
            .reduce(|a, b| FiniteGroup::direct_product(&a, &b))
            .unwrap_or_else(FiniteGroup::trivial)
            .into_arc();
        let map = coords.iter().map(|c| mixed_radix(c, &factors)).collect();
        let projection = RealizationHom::new(g.clone(), group.clone(), map)?;
        Ok(AbelianQuotient { factors, coords, group, projection })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn coords(&self, g: usize) -> &[u64] {
        &self.coords[g]
    }

    /// The product-of-cyclic realization; element index is the mixed-radix
    /// number of the coordinates.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn projection(&self) -> &RealizationHom {
        &self.projection
    }
}

pub(crate) fn mixed_radix(c: &[u64], radix: &[u64]) -> usize {
    c.iter().zip(radix).fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(name: &str) -> Vec<u64> {
        AbelianQuotient::of(&FiniteGroup::builtin(name).unwrap().into_arc()).unwrap().factors().to_vec()
    }

    #[test]
    fn abelianizations() {
        assert_eq!(factors("Z6"), vec![6]);
        assert_eq!(factors("Z2xZ2"), vec![2, 2]);
        assert_eq!(factors("Z2xZ4"), vec![2, 4]);
        assert_eq!(factors("S3"), vec![2]);
        assert_eq!(factors("A5"), Vec::<u64>::new());
        assert_eq!(factors("Q8"), vec![2, 2]);
        assert_eq!(factors("A4"), vec![3]);
        assert_eq!(factors("Z5xA5"), vec![5]);
    }

    #[test]
    fn projection_is_a_homomorphism_onto() {
        let g = FiniteGroup::builtin("D4").unwrap().into_arc();
        let ab = AbelianQuotient::of(&g).unwrap();
        assert_eq!(ab.order(), 4);
        assert!(ab.projection().is_surjective());
    }
}
