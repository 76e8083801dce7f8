use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::cyclotomic::Cyclotomic;
use super::element::{same_group, GroupRingElement};
use crate::error::{Error, Result};
use crate::groups::{AbelianQuotient, FiniteGroup};

/// A linear character of a finite abelian group with values in the
/// `order`-th roots of unity: `chi(g) = zeta_order^exponent[g]`.
#[derive(Debug, Clone)]
pub struct Character {
    group: Arc<FiniteGroup>,
    /// Coordinates `k` of the character in the dual of `Z/d_1 x ... x Z/d_r`.
    label: Vec<u64>,
    order: u64,
    exponents: Vec<u64>,
}

/// Exact and numerical value of a character on a group ring element.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterValue {
    pub exact: Cyclotomic,
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
}

impl Character {
    /// All characters, the trivial one first, ordered by label.
    pub fn all(group: &Arc<FiniteGroup>) -> Result<Vec<Character>> {
        if !group.is_abelian() {
            return Err(Error::NonAbelianGroup);
        }
        let ab = AbelianQuotient::of(group)?;
        let d = ab.factors().to_vec();
        let e = d.last().copied().unwrap_or(1);
        let count: u64 = d.iter().product();
        let mut out = Vec::with_capacity(count as usize);
        for idx in 0..count {
            let mut label = vec![0u64; d.len()];
            let mut rem = idx;
            for i in (0..d.len()).rev() {
                label[i] = rem % d[i];
                rem /= d[i];
            }
            // exponent in Z/e of chi(g) = sum k_i c_i (e / d_i)
            let raw: Vec<u64> = (0..group.order())
                .map(|g| {
                    ab.coords(g).iter().zip(&label).zip(&d).map(|((&c, &k), &di)| c * k % di * (e / di)).sum::<u64>() % e
                })
                .collect();
            let order = raw.iter().fold(1u64, |acc, &x| acc.lcm(&(e / x.gcd(&e))));
            let exponents = raw.iter().map(|&x| x / (e / order)).collect();
            out.push(Character { group: group.clone(), label, order, exponents });
        }
        Ok(out)
    }

    pub fn label(&self) -> &[u64] {
        &self.label
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn value(&self, g: usize) -> Cyclotomic {
        Cyclotomic::zeta_pow(self.order, self.exponents[g])
    }

    /// `g -> chi(g^-1)`.
    pub fn conjugate(&self) -> Character {
        let exponents = (0..self.group.order()).map(|g| self.exponents[self.group.inv(g)]).collect();
        let label = self.label.clone();
        Character { group: self.group.clone(), label, order: self.order, exponents }
    }

    /// Whether the two characters agree on every element.
    pub fn same_as(&self, other: &Character) -> bool {
        self.order == other.order && self.exponents == other.exponents
    }
}

/// `sum a_g chi(g)`, exact in `Q(zeta)`.
pub fn character_eval(e: &GroupRingElement, chi: &Character) -> Result<CharacterValue> {
    if !e.group().is_abelian() {
        return Err(Error::NonAbelianGroup);
    }
    if !same_group(e.group(), &chi.group) {
        return Err(Error::MixedGroups);
    }
    let n = chi.order as usize;
    let mut dense = vec![BigRational::zero(); n];
    for (g, c) in e.terms() {
        dense[chi.exponents[g] as usize] += c;
    }
    Ok(value_of(Cyclotomic::reduce(chi.order, dense)))
}

pub(crate) fn value_of(exact: Cyclotomic) -> CharacterValue {
    let (re, im) = exact.to_complex();
    CharacterValue { magnitude: re.hypot(im), exact, re, im }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    #[test]
    fn z5_unit_values() {
        let g = FiniteGroup::cyclic(5).into_arc();
        let u = GroupRingElement::from_int_terms(&g, &RingSpec::Integers, &[(1, 1), (4, 1), (0, -1)]);
        let chars = Character::all(&g).unwrap();
        assert_eq!(chars.len(), 5);
        assert!(chars[0].is_trivial());
        let v0 = character_eval(&u, &chars[0]).unwrap();
        assert_eq!(v0.exact.as_rational(), Some(u.augmentation()));
        let mags: Vec<f64> = chars[1..].iter().map(|c| character_eval(&u, c).unwrap().magnitude).collect();
        for (m, want) in mags.iter().zip([0.381966011250105, 2.618033988749895, 2.618033988749895, 0.381966011250105]) {
            assert!((m - want).abs() < 1e-12);
        }
    }

    #[test]
    fn characters_are_multiplicative() {
        for name in ["Z6", "Z2xZ2", "Z2xZ4", "Z3xZ3"] {
            let g = FiniteGroup::builtin(name).unwrap().into_arc();
            let chars = Character::all(&g).unwrap();
            assert_eq!(chars.len(), g.order());
            for chi in &chars {
                for a in 0..g.order() {
                    for b in 0..g.order() {
                        assert_eq!(chi.value(g.mul(a, b)), chi.value(a).mul(&chi.value(b)));
                    }
                }
            }
            // distinct characters
            for i in 0..chars.len() {
                for j in 0..i {
                    assert!(!chars[i].same_as(&chars[j]));
                }
            }
        }
    }

    #[test]
    fn nonabelian_is_rejected() {
        let g = FiniteGroup::symmetric(3).into_arc();
        assert!(matches!(Character::all(&g), Err(Error::NonAbelianGroup)));
    }
}
