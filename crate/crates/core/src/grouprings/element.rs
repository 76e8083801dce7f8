use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, RealizationHom};
use crate::linalg::IntMatrix;
use crate::ring::RingSpec;

/// An element of `R[G]` for a finite group `G`, stored sparsely.
#[derive(Debug, Clone)]
pub struct GroupRingElement {
    group: Arc<FiniteGroup>,
    ring: RingSpec,
    coeffs: BTreeMap<usize, BigRational>,
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for GroupRingElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.coeffs == other.coeffs && same_group(&self.group, &other.group)
    }
}

impl Eq for GroupRingElement {}

impl GroupRingElement {
    pub fn zero(group: &Arc<FiniteGroup>, ring: &RingSpec) -> Self {
        GroupRingElement { group: group.clone(), ring: ring.clone(), coeffs: BTreeMap::new() }
    }

    pub fn one(group: &Arc<FiniteGroup>, ring: &RingSpec) -> Self {
        Self::basis(group, ring, 0)
    }

    /// The group element `g` as a ring element.
    pub fn basis(group: &Arc<FiniteGroup>, ring: &RingSpec, g: usize) -> Self {
        Self::monomial(group, ring, g, BigRational::one())
    }

    pub fn monomial(group: &Arc<FiniteGroup>, ring: &RingSpec, g: usize, c: BigRational) -> Self {
        let mut e = Self::zero(group, ring);
        e.add_term(g, c).expect("coefficient in ring");
        e
    }

    pub fn from_int(group: &Arc<FiniteGroup>, ring: &RingSpec, n: i64) -> Self {
        Self::monomial(group, ring, 0, BigRational::from_integer(n.into()))
    }

    /// Builds an element from `(element, coefficient)` pairs; repeated
    /// elements accumulate.
    pub fn from_terms<I>(group: &Arc<FiniteGroup>, ring: &RingSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, BigRational)>,
    {
        let mut e = Self::zero(group, ring);
        for (g, c) in terms {
            if g >= group.order() {
                return Err(Error::InvalidInput(format!("element index {g} out of range")));
            }
            e.add_term(g, c)?;
        }
        Ok(e)
    }

    pub fn from_int_terms(group: &Arc<FiniteGroup>, ring: &RingSpec, terms: &[(usize, i64)]) -> Self {
        Self::from_terms(group, ring, terms.iter().map(|&(g, c)| (g, BigRational::from_integer(c.into()))))
            .expect("integer terms")
    }

    /// Dense integer coefficient vector of length `|G|`.
    pub fn from_dense(group: &Arc<FiniteGroup>, ring: &RingSpec, v: &[BigInt]) -> Self {
        let mut e = Self::zero(group, ring);
        for (g, c) in v.iter().enumerate() {
            if !c.is_zero() {
                e.add_term(g, BigRational::from_integer(c.clone())).expect("integer");
            }
        }
        e
    }

    pub(crate) fn add_term(&mut self, g: usize, c: BigRational) -> Result<()> {
        let entry = self.coeffs.entry(g).or_insert_with(BigRational::zero);
        let sum = self.ring.normalize(&(&*entry + c))?;
        if sum.is_zero() {
            self.coeffs.remove(&g);
        } else {
            *entry = sum;
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coeffs.iter().map(|(&g, c)| (g, c))
    }

    pub fn coefficient(&self, g: usize) -> BigRational {
        self.coeffs.get(&g).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// `Some((sign, g))` when the element is `±g`.
    pub fn as_trivial_unit(&self) -> Option<(i8, usize)> {
        if self.coeffs.len() != 1 {
            return None;
        }
        let (&g, c) = self.coeffs.iter().next().unwrap();
        if c.is_one() {
            Some((1, g))
        } else if (-c).is_one() || self.ring.normalize(&-c).is_ok_and(|m| m.is_one()) {
            Some((-1, g))
        } else {
            None
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Sum of absolute values of coefficients.
    pub fn l1_norm(&self) -> BigRational {
        self.coeffs.values().map(|c| c.abs()).fold(BigRational::zero(), |a, b| a + b)
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

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&g, c) in &other.coeffs {
            out.add_term(g, c.clone())?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let g = &self.group;
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &other.coeffs {
                *acc.entry(g.mul(a, b)).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        let mut out = Self::zero(g, &self.ring);
        for (h, c) in acc {
            out.add_term(h, c)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(&self.group, &self.ring);
        for (&g, c) in &self.coeffs {
            out.add_term(g, -c.clone()).expect("negation stays in ring");
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Result<Self> {
        let mut out = Self::zero(&self.group, &self.ring);
        for (&g, c) in &self.coeffs {
            out.add_term(g, c * s)?;
        }
        Ok(out)
    }

    /// `x * self`
    pub fn left_mul_group(&self, x: usize) -> Self {
        let coeffs = self.coeffs.iter().map(|(&g, c)| (self.group.mul(x, g), c.clone())).collect();
        GroupRingElement { group: self.group.clone(), ring: self.ring.clone(), coeffs }
    }

    /// `self * x`
    pub fn right_mul_group(&self, x: usize) -> Self {
        let coeffs = self.coeffs.iter().map(|(&g, c)| (self.group.mul(g, x), c.clone())).collect();
        GroupRingElement { group: self.group.clone(), ring: self.ring.clone(), coeffs }
    }

    pub fn augmentation(&self) -> BigRational {
        let s = self.coeffs.values().fold(BigRational::zero(), |a, b| a + b);
        self.ring.normalize(&s).expect("sum stays in ring")
    }

    /// `sum a_g g  ->  sum a_g g^-1`
    pub fn involution(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&g, c)| (self.group.inv(g), c.clone())).collect();
        GroupRingElement { group: self.group.clone(), ring: self.ring.clone(), coeffs }
    }

    /// Pushes the element forward along a group homomorphism.
    pub fn map_group(&self, f: &RealizationHom) -> Result<Self> {
        if !same_group(&self.group, f.source()) {
            return Err(Error::MixedGroups);
        }
        Self::from_terms(f.target(), &self.ring, self.coeffs.iter().map(|(&g, c)| (f.apply(g), c.clone())))
    }

    /// Same coefficients read in another ring.
    pub fn change_ring(&self, ring: &RingSpec) -> Result<Self> {
        Self::from_terms(&self.group, ring, self.coeffs.iter().map(|(&g, c)| (g, c.clone())))
    }

    /// Dense integer coefficients; fails on non-integral coefficients.
    pub fn to_dense_int(&self) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.group.order()];
        for (&g, c) in &self.coeffs {
            if !c.is_integer() {
                return Err(Error::InvalidInput(format!("coefficient {c} is not integral")));
            }
            v[g] = c.to_integer();
        }
        Ok(v)
    }

    /// `rho(a)[g][g h] = a_h`, the matrix of `x -> x a` on row vectors over
    /// the group basis. Multiplicative: `rho(ab) = rho(a) rho(b)`.
    pub fn regular_representation(&self) -> Result<IntMatrix> {
        let n = self.group.order();
        let mut m = IntMatrix::zeros(n, n);
        self.write_regular(&mut m, 0, 0)?;
        Ok(m)
    }

    pub(crate) fn write_regular(&self, m: &mut IntMatrix, r0: usize, c0: usize) -> Result<()> {
        for (&h, c) in &self.coeffs {
            if !c.is_integer() {
                return Err(Error::InvalidInput(format!("coefficient {c} is not integral")));
            }
            let ci = c.to_integer();
            for g in 0..self.group.order() {
                m[(r0 + g, c0 + self.group.mul(g, h))] = ci.clone();
            }
        }
        Ok(())
    }

    /// Formats with the given names for group elements.
    pub fn format_with(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (&g, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let elem = name(g);
            match (a.is_one(), elem == "1") {
                (true, _) => s.push_str(&elem),
                (false, true) => s.push_str(&a.to_string()),
                (false, false) => s.push_str(&format!("{a}*{elem}")),
            }
        }
        s
    }
}

/// Display names for group elements: powers of the single named generator
/// when the group is cyclic on it, `[gK]` otherwise.
pub fn element_namer(group: &FiniteGroup) -> Box<dyn Fn(usize) -> String + '_> {
    let syms = group.symbols();
    if syms.len() == 1 {
        let (name, &gen) = syms.iter().next().unwrap();
        if group.element_order(gen) == group.order() {
            let mut power = vec![0usize; group.order()];
            let mut x = 0;
            for k in 0..group.order() {
                power[x] = k;
                x = group.mul(x, gen);
            }
            return Box::new(move |g| match power[g] {
                0 => "1".to_string(),
                1 => name.clone(),
                k => format!("{name}^{k}"),
            });
        }
    }
    Box::new(|g| if g == 0 { "1".to_string() } else { format!("[g{g}]") })
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let namer = element_namer(&self.group);
        f.write_str(&self.format_with(&*namer))
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl std::ops::$tr<&GroupRingElement> for &GroupRingElement {
            type Output = GroupRingElement;
            /// Panics on mismatched groups or rings; use the `checked_` form
            /// for fallible arithmetic.
            fn $m(self, rhs: &GroupRingElement) -> GroupRingElement {
                self.$checked(rhs).expect("group ring operands must share group and ring")
            }
        }
    };
}
forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl std::ops::Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        GroupRingElement::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z5() -> Arc<FiniteGroup> {
        FiniteGroup::cyclic(5).into_arc()
    }

    #[test]
    fn unit_identity_in_z_z5() {
        let g = z5();
        let z = RingSpec::Integers;
        let u = GroupRingElement::from_int_terms(&g, &z, &[(1, 1), (4, 1), (0, -1)]);
        let v = GroupRingElement::from_int_terms(&g, &z, &[(2, 1), (3, 1), (0, -1)]);
        assert!((&u * &v).is_one());
        assert_eq!(u.augmentation(), BigRational::one());
        assert_eq!(u.involution(), u);
        assert_eq!(u.to_string(), "-1 + t + t^4");
        let one = GroupRingElement::one(&g, &z);
        assert_eq!(&one * &u, u);
    }

    #[test]
    fn involution_of_t_is_t4() {
        let g = z5();
        let t = GroupRingElement::basis(&g, &RingSpec::Integers, 1);
        assert_eq!(t.involution(), GroupRingElement::basis(&g, &RingSpec::Integers, 4));
    }

    #[test]
    fn regular_representation_of_t_is_cyclic_permutation() {
        let g = FiniteGroup::cyclic(3).into_arc();
        let t = GroupRingElement::basis(&g, &RingSpec::Integers, 1);
        let m = t.regular_representation().unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]));
        let zero = GroupRingElement::zero(&g, &RingSpec::Integers);
        assert!(zero.regular_representation().unwrap().is_zero());
    }

    #[test]
    fn mixed_rings_are_rejected() {
        let g = z5();
        let a = GroupRingElement::one(&g, &RingSpec::Integers);
        let b = GroupRingElement::one(&g, &RingSpec::ModP(5));
        assert_eq!(a.checked_mul(&b), Err(Error::MixedRings));
    }

    #[test]
    fn mod_p_coefficients_reduce() {
        let g = z5();
        let r = RingSpec::ModP(3);
        let a = GroupRingElement::from_int_terms(&g, &r, &[(1, 2), (1, 2)]);
        assert_eq!(a.coefficient(1), BigRational::one());
    }
}
