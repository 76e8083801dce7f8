use std::sync::Arc;

use proptest::prelude::*;

use pluscx::grouprings::{GroupRingElement, GroupRingMatrix};
use pluscx::groups::FiniteGroup;
use pluscx::torsion::{compose, conjugate, dual_sign, invariant, TorsionClass};
use pluscx::RingSpec;

fn z() -> RingSpec {
    RingSpec::Integers
}

/// `±t^k u^m` with `u = t + t^4 - 1` in `Z[Z/5]`.
fn unit(g: &Arc<FiniteGroup>, k: usize, sign: bool, m: i32) -> GroupRingElement {
    let u = GroupRingElement::from_int_terms(g, &z(), &[(1, 1), (4, 1), (0, -1)]);
    let ui = GroupRingElement::from_int_terms(g, &z(), &[(2, 1), (3, 1), (0, -1)]);
    let mut e = GroupRingElement::from_int_terms(g, &z(), &[(k % 5, if sign { 1 } else { -1 })]);
    for _ in 0..m.unsigned_abs() {
        e = e.checked_mul(if m > 0 { &u } else { &ui }).unwrap();
    }
    e
}

#[derive(Debug, Clone)]
struct ClassSeed {
    diag: [(usize, bool, i32); 2],
    off: Vec<(usize, i64)>,
    lower: bool,
}

fn class_seed() -> impl Strategy<Value = ClassSeed> {
    (
        [(0usize..5, prop::bool::ANY, -2i32..=2), (0usize..5, prop::bool::ANY, -2i32..=2)],
        prop::collection::vec((0usize..5, -2i64..=2), 0..3),
        prop::bool::ANY,
    )
        .prop_map(|(diag, off, lower)| ClassSeed { diag, off, lower })
}

fn elementary(g: &Arc<FiniteGroup>, off: &[(usize, i64)], lower: bool) -> GroupRingMatrix {
    let mut e = GroupRingMatrix::identity(g, &z(), 2);
    let (i, j) = if lower { (1, 0) } else { (0, 1) };
    e.set(i, j, GroupRingElement::from_int_terms(g, &z(), off));
    e
}

fn build(g: &Arc<FiniteGroup>, s: &ClassSeed, parity: i64) -> TorsionClass {
    let mut d = GroupRingMatrix::zeros(g, &z(), 2, 2);
    for (i, &(k, sign, m)) in s.diag.iter().enumerate() {
        d.set(i, i, unit(g, k, sign, m));
    }
    TorsionClass::new(d.mul(&elementary(g, &s.off, s.lower)).unwrap(), parity).unwrap()
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9 * x.abs().max(1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn magnitudes_multiply_under_compose(a in class_seed(), b in class_seed(), parity in 0i64..2) {
        let g = FiniteGroup::cyclic(5).into_arc();
        let (ta, tb) = (build(&g, &a, parity), build(&g, &b, parity));
        let ab = compose(&ta, &tb).unwrap();
        let (ia, ib, iab) = (invariant(&ta).unwrap(), invariant(&tb).unwrap(), invariant(&ab).unwrap());
        let product: Vec<f64> = ia.magnitudes().iter().zip(ib.magnitudes()).map(|(x, y)| x * y).collect();
        prop_assert!(close(&iab.magnitudes(), &product));
    }

    #[test]
    fn elementary_and_trivial_units_are_invisible(off in prop::collection::vec((0usize..5, -3i64..=3), 0..4), lower in prop::bool::ANY, k in 0usize..5, sign in prop::bool::ANY) {
        let g = FiniteGroup::cyclic(5).into_arc();
        let mut m = elementary(&g, &off, lower);
        m.set(0, 0, unit(&g, k, sign, 0));
        let inv = invariant(&TorsionClass::new(m, 0).unwrap()).unwrap();
        prop_assert!(inv.magnitudes().iter().all(|x| (x - 1.0).abs() < 1e-12));
        prop_assert!(inv.det_is_trivial_unit);
        prop_assert!(!inv.detects_nontrivial());
    }

    #[test]
    fn conjugate_and_dual_sign_are_involutions(a in class_seed(), parity in 0i64..2) {
        let g = FiniteGroup::cyclic(5).into_arc();
        let t = build(&g, &a, parity);
        let back = conjugate(&conjugate(&t));
        prop_assert_eq!(back.representative(), t.representative());
        let twice = invariant(&dual_sign(&dual_sign(&t))).unwrap();
        let once = invariant(&t).unwrap();
        prop_assert_eq!(&twice.det_abelianized, &once.det_abelianized);
        prop_assert!(close(&twice.magnitudes(), &once.magnitudes()));
    }

    #[test]
    fn compose_with_trivial_keeps_invariant(a in class_seed()) {
        let g = FiniteGroup::cyclic(5).into_arc();
        let t = build(&g, &a, 0);
        let with = compose(&t, &TorsionClass::trivial(&g, 3, 0)).unwrap();
        let (x, y) = (invariant(&t).unwrap(), invariant(&with).unwrap());
        prop_assert_eq!(&x.det_abelianized, &y.det_abelianized);
        prop_assert!(close(&x.magnitudes(), &y.magnitudes()));
    }
}
