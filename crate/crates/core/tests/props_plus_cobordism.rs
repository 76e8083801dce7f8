use std::sync::Arc;

use proptest::prelude::*;

use pluscx::chains::CoefficientMode;
use pluscx::cobordism::{classify, glue, realize, same_invariant, verify_one_sided_h};
use pluscx::foxcw::{build_presentation_complex, PresentationComplex};
use pluscx::grouprings::{GroupRingElement, GroupRingMatrix};
use pluscx::groups::{FiniteGroup, FinitePresentation, GroupHom, Word};
use pluscx::plusconstruction::{alpha_h2_epi, framing_correction, homology_equivalence_target, plus_with_torsion, FramingProblem};
use pluscx::torsion::{invariant, torsion_of_pair, TorsionClass};
use pluscx::{Config, Error, RingSpec};

fn z() -> RingSpec {
    RingSpec::Integers
}

/// `⟨t | t^5⟩` (seeds none, `P = 1`) or `Z/5 × A5` (seeds `a, b`), over `G = Z/5`.
fn space(with_a5: bool) -> (PresentationComplex, Vec<Word>) {
    let g = FiniteGroup::cyclic(5).into_arc();
    let (p, images, seeds): (FinitePresentation, Vec<usize>, &[&str]) = if with_a5 {
        (FinitePresentation::parse(&["t", "a", "b"], &["t^5", "[t,a]", "[t,b]", "a^2", "b^3", "(ab)^5"]).unwrap(), vec![1, 0, 0], &["a", "b"])
    } else {
        (FinitePresentation::parse(&["t"], &["t^5"]).unwrap(), vec![1], &[])
    };
    let hom = GroupHom::new(p.clone(), g, images).unwrap();
    let seeds = seeds.iter().map(|s| Word::parse(s, p.generator_names()).unwrap()).collect();
    (build_presentation_complex(&p, &hom, &z()), seeds)
}

/// `±t^k u^m` with `u = t + t^4 - 1`.
fn unit(g: &Arc<FiniteGroup>, (k, sign, m): (usize, bool, i32)) -> GroupRingElement {
    let u = GroupRingElement::from_int_terms(g, &z(), &[(1, 1), (4, 1), (0, -1)]);
    let ui = GroupRingElement::from_int_terms(g, &z(), &[(2, 1), (3, 1), (0, -1)]);
    let mut e = GroupRingElement::from_int_terms(g, &z(), &[(k % 5, if sign { 1 } else { -1 })]);
    for _ in 0..m.unsigned_abs() {
        e = e.checked_mul(if m > 0 { &u } else { &ui }).unwrap();
    }
    e
}

fn unit_seed() -> impl Strategy<Value = (usize, bool, i32)> {
    (0usize..5, prop::bool::ANY, -2i32..=2)
}

fn one_by_one(g: &Arc<FiniteGroup>, s: (usize, bool, i32)) -> GroupRingMatrix {
    let mut m = GroupRingMatrix::zeros(g, &z(), 1, 1);
    m.set(0, 0, unit(g, s));
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn plus_construction_postconditions(with_a5 in prop::bool::ANY, s in unit_seed(), off in prop::collection::vec((0usize..5, -2i64..=2), 0..3), parity in 0i64..2) {
        let cfg = Config::default();
        let (x, seeds) = space(with_a5);
        let g = x.group().clone();
        // a 2x2 representative: diag(unit, 1) times an elementary matrix
        let mut a = GroupRingMatrix::identity(&g, &z(), 2);
        a.set(0, 0, unit(&g, s));
        let mut e = GroupRingMatrix::identity(&g, &z(), 2);
        e.set(0, 1, GroupRingElement::from_int_terms(&g, &z(), &off));
        let a = a.mul(&e).unwrap();
        let r = plus_with_torsion(&x, &seeds, &a, parity, &cfg).unwrap();
        prop_assert!(r.relative.is_acyclic(&z(), CoefficientMode::Regular, cfg.bit_bound).unwrap());
        let hx = r.x.homology(&z(), CoefficientMode::Trivial, cfg.bit_bound).unwrap();
        let hp = r.plus.homology(&z(), CoefficientMode::Trivial, cfg.bit_bound).unwrap();
        prop_assert!(hx.same_groups(&hp));
        prop_assert!(r.report.homology_preserved && r.report.relative_acyclic);
        let again = torsion_of_pair(&r.relative, parity, &cfg).unwrap();
        prop_assert_eq!(again.representative(), r.torsion.representative());
        let want = invariant(&TorsionClass::new(a, parity).unwrap()).unwrap();
        prop_assert!(same_invariant(&invariant(&r.torsion).unwrap(), &want));
    }

    #[test]
    fn realized_models_classify_back(with_a5 in prop::bool::ANY, s in unit_seed(), parity in 0i64..2) {
        let cfg = Config::default();
        let (x, seeds) = space(with_a5);
        let tau = TorsionClass::new(one_by_one(x.group(), s), parity).unwrap();
        let model = realize(&x, &seeds, &tau, &cfg).unwrap();
        let check = verify_one_sided_h(&model, &cfg).unwrap();
        prop_assert!(check.holds, "{:?}", check.diagnostics);
        let class = classify(&model, &cfg).unwrap();
        prop_assert!(same_invariant(class.invariant.as_ref().unwrap(), &invariant(&tau).unwrap()));
    }

    #[test]
    fn glue_formula_and_additivity(s1 in unit_seed(), s2 in unit_seed(), parity in 0i64..2) {
        let cfg = Config::default();
        let (x, seeds) = space(false);
        let g = x.group().clone();
        let t1 = TorsionClass::new(one_by_one(&g, s1), parity).unwrap();
        let t2 = TorsionClass::new(one_by_one(&g, s2), parity).unwrap();
        let r = glue(&realize(&x, &seeds, &t1, &cfg).unwrap(), &realize(&x, &seeds, &t2, &cfg).unwrap(), &cfg).unwrap();
        prop_assert_eq!(r.formula_holds, Some(true));
        prop_assert_eq!(r.additivity_holds, Some(true));
    }

    #[test]
    fn target_success_forces_h2_epi(src in 0usize..5, tgt in 0usize..6, seed in prop::collection::vec(0usize..8, 2)) {
        let cfg = Config::default();
        let sources: [(&[&str], &[&str]); 5] = [
            (&[], &[]),
            (&["x"], &["x^4"]),
            (&["x"], &["x^6"]),
            (&["x", "y"], &["x^2", "y^2", "[x,y]"]),
            (&["x", "y"], &["x^2", "y^3", "(xy)^2"]),
        ];
        let g = FiniteGroup::builtin(["1", "Z2", "Z2xZ2", "S3", "Z3xZ3", "D4"][tgt]).unwrap().into_arc();
        let p = FinitePresentation::parse(sources[src].0, sources[src].1).unwrap();
        let images: Vec<usize> = (0..p.generator_count()).map(|i| seed[i] % g.order()).collect();
        let alpha = GroupHom::new(p.clone(), g.clone(), images).unwrap_or_else(|_| GroupHom::trivial(p, g));
        match homology_equivalence_target(&alpha, &z(), &cfg) {
            Ok(r) => {
                prop_assert!(r.report.relative_vanishes_from_3 && r.report.im_b_zero && r.report.pi1_certified);
                prop_assert!(alpha_h2_epi(&alpha, &z(), &cfg).unwrap());
            }
            Err(Error::NotLiftable(_)) => prop_assert!(!alpha_h2_epi(&alpha, &z(), &cfg).unwrap()),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn framing_solutions_satisfy_the_system(a in prop::collection::vec(prop::collection::vec(0u8..2, 5), 1..5), eps0 in prop::collection::vec(0u8..2, 5)) {
        let w: Vec<u8> = a.iter().map(|row| row.iter().zip(&eps0).fold(0, |acc, (x, e)| acc ^ (x & e))).collect();
        let eps = framing_correction(&FramingProblem::new(a.clone(), w.clone()).unwrap()).unwrap();
        for (row, wi) in a.iter().zip(&w) {
            prop_assert_eq!(row.iter().zip(&eps).fold(*wi, |acc, (x, e)| acc ^ (x & e)), 0);
        }
    }
}
