use proptest::prelude::*;

use pluscx::chains::CoefficientMode;
use pluscx::foxcw::{attach_cells, build_presentation_complex, fox_derivative, AttachmentRecord};
use pluscx::grouprings::GroupRingElement;
use pluscx::groups::{FiniteGroup, FinitePresentation, GroupHom, Word};
use pluscx::linalg::lattice::kernel_basis;
use pluscx::RingSpec;

const NAMES: [&str; 2] = ["x", "y"];

fn word_text(letters: &[(usize, bool)]) -> String {
    letters.iter().map(|&(g, inv)| if inv { format!("{}^-1", NAMES[g]) } else { NAMES[g].to_string() }).collect()
}

fn letters() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..2, prop::bool::ANY), 1..10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fundamental_formula(w in letters(), target in 0usize..4, ix in 0usize..24, iy in 0usize..24) {
        let g = FiniteGroup::builtin(["S3", "Q8", "Z5", "A4"][target]).unwrap().into_arc();
        let p = FinitePresentation::parse(&NAMES, &[]).unwrap();
        let hom = GroupHom::new(p.clone(), g.clone(), vec![ix % g.order(), iy % g.order()]).unwrap();
        let z = RingSpec::Integers;
        let word = Word::parse(&word_text(&w), p.generator_names()).unwrap();
        // sum over x of (∂w/∂x)(α(x) - 1) = α(w) - 1
        let mut lhs = GroupRingElement::zero(&g, &z);
        for x in 0..2 {
            let ax = GroupRingElement::basis(&g, &z, hom.images()[x]).checked_sub(&GroupRingElement::one(&g, &z)).unwrap();
            lhs = lhs.checked_add(&fox_derivative(&word, x, &hom, &z).checked_mul(&ax).unwrap()).unwrap();
        }
        let rhs = GroupRingElement::basis(&g, &z, hom.eval(&word)).checked_sub(&GroupRingElement::one(&g, &z)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn trivial_coefficients_recover_abelianization(rels in prop::collection::vec(letters(), 0..3)) {
        let texts: Vec<String> = rels.iter().map(|r| word_text(r)).collect();
        let p = FinitePresentation::parse(&NAMES, &texts.iter().map(String::as_str).collect::<Vec<_>>()).unwrap();
        let hom = GroupHom::trivial(p.clone(), FiniteGroup::trivial().into_arc());
        let pc = build_presentation_complex(&p, &hom, &RingSpec::Integers);
        let h1 = pc.complex().homology(&RingSpec::Integers, CoefficientMode::Trivial, 1 << 12).unwrap().degree(1);
        prop_assert_eq!(h1.factors(), p.abelianization(1 << 12).unwrap());
    }

    #[test]
    fn attaching_cells_keeps_low_homology(
        rels in prop::collection::vec(letters(), 1..3),
        twos in prop::collection::vec(prop::collection::vec(-2i64..=2, 2), 0..3),
        threes in prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 0..3),
    ) {
        let z = RingSpec::Integers;
        let texts: Vec<String> = rels.iter().map(|r| word_text(r)).collect();
        let p = FinitePresentation::parse(&NAMES, &texts.iter().map(String::as_str).collect::<Vec<_>>()).unwrap();
        let g = FiniteGroup::trivial().into_arc();
        let hom = GroupHom::trivial(p.clone(), g.clone());
        let c = build_presentation_complex(&p, &hom, &z).into_complex();
        let before = c.homology(&z, CoefficientMode::Trivial, 1 << 12).unwrap();
        let elem = |v: i64| GroupRingElement::from_int(&g, &z, v);

        // any 1-chain is a cycle when G is trivial
        let recs: Vec<AttachmentRecord> =
            twos.iter().enumerate().map(|(i, r)| AttachmentRecord::new(2, r.iter().map(|&v| elem(v)).collect(), format!("s{i}"))).collect();
        let c2 = attach_cells(&c, &recs).unwrap();
        let after = c2.homology(&z, CoefficientMode::Trivial, 1 << 12).unwrap();
        prop_assert_eq!(after.degree(0), before.degree(0));

        // 3-cells along integer 2-cycles
        let d2 = c2.boundary(2).augmented().unwrap();
        let cycles = if d2.rows() == 0 { return Ok(()) } else { kernel_basis(&d2, 1 << 12).unwrap() };
        let recs3: Vec<AttachmentRecord> = threes
            .iter()
            .enumerate()
            .filter(|_| cycles.rows() > 0)
            .map(|(i, coef)| {
                let row: Vec<GroupRingElement> = (0..cycles.cols())
                    .map(|j| {
                        let v: num_bigint::BigInt = (0..cycles.rows()).map(|k| &cycles.row(k)[j] * coef[k % coef.len()]).sum();
                        GroupRingElement::from_int(&g, &z, i64::try_from(v).unwrap())
                    })
                    .collect();
                AttachmentRecord::new(3, row, format!("h{i}"))
            })
            .collect();
        let c3 = attach_cells(&c2, &recs3).unwrap();
        let after3 = c3.homology(&z, CoefficientMode::Trivial, 1 << 12).unwrap();
        prop_assert_eq!(after3.degree(0), after.degree(0));
        prop_assert_eq!(after3.degree(1), after.degree(1));
    }
}
