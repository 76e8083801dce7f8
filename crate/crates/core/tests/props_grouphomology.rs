use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use pluscx::grouphomology::{h2_group, h2_induced_map, presentation_h2_epi, BarComplexSlice};
use pluscx::groups::{realize_hom, FiniteGroup, FinitePresentation, GroupHom, RealizationHom};
use pluscx::{Config, RingSpec};

const GROUPS: &[&str] = &["Z2", "Z4", "Z2xZ2", "Z2xZ4", "D4", "Q8", "Z2xZ2xZ2", "Z3xZ3", "S3"];

fn group(i: usize) -> Arc<FiniteGroup> {
    FiniteGroup::builtin(GROUPS[i % GROUPS.len()]).unwrap().into_arc()
}

/// A homomorphism found by sampling images of a generating set.
fn random_hom(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>, rng: &mut StdRng) -> RealizationHom {
    let gens = a.generating_set();
    for _ in 0..200 {
        let images: Vec<usize> = gens.iter().map(|_| rng.gen_range(0..b.order())).collect();
        if let Ok(f) = RealizationHom::from_generator_images(a.clone(), b.clone(), &gens, &images) {
            return f;
        }
    }
    RealizationHom::new(a.clone(), b.clone(), vec![0; a.order()]).unwrap()
}

fn reduce(m: &[Vec<BigInt>], orders: &[BigInt]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| row.iter().enumerate().map(|(j, x)| match orders.get(j) { Some(d) if d.is_positive() => x.mod_floor(d), _ => x.clone() }).collect())
        .collect()
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    a.iter().map(|r| (0..cols).map(|j| r.iter().zip(b).map(|(x, row)| x * &row[j]).sum()).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bar_boundaries_compose_to_zero(gi in 0usize..GROUPS.len()) {
        let bar = BarComplexSlice::new(&group(gi));
        prop_assert!(bar.boundary3().mul(&bar.boundary2()).is_zero());
    }

    #[test]
    fn cyclic_multipliers_vanish(n in 1usize..=12) {
        let g = FiniteGroup::cyclic(n).into_arc();
        let h = h2_group(&g, &RingSpec::Integers, &Config::default()).unwrap();
        prop_assert!(h.is_zero() && !h.partial);
    }

    #[test]
    fn induced_maps_are_functorial(a in 0usize..GROUPS.len(), b in 0usize..GROUPS.len(), c in 0usize..GROUPS.len(), seed in any::<u64>()) {
        let cfg = Config::default();
        let z = RingSpec::Integers;
        let (ga, gb, gc) = (group(a), group(b), group(c));
        let id = h2_induced_map(&RealizationHom::identity(ga.clone()), &z, &cfg).unwrap();
        prop_assert!(id.iso);
        if let Some(m) = &id.matrix {
            for (i, row) in m.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    prop_assert_eq!(x.is_zero(), i != j);
                }
            }
        }
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_hom(&ga, &gb, &mut rng);
        let g = random_hom(&gb, &gc, &mut rng);
        let fg = f.compose(&g).unwrap();
        let (hf, hg, hfg) = (h2_induced_map(&f, &z, &cfg).unwrap(), h2_induced_map(&g, &z, &cfg).unwrap(), h2_induced_map(&fg, &z, &cfg).unwrap());
        if hfg.epi {
            prop_assert!(hg.epi);
        }
        if let (Some(mf), Some(mg), Some(mfg)) = (&hf.matrix, &hg.matrix, &hfg.matrix) {
            let cols = hfg.target.torsion.len() + hfg.target.rank;
            let orders = &hfg.target.torsion;
            prop_assert_eq!(reduce(&matmul(mf, mg, cols), orders), reduce(mfg, orders));
        }
    }
}

#[test]
fn hopf_sequence_is_onto_for_presentations() {
    let cfg = Config::default();
    let cases: [(&[&str], &[&str]); 6] = [
        (&["x", "y"], &["x^2", "y^2", "[x,y]"]),
        (&["x", "y"], &["x^3", "y^3", "[x,y]"]),
        (&["x", "y"], &["x^4", "y^2", "(xy)^2"]),
        (&["x", "y"], &["x^4", "x^2y^-2", "y^-1xyx"]),
        (&["x", "y"], &["x^3", "y^2", "(xy)^2"]),
        (&["x", "y", "z"], &["x^2", "y^2", "z^2", "[x,y]", "[x,z]", "[y,z]"]),
    ];
    for (gens, rels) in cases {
        let p = FinitePresentation::parse(gens, rels).unwrap();
        let f = realize_hom(&GroupHom::trivial(p.clone(), FiniteGroup::trivial().into_arc()), cfg.coset_limit).unwrap();
        let g = f.source().clone();
        let images: Vec<usize> = gens.iter().map(|n| g.symbol(n).unwrap()).collect();
        let hom = GroupHom::new(p, g, images).unwrap();
        assert!(presentation_h2_epi(&hom, &cfg).unwrap(), "{rels:?}");
    }
}
