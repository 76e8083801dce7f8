use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::chains::{BasedChainComplex, ComplexSpec};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::grouprings::{GroupRingElement, GroupRingMatrix};
use crate::groups::{FiniteGroup, FinitePresentation, GroupHom, GroupSpec, PresentationSpec, Word};
use crate::ring::RingSpec;

/// `∂w/∂x` pushed through `hom` into `R[G]`.
pub fn fox_derivative(w: &Word, x: usize, hom: &GroupHom, ring: &RingSpec) -> GroupRingElement {
    let g = hom.target();
    let mut terms: Vec<(usize, i64)> = Vec::new();
    let mut u = g.identity();
    for &(y, e) in w.letters() {
        let a = hom.images()[y];
        if e > 0 {
            if y == x {
                terms.push((u, 1));
            }
            u = g.mul(u, a);
        } else {
            u = g.mul(u, g.inv(a));
            if y == x {
                terms.push((u, -1));
            }
        }
    }
    GroupRingElement::from_int_terms(g, ring, &terms)
}

/// Fox derivatives of `w` by every generator.
pub fn fox_row(w: &Word, hom: &GroupHom, ring: &RingSpec) -> Vec<GroupRingElement> {
    (0..hom.source().generator_count()).map(|x| fox_derivative(w, x, hom, ring)).collect()
}

/// The cellular chains of the `G`-cover of a presentation 2-complex.
#[derive(Debug, Clone)]
pub struct PresentationComplex {
    presentation: FinitePresentation,
    hom: GroupHom,
    complex: BasedChainComplex,
}

impl PresentationComplex {
    pub fn presentation(&self) -> &FinitePresentation {
        &self.presentation
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.hom.target()
    }

    pub fn complex(&self) -> &BasedChainComplex {
        &self.complex
    }

    pub fn into_complex(self) -> BasedChainComplex {
        self.complex
    }

    pub fn to_spec(&self) -> PresentationComplexSpec {
        let g = self.hom.target();
        PresentationComplexSpec {
            presentation: self.presentation.to_spec(),
            group: GroupSpec::of(g),
            images: self.hom.images().to_vec(),
            complex: self.complex.to_spec(),
        }
    }

    /// Rebuilds from the header; the stored complex is checked against it.
    pub fn from_spec(spec: &PresentationComplexSpec, cfg: &Config) -> Result<Self> {
        let p = FinitePresentation::from_spec(&spec.presentation)?;
        let g = spec.group.build(cfg.exhaustive_check_bound)?.into_arc();
        let hom = GroupHom::new(p.clone(), g, spec.images.clone())?;
        let c = BasedChainComplex::from_spec(&spec.complex, cfg.exhaustive_check_bound)?;
        let built = build_presentation_complex(&p, &hom, c.ring());
        if built.complex.ranks() != c.ranks() || (1..=2).any(|d| built.complex.boundary(d).to_strings() != c.boundary(d).to_strings()) {
            return Err(Error::InvalidInput("stored complex does not match the presentation".into()));
        }
        Ok(built)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationComplexSpec {
    pub presentation: PresentationSpec,
    pub group: GroupSpec,
    pub images: Vec<usize>,
    pub complex: ComplexSpec,
}

/// Ranks `(1, #generators, #relators)`, `∂₁` column `α(x) - 1`, `∂₂` the
/// Fox matrix. With `G` trivial this is the cellular complex of the
/// presentation 2-complex itself.
pub fn build_presentation_complex(p: &FinitePresentation, hom: &GroupHom, ring: &RingSpec) -> PresentationComplex {
    let g = hom.target();
    let n = p.generator_count();
    let one = BigRational::from_integer(BigInt::from(1));
    let d1_rows: Vec<Vec<GroupRingElement>> = (0..n)
        .map(|x| {
            let a = hom.images()[x];
            let e = GroupRingElement::from_terms(g, ring, [(a, one.clone()), (0, -one.clone())]).expect("valid index");
            vec![e]
        })
        .collect();
    let d2_rows: Vec<Vec<GroupRingElement>> = p.relators().iter().map(|r| fox_row(r, hom, ring)).collect();
    let d1 = GroupRingMatrix::from_rows(g, ring, 1, d1_rows).expect("shape");
    let d2 = GroupRingMatrix::from_rows(g, ring, n, d2_rows).expect("shape");
    let names = p.generator_names();
    let labels = vec![
        vec!["v".to_string()],
        names.to_vec(),
        p.relators().iter().map(|r| r.display(names).to_string()).collect(),
    ];
    let complex = BasedChainComplex::new(ring, Some(g), vec![1, n, p.relators().len()], vec![d1, d2])
        .expect("Fox identity makes this a complex")
        .with_labels(labels)
        .expect("labels match ranks");
    PresentationComplex { presentation: p.clone(), hom: hom.clone(), complex }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::CoefficientMode;

    fn z5_hom(p: &FinitePresentation) -> GroupHom {
        let g = FiniteGroup::cyclic(5).into_arc();
        GroupHom::new(p.clone(), g, vec![1]).unwrap()
    }

    #[test]
    fn derivatives_by_hand() {
        let z = RingSpec::Integers;
        let p = FinitePresentation::parse(&["x", "y"], &[]).unwrap();
        let g = FiniteGroup::builtin("S3").unwrap().into_arc();
        let (s, c) = (g.symbol("s").unwrap(), g.symbol("c").unwrap());
        let hom = GroupHom::new(p.clone(), g.clone(), vec![s, c]).unwrap();
        let w = Word::parse("xyx^-1y^-1", p.generator_names()).unwrap();
        let d = fox_derivative(&w, 0, &hom, &z);
        let xyx = g.mul(g.mul(s, c), g.inv(s));
        let want = GroupRingElement::from_int_terms(&g, &z, &[(0, 1), (xyx, -1)]);
        assert_eq!(d, want);
        let y = Word::generator(1);
        assert!(fox_derivative(&y, 0, &hom, &z).is_zero());
        let x5 = Word::generator(0).pow(5);
        let q = FinitePresentation::parse(&["x"], &[]).unwrap();
        let h = z5_hom(&q);
        assert_eq!(fox_derivative(&x5, 0, &h, &z).to_string(), "1 + t + t^2 + t^3 + t^4");
        let xinv = Word::generator(0).inverse();
        assert_eq!(fox_derivative(&xinv, 0, &h, &z).to_string(), "-t^4");
    }

    #[test]
    fn cyclic_presentation_complex() {
        let z = RingSpec::Integers;
        let p = FinitePresentation::parse(&["x"], &["x^5"]).unwrap();
        let pc = build_presentation_complex(&p, &z5_hom(&p), &z);
        assert_eq!(pc.complex().boundary(2).to_strings(), vec![vec!["1 + t + t^2 + t^3 + t^4".to_string()]]);
        assert_eq!(pc.complex().boundary(1).to_strings(), vec![vec!["-1 + t".to_string()]]);
        let triv = GroupHom::trivial(p.clone(), FiniteGroup::trivial().into_arc());
        let pc = build_presentation_complex(&p, &triv, &z);
        assert_eq!(pc.complex().boundary(2).to_strings(), vec![vec!["5".to_string()]]);
        assert_eq!(pc.complex().boundary(1).to_strings(), vec![vec!["0".to_string()]]);
    }

    #[test]
    fn a5_presentation_exponent_sums() {
        let z = RingSpec::Integers;
        let p = FinitePresentation::parse(&["a", "b"], &["a^2", "b^3", "(ab)^5"]).unwrap();
        let triv = GroupHom::trivial(p.clone(), FiniteGroup::trivial().into_arc());
        let pc = build_presentation_complex(&p, &triv, &z);
        let want = [vec!["2", "0"], vec!["0", "3"], vec!["5", "5"]];
        assert_eq!(pc.complex().boundary(2).to_strings(), want.iter().map(|r| r.iter().map(|s| s.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
        let h = pc.complex().homology(&z, CoefficientMode::Trivial, 64).unwrap();
        assert_eq!(h.degree(1).description, "0");
        assert_eq!(h.degree(2).description, "Z");
    }

    #[test]
    fn spec_round_trip() {
        let p = FinitePresentation::parse(&["x"], &["x^5"]).unwrap();
        let pc = build_presentation_complex(&p, &z5_hom(&p), &RingSpec::Integers);
        let json = serde_json::to_string(&pc.to_spec()).unwrap();
        let back: PresentationComplexSpec = serde_json::from_str(&json).unwrap();
        let pc2 = PresentationComplex::from_spec(&back, &Config::default()).unwrap();
        assert_eq!(pc2.complex().ranks(), pc.complex().ranks());
    }
}
