use std::sync::Arc;

use super::finite::FiniteGroup;
use super::presentation::FinitePresentation;
use super::word::Word;
use crate::error::{Error, Result};

/// A homomorphism from a presented group to a finite realization, given by
/// generator images. Relators are checked at construction.
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: FinitePresentation,
    target: Arc<FiniteGroup>,
    images: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: FinitePresentation, target: Arc<FiniteGroup>, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.generator_count() {
            return Err(Error::NotAHomomorphism(format!(
                "{} images for {} generators",
                images.len(),
                source.generator_count()
            )));
        }
        if images.iter().any(|&g| g >= target.order()) {
            return Err(Error::NotAHomomorphism("image index out of range".into()));
        }
        let hom = GroupHom { source, target, images };
        for (i, r) in hom.source.relators().iter().enumerate() {
            if hom.eval(r) != 0 {
                return Err(Error::NotAHomomorphism(format!(
                    "relator {} ({}) does not map to the identity",
                    i,
                    r.display(hom.source.generator_names())
                )));
            }
        }
        Ok(hom)
    }

    /// The map sending every generator to the identity.
    pub fn trivial(source: FinitePresentation, target: Arc<FiniteGroup>) -> Self {
        let images = vec![0; source.generator_count()];
        GroupHom { source, target, images }
    }

    pub fn source(&self) -> &FinitePresentation {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn eval(&self, w: &Word) -> usize {
        let g = &self.target;
        w.letters().iter().fold(0, |acc, &(x, e)| {
            let y = if e > 0 { self.images[x] } else { g.inv(self.images[x]) };
            g.mul(acc, y)
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.target.closure_flags(&self.images).iter().all(|&b| b)
    }

    /// Composition with a homomorphism of realizations.
    pub fn then(&self, f: &RealizationHom) -> Result<GroupHom> {
        if !Arc::ptr_eq(&self.target, &f.source) && *self.target != *f.source {
            return Err(Error::MixedGroups);
        }
        let images = self.images.iter().map(|&g| f.apply(g)).collect();
        GroupHom::new(self.source.clone(), f.target.clone(), images)
    }
}

/// A homomorphism between finite realizations, stored as its full element
/// map.
#[derive(Debug, Clone)]
pub struct RealizationHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl RealizationHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        let n = source.order();
        if map.len() != n || map.iter().any(|&x| x >= target.order()) {
            return Err(Error::NotAHomomorphism("element map has wrong shape".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::NotAHomomorphism(format!("f({a}*{b}) != f({a})*f({b})")));
                }
            }
        }
        Ok(RealizationHom { source, target, map })
    }

    /// Extends generator images to the whole source by breadth-first search
    /// and checks the result.
    pub fn from_generator_images(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        gens: &[usize],
        images: &[usize],
    ) -> Result<Self> {
        let n = source.order();
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&g, &h) in gens.iter().zip(images) {
                let y = source.mul(x, g);
                let fy = target.mul(map[x], h);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return Err(Error::NotAHomomorphism("generator images are inconsistent".into()));
                }
            }
        }
        if map.contains(&usize::MAX) {
            return Err(Error::NotAHomomorphism("generators do not generate the source".into()));
        }
        Self::new(source, target, map)
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Self {
        let map = (0..g.order()).collect();
        RealizationHom { source: g.clone(), target: g, map }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn compose(&self, next: &RealizationHom) -> Result<RealizationHom> {
        if *self.target != *next.source {
            return Err(Error::MixedGroups);
        }
        let map = self.map.iter().map(|&g| next.map[g]).collect();
        Ok(RealizationHom { source: self.source.clone(), target: next.target.clone(), map })
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &x in &self.map {
            hit[x] = true;
        }
        hit.into_iter().all(|b| b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relators_are_checked() {
        let p = FinitePresentation::parse(&["x"], &["x^5"]).unwrap();
        let g = FiniteGroup::cyclic(5).into_arc();
        assert!(GroupHom::new(p.clone(), g.clone(), vec![1]).is_ok());
        let h = FiniteGroup::cyclic(3).into_arc();
        assert!(matches!(GroupHom::new(p, h, vec![1]), Err(Error::NotAHomomorphism(_))));
    }

    #[test]
    fn a5_presentation_maps_onto_a5() {
        let g = FiniteGroup::alternating(5).into_arc();
        let p = FinitePresentation::parse(&["a", "b"], &["a^2", "b^3", "(a b)^5"]).unwrap();
        // find an involution and a 3-cycle with product of order 5
        let (a, b) = (1..60)
            .flat_map(|a| (1..60).map(move |b| (a, b)))
            .find(|&(a, b)| {
                g.element_order(a) == 2 && g.element_order(b) == 3 && g.element_order(g.mul(a, b)) == 5
            })
            .unwrap();
        let hom = GroupHom::new(p, g, vec![a, b]).unwrap();
        assert!(hom.is_surjective());
    }

    #[test]
    fn projection_from_product() {
        let a = FiniteGroup::cyclic(2).into_arc();
        let ab = FiniteGroup::direct_product(&a, &a).into_arc();
        let f = RealizationHom::new(ab.clone(), a.clone(), (0..4).map(|x| x / 2).collect()).unwrap();
        assert!(f.is_surjective());
        assert!(RealizationHom::new(ab, a, vec![0, 1, 1, 1]).is_err());
    }
}
