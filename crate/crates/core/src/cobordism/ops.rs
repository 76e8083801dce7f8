use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::model::{torsion_of_inclusion, verify_one_sided_h, ChainCobordismModel};
use crate::chains::{BasedChainComplex, ChainMap};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::foxcw::PresentationComplex;
use crate::grouprings::{same_group, GroupRingElement, GroupRingMatrix};
use crate::groups::{enumerate_perfect_normal_subgroups, quotient, AbelianQuotient, FiniteGroup, Word};
use crate::plusconstruction::plus_with_torsion;
use crate::ring::RingSpec;
use crate::torsion::{compose, dual_sign, invariant, TorsionClass, TorsionInvariant};

#[derive(Debug, Clone, Serialize)]
pub struct CobordismClass {
    /// Normal generators of `P`.
    pub seeds: Vec<String>,
    pub p_order: Option<usize>,
    pub group_order: usize,
    /// `τ(W, N)`.
    pub torsion: TorsionClass,
    /// `None` when the representative is too large for the determinant.
    pub invariant: Option<TorsionInvariant>,
}

fn invariant_if_small(t: &TorsionClass) -> Result<Option<TorsionInvariant>> {
    match invariant(t) {
        Ok(i) => Ok(Some(i)),
        Err(Error::BudgetExceeded(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Exact agreement of the abelianized determinant and every `|χ(det)|²`.
pub fn same_invariant(a: &TorsionInvariant, b: &TorsionInvariant) -> bool {
    a.det_abelianized == b.det_abelianized
        && a.characters.len() == b.characters.len()
        && a.characters.iter().zip(&b.characters).all(|(x, y)| x.character == y.character && x.abs_squared == y.abs_squared)
}

pub fn classify(m: &ChainCobordismModel, cfg: &Config) -> Result<CobordismClass> {
    let check = verify_one_sided_h(m, cfg)?;
    if !check.holds {
        return Err(Error::NotOneSidedH(check.diagnostics.join("; ")));
    }
    let torsion = torsion_of_inclusion(m.incl_n(), m.parity() as i64, cfg)?;
    Ok(CobordismClass {
        seeds: m.seed_strings(),
        p_order: check.p_order,
        group_order: m.group().order(),
        invariant: invariant_if_small(&torsion)?,
        torsion,
    })
}

/// A model with `τ(W, N) = tau`: `W` is the plus construction of `X` along
/// the seeds with `τ(W, M) = (-1)^n τ̄`, and `N` is `W` rebased in degree 3.
pub fn realize(x: &PresentationComplex, seeds: &[Word], tau: &TorsionClass, cfg: &Config) -> Result<ChainCobordismModel> {
    if !same_group(x.group(), tau.group()) {
        return Err(Error::MixedGroups);
    }
    let parity = tau.parity() as i64;
    let m_side = dual_sign(tau);
    let plus = plus_with_torsion(x, seeds, m_side.representative(), parity, cfg)?;
    let w = plus.plus;
    let incl_m = ChainMap::prefix_inclusion(&plus.x, &w)?;
    // the rebasing in odd degree 3 contributes -[f_3], so f_3 carries τ⁻¹
    let r3 = w.rank(3);
    let pad = |m: &GroupRingMatrix| -> Result<GroupRingMatrix> {
        if m.rows() == r3 {
            Ok(m.clone())
        } else {
            m.block_diag(&GroupRingMatrix::identity(w.group(), &RingSpec::Integers, r3 - m.rows()))
        }
    };
    let (f3, f3_inv) = (pad(tau.inverse())?, pad(tau.representative())?);
    let n = rebased(&w, 3, &f3, &f3_inv)?;
    let maps = (0..=w.top_degree())
        .map(|d| if d == 3 { f3.clone() } else { GroupRingMatrix::identity(w.group(), &RingSpec::Integers, w.rank(d)) })
        .collect();
    let incl_n = ChainMap::new(n, w, maps)?;
    ChainCobordismModel::new(incl_m, incl_n, x.hom().clone(), seeds.to_vec(), parity)
}

/// `c` with the degree-`d` basis replaced by the rows of `b` (in `c`'s
/// basis); `b_inv` is the inverse of `b`.
fn rebased(c: &BasedChainComplex, d: usize, b: &GroupRingMatrix, b_inv: &GroupRingMatrix) -> Result<BasedChainComplex> {
    let top = c.top_degree();
    let mats = (1..=top)
        .map(|k| {
            if k == d {
                b.mul(&c.boundary(k))
            } else if k == d + 1 {
                c.boundary(k).mul(b_inv)
            } else {
                Ok(c.boundary(k))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = (0..=top)
        .map(|k| c.labels(k).iter().map(|l| if k == d { format!("{l}'") } else { l.clone() }).collect())
        .collect();
    BasedChainComplex::new(c.ring(), Some(c.group()), c.ranks().to_vec(), mats)?.with_labels(labels)
}

#[derive(Debug, Clone, Serialize)]
pub struct GlueReport {
    /// Ranks of `X = W₁ ∪_M W₂`.
    pub ranks: Vec<usize>,
    /// `τ(X, N₁)`.
    pub torsion: TorsionClass,
    pub invariant: Option<TorsionInvariant>,
    /// `τ(W₁, N₁) + (-1)^n τ̄(W₂, N₂)`.
    pub expected: TorsionClass,
    pub expected_invariant: Option<TorsionInvariant>,
    /// `τ(W₁, N₁) + τ(W₂, M)`.
    pub additive: TorsionClass,
    /// `None` when an invariant was out of reach.
    pub additivity_holds: Option<bool>,
    pub formula_holds: Option<bool>,
}

/// Glues two models along their common `M` and reports `τ(X, N₁)`.
pub fn glue(m1: &ChainCobordismModel, m2: &ChainCobordismModel, cfg: &Config) -> Result<GlueReport> {
    if m1.m_complex() != m2.m_complex() || !same_group(m1.group(), m2.group()) || m1.parity() != m2.parity() {
        return Err(Error::MismatchedBase);
    }
    let (Some(inc1), Some(inc2)) = (m1.incl_m().basis_inclusion(), m2.incl_m().basis_inclusion()) else {
        return Err(Error::MismatchedBase);
    };
    let (w1, w2) = (m1.w_complex(), m2.w_complex());
    let g = m1.group().clone();
    let z = RingSpec::Integers;
    let top = w1.top_degree().max(w2.top_degree());
    let mrank = |d: usize| m1.m_complex().rank(d);
    // position in X of each cell of W₁ and W₂
    let positions = |w: &BasedChainComplex, inc: &[Vec<usize>], offset: &dyn Fn(usize) -> usize| -> Vec<Vec<usize>> {
        (0..=top)
            .map(|d| {
                let mut pos = vec![usize::MAX; w.rank(d)];
                let used = inc.get(d).cloned().unwrap_or_default();
                for (a, &j) in used.iter().enumerate() {
                    pos[j] = a;
                }
                let mut next = offset(d);
                for p in pos.iter_mut().filter(|p| **p == usize::MAX) {
                    *p = next;
                    next += 1;
                }
                pos
            })
            .collect()
    };
    let pos1 = positions(w1, &inc1, &|d| mrank(d));
    let pos2 = positions(w2, &inc2, &|d| w1.rank(d));
    let ranks: Vec<usize> = (0..=top).map(|d| w1.rank(d) + w2.rank(d) - mrank(d)).collect();
    let mut mats = Vec::with_capacity(top);
    let mut labels: Vec<Vec<String>> = ranks.iter().map(|&r| vec![String::new(); r]).collect();
    for (w, pos, tag) in [(w1, &pos1, "1"), (w2, &pos2, "2")] {
        for d in 0..=top {
            for j in 0..w.rank(d) {
                let l = &w.labels(d)[j];
                labels[d][pos[d][j]] = if pos[d][j] < mrank(d) { l.clone() } else { format!("{l}@{tag}") };
            }
        }
    }
    for d in 1..=top {
        let mut m = GroupRingMatrix::zeros(&g, &z, ranks[d], ranks[d - 1]);
        for (w, pos) in [(w1, &pos1), (w2, &pos2)] {
            let b = w.boundary(d);
            for j in 0..w.rank(d) {
                for k in 0..w.rank(d - 1) {
                    if !b.get(j, k).is_zero() {
                        m.set(pos[d][j], pos[d - 1][k], b.get(j, k).clone());
                    }
                }
            }
        }
        mats.push(m);
    }
    let x = BasedChainComplex::new(&z, Some(&g), ranks.clone(), mats)?.with_labels(labels)?;
    let embed = |w: &BasedChainComplex, pos: &[Vec<usize>]| -> Result<ChainMap> {
        let maps = (0..=top)
            .map(|d| {
                let mut m = GroupRingMatrix::zeros(&g, &z, w.rank(d), ranks[d]);
                for (j, &p) in pos[d].iter().enumerate() {
                    m.set(j, p, GroupRingElement::one(&g, &z));
                }
                m
            })
            .collect();
        ChainMap::new(w.clone(), x.clone(), maps)
    };
    let j1 = embed(w1, &pos1)?;
    let parity = m1.parity() as i64;
    let torsion = torsion_of_inclusion(&m1.incl_n().compose(&j1)?, parity, cfg)?;

    let tau1 = torsion_of_inclusion(m1.incl_n(), parity, cfg)?;
    let tau2 = torsion_of_inclusion(m2.incl_n(), parity, cfg)?;
    let expected = compose(&tau1, &dual_sign(&tau2))?;
    let additive = compose(&tau1, &torsion_of_inclusion(m2.incl_m(), parity, cfg)?)?;
    let inv = invariant_if_small(&torsion)?;
    let expected_invariant = invariant_if_small(&expected)?;
    let additive_invariant = invariant_if_small(&additive)?;
    let agree = |a: &Option<TorsionInvariant>, b: &Option<TorsionInvariant>| a.as_ref().zip(b.as_ref()).map(|(a, b)| same_invariant(a, b));
    Ok(GlueReport {
        ranks,
        additivity_holds: agree(&inv, &additive_invariant),
        formula_holds: agree(&inv, &expected_invariant),
        invariant: inv,
        torsion,
        expected,
        expected_invariant,
        additive,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassIndex {
    pub p_order: usize,
    /// Sorted element indices of `P` in the given realization.
    pub p_members: Vec<usize>,
    pub quotient_order: usize,
    pub quotient_abelianization: Vec<u64>,
    /// Rank of `Wh(π/P)`: real minus rational irreducible representations.
    pub whitehead_rank: usize,
    /// What the torsion invariants can see in `Wh(π/P)`.
    pub detection: String,
}

/// One index per perfect normal subgroup `P`, with what is known about
/// `Wh(π/P)`.
pub fn enumerate_classes(pi: &Arc<FiniteGroup>, cfg: &Config) -> Result<Vec<ClassIndex>> {
    let mut out = Vec::new();
    for p in enumerate_perfect_normal_subgroups(pi, cfg.enumeration_bound)? {
        let (q, _) = quotient(pi, &p)?;
        let ab = AbelianQuotient::of(&q)?;
        let factors = ab.factors().to_vec();
        let rank = whitehead_rank(&q);
        let ab_order: u64 = factors.iter().product();
        let detection = if rank == 0 {
            "Wh has rank 0; no torsion class is detected".to_string()
        } else if ab_order <= 1 {
            format!("Wh has rank {rank}; abelianization is trivial, only the regular determinant is available")
        } else {
            format!("Wh has rank {rank}; {} nontrivial characters of the abelianization", ab_order - 1)
        };
        out.push(ClassIndex {
            p_order: p.order(),
            p_members: p.members().to_vec(),
            quotient_order: q.order(),
            quotient_abelianization: factors,
            whitehead_rank: rank,
            detection,
        });
    }
    Ok(out)
}

/// `r - q`: classes of `{g, g⁻¹}` up to conjugacy minus conjugacy classes
/// of cyclic subgroups.
pub fn whitehead_rank(g: &FiniteGroup) -> usize {
    let classes = g.conjugacy_classes();
    let class_of = |x: usize| classes.iter().position(|c| c.binary_search(&x).is_ok()).expect("element in a class");
    let real: BTreeSet<(usize, usize)> = (0..g.order())
        .map(|x| {
            let (a, b) = (class_of(x), class_of(g.inv(x)));
            (a.min(b), a.max(b))
        })
        .collect();
    let cyclic: BTreeSet<Vec<usize>> = (0..g.order())
        .map(|x| {
            // a cyclic subgroup up to conjugacy: the set of classes of its generators
            let n = g.element_order(x);
            let mut gens: Vec<usize> = (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).map(|k| class_of(g.pow(x, k as i64))).collect();
            gens.sort_unstable();
            gens.dedup();
            gens
        })
        .collect();
    real.len() - cyclic.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::mapping_cone;
    use crate::foxcw::build_presentation_complex;
    use crate::groups::{FinitePresentation, GroupHom};
    use crate::torsion::torsion_of_pair;

    fn over_z5() -> PresentationComplex {
        let p = FinitePresentation::parse(&["t", "a", "b"], &["t^5", "[t,a]", "[t,b]", "a^2", "b^3", "(ab)^5"]).unwrap();
        let g = FiniteGroup::cyclic(5).into_arc();
        let hom = GroupHom::new(p.clone(), g, vec![1, 0, 0]).unwrap();
        build_presentation_complex(&p, &hom, &RingSpec::Integers)
    }

    fn seeds(x: &PresentationComplex, s: &[&str]) -> Vec<Word> {
        s.iter().map(|w| Word::parse(w, x.presentation().generator_names()).unwrap()).collect()
    }

    fn unit(g: &Arc<FiniteGroup>, parity: i64) -> TorsionClass {
        let m = GroupRingMatrix::parse(g, &RingSpec::Integers, &[vec!["t + t^4 - 1".into()]]).unwrap();
        TorsionClass::new(m, parity).unwrap()
    }

    #[test]
    fn product_model_is_trivial() {
        let cfg = Config::default();
        let p = FinitePresentation::parse(&["t"], &["t^5"]).unwrap();
        let hom = GroupHom::new(p.clone(), FiniteGroup::cyclic(5).into_arc(), vec![1]).unwrap();
        let x = build_presentation_complex(&p, &hom, &RingSpec::Integers);
        let m = ChainCobordismModel::product(&x, 0).unwrap();
        assert!(verify_one_sided_h(&m, &cfg).unwrap().holds);
        let c = classify(&m, &cfg).unwrap();
        assert!(c.torsion.representative().is_identity());
        assert_eq!(c.p_order, Some(1));
    }

    #[test]
    fn realize_then_classify_returns_the_unit() {
        let cfg = Config::default();
        let x = over_z5();
        for parity in [0, 1] {
            let tau = unit(x.group(), parity);
            let m = realize(&x, &seeds(&x, &["a", "b"]), &tau, &cfg).unwrap();
            let check = verify_one_sided_h(&m, &cfg).unwrap();
            assert!(check.holds, "{:?}", check.diagnostics);
            let c = classify(&m, &cfg).unwrap();
            assert_eq!(c.torsion.representative(), tau.representative());
            assert_eq!(c.p_order, Some(60));
            let mut mags = c.invariant.unwrap().magnitudes();
            mags.sort_by(f64::total_cmp);
            assert!((mags[0] - 0.381966011250105).abs() < 1e-9);
            assert!((mags[3] - 2.618033988749895).abs() < 1e-9);
        }
    }

    #[test]
    fn inclusion_torsion_matches_the_cone() {
        let cfg = Config::default();
        let x = over_z5();
        let tau = unit(x.group(), 0);
        let m = realize(&x, &seeds(&x, &["a", "b"]), &tau, &cfg).unwrap();
        for f in [m.incl_n(), m.incl_m()] {
            let direct = invariant(&torsion_of_inclusion(f, 0, &cfg).unwrap()).unwrap();
            let cone = invariant(&torsion_of_pair(&mapping_cone(f).unwrap(), 0, &cfg).unwrap()).unwrap();
            assert!(same_invariant(&direct, &cone));
        }
    }

    #[test]
    fn elementary_change_keeps_the_invariant() {
        let cfg = Config::default();
        let x = over_z5();
        let g = x.group().clone();
        let a = GroupRingMatrix::parse(&g, &RingSpec::Integers, &[vec!["t + t^4 - 1".into(), "0".into()], vec!["0".into(), "1".into()]]).unwrap();
        let e = GroupRingMatrix::parse(&g, &RingSpec::Integers, &[vec!["1".into(), "2 - t^3".into()], vec!["0".into(), "1".into()]]).unwrap();
        let s = seeds(&x, &["a", "b"]);
        let c1 = classify(&realize(&x, &s, &TorsionClass::new(a.clone(), 0).unwrap(), &cfg).unwrap(), &cfg).unwrap();
        let c2 = classify(&realize(&x, &s, &TorsionClass::new(a.mul(&e).unwrap(), 0).unwrap(), &cfg).unwrap(), &cfg).unwrap();
        assert!(same_invariant(&c1.invariant.unwrap(), &c2.invariant.unwrap()));
    }

    #[test]
    fn extra_cell_on_w_breaks_the_n_side() {
        let cfg = Config::default();
        let x = over_z5();
        let c = x.complex().clone();
        let g = x.group().clone();
        let w = c.attach(2, &GroupRingMatrix::zeros(&g, &RingSpec::Integers, 1, c.rank(1)), vec!["e".into()]).unwrap();
        let incl = ChainMap::prefix_inclusion(&c, &w).unwrap();
        let m = ChainCobordismModel::new(incl.clone(), incl, x.hom().clone(), Vec::new(), 0).unwrap();
        let r = verify_one_sided_h(&m, &cfg).unwrap();
        assert!(!r.holds && !r.n_side_equivalence);
        assert!(matches!(classify(&m, &cfg), Err(Error::NotOneSidedH(_))));
    }

    #[test]
    fn glue_follows_the_duality_formula() {
        let cfg = Config::default();
        let x = over_z5();
        let s = seeds(&x, &["a", "b"]);
        for parity in [0, 1] {
            let tau = unit(x.group(), parity);
            let m = realize(&x, &s, &tau, &cfg).unwrap();
            let r = glue(&m, &m, &cfg).unwrap();
            assert_eq!(r.formula_holds, Some(true));
            assert_eq!(r.additivity_holds, Some(true));
            let want = invariant(&crate::torsion::glue_formula(&tau, parity).unwrap()).unwrap();
            assert!(same_invariant(r.invariant.as_ref().unwrap(), &want));
            let triv = realize(&x, &s, &TorsionClass::trivial(x.group(), 1, parity), &cfg).unwrap();
            let r = glue(&triv, &m, &cfg).unwrap();
            let want = invariant(&dual_sign(&tau)).unwrap();
            assert!(same_invariant(r.invariant.as_ref().unwrap(), &want));
        }
        let p = ChainCobordismModel::product(&x, 0).unwrap();
        let r = glue(&p, &p, &cfg).unwrap();
        assert!(r.torsion.representative().is_identity());
        // the product over Z/5 x A5 -> Z/5 is not one-sided, glue does not check that
        assert!(!verify_one_sided_h(&p, &cfg).unwrap().holds);
    }

    #[test]
    fn glue_needs_a_common_base() {
        let cfg = Config::default();
        let x = over_z5();
        let m = realize(&x, &seeds(&x, &["a", "b"]), &unit(x.group(), 0), &cfg).unwrap();
        let p = ChainCobordismModel::product(&x, 1).unwrap();
        assert!(matches!(glue(&m, &p, &cfg), Err(Error::MismatchedBase)));
    }

    #[test]
    fn spec_round_trip() {
        let cfg = Config::default();
        let x = over_z5();
        let m = realize(&x, &seeds(&x, &["a", "b"]), &unit(x.group(), 0), &cfg).unwrap();
        let json = serde_json::to_string(&m.to_spec()).unwrap();
        let back = ChainCobordismModel::from_spec(&serde_json::from_str(&json).unwrap(), &cfg).unwrap();
        let c = classify(&back, &cfg).unwrap();
        assert_eq!(c.torsion.representative().to_strings(), vec![vec!["-1 + t + t^4".to_string()]]);
    }

    #[test]
    fn class_indices() {
        let cfg = Config::default();
        let z5 = enumerate_classes(&FiniteGroup::cyclic(5).into_arc(), &cfg).unwrap();
        assert_eq!(z5.len(), 1);
        assert_eq!((z5[0].p_order, z5[0].quotient_order, z5[0].whitehead_rank), (1, 5, 1));
        let a5 = enumerate_classes(&FiniteGroup::alternating(5).into_arc(), &cfg).unwrap();
        let idx: Vec<(usize, usize)> = a5.iter().map(|c| (c.p_order, c.quotient_order)).collect();
        assert_eq!(idx, vec![(1, 60), (60, 1)]);
        assert_eq!(a5[0].whitehead_rank, 1);
        let s3 = enumerate_classes(&FiniteGroup::symmetric(3).into_arc(), &cfg).unwrap();
        assert_eq!(s3.len(), 1);
        assert_eq!(s3[0].whitehead_rank, 0);
        let big = Config { enumeration_bound: 10, ..Config::default() };
        assert!(matches!(enumerate_classes(&FiniteGroup::alternating(5).into_arc(), &big), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn whitehead_ranks_of_small_groups() {
        // Bass: Z/n has rank floor(n/2) + 1 - d(n)
        for (n, r) in [(1, 0), (2, 0), (3, 0), (4, 0), (5, 1), (6, 0), (7, 2), (8, 1), (10, 2), (12, 1)] {
            assert_eq!(whitehead_rank(&FiniteGroup::cyclic(n)), r, "Z/{n}");
        }
        assert_eq!(whitehead_rank(&FiniteGroup::quaternion()), 0);
        assert_eq!(whitehead_rank(&FiniteGroup::dihedral(5)), 1);
    }
}
