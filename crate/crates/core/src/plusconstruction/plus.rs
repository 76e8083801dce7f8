use std::sync::Arc;

use serde::Serialize;

use crate::chains::{BasedChainComplex, ChainMap, CoefficientMode};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::foxcw::{attach_cells, build_presentation_complex, fox_row, kernel_lift_solve, AttachmentRecord, PresentationComplex};
use crate::grouprings::{same_group, GroupRingElement, GroupRingMatrix};
use crate::groups::{enumerate_cosets, is_perfect, normal_closure, presents, AbelianQuotient, FiniteGroup, FinitePresentation, Subgroup, Word};
use crate::ring::RingSpec;
use crate::torsion::{torsion_of_pair, TorsionClass};

#[derive(Debug, Clone, Serialize)]
pub struct PlusReport {
    /// Number of seed 2-cells `k` and total 2-cells `N`.
    pub seed_cells: usize,
    pub total_cells: usize,
    /// How perfection of `P` was established.
    pub perfection: String,
    pub relative_acyclic: bool,
    pub x_homology: Vec<String>,
    pub plus_homology: Vec<String>,
    pub homology_preserved: bool,
}

#[derive(Debug, Clone)]
pub struct PlusResult {
    pub x: BasedChainComplex,
    pub plus: BasedChainComplex,
    /// `X⁺ / X` over `Z[G]`, in degrees 2 and 3.
    pub relative: BasedChainComplex,
    /// The 3-cell boundaries, rows `(y, a_i)` of `C_2(X⁺)`.
    pub lifts: GroupRingMatrix,
    pub added_cells: Vec<AttachmentRecord>,
    pub torsion: TorsionClass,
    pub report: PlusReport,
}

/// A plus construction of `X` killing `P = ⟪seeds⟫` whose relative torsion
/// is represented by `a` (padded by an identity block to size `N`).
///
/// `X` carries the quotient map `π₁(X) -> G = π₁(X)/P`; the seeds must map
/// to 1 and normally generate its kernel.
pub fn plus_with_torsion(
    x: &PresentationComplex,
    seeds: &[Word],
    a: &GroupRingMatrix,
    parity: i64,
    cfg: &Config,
) -> Result<PlusResult> {
    let z = RingSpec::Integers;
    let hom = x.hom();
    let g = hom.target().clone();
    let p = x.presentation();
    for s in seeds {
        if s.max_generator().is_some_and(|i| i >= p.generator_count()) {
            return Err(Error::InvalidInput("seed uses an unknown generator".into()));
        }
        if hom.eval(s) != 0 {
            return Err(Error::InvalidInput(format!("seed {} does not map to 1 in G", s.display(p.generator_names()))));
        }
    }
    if !same_group(a.group(), &g) {
        return Err(Error::MixedGroups);
    }
    if !a.is_square() {
        return Err(Error::NotInvertible("torsion matrix is not square".into()));
    }
    TorsionClass::new(a.change_ring(&z)?, parity)?;
    let quotient = crate::groups::GroupHom::new(p.with_relators(seeds)?, g.clone(), hom.images().to_vec())?;
    if !presents(&quotient, cfg.coset_limit)? {
        return Err(Error::InvalidInput("the seeds do not normally generate the kernel of pi1(X) -> G".into()));
    }
    let perfection = check_perfect(p, seeds, cfg)?;

    let xc = build_presentation_complex(p, hom, &z).into_complex();
    let k = seeds.len();
    let big_n = k.max(a.rows());
    let mut two_cells: Vec<AttachmentRecord> = seeds
        .iter()
        .map(|s| AttachmentRecord::new(2, fox_row(s, hom, &z), format!("kill {}", s.display(p.generator_names()))))
        .collect();
    for i in k..big_n {
        two_cells.push(AttachmentRecord::new(2, vec![GroupRingElement::zero(&g, &z); p.generator_count()], format!("pad{}", i - k + 1)));
    }
    let y = attach_cells(&xc, &two_cells)?;
    let mut target = a.change_ring(&z)?;
    if big_n > a.rows() {
        target = target.block_diag(&GroupRingMatrix::identity(&g, &z, big_n - a.rows()))?;
    }
    let r_old = xc.rank(2);
    let lifts = kernel_lift_solve(&y, r_old, &target, cfg).map_err(|e| match e {
        Error::NotLiftable(m) => Error::NotPerfect(m),
        e => e,
    })?;
    let three_cells: Vec<AttachmentRecord> =
        (0..big_n).map(|i| AttachmentRecord::new(3, lifts.row(i).to_vec(), format!("D{}", i + 1))).collect();
    let plus = attach_cells(&y, &three_cells)?;
    let relative = ChainMap::prefix_inclusion(&xc, &plus)?.quotient_complex()?;
    let torsion = torsion_of_pair(&relative, parity, cfg)?;

    let hx = xc.homology(&z, CoefficientMode::Trivial, cfg.bit_bound)?;
    let hp = plus.homology(&z, CoefficientMode::Trivial, cfg.bit_bound)?;
    let describe = |h: &crate::chains::HomologyReport| (0..=3).map(|d| h.degree(d).description).collect::<Vec<_>>();
    let report = PlusReport {
        seed_cells: k,
        total_cells: big_n,
        perfection,
        relative_acyclic: true,
        x_homology: describe(&hx),
        plus_homology: describe(&hp),
        homology_preserved: hx.same_groups(&hp),
    };
    let mut added_cells = two_cells;
    added_cells.extend(three_cells);
    Ok(PlusResult { x: xc, plus, relative, lifts, added_cells, torsion, report })
}

/// `π₁` of the presentation and the normal closure of the seeds in it,
/// when coset enumeration finishes within `coset_limit`.
pub(crate) fn seed_closure(p: &FinitePresentation, seeds: &[Word], cfg: &Config) -> Result<Option<(Arc<FiniteGroup>, Subgroup)>> {
    let table = match enumerate_cosets(p.generator_count(), p.relators(), cfg.coset_limit) {
        Ok(t) => t,
        Err(Error::BudgetExceeded(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let (pi, gens) = table.realize(p.generator_names())?;
    let eval = |w: &Word| {
        w.letters().iter().fold(0, |acc, &(i, e)| pi.mul(acc, if e > 0 { gens[i] } else { pi.inv(gens[i]) }))
    };
    let images: Vec<usize> = seeds.iter().map(eval).collect();
    let n = normal_closure(&pi, &images);
    Ok(Some((pi, n)))
}

/// Decides perfection of `⟪seeds⟫` in the realized `π₁(X)` when it is
/// finite; otherwise leaves it to the lifting step.
pub(crate) fn check_perfect(p: &FinitePresentation, seeds: &[Word], cfg: &Config) -> Result<String> {
    let Some((pi, n)) = seed_closure(p, seeds, cfg)? else {
        return Ok("pi1(X) not enumerated; checked by lifting".into());
    };
    if !is_perfect(&n) {
        let (h, _) = n.realize();
        let ab = AbelianQuotient::of(&h)?;
        let desc: Vec<String> = ab.factors().iter().map(|d| format!("Z/{d}")).collect();
        return Err(Error::NotPerfect(format!(
            "normal closure of the seeds has order {} and abelianization {}",
            n.order(),
            desc.join(" + ")
        )));
    }
    Ok(format!("normal closure of order {} in pi1(X) of order {} is perfect", n.order(), pi.order()))
}
