use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chains::{mapping_cone, BasedChainComplex, ChainMap, CoefficientMode, ComplexSpec};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::foxcw::PresentationComplex;
use crate::grouprings::{same_group, GroupRingMatrix};
use crate::groups::{is_perfect, FiniteGroup, FinitePresentation, GroupHom, GroupSpec, PresentationSpec, Word};
use crate::plusconstruction::seed_closure;
use crate::ring::RingSpec;
use crate::torsion::{compose, torsion_of_pair, TorsionClass};

/// How a chain map sits inside its target.
#[derive(Debug, Clone)]
pub(crate) enum InclusionKind {
    /// Basis elements go to distinct basis elements.
    Based,
    /// Every degree is an invertible square matrix; the inverses.
    Rebasing(Vec<GroupRingMatrix>),
    /// Neither; handled through the mapping cone.
    General,
}

pub(crate) fn inclusion_kind(f: &ChainMap) -> InclusionKind {
    if f.basis_inclusion().is_some() {
        return InclusionKind::Based;
    }
    let top = f.source().top_degree().max(f.target().top_degree());
    let mut inverses = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let m = f.map(d);
        match m.is_square().then(|| m.inverse()) {
            Some(Ok(inv)) => inverses.push(inv),
            _ => return InclusionKind::General,
        }
    }
    InclusionKind::Rebasing(inverses)
}

/// Whether the relative complex of `f` is acyclic over `Z[G]`.
pub(crate) fn is_equivalence(f: &ChainMap, cfg: &Config) -> Result<bool> {
    let z = RingSpec::Integers;
    match inclusion_kind(f) {
        InclusionKind::Based => f.quotient_complex()?.is_acyclic(&z, CoefficientMode::Regular, cfg.bit_bound),
        InclusionKind::Rebasing(_) => Ok(true),
        InclusionKind::General => mapping_cone(f)?.is_acyclic(&z, CoefficientMode::Regular, cfg.bit_bound),
    }
}

/// Torsion of the pair `(target, source)` along `f`.
///
/// A based subcomplex uses the quotient. A degreewise isomorphism gives
/// `Σ (-1)^d [f_d]`, the value the cone of `f` has under the two-term
/// convention of [`torsion_of_pair`]. Anything else goes through the cone.
pub fn torsion_of_inclusion(f: &ChainMap, parity: i64, cfg: &Config) -> Result<TorsionClass> {
    let g = f.target().group().clone();
    match inclusion_kind(f) {
        InclusionKind::Based => torsion_of_pair(&f.quotient_complex()?, parity, cfg),
        InclusionKind::Rebasing(inverses) => {
            let mut acc: Option<TorsionClass> = None;
            for (d, inv) in inverses.into_iter().enumerate() {
                let m = f.map(d);
                if m.is_identity() {
                    continue;
                }
                let t = TorsionClass::with_inverse(m, inv, parity)?;
                let t = if d % 2 == 1 { t.negate() } else { t };
                acc = Some(match acc {
                    None => t,
                    Some(a) => compose(&a, &t)?,
                });
            }
            Ok(strip_identity_tail(acc.unwrap_or_else(|| TorsionClass::trivial(&g, 1, parity))))
        }
        InclusionKind::General => torsion_of_pair(&mapping_cone(f)?, parity, cfg),
    }
}

/// Drops trailing `1 ⊕` blocks left by padding.
pub(crate) fn strip_identity_tail(t: TorsionClass) -> TorsionClass {
    let split_last = |m: &GroupRingMatrix| {
        let n = m.rows();
        m.get(n - 1, n - 1).is_one() && (0..n - 1).all(|k| m.get(n - 1, k).is_zero() && m.get(k, n - 1).is_zero())
    };
    let mut t = t;
    while t.size() > 1 && split_last(t.representative()) {
        let keep: Vec<usize> = (0..t.size() - 1).collect();
        let rep = t.representative().select_rows(&keep).select_cols(&keep);
        let inv = t.inverse().select_rows(&keep).select_cols(&keep);
        t = TorsionClass::with_inverse(rep, inv, t.parity() as i64).expect("a split block leaves an inverse pair");
    }
    t
}

/// Chain model of a cobordism `(W; M, N)` over `Z[G]`, `G = π₁(M)/P`.
#[derive(Debug, Clone)]
pub struct ChainCobordismModel {
    incl_m: ChainMap,
    incl_n: ChainMap,
    alpha: GroupHom,
    seeds: Vec<Word>,
    parity: u8,
}

impl ChainCobordismModel {
    /// `alpha` maps the presentation of `π₁(M)` onto `G`; `seeds` normally
    /// generate its kernel.
    pub fn new(incl_m: ChainMap, incl_n: ChainMap, alpha: GroupHom, seeds: Vec<Word>, parity: i64) -> Result<Self> {
        if incl_m.target() != incl_n.target() {
            return Err(Error::InvalidInput("the two inclusions have different targets".into()));
        }
        let w = incl_m.target();
        if *w.ring() != RingSpec::Integers {
            return Err(Error::MixedRings);
        }
        if !same_group(w.group(), alpha.target()) {
            return Err(Error::MixedGroups);
        }
        for (side, f) in [("M", &incl_m), ("N", &incl_n)] {
            if matches!(inclusion_kind(f), InclusionKind::General) {
                return Err(Error::InvalidInput(format!("{side} -> W is neither a based inclusion nor a rebasing")));
            }
        }
        let p = alpha.source();
        for s in &seeds {
            if s.max_generator().is_some_and(|i| i >= p.generator_count()) {
                return Err(Error::InvalidInput("seed uses an unknown generator".into()));
            }
            if alpha.eval(s) != 0 {
                return Err(Error::InvalidInput(format!("seed {} does not map to 1 in G", s.display(p.generator_names()))));
            }
        }
        Ok(ChainCobordismModel { incl_m, incl_n, alpha, seeds, parity: parity.rem_euclid(2) as u8 })
    }

    /// `W = M = N` with identity inclusions and `P` trivial.
    pub fn product(x: &PresentationComplex, parity: i64) -> Result<Self> {
        let c = x.complex().change_ring(&RingSpec::Integers)?;
        let id = ChainMap::identity(&c);
        Self::new(id.clone(), id, x.hom().clone(), Vec::new(), parity)
    }

    pub fn m_complex(&self) -> &BasedChainComplex {
        self.incl_m.source()
    }

    pub fn w_complex(&self) -> &BasedChainComplex {
        self.incl_m.target()
    }

    pub fn n_complex(&self) -> &BasedChainComplex {
        self.incl_n.source()
    }

    pub fn incl_m(&self) -> &ChainMap {
        &self.incl_m
    }

    pub fn incl_n(&self) -> &ChainMap {
        &self.incl_n
    }

    pub fn alpha(&self) -> &GroupHom {
        &self.alpha
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.alpha.target()
    }

    pub fn seeds(&self) -> &[Word] {
        &self.seeds
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn seed_strings(&self) -> Vec<String> {
        let names = self.alpha.source().generator_names();
        self.seeds.iter().map(|s| s.display(names).to_string()).collect()
    }

    pub fn to_spec(&self) -> CobordismModelSpec {
        let maps = |f: &ChainMap| (0..=f.source().top_degree().max(f.target().top_degree())).map(|d| f.map(d).to_strings()).collect();
        CobordismModelSpec {
            group: GroupSpec::of(self.group()),
            presentation: self.alpha.source().to_spec(),
            images: self.alpha.images().to_vec(),
            seeds: self.seed_strings(),
            parity: self.parity,
            m_complex: self.m_complex().to_spec(),
            w_complex: self.w_complex().to_spec(),
            n_complex: self.n_complex().to_spec(),
            incl_m: maps(&self.incl_m),
            incl_n: maps(&self.incl_n),
        }
    }

    pub fn from_spec(spec: &CobordismModelSpec, cfg: &Config) -> Result<Self> {
        let g = spec.group.build(cfg.exhaustive_check_bound)?.into_arc();
        let p = FinitePresentation::from_spec(&spec.presentation)?;
        let alpha = GroupHom::new(p.clone(), g.clone(), spec.images.clone())?;
        let seeds = spec.seeds.iter().map(|s| Word::parse(s, p.generator_names())).collect::<Result<Vec<_>>>()?;
        let complex = |c: &ComplexSpec| -> Result<BasedChainComplex> {
            let c = BasedChainComplex::from_spec(c, cfg.exhaustive_check_bound)?;
            if !c.is_equivariant() || !same_group(c.group(), &g) {
                return Err(Error::MixedGroups);
            }
            Ok(c)
        };
        let (m, w, n) = (complex(&spec.m_complex)?, complex(&spec.w_complex)?, complex(&spec.n_complex)?);
        let map = |src: &BasedChainComplex, rows: &[Vec<Vec<String>>]| -> Result<ChainMap> {
            let mats = rows
                .iter()
                .enumerate()
                .map(|(d, r)| parse_block(&g, r, src.rank(d), w.rank(d)))
                .collect::<Result<Vec<_>>>()?;
            ChainMap::new(src.clone(), w.clone(), mats)
        };
        let incl_m = map(&m, &spec.incl_m)?;
        let incl_n = map(&n, &spec.incl_n)?;
        Self::new(incl_m, incl_n, alpha, seeds, spec.parity as i64)
    }
}

fn parse_block(g: &Arc<FiniteGroup>, rows: &[Vec<String>], r: usize, c: usize) -> Result<GroupRingMatrix> {
    let m = if r == 0 || c == 0 {
        GroupRingMatrix::zeros(g, &RingSpec::Integers, r, c)
    } else {
        GroupRingMatrix::parse(g, &RingSpec::Integers, rows)?
    };
    if m.rows() != r || m.cols() != c {
        return Err(Error::InvalidInput(format!("map block is {}x{}, expected {r}x{c}", m.rows(), m.cols())));
    }
    Ok(m)
}

/// JSON form of a model. `incl_m[d]` and `incl_n[d]` are the degree-`d`
/// matrices of the inclusions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CobordismModelSpec {
    pub group: GroupSpec,
    pub presentation: PresentationSpec,
    pub images: Vec<usize>,
    #[serde(default)]
    pub seeds: Vec<String>,
    #[serde(default)]
    pub parity: u8,
    pub m_complex: ComplexSpec,
    pub w_complex: ComplexSpec,
    pub n_complex: ComplexSpec,
    pub incl_m: Vec<Vec<Vec<String>>>,
    pub incl_n: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OneSidedReport {
    pub holds: bool,
    /// `N -> W` is a `Z[G]`-homology equivalence.
    pub n_side_equivalence: bool,
    /// `M -> W` is a `Z[G]`-homology equivalence.
    pub m_side_equivalence: bool,
    /// `None` when `π₁(M)` could not be enumerated.
    pub perfect: Option<bool>,
    pub p_order: Option<usize>,
    pub pi1_order: Option<usize>,
    pub diagnostics: Vec<String>,
}

pub fn verify_one_sided_h(m: &ChainCobordismModel, cfg: &Config) -> Result<OneSidedReport> {
    let mut diagnostics = Vec::new();
    let n_side = is_equivalence(&m.incl_n, cfg)?;
    if !n_side {
        diagnostics.push("N -> W is not a homology equivalence over Z[G]".to_string());
    }
    let m_side = is_equivalence(&m.incl_m, cfg)?;
    if !m_side {
        diagnostics.push("M -> W is not a homology equivalence over Z[G]".to_string());
    }
    let (perfect, p_order, pi1_order) = match seed_closure(m.alpha.source(), &m.seeds, cfg)? {
        Some((pi, p)) => {
            let ok = is_perfect(&p);
            if !ok {
                diagnostics.push(format!("normal closure of the seeds (order {}) is not perfect", p.order()));
            }
            if pi.order() / p.order() != m.group().order() {
                diagnostics.push(format!(
                    "pi1(M)/P has order {}, but G has order {}",
                    pi.order() / p.order(),
                    m.group().order()
                ));
            }
            (Some(ok), Some(p.order()), Some(pi.order()))
        }
        None => {
            diagnostics.push("pi1(M) not enumerated within coset_limit; perfection unchecked".to_string());
            (None, None, None)
        }
    };
    let quotient_ok = pi1_order.zip(p_order).is_none_or(|(a, b)| a / b == m.group().order());
    let holds = n_side && m_side && perfect != Some(false) && quotient_ok;
    Ok(OneSidedReport { holds, n_side_equivalence: n_side, m_side_equivalence: m_side, perfect, p_order, pi1_order, diagnostics })
}
