use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::bar::BarComplexSlice;
use crate::chains::{int_homology, CoefficientMode};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::groups::{sylow, AbelianQuotient, FiniteGroup, GroupHom, RealizationHom};
use crate::linalg::lattice::{describe_group, kernel_basis, Subquotient};
use crate::linalg::modp::{Echelon, SparseRank, SparseRankF2};
use crate::linalg::IntMatrix;
use crate::ring::{prime_factors, RingSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum H2Method {
    Trivial,
    DenseSnf,
    MultiPrime,
}

/// `H_2(G; R)`: free rank (dimension over a prime field) and torsion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H2Report {
    pub ring: RingSpec,
    pub rank: usize,
    #[serde(serialize_with = "crate::serde_int::vec")]
    pub torsion: Vec<BigInt>,
    pub description: String,
    /// Set when only the number of cyclic summands of some p-part is known.
    pub partial: bool,
    pub method: H2Method,
    pub notes: Vec<String>,
}

impl H2Report {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group when finite (`None` for a free part).
    pub fn order(&self) -> Option<BigInt> {
        (self.rank == 0).then(|| self.torsion.iter().fold(BigInt::one(), |a, b| a * b))
    }

    fn zero(ring: &RingSpec, method: H2Method) -> Self {
        H2Report { ring: ring.clone(), rank: 0, torsion: Vec::new(), description: "0".into(), partial: false, method, notes: Vec::new() }
    }
}

fn check_budget(g: &FiniteGroup, cfg: &Config) -> Result<usize> {
    let m = g.order() - 1;
    let cols = m.checked_pow(3).unwrap_or(usize::MAX);
    if cols > cfg.bar_column_budget {
        return Err(Error::BudgetExceeded(format!(
            "normalized bar complex of a group of order {} has {cols} degree-3 tuples, budget {}",
            g.order(),
            cfg.bar_column_budget
        )));
    }
    Ok(cols)
}

fn dense_fits(g: &FiniteGroup, cfg: &Config) -> bool {
    (g.order() - 1).saturating_pow(3) <= cfg.dense_snf_column_budget
}

/// The Schur multiplier with coefficients in `ring`.
///
/// Small groups use a dense Smith form of the bar slice. Larger ones use
/// exact ranks over F_p for each p dividing |G|, with the p-part bounded by
/// a Sylow subgroup through transfer: if `H_2(P)` has exponent p then so
/// does the p-part of `H_2(G)`, and its number of summands is
/// `dim H_2(G;F_p) - t_p(H_1(G))`.
pub fn h2_group(g: &Arc<FiniteGroup>, ring: &RingSpec, cfg: &Config) -> Result<H2Report> {
    if g.order() == 1 {
        return Ok(H2Report::zero(ring, H2Method::Trivial));
    }
    check_budget(g, cfg)?;
    if dense_fits(g, cfg) {
        return dense_h2(g, ring, cfg);
    }
    if let RingSpec::ModP(p) = ring {
        let dim = dim_h2_mod_p(g, *p);
        return Ok(H2Report {
            ring: ring.clone(),
            rank: dim,
            torsion: Vec::new(),
            description: describe_group(dim, &[], ring),
            partial: false,
            method: H2Method::MultiPrime,
            notes: vec![format!("sparse rank over F_{p}")],
        });
    }
    let h1 = AbelianQuotient::of(g)?;
    let mut elementary: Vec<(u64, usize)> = Vec::new();
    let mut partial = false;
    let mut notes = Vec::new();
    for p in prime_factors(g.order() as u64) {
        if let RingSpec::Localized(s) = ring {
            if s.contains(&p) {
                continue;
            }
        }
        let syl = sylow(g, p as usize);
        let sylow_h2 = if syl.order() < g.order() {
            let (pg, _) = syl.realize();
            Some(h2_group(&pg, &RingSpec::Integers, cfg)?)
        } else {
            None
        };
        if sylow_h2.as_ref().is_some_and(|h| h.is_zero() && !h.partial) {
            notes.push(format!("p={p}: Sylow subgroup has trivial multiplier"));
            continue;
        }
        let dim = dim_h2_mod_p(g, p);
        let t_p = h1.factors().iter().filter(|&&d| d % p == 0).count();
        let count = dim - t_p;
        if count == 0 {
            notes.push(format!("p={p}: dim H_2(G;F_{p}) = {dim} equals t_p(H_1)"));
            continue;
        }
        let exponent_p = sylow_h2
            .as_ref()
            .is_some_and(|h| !h.partial && h.torsion.iter().all(|t| *t == BigInt::from(p)));
        if exponent_p {
            notes.push(format!("p={p}: {count} summand(s) of order {p}, exponent bounded by the Sylow multiplier"));
        } else {
            partial = true;
            notes.push(format!("p={p}: {count} cyclic summand(s) of p-power order, exponents not determined"));
        }
        elementary.push((p, count));
    }
    let torsion = invariant_from_elementary(&elementary);
    let mut description = describe_group(0, &torsion, ring);
    if partial {
        description = format!("{description} (partial: orders are lower bounds)");
    }
    Ok(H2Report { ring: ring.clone(), rank: 0, torsion, description, partial, method: H2Method::MultiPrime, notes })
}

/// Invariant factors from `count` copies of `Z/p` for each listed prime.
fn invariant_from_elementary(parts: &[(u64, usize)]) -> Vec<BigInt> {
    let k = parts.iter().map(|&(_, c)| c).max().unwrap_or(0);
    (0..k)
        .map(|i| parts.iter().filter(|&&(_, c)| c >= k - i).fold(BigInt::one(), |acc, &(p, _)| acc * BigInt::from(p)))
        .collect()
}

fn dense_h2(g: &Arc<FiniteGroup>, ring: &RingSpec, cfg: &Config) -> Result<H2Report> {
    let bar = BarComplexSlice::new(g);
    let m = g.order() - 1;
    let ranks = [1, m, m * m, m * m * m];
    let mats = [IntMatrix::zeros(1, 0), IntMatrix::zeros(m, 1), bar.boundary2(), bar.boundary3()];
    let h = int_homology(&ranks, &mats, ring, CoefficientMode::Trivial, cfg.bit_bound)?.degree(2);
    Ok(H2Report {
        ring: ring.clone(),
        rank: h.rank,
        torsion: h.torsion.clone(),
        description: h.description,
        partial: false,
        method: H2Method::DenseSnf,
        notes: Vec::new(),
    })
}

/// `dim H_2(G; F_p)` from sparse ranks of the bar boundaries.
pub fn dim_h2_mod_p(g: &Arc<FiniteGroup>, p: u64) -> usize {
    let bar = BarComplexSlice::new(g);
    let (r2, r3) = if p == 2 {
        let mut a = SparseRankF2::new(bar.rank(1));
        for i in 0..bar.rank(2) {
            a.push(&bar.boundary2_row(i));
        }
        let mut b = SparseRankF2::new(bar.rank(2));
        for i in 0..bar.rank(3) {
            b.push(&bar.boundary3_row(i));
        }
        (a.rank(), b.rank())
    } else {
        let mut a = SparseRank::new(bar.rank(1), p);
        for i in 0..bar.rank(2) {
            a.push(&bar.boundary2_row(i));
        }
        let mut b = SparseRank::new(bar.rank(2), p);
        for i in 0..bar.rank(3) {
            b.push(&bar.boundary3_row(i));
        }
        (a.rank(), b.rank())
    };
    bar.rank(2) - r2 - r3
}

/// The map on `H_2` induced by a homomorphism of finite groups.
#[derive(Debug, Clone, Serialize)]
pub struct InducedH2 {
    pub source: H2Report,
    pub target: H2Report,
    /// Images of the source summand generators in target summand
    /// coordinates (rows), when computed.
    #[serde(serialize_with = "serialize_opt_matrix")]
    pub matrix: Option<Vec<Vec<BigInt>>>,
    pub epi: bool,
    pub iso: bool,
    pub reason: String,
}

fn serialize_opt_matrix<S: serde::Serializer>(m: &Option<Vec<Vec<BigInt>>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match m {
        Some(m) => crate::serde_int::matrix(m, s),
        None => s.serialize_none(),
    }
}

struct BarData {
    bar: BarComplexSlice,
    cycles: IntMatrix,
    boundaries: IntMatrix,
}

fn bar_data(g: &Arc<FiniteGroup>, cfg: &Config) -> Result<BarData> {
    if !dense_fits(g, cfg) {
        return Err(Error::BudgetExceeded(format!(
            "induced map needs explicit cycles for a group of order {} (dense budget {})",
            g.order(),
            cfg.dense_snf_column_budget
        )));
    }
    let bar = BarComplexSlice::new(g);
    let d2 = bar.boundary2();
    let cycles = if d2.cols() == 0 { IntMatrix::identity(d2.rows()) } else { kernel_basis(&d2, cfg.bit_bound)? };
    let boundaries = bar.boundary3();
    Ok(BarData { bar, cycles, boundaries })
}

fn push_rows(src: &BarData, tgt: &BarData, f: &RealizationHom, rows: &IntMatrix) -> IntMatrix {
    let map = |g: usize| f.apply(g);
    let mut out = IntMatrix::zeros(rows.rows(), tgt.bar.rank(2));
    for i in 0..rows.rows() {
        for j in 0..rows.cols() {
            let c = &rows[(i, j)];
            if c.is_zero() {
                continue;
            }
            if let Some(k) = src.bar.push2(&tgt.bar, &map, j) {
                out[(i, k)] += c;
            }
        }
    }
    out
}

pub fn h2_induced_map(f: &RealizationHom, ring: &RingSpec, cfg: &Config) -> Result<InducedH2> {
    let hs = h2_group(f.source(), ring, cfg)?;
    let ht = h2_group(f.target(), ring, cfg)?;
    if ht.is_zero() && !ht.partial {
        let iso = hs.is_zero();
        let n = hs.rank + hs.torsion.len();
        return Ok(InducedH2 { matrix: Some(vec![Vec::new(); n]), epi: true, iso, reason: "target multiplier is zero".into(), source: hs, target: ht });
    }
    let bijective = f.source().order() == f.target().order() && f.is_surjective();
    if bijective {
        let n = hs.rank + hs.torsion.len();
        let id = (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        let matrix = (f.map().iter().enumerate().all(|(i, &x)| i == x)).then_some(id);
        return Ok(InducedH2 { matrix, epi: true, iso: true, reason: "isomorphism of groups".into(), source: hs, target: ht });
    }
    let src = bar_data(f.source(), cfg)?;
    let tgt = bar_data(f.target(), cfg)?;
    if let RingSpec::ModP(p) = ring {
        let p = *p;
        // mod-p cycles include the Tor part that integral cycles miss
        let zs = Echelon::new(&crate::chains::reduce_rows(&src.bar.boundary2(), p), src.bar.rank(1), p).kernel;
        let zs = IntMatrix::from_row_vecs(src.bar.rank(2), zs.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect());
        let image = push_rows(&src, &tgt, f, &zs);
        let rank = |m: &IntMatrix| crate::linalg::modp::rank_mod_p(&crate::chains::reduce_rows(m, p), m.cols(), p);
        let zt = Echelon::new(&crate::chains::reduce_rows(&tgt.bar.boundary2(), p), tgt.bar.rank(1), p).kernel.len();
        let bt = rank(&tgt.boundaries);
        let spanned = rank(&tgt.boundaries.vstack(&image));
        let epi = spanned == zt;
        let iso = epi && hs.rank == ht.rank;
        return Ok(InducedH2 { matrix: None, epi, iso, reason: format!("ranks over F_{p}: image adds {} of {}", spanned - bt, zt - bt), source: hs, target: ht });
    }
    let image = push_rows(&src, &tgt, f, &src.cycles);
    let sq_t = Subquotient::new(&tgt.cycles, &tgt.boundaries, ring, cfg.bit_bound)?;
    let sq_s = Subquotient::new(&src.cycles, &src.boundaries, ring, cfg.bit_bound)?;
    let gens = IntMatrix::from_row_vecs(src.bar.rank(2), sq_s.generators());
    let pushed = push_rows(&src, &tgt, f, &gens);
    let matrix = (0..pushed.rows()).map(|i| sq_t.coordinates(pushed.row(i))).collect::<Result<Vec<_>>>()?;
    let coker = Subquotient::new(&tgt.cycles, &tgt.boundaries.vstack(&image), ring, cfg.bit_bound)?;
    let epi = coker.is_zero();
    let iso = epi && hs.rank == 0 && ht.rank == 0 && hs.order() == ht.order() || epi && hs == ht && hs.rank == 0;
    Ok(InducedH2 { matrix: Some(matrix), epi, iso, reason: format!("cokernel {}", coker.describe()), source: hs, target: ht })
}

/// Bar 2-chain of a word: `sum [prefix | letter]` with inverse letters
/// corrected so that its boundary is the sum of the letters' 1-chains.
pub fn word_chain(hom: &GroupHom, bar: &BarComplexSlice, w: &crate::groups::Word) -> Vec<(usize, i64)> {
    let g = hom.target();
    let mut out = Vec::new();
    let mut u = 0usize;
    for &(x, e) in w.letters() {
        let a = hom.images()[x];
        let v = if e > 0 { a } else { g.inv(a) };
        if u != 0 && v != 0 {
            out.push((bar.index2(u, v), 1));
        }
        if e < 0 && a != 0 {
            out.push((bar.index2(a, g.inv(a)), -1));
        }
        u = g.mul(u, v);
    }
    out
}

/// Whether `H_2(X) -> H_2(G)` is onto for the presentation complex `X` of
/// the source, mapped through `hom` (the Hopf surjection when `hom` is an
/// isomorphism onto `G`).
pub fn presentation_h2_epi(hom: &GroupHom, cfg: &Config) -> Result<bool> {
    let g = hom.target();
    let ht = h2_group(g, &RingSpec::Integers, cfg)?;
    if ht.is_zero() {
        return Ok(true);
    }
    let tgt = bar_data(g, cfg)?;
    let p = hom.source();
    let e = p.exponent_matrix();
    let z = if e.rows() == 0 { IntMatrix::zeros(0, 0) } else if e.cols() == 0 { IntMatrix::identity(e.rows()) } else { kernel_basis(&e, cfg.bit_bound)? };
    let mut chains = IntMatrix::zeros(p.relators().len(), tgt.bar.rank(2));
    for (r, w) in p.relators().iter().enumerate() {
        for (k, v) in word_chain(hom, &tgt.bar, w) {
            chains[(r, k)] += BigInt::from(v);
        }
    }
    let image = if z.rows() == 0 { IntMatrix::zeros(0, tgt.bar.rank(2)) } else { z.mul(&chains) };
    let coker = Subquotient::new(&tgt.cycles, &tgt.boundaries.vstack(&image), &RingSpec::Integers, cfg.bit_bound)?;
    Ok(coker.is_zero())
}
