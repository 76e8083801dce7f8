use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::class::TorsionClass;
use crate::chains::{BasedChainComplex, CoefficientMode};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::grouprings::{GroupRingElement, GroupRingMatrix};
use crate::linalg::lattice::solve_left_int;
use crate::ring::RingSpec;

/// Torsion of an acyclic based complex over `Z[G]`, as the class of
/// `∂ + s : C_odd -> C_even` for a chain contraction `s`.
///
/// A complex in degrees `d, d-1` with `d` odd gives its boundary matrix
/// itself (the inverse when `d` is even). Longer complexes are first
/// shortened by cancelling pairs of cells joined by a `±g` entry.
pub fn torsion_of_pair(rel: &BasedChainComplex, parity: i64, cfg: &Config) -> Result<TorsionClass> {
    if *rel.ring() != RingSpec::Integers {
        return Err(Error::MixedRings);
    }
    if !rel.is_acyclic(&RingSpec::Integers, CoefficientMode::Regular, cfg.bit_bound)? {
        return Err(Error::NotAcyclic("complex has nonzero homology over Z[G]".into()));
    }
    let top = rel.top_degree();
    let mut ranks: Vec<usize> = rel.ranks().to_vec();
    let mut bd: Vec<GroupRingMatrix> = (0..=top).map(|d| rel.boundary(d)).collect();
    while let Some((d, i, j)) = find_split_one(&bd) {
        cancel(&mut ranks, &mut bd, d, i, j)?;
    }
    if ranks.iter().all(|&r| r == 0) {
        return Ok(TorsionClass::trivial(rel.group(), 1, parity));
    }
    if let Some(t) = two_term(&ranks, &bd, parity)? {
        return Ok(t);
    }
    while let Some((d, i, j)) = find_unit(&bd) {
        cancel(&mut ranks, &mut bd, d, i, j)?;
    }
    if ranks.iter().all(|&r| r == 0) {
        return Ok(TorsionClass::trivial(rel.group(), 1, parity));
    }
    if let Some(t) = two_term(&ranks, &bd, parity)? {
        return Ok(t);
    }
    TorsionClass::new(contraction_matrix(&ranks, &bd, cfg)?, parity)
}

fn two_term(ranks: &[usize], bd: &[GroupRingMatrix], parity: i64) -> Result<Option<TorsionClass>> {
    let live: Vec<usize> = (0..ranks.len()).filter(|&d| ranks[d] > 0).collect();
    match live[..] {
        [a, b] if b == a + 1 => {
            if ranks[a] != ranks[b] {
                return Err(Error::RankMismatch(format!("ranks {} and {} in degrees {a}, {b}", ranks[a], ranks[b])));
            }
            let t = TorsionClass::new(bd[b].clone(), parity)?;
            Ok(Some(if b % 2 == 1 { t } else { t.negate() }))
        }
        _ => Ok(None),
    }
}

/// A `1` entry alone in its row and column splits off `1 -> 1`; removing
/// it leaves every other entry untouched.
fn find_split_one(bd: &[GroupRingMatrix]) -> Option<(usize, usize, usize)> {
    for (d, m) in bd.iter().enumerate().skip(1) {
        for i in 0..m.rows() {
            let hits: Vec<usize> = (0..m.cols()).filter(|&j| !m.get(i, j).is_zero()).collect();
            if let [j] = hits[..] {
                if m.get(i, j).is_one() && (0..m.rows()).all(|l| l == i || m.get(l, j).is_zero()) {
                    return Some((d, i, j));
                }
            }
        }
    }
    None
}

fn find_unit(bd: &[GroupRingMatrix]) -> Option<(usize, usize, usize)> {
    for (d, m) in bd.iter().enumerate().skip(1) {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m.get(i, j).as_trivial_unit().is_some() {
                    return Some((d, i, j));
                }
            }
        }
    }
    None
}

/// Removes cell `i` of degree `d` and cell `j` of degree `d-1`, where
/// `∂_d[i][j] = ±g`, replacing `∂_d` by its Schur complement.
fn cancel(ranks: &mut [usize], bd: &mut [GroupRingMatrix], d: usize, i: usize, j: usize) -> Result<()> {
    let m = &bd[d];
    let (sign, g) = m.get(i, j).as_trivial_unit().expect("unit pivot");
    let grp = m.group().clone();
    let ring = m.ring().clone();
    let inv = GroupRingElement::monomial(&grp, &ring, grp.inv(g), BigRational::from_integer(BigInt::from(sign)));
    let keep_r: Vec<usize> = (0..m.rows()).filter(|&l| l != i).collect();
    let keep_c: Vec<usize> = (0..m.cols()).filter(|&k| k != j).collect();
    let mut out = GroupRingMatrix::zeros(&grp, &ring, keep_r.len(), keep_c.len());
    for (a, &l) in keep_r.iter().enumerate() {
        let f = m.get(l, j).checked_mul(&inv)?;
        for (b, &k) in keep_c.iter().enumerate() {
            let e = if f.is_zero() { m.get(l, k).clone() } else { m.get(l, k).checked_sub(&f.checked_mul(m.get(i, k))?)? };
            out.set(a, b, e);
        }
    }
    bd[d] = out;
    if d + 1 < bd.len() {
        let cols: Vec<usize> = (0..bd[d + 1].cols()).filter(|&k| k != i).collect();
        bd[d + 1] = bd[d + 1].select_cols(&cols);
    }
    if d >= 2 {
        let rows: Vec<usize> = (0..bd[d - 1].rows()).filter(|&k| k != j).collect();
        bd[d - 1] = bd[d - 1].select_rows(&rows);
    }
    ranks[d] -= 1;
    ranks[d - 1] -= 1;
    if d == 1 {
        bd[0] = GroupRingMatrix::zeros(&grp, &ring, ranks[0], 0);
    }
    Ok(())
}

/// `s_d` with `s_d ∂_{d+1} + ∂_d s_{d-1} = 1`, assembled into
/// `∂ + s : C_odd -> C_even`.
fn contraction_matrix(ranks: &[usize], bd: &[GroupRingMatrix], cfg: &Config) -> Result<GroupRingMatrix> {
    let top = ranks.len() - 1;
    let grp = bd[0].group().clone();
    let ring = RingSpec::Integers;
    let n = grp.order();
    let mut s: Vec<GroupRingMatrix> = Vec::with_capacity(top);
    for d in 0..top {
        let mut rhs = GroupRingMatrix::identity(&grp, &ring, ranks[d]);
        if d >= 1 {
            rhs = rhs.add(&bd[d].mul(&s[d - 1])?.neg())?;
        }
        let rho = bd[d + 1].regular_representation()?;
        let mut sd = GroupRingMatrix::zeros(&grp, &ring, ranks[d], ranks[d + 1]);
        for i in 0..ranks[d] {
            let mut b = Vec::with_capacity(ranks[d] * n);
            for e in rhs.row(i) {
                b.extend(e.to_dense_int()?);
            }
            let x = if b.iter().all(|v| v.is_zero()) {
                Some(vec![BigInt::zero(); rho.rows()])
            } else if rho.rows() == 0 {
                None
            } else {
                solve_left_int(&rho, &b, cfg.bit_bound)?
            };
            let x = x.ok_or_else(|| Error::NotAcyclic(format!("no contraction in degree {d}")))?;
            for j in 0..ranks[d + 1] {
                sd.set(i, j, GroupRingElement::from_dense(&grp, &ring, &x[j * n..(j + 1) * n]));
            }
        }
        s.push(sd);
    }
    let odd: Vec<usize> = (0..=top).filter(|d| d % 2 == 1).collect();
    let even: Vec<usize> = (0..=top).filter(|d| d % 2 == 0).collect();
    let offset = |list: &[usize], d: usize| list.iter().take_while(|&&x| x < d).map(|&x| ranks[x]).sum::<usize>();
    let rows: usize = odd.iter().map(|&d| ranks[d]).sum();
    let cols: usize = even.iter().map(|&d| ranks[d]).sum();
    if rows != cols {
        return Err(Error::RankMismatch(format!("odd rank {rows}, even rank {cols}")));
    }
    let mut m = GroupRingMatrix::zeros(&grp, &ring, rows, cols);
    for &d in &odd {
        let r0 = offset(&odd, d);
        m.set_block(r0, offset(&even, d - 1), &bd[d]);
        if d < top {
            m.set_block(r0, offset(&even, d + 1), &s[d]);
        }
    }
    Ok(m)
}
