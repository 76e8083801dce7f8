use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::class::TorsionClass;
use super::invariant::invariant;
use crate::config::Config;
use crate::error::Result;
use crate::grouprings::{GroupRingElement, GroupRingMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrivialityKind {
    Nontrivial,
    ReducedToTrivial,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrivialityVerdict {
    pub verdict: TrivialityKind,
    pub steps: usize,
    pub stabilization: usize,
    pub reason: String,
}

/// Sound nontriviality through characters, then a bounded search for
/// elementary operations reducing the matrix to a monomial one.
pub fn is_trivial_candidate(t: &TorsionClass, cfg: &Config) -> Result<TrivialityVerdict> {
    let inv = invariant(t)?;
    if inv.detects_nontrivial() {
        let reason = match inv.characters.iter().find(|c| !c.unimodular) {
            Some(c) => format!("character {:?} has |value| = {:.6}", c.character, c.magnitude),
            None => format!("abelianized determinant {} is not ±g", inv.det_abelianized),
        };
        return Ok(TrivialityVerdict { verdict: TrivialityKind::Nontrivial, steps: 0, stabilization: 0, reason });
    }
    let mut steps = 0;
    for extra in 0..=cfg.stabilization_cap {
        let mut m = t.representative().clone();
        if extra > 0 {
            m = m.block_diag(&GroupRingMatrix::identity(m.group(), m.ring(), extra))?;
        }
        let budget = cfg.triviality_search_steps.saturating_sub(steps);
        let (done, used) = reduce(m, budget)?;
        steps += used;
        if done {
            return Ok(TrivialityVerdict {
                verdict: TrivialityKind::ReducedToTrivial,
                steps,
                stabilization: extra,
                reason: "elementary operations reach a monomial matrix".into(),
            });
        }
        if steps >= cfg.triviality_search_steps {
            break;
        }
    }
    Ok(TrivialityVerdict {
        verdict: TrivialityKind::Unknown,
        steps,
        stabilization: cfg.stabilization_cap,
        reason: "characters are unimodular and the search budget ran out".into(),
    })
}

fn is_monomial(m: &GroupRingMatrix) -> bool {
    let n = m.rows();
    let mut col_used = vec![false; n];
    for i in 0..n {
        let mut found = None;
        for j in 0..n {
            let e = m.get(i, j);
            if e.is_zero() {
                continue;
            }
            if found.is_some() || e.as_trivial_unit().is_none() || col_used[j] {
                return false;
            }
            found = Some(j);
        }
        match found {
            Some(j) => col_used[j] = true,
            None => return false,
        }
    }
    true
}

fn cost(m: &GroupRingMatrix) -> (BigRational, usize) {
    let l1 = m.entries().iter().fold(BigRational::zero(), |a, e| a + e.l1_norm());
    let support = m.entries().iter().map(GroupRingElement::support_len).sum();
    (l1, support)
}

/// `row_i += c * row_j`
fn row_op(m: &GroupRingMatrix, i: usize, j: usize, c: &GroupRingElement) -> Result<GroupRingMatrix> {
    let mut out = m.clone();
    for k in 0..m.cols() {
        let add = c.checked_mul(m.get(j, k))?;
        if !add.is_zero() {
            out.set(i, k, m.get(i, k).checked_add(&add)?);
        }
    }
    Ok(out)
}

/// `col_j += col_i * c`
fn col_op(m: &GroupRingMatrix, i: usize, j: usize, c: &GroupRingElement) -> Result<GroupRingMatrix> {
    let mut out = m.clone();
    for k in 0..m.rows() {
        let add = m.get(k, i).checked_mul(c)?;
        if !add.is_zero() {
            out.set(k, j, m.get(k, j).checked_add(&add)?);
        }
    }
    Ok(out)
}

/// Best-first search in `(l1, support)` over monomial row and column
/// operations, with pivoting on `±g` entries applied eagerly. `budget`
/// bounds the number of expanded matrices.
fn reduce(start: GroupRingMatrix, budget: usize) -> Result<(bool, usize)> {
    let grp = start.group().clone();
    let ring = start.ring().clone();
    let n = start.rows();
    let mut seen: HashSet<Vec<Vec<String>>> = HashSet::new();
    let mut nodes: Vec<GroupRingMatrix> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut push = |m: GroupRingMatrix, nodes: &mut Vec<GroupRingMatrix>, heap: &mut BinaryHeap<_>| -> Result<()> {
        let mut m = m;
        while let Some(next) = clear_by_unit_pivot(&m)? {
            m = next;
        }
        if seen.insert(m.to_strings()) {
            let (l1, support) = cost(&m);
            heap.push(Reverse((l1, support, nodes.len())));
            nodes.push(m);
        }
        Ok(())
    };
    push(start, &mut nodes, &mut heap)?;
    let mut steps = 0;
    while let Some(Reverse((_, _, idx))) = heap.pop() {
        let m = nodes[idx].clone();
        if is_monomial(&m) {
            return Ok((true, steps));
        }
        if steps >= budget {
            break;
        }
        steps += 1;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for g in 0..grp.order() {
                    for sign in [1i64, -1] {
                        let c = GroupRingElement::monomial(&grp, &ring, g, BigRational::from_integer(BigInt::from(sign)));
                        push(row_op(&m, i, j, &c)?, &mut nodes, &mut heap)?;
                        push(col_op(&m, i, j, &c)?, &mut nodes, &mut heap)?;
                    }
                }
            }
        }
    }
    Ok((false, steps))
}

/// Uses a `±g` entry with other nonzero entries in its row or column to
/// clear them.
fn clear_by_unit_pivot(m: &GroupRingMatrix) -> Result<Option<GroupRingMatrix>> {
    let n = m.rows();
    let grp = m.group().clone();
    let ring = m.ring().clone();
    for i in 0..n {
        for j in 0..n {
            let Some((sign, g)) = m.get(i, j).as_trivial_unit() else { continue };
            let inv = GroupRingElement::monomial(&grp, &ring, grp.inv(g), BigRational::from_integer(BigInt::from(sign)));
            if let Some(l) = (0..n).find(|&l| l != i && !m.get(l, j).is_zero()) {
                // row_l -= m[l][j] u^-1 row_i
                let c = m.get(l, j).checked_mul(&inv)?.neg();
                return Ok(Some(row_op(m, l, i, &c)?));
            }
            if let Some(k) = (0..n).find(|&k| k != j && !m.get(i, k).is_zero()) {
                // col_k -= col_j u^-1 m[i][k]
                let c = inv.checked_mul(m.get(i, k))?.neg();
                return Ok(Some(col_op(m, j, k, &c)?));
            }
        }
    }
    Ok(None)
}
