//! Smith normal form over the integers with unimodular transforms.
//!
//! Pivoting: the nonzero entry of least magnitude in the active block, ties
//! broken by the lowest (row, column) index. The output is therefore a
//! deterministic function of the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;
use crate::error::{Error, Result};

/// `d == u * m * v` with `u`, `v` unimodular and `d` diagonal; the nonzero
/// diagonal entries come first, are positive and form a divisibility chain.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
    transforms: bool,
    bit_bound: u64,
}

fn ident(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn to_matrix(n: usize, rows: Vec<Vec<BigInt>>) -> IntMatrix {
    IntMatrix::from_row_vecs(n, rows)
}

impl Work {
    fn check_row(&self, i: usize) -> Result<()> {
        if self.a[i].iter().any(|x| x.bits() > self.bit_bound) {
            return Err(Error::BudgetExceeded(format!(
                "Smith form entry exceeded {} bits",
                self.bit_bound
            )));
        }
        Ok(())
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        self.a.swap(i, k);
        if self.transforms {
            self.u.swap(i, k);
            for row in self.u_inv.iter_mut() {
                row.swap(i, k);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(j, k);
        }
        if self.transforms {
            for row in self.v.iter_mut() {
                row.swap(j, k);
            }
            self.v_inv.swap(j, k);
        }
    }

    /// row_i -= q * row_t
    fn row_axpy(&mut self, i: usize, t: usize, q: &BigInt) -> Result<()> {
        let (src, dst) = two_rows(&mut self.a, t, i);
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            if !s.is_zero() {
                *d -= q * s;
            }
        }
        if self.transforms {
            let (src, dst) = two_rows(&mut self.u, t, i);
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                if !s.is_zero() {
                    *d -= q * s;
                }
            }
            for row in self.u_inv.iter_mut() {
                if !row[i].is_zero() {
                    let add = q * &row[i];
                    row[t] += add;
                }
            }
        }
        self.check_row(i)
    }

    /// col_j -= q * col_t
    fn col_axpy(&mut self, j: usize, t: usize, q: &BigInt) -> Result<()> {
        let mut big = false;
        for row in self.a.iter_mut() {
            if !row[t].is_zero() {
                let sub = q * &row[t];
                row[j] -= sub;
                big |= row[j].bits() > self.bit_bound;
            }
        }
        if self.transforms {
            for row in self.v.iter_mut() {
                if !row[t].is_zero() {
                    let sub = q * &row[t];
                    row[j] -= sub;
                }
            }
            let (src, dst) = two_rows(&mut self.v_inv, j, t);
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                if !s.is_zero() {
                    *d += q * s;
                }
            }
        }
        if big {
            return Err(Error::BudgetExceeded(format!(
                "Smith form entry exceeded {} bits",
                self.bit_bound
            )));
        }
        Ok(())
    }

    fn negate_row(&mut self, t: usize) {
        for x in self.a[t].iter_mut() {
            *x = -&*x;
        }
        if self.transforms {
            for x in self.u[t].iter_mut() {
                *x = -&*x;
            }
            for row in self.u_inv.iter_mut() {
                row[t] = -&row[t];
            }
        }
    }
}

/// Mutable access to `rows[src]` (shared) and `rows[dst]` (exclusive).
fn two_rows<T>(rows: &mut [Vec<T>], src: usize, dst: usize) -> (&Vec<T>, &mut Vec<T>) {
    assert_ne!(src, dst);
    if src < dst {
        let (a, b) = rows.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = rows.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

/// Smith normal form with transforms.
pub fn smith(m: &IntMatrix, bit_bound: u64) -> Result<Smith> {
    run(m, true, bit_bound)
}

/// Invariant factors only (no transforms tracked).
pub fn invariant_factors(m: &IntMatrix, bit_bound: u64) -> Result<Vec<BigInt>> {
    let s = run(m, false, bit_bound)?;
    Ok(s.diagonal[..s.rank].to_vec())
}

fn run(m: &IntMatrix, transforms: bool, bit_bound: u64) -> Result<Smith> {
    let (r, c) = (m.rows(), m.cols());
    if m.max_bits() > bit_bound {
        return Err(Error::BudgetExceeded(format!("input entry exceeds {bit_bound} bits")));
    }
    let mut w = Work {
        a: m.to_rows(),
        u: if transforms { ident(r) } else { Vec::new() },
        u_inv: if transforms { ident(r) } else { Vec::new() },
        v: if transforms { ident(c) } else { Vec::new() },
        v_inv: if transforms { ident(c) } else { Vec::new() },
        transforms,
        bit_bound,
    };
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = min_entry(&w.a, t, t..r, t..c) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&w.a[t][t]);
                    w.row_axpy(i, t, &q)?;
                    dirty |= !w.a[i][t].is_zero();
                }
            }
            for j in t + 1..c {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&w.a[t][t]);
                    w.col_axpy(j, t, &q)?;
                    dirty |= !w.a[t][j].is_zero();
                }
            }
            if dirty {
                // smallest remainder in the pivot row/column becomes the pivot
                let mut best: Option<(BigInt, usize, usize)> = None;
                let mut consider = |x: &BigInt, i: usize, j: usize| {
                    if !x.is_zero() {
                        let ax = x.abs();
                        if best.as_ref().is_none_or(|(b, _, _)| ax < *b) {
                            best = Some((ax, i, j));
                        }
                    }
                };
                for i in t..r {
                    consider(&w.a[i][t], i, t);
                }
                for j in t + 1..c {
                    consider(&w.a[t][j], t, j);
                }
                let (_, i, j) = best.expect("pivot row/column cannot vanish");
                w.swap_rows(t, i);
                w.swap_cols(t, j);
                continue;
            }
            let p = w.a[t][t].clone();
            let bad = (t + 1..r).find(|&i| w.a[i][t + 1..].iter().any(|x| !x.mod_floor(&p).is_zero()));
            match bad {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    w.row_axpy(t, i, &minus_one)?;
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let n = r.min(c);
    let diagonal: Vec<BigInt> = (0..n).map(|i| w.a[i][i].clone()).collect();
    let rank = diagonal.iter().take_while(|d| !d.is_zero()).count();
    let (u, u_inv, v, v_inv) = if transforms {
        (to_matrix(r, w.u), to_matrix(r, w.u_inv), to_matrix(c, w.v), to_matrix(c, w.v_inv))
    } else {
        (IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0))
    };
    Ok(Smith { diagonal, rank, u, u_inv, v, v_inv })
}

fn min_entry(
    a: &[Vec<BigInt>],
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = &a[i][j];
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(b, _, _)| x.abs() < *b) {
                let ax = x.abs();
                let unit = ax.is_one();
                best = Some((ax, i, j));
                if unit {
                    return best.map(|(_, i, j)| (i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}
