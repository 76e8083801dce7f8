//! Linear algebra over prime fields: dense echelon forms for small systems
//! and an incremental sparse-column rank accumulator for large boundary
//! matrices.

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a % p, p - 2, p)
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * a as u128) % p as u128) as u64;
        }
        a = ((a as u128 * a as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Row-reduced form of a matrix `m` (rows are vectors) built row by row.
/// Each stored row is `combo * m`; rows of `m` that reduce to zero record
/// their combination in `kernel`, so `kernel` spans `{x : x m = 0}`.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub p: u64,
    pub ncols: usize,
    pub nrows_in: usize,
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
    pub combos: Vec<Vec<u64>>,
    pub kernel: Vec<Vec<u64>>,
}

impl Echelon {
    pub fn new(m: &[Vec<u64>], ncols: usize, p: u64) -> Self {
        let mut e = Echelon {
            p,
            ncols,
            nrows_in: m.len(),
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            kernel: Vec::new(),
        };
        for (i, row) in m.iter().enumerate() {
            let mut combo = vec![0u64; m.len()];
            combo[i] = 1;
            let v: Vec<u64> = row.iter().map(|x| x % p).collect();
            e.insert(v, combo);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u64], combo: &mut [u64]) {
        let p = self.p;
        for (k, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let f = p - c;
            for (x, y) in v.iter_mut().zip(&self.rows[k]) {
                if *y != 0 {
                    *x = (*x + mulmod(f, *y, p)) % p;
                }
            }
            for (x, y) in combo.iter_mut().zip(&self.combos[k]) {
                if *y != 0 {
                    *x = (*x + mulmod(f, *y, p)) % p;
                }
            }
        }
    }

    fn insert(&mut self, mut v: Vec<u64>, mut combo: Vec<u64>) {
        let p = self.p;
        self.reduce(&mut v, &mut combo);
        let Some(q) = v.iter().position(|&x| x != 0) else {
            self.kernel.push(combo);
            return;
        };
        let inv = inv_mod(v[q], p);
        for x in v.iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        for x in combo.iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        for k in 0..self.rows.len() {
            let c = self.rows[k][q];
            if c == 0 {
                continue;
            }
            let f = p - c;
            for (x, y) in self.rows[k].iter_mut().zip(&v) {
                if *y != 0 {
                    *x = (*x + mulmod(f, *y, p)) % p;
                }
            }
            for (x, y) in self.combos[k].iter_mut().zip(&combo) {
                if *y != 0 {
                    *x = (*x + mulmod(f, *y, p)) % p;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(q);
        self.combos.push(combo);
    }

    /// Whether `b` lies in the row space.
    pub fn contains(&self, b: &[u64]) -> bool {
        self.solve(b).is_some()
    }

    /// Some `x` with `x m = b`.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let p = self.p;
        let mut v: Vec<u64> = b.iter().map(|x| x % p).collect();
        let mut x = vec![0u64; self.nrows_in];
        for (k, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let f = p - c;
            for (a, y) in v.iter_mut().zip(&self.rows[k]) {
                if *y != 0 {
                    *a = (*a + mulmod(f, *y, p)) % p;
                }
            }
            for (a, y) in x.iter_mut().zip(&self.combos[k]) {
                if *y != 0 {
                    *a = (*a + mulmod(c, *y, p)) % p;
                }
            }
        }
        if v.iter().all(|&a| a == 0) {
            Some(x)
        } else {
            None
        }
    }
}

pub fn rank_mod_p(m: &[Vec<u64>], ncols: usize, p: u64) -> usize {
    Echelon::new(m, ncols, p).rank()
}

/// Rank accumulator for a stream of sparse vectors over F_p, keeping a
/// fully reduced basis so a k-sparse vector reduces in O(k n).
pub struct SparseRank {
    p: u64,
    n: usize,
    rows: Vec<Vec<u32>>,
    pivot_row: Vec<Option<u32>>,
}

impl SparseRank {
    pub fn new(n: usize, p: u64) -> Self {
        assert!(p < (1 << 31));
        SparseRank { p, n, rows: Vec::new(), pivot_row: vec![None; n] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a vector given as (index, value) pairs; returns whether the rank grew.
    pub fn push(&mut self, entries: &[(usize, i64)]) -> bool {
        let p = self.p;
        let mut w = vec![0u64; self.n];
        for &(i, val) in entries {
            w[i] = (w[i] + val.rem_euclid(p as i64) as u64) % p;
        }
        let mut idx: Vec<usize> = entries.iter().map(|&(i, _)| i).collect();
        idx.sort_unstable();
        idx.dedup();
        let pivots: Vec<(usize, u64)> =
            idx.into_iter().filter(|&i| w[i] != 0 && self.pivot_row[i].is_some()).map(|i| (i, w[i])).collect();
        for (i, c) in pivots {
            let row = &self.rows[self.pivot_row[i].unwrap() as usize];
            let f = p - c;
            for (x, &y) in w.iter_mut().zip(row.iter()) {
                if y != 0 {
                    *x = (*x + f * y as u64) % p;
                }
            }
        }
        let Some(q) = w.iter().position(|&x| x != 0) else { return false };
        let inv = inv_mod(w[q], p);
        let new_row: Vec<u32> = w.iter().map(|&x| ((x * inv) % p) as u32).collect();
        for row in self.rows.iter_mut() {
            let c = row[q] as u64;
            if c == 0 {
                continue;
            }
            let f = p - c;
            for (x, &y) in row.iter_mut().zip(new_row.iter()) {
                if y != 0 {
                    *x = ((*x as u64 + f * y as u64) % p) as u32;
                }
            }
        }
        self.pivot_row[q] = Some(self.rows.len() as u32);
        self.rows.push(new_row);
        true
    }
}

/// The same accumulator over F_2 with bit-packed rows.
pub struct SparseRankF2 {
    words: usize,
    rows: Vec<Vec<u64>>,
    pivot_row: Vec<Option<u32>>,
}

impl SparseRankF2 {
    pub fn new(n: usize) -> Self {
        SparseRankF2 { words: n.div_ceil(64), rows: Vec::new(), pivot_row: vec![None; n] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn push(&mut self, entries: &[(usize, i64)]) -> bool {
        let mut w = vec![0u64; self.words];
        for &(i, val) in entries {
            if val.rem_euclid(2) == 1 {
                w[i / 64] ^= 1 << (i % 64);
            }
        }
        let hits: Vec<usize> = entries
            .iter()
            .map(|&(i, _)| i)
            .filter(|&i| (w[i / 64] >> (i % 64)) & 1 == 1 && self.pivot_row[i].is_some())
            .collect();
        let mut seen = Vec::new();
        for i in hits {
            if seen.contains(&i) {
                continue;
            }
            seen.push(i);
            let row = &self.rows[self.pivot_row[i].unwrap() as usize];
            for (x, y) in w.iter_mut().zip(row) {
                *x ^= *y;
            }
        }
        let Some(wi) = w.iter().position(|&x| x != 0) else { return false };
        let q = wi * 64 + w[wi].trailing_zeros() as usize;
        for row in self.rows.iter_mut() {
            if (row[q / 64] >> (q % 64)) & 1 == 1 {
                for (x, y) in row.iter_mut().zip(&w) {
                    *x ^= *y;
                }
            }
        }
        self.pivot_row[q] = Some(self.rows.len() as u32);
        self.rows.push(w);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_kernel_and_solve() {
        let m = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        let e = Echelon::new(&m, 3, 2);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.kernel, vec![vec![1, 1, 1]]);
        let x = e.solve(&[1, 0, 1]).unwrap();
        let mut img = vec![0u64; 3];
        for (i, xi) in x.iter().enumerate() {
            for j in 0..3 {
                img[j] = (img[j] + xi * m[i][j]) % 2;
            }
        }
        assert_eq!(img, vec![1, 0, 1]);
        assert!(e.solve(&[1, 0, 0]).is_none());
        assert_eq!(Echelon::new(&m, 3, 3).rank(), 3);
    }

    #[test]
    fn sparse_accumulators_agree_with_dense() {
        let cols: Vec<Vec<(usize, i64)>> = vec![
            vec![(0, 1), (1, -1)],
            vec![(1, 1), (2, -1)],
            vec![(0, 1), (2, -1)],
            vec![(3, 2)],
            vec![(0, 1), (3, 1)],
        ];
        for p in [2u64, 3, 5] {
            let dense: Vec<Vec<u64>> = cols
                .iter()
                .map(|c| {
                    let mut v = vec![0u64; 4];
                    for &(i, x) in c {
                        v[i] = (v[i] + x.rem_euclid(p as i64) as u64) % p;
                    }
                    v
                })
                .collect();
            let want = rank_mod_p(&dense, 4, p);
            let mut a = SparseRank::new(4, p);
            let mut b = SparseRankF2::new(4);
            for c in &cols {
                a.push(c);
                b.push(c);
            }
            assert_eq!(a.rank(), want, "p = {p}");
            if p == 2 {
                assert_eq!(b.rank(), want);
            }
        }
    }
}
