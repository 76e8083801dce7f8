use std::sync::Arc;

use num_bigint::BigInt;

use crate::groups::FiniteGroup;
use crate::linalg::IntMatrix;

/// Degrees 0..=3 of the normalized bar complex of `G` with trivial
/// coefficients. A basis element of degree `d` is a tuple of non-identity
/// elements, indexed in base `|G| - 1`.
#[derive(Debug, Clone)]
pub struct BarComplexSlice {
    group: Arc<FiniteGroup>,
    m: usize,
}

impl BarComplexSlice {
    pub fn new(group: &Arc<FiniteGroup>) -> Self {
        BarComplexSlice { group: group.clone(), m: group.order() - 1 }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rank(&self, d: u32) -> usize {
        self.m.pow(d)
    }

    pub fn index1(&self, g: usize) -> usize {
        g - 1
    }

    pub fn index2(&self, g: usize, h: usize) -> usize {
        (g - 1) * self.m + (h - 1)
    }

    pub fn tuple2(&self, i: usize) -> (usize, usize) {
        (i / self.m + 1, i % self.m + 1)
    }

    pub fn tuple3(&self, i: usize) -> (usize, usize, usize) {
        let m = self.m;
        (i / (m * m) + 1, (i / m) % m + 1, i % m + 1)
    }

    /// `d[g|h] = [h] - [gh] + [g]`, identity terms dropped.
    pub fn boundary2_row(&self, i: usize) -> Vec<(usize, i64)> {
        let (g, h) = self.tuple2(i);
        let gh = self.group.mul(g, h);
        let mut row = vec![(self.index1(h), 1), (self.index1(g), 1)];
        if gh != 0 {
            row.push((self.index1(gh), -1));
        }
        row
    }

    /// `d[g|h|k] = [h|k] - [gh|k] + [g|hk] - [g|h]`, identity terms dropped.
    pub fn boundary3_row(&self, i: usize) -> Vec<(usize, i64)> {
        let (g, h, k) = self.tuple3(i);
        let gh = self.group.mul(g, h);
        let hk = self.group.mul(h, k);
        let mut row = vec![(self.index2(h, k), 1), (self.index2(g, h), -1)];
        if gh != 0 {
            row.push((self.index2(gh, k), -1));
        }
        if hk != 0 {
            row.push((self.index2(g, hk), 1));
        }
        row
    }

    fn dense(&self, rows: usize, cols: usize, f: impl Fn(usize) -> Vec<(usize, i64)>) -> IntMatrix {
        let mut out = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for (j, v) in f(i) {
                out[(i, j)] += BigInt::from(v);
            }
        }
        out
    }

    pub fn boundary2(&self) -> IntMatrix {
        self.dense(self.rank(2), self.rank(1), |i| self.boundary2_row(i))
    }

    pub fn boundary3(&self) -> IntMatrix {
        self.dense(self.rank(3), self.rank(2), |i| self.boundary3_row(i))
    }

    /// The image of the tuple `[g|h]` under a group map, as a basis index
    /// (or `None` when a slot becomes the identity).
    pub fn push2(&self, target: &BarComplexSlice, f: &dyn Fn(usize) -> usize, i: usize) -> Option<usize> {
        let (g, h) = self.tuple2(i);
        let (a, b) = (f(g), f(h));
        (a != 0 && b != 0).then(|| target.index2(a, b))
    }
}
