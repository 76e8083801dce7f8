//! Brute-force Schur multipliers from the full (unnormalized) bar complex,
//! with its own group tables and its own i128 elimination. Values below
//! are frozen from this oracle and the library is checked against them.

/// Product of cyclic groups as a table, elements in mixed radix.
pub fn abelian_table(factors: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = factors.iter().product();
    let digits = |mut x: usize| -> Vec<usize> {
        let mut d = vec![0; factors.len()];
        for i in (0..factors.len()).rev() {
            d[i] = x % factors[i];
            x /= factors[i];
        }
        d
    };
    let undigits = |d: &[usize]| d.iter().zip(factors).fold(0, |acc, (&x, &f)| acc * f + x);
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let (da, db) = (digits(a), digits(b));
                    let s: Vec<usize> = da.iter().zip(&db).zip(factors).map(|((x, y), f)| (x + y) % f).collect();
                    undigits(&s)
                })
                .collect()
        })
        .collect()
}

/// S3 as permutations of {0,1,2}, composed right to left.
pub fn s3_table() -> Vec<Vec<usize>> {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    perms.iter().map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect()).collect()
}

/// Nonunit invariant factors of an integer matrix and its rank, by plain
/// gcd elimination in i128.
pub fn invariant_factors(mut m: Vec<Vec<i128>>) -> (Vec<i128>, usize) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                if q != 0 {
                    for i in t..rows {
                        m[i][j] -= q * m[i][t];
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // divisibility into the rest of the block
                let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| m[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            m[t][j] += m[i][j];
                        }
                        continue;
                    }
                }
            }
            // move a smaller remainder into the pivot
            let mut best = (t, t);
            for i in t..rows {
                if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            m.swap(t, best.0);
            for row in m.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    let rank = diag.len();
    (diag.into_iter().filter(|&d| d != 1).collect(), rank)
}

/// H_2 of the full bar complex: free rank and torsion factors.
pub fn oracle_h2(table: &[Vec<usize>]) -> (usize, Vec<i128>) {
    let n = table.len();
    let i2 = |g: usize, h: usize| g * n + h;
    let mut d2 = vec![vec![0i128; n]; n * n];
    for g in 0..n {
        for h in 0..n {
            let r = &mut d2[i2(g, h)];
            r[h] += 1;
            r[table[g][h]] -= 1;
            r[g] += 1;
        }
    }
    let mut d3 = vec![vec![0i128; n * n]; n * n * n];
    for g in 0..n {
        for h in 0..n {
            for k in 0..n {
                let r = &mut d3[(g * n + h) * n + k];
                r[i2(h, k)] += 1;
                r[i2(table[g][h], k)] -= 1;
                r[i2(g, table[h][k])] += 1;
                r[i2(g, h)] -= 1;
            }
        }
    }
    let (_, r2) = invariant_factors(d2);
    let (tors, r3) = invariant_factors(d3);
    (n * n - r2 - r3, tors)
}

pub fn cases() -> Vec<(&'static str, Vec<Vec<usize>>)> {
    let mut v: Vec<(&'static str, Vec<Vec<usize>>)> = vec![
        ("Z1", abelian_table(&[1])),
        ("Z2", abelian_table(&[2])),
        ("Z3", abelian_table(&[3])),
        ("Z4", abelian_table(&[4])),
        ("Z5", abelian_table(&[5])),
        ("Z6", abelian_table(&[6])),
        ("Z7", abelian_table(&[7])),
        ("Z8", abelian_table(&[8])),
        ("Z2xZ2", abelian_table(&[2, 2])),
        ("Z3xZ3", abelian_table(&[3, 3])),
    ];
    v.push(("S3", s3_table()));
    v
}

/// Frozen oracle output: (free rank, torsion).
pub fn frozen(name: &str) -> (usize, Vec<i128>) {
    match name {
        "Z2xZ2" => (0, vec![2]),
        "Z3xZ3" => (0, vec![3]),
        _ => (0, vec![]),
    }
}
