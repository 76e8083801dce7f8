//! Closure-based subgroup arithmetic on raw multiplication tables.

use std::collections::BTreeSet;

pub type Table = Vec<Vec<usize>>;

fn identity(t: &Table) -> usize {
    (0..t.len()).find(|&e| (0..t.len()).all(|g| t[e][g] == g)).expect("table has an identity")
}

fn inverse(t: &Table, g: usize) -> usize {
    let e = identity(t);
    (0..t.len()).find(|&h| t[g][h] == e).expect("every element is invertible")
}

/// Subgroup generated by `gens`, by repeated right multiplication.
pub fn closure(t: &Table, gens: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = BTreeSet::from([identity(t)]);
    let mut frontier: Vec<usize> = set.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = t[x][g];
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Every subgroup, found as closures of at most three generators.
pub fn all_subgroups(t: &Table) -> Vec<BTreeSet<usize>> {
    let n = t.len();
    let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for a in 0..n {
        for b in a..n {
            let s = closure(t, &[a, b]);
            for c in 0..n {
                if !s.contains(&c) {
                    found.insert(closure(t, &[a, b, c]));
                }
            }
            found.insert(s);
        }
    }
    found.into_iter().collect()
}

pub fn is_normal(t: &Table, s: &BTreeSet<usize>) -> bool {
    (0..t.len()).all(|g| {
        let gi = inverse(t, g);
        s.iter().all(|&x| s.contains(&t[t[g][x]][gi]))
    })
}

/// `[G, N]`, generated by all `g n g^-1 n^-1`.
pub fn commutator_with_whole(t: &Table, s: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut gens = BTreeSet::new();
    for g in 0..t.len() {
        for &x in s {
            let c = t[t[t[g][x]][inverse(t, g)]][inverse(t, x)];
            gens.insert(c);
        }
    }
    closure(t, &gens.into_iter().collect::<Vec<_>>())
}

/// `SL(2, 5)`, elements as `(a, b, c, d)` with `ad - bc = 1` mod 5.
pub fn sl25_table() -> Table {
    // identity first, as the library expects element 0 to be neutral
    let mut els = vec![[1, 0, 0, 1]];
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                for d in 0..5 {
                    if (a * d + 25 - b * c) % 5 == 1 && [a, b, c, d] != [1, 0, 0, 1] {
                        els.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let idx = |m: [usize; 4]| els.iter().position(|x| *x == m).unwrap();
    els.iter()
        .map(|x| {
            els.iter()
                .map(|y| {
                    idx([
                        (x[0] * y[0] + x[1] * y[2]) % 5,
                        (x[0] * y[1] + x[1] * y[3]) % 5,
                        (x[2] * y[0] + x[3] * y[2]) % 5,
                        (x[2] * y[1] + x[3] * y[3]) % 5,
                    ])
                })
                .collect()
        })
        .collect()
}
