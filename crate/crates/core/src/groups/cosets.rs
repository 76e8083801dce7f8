//! Todd-Coxeter enumeration of the cosets of the trivial subgroup, used to
//! certify that a finite presentation defines a given finite group.

use std::sync::Arc;

use super::{FiniteGroup, FinitePresentation, GroupHom, RealizationHom, Word};
use crate::error::{Error, Result};

struct Enumerator {
    cols: usize,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    limit: usize,
}

#[inline]
fn col(letter: (usize, i8)) -> usize {
    2 * letter.0 + usize::from(letter.1 < 0)
}

#[inline]
fn inv(c: usize) -> usize {
    c ^ 1
}

impl Enumerator {
    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.table.len() >= self.limit {
            return Err(Error::BudgetExceeded(format!("coset enumeration passed {} cosets", self.limit)));
        }
        let d = self.table.len();
        self.table.push(vec![None; self.cols]);
        self.parent.push(d);
        self.table[c][x] = Some(d);
        self.table[d][inv(x)] = Some(c);
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut k = c;
        while self.parent[k] != r {
            let next = self.parent[k];
            self.parent[k] = r;
            k = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let Some(f) = self.table[e][x] else { continue };
                self.table[f][inv(x)] = None;
                let (e1, f1) = (self.rep(e), self.rep(f));
                if let Some(t) = self.table[e1][x] {
                    self.merge(f1, t, &mut queue);
                } else if let Some(t) = self.table[f1][inv(x)] {
                    self.merge(e1, t, &mut queue);
                } else {
                    self.table[e1][x] = Some(f1);
                    self.table[f1][inv(x)] = Some(e1);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j {
                match self.table[f][w[i]] {
                    Some(n) => {
                        f = n;
                        i += 1;
                    }
                    None => break,
                }
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                match self.table[b][inv(w[j as usize])] {
                    Some(n) => {
                        b = n;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][w[i]] = Some(b);
                self.table[b][inv(w[i])] = Some(f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// Regular permutation representation of a finite presented group.
#[derive(Debug, Clone)]
pub struct CosetTable {
    /// `perms[i][c]` is the coset `c * x_i`.
    pub perms: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn order(&self) -> usize {
        self.perms.first().map_or(1, |p| p.len())
    }

    /// The group as a realization, with generator `i` mapped to
    /// `generator_images()[i]`.
    pub fn realize(&self, names: &[String]) -> Result<(Arc<FiniteGroup>, Vec<usize>)> {
        if self.perms.is_empty() {
            return Ok((FiniteGroup::trivial().into_arc(), Vec::new()));
        }
        // right action; inverting turns it into a left action so that
        // composition matches word order
        let inverses: Vec<Vec<usize>> = self
            .perms
            .iter()
            .map(|p| {
                let mut q = vec![0; p.len()];
                for (c, &d) in p.iter().enumerate() {
                    q[d] = c;
                }
                q
            })
            .collect();
        let default: Vec<String> = (1..=inverses.len()).map(|i| format!("g{i}")).collect();
        let names: Vec<&str> = if names.len() == inverses.len() { names } else { &default }.iter().map(String::as_str).collect();
        let g = FiniteGroup::from_permutations(&inverses, Some(&names))?;
        let images = names.iter().map(|n| g.symbol(n).unwrap()).collect();
        Ok((g.into_arc(), images))
    }
}

/// Enumerates the cosets of the trivial subgroup; fails when more than
/// `limit` cosets are defined at once.
pub fn enumerate_cosets(ngens: usize, relators: &[Word], limit: usize) -> Result<CosetTable> {
    let cols = 2 * ngens;
    let rels: Vec<Vec<usize>> = relators.iter().map(|r| r.free_reduce().letters().iter().map(|&l| col(l)).collect()).collect();
    let mut e = Enumerator { cols, table: vec![vec![None; cols]], parent: vec![0], limit: limit.max(1) };
    let mut c = 0;
    while c < e.table.len() {
        for r in &rels {
            if !e.alive(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        for x in 0..cols {
            if e.alive(c) && e.table[c][x].is_none() {
                e.define(c, x)?;
            }
        }
        c += 1;
    }
    let alive: Vec<usize> = (0..e.table.len()).filter(|&c| e.alive(c)).collect();
    let mut index = vec![usize::MAX; e.table.len()];
    for (k, &c) in alive.iter().enumerate() {
        index[c] = k;
    }
    let perms = (0..ngens)
        .map(|i| alive.iter().map(|&c| index[e.rep(e.table[c][2 * i].expect("complete table"))]).collect())
        .collect();
    Ok(CosetTable { perms })
}

/// Whether `hom` is an isomorphism from the presented group onto its
/// target, decided by enumerating at most `limit` cosets.
pub fn presents(hom: &GroupHom, limit: usize) -> Result<bool> {
    if !hom.is_surjective() {
        return Ok(false);
    }
    let p: &FinitePresentation = hom.source();
    let t = enumerate_cosets(p.generator_count(), p.relators(), limit)?;
    Ok(t.order() == hom.target().order())
}

/// The presented source of `hom` as a realization, with `hom` as a map of
/// finite groups. Fails with `BudgetExceeded` when the source is not
/// finite within `limit` cosets.
pub fn realize_hom(hom: &GroupHom, limit: usize) -> Result<RealizationHom> {
    let p = hom.source();
    let t = enumerate_cosets(p.generator_count(), p.relators(), limit)?;
    let (src, gens) = t.realize(p.generator_names())?;
    RealizationHom::from_generator_images(src, hom.target().clone(), &gens, hom.images())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(gens: &[&str], rels: &[&str]) -> usize {
        let p = FinitePresentation::parse(gens, rels).unwrap();
        enumerate_cosets(p.generator_count(), p.relators(), 100_000).unwrap().order()
    }

    #[test]
    fn known_orders() {
        assert_eq!(count(&["x"], &["x^5"]), 5);
        assert_eq!(count(&["a", "b"], &["a^2", "b^3", "(ab)^5"]), 60);
        assert_eq!(count(&["a", "b"], &["a^2", "b^2", "(ab)^3"]), 6);
        assert_eq!(count(&["a", "b"], &["a^4", "a^2b^-2", "abab^-1"]), 8);
        assert_eq!(count(&["a", "b"], &["a", "b"]), 1);
        assert_eq!(count(&[], &[]), 1);
        assert_eq!(count(&["t", "a", "b"], &["t^5", "[t,a]", "[t,b]", "a^2", "b^3", "(ab)^5"]), 300);
    }

    #[test]
    fn infinite_group_hits_the_limit() {
        let p = FinitePresentation::parse(&["x"], &[]).unwrap();
        assert!(matches!(enumerate_cosets(1, p.relators(), 50), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn realization_matches_the_presentation() {
        let p = FinitePresentation::parse(&["a", "b"], &["a^2", "b^3", "(ab)^5"]).unwrap();
        let t = enumerate_cosets(2, p.relators(), 10_000).unwrap();
        let (g, images) = t.realize(p.generator_names()).unwrap();
        assert_eq!(g.order(), 60);
        let hom = GroupHom::new(p.clone(), g.clone(), images).unwrap();
        assert!(presents(&hom, 10_000).unwrap());
        assert_eq!(g.symbol("b"), Some(hom.images()[1]));
    }
}
