use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group given by its full multiplication table. Element 0 is the
/// identity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    /// Display names for selected elements (e.g. `t` for a cyclic generator).
    #[serde(default)]
    symbols: BTreeMap<String, usize>,
    #[serde(default)]
    label: String,
}

/// Equality of realizations compares multiplication tables only.
impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a table without checking the axioms; see
    /// [`FiniteGroup::validate`].
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidInput("empty multiplication table".into()));
        }
        if table.iter().any(|row| row.len() != order || row.iter().any(|&x| x >= order)) {
            return Err(Error::InvalidInput("multiplication table is not square over 0..order".into()));
        }
        let flat: Vec<u32> = table.iter().flatten().map(|&x| x as u32).collect();
        let mut inverse = vec![u32::MAX; order];
        for (g, inv) in inverse.iter_mut().enumerate() {
            if let Some(h) = (0..order).find(|&h| flat[g * order + h] == 0) {
                *inv = h as u32;
            }
        }
        if inverse.contains(&u32::MAX) {
            return Err(Error::InvalidInput("some element has no right inverse".into()));
        }
        Ok(FiniteGroup { order, table: flat, inverse, symbols: BTreeMap::new(), label: String::new() })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z/n with element k standing for t^k.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let table = (0..n).flat_map(|i| (0..n).map(move |j| ((i + j) % n) as u32)).collect();
        let inverse = (0..n).map(|i| ((n - i) % n) as u32).collect();
        let mut symbols = BTreeMap::new();
        if n > 1 {
            symbols.insert("t".to_string(), 1);
        }
        FiniteGroup { order: n, table, inverse, symbols, label: if n == 1 { "1".into() } else { format!("Z/{n}") } }
    }

    /// Element (i, j) has index `i * |b| + j`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let (xa, xb) = (x / nb, x % nb);
                let (ya, yb) = (y / nb, y % nb);
                table[x * n + y] = (a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32;
            }
        }
        let inverse = (0..n).map(|x| (a.inv(x / nb) * nb + b.inv(x % nb)) as u32).collect();
        let mut symbols = BTreeMap::new();
        for (s, &i) in &a.symbols {
            symbols.insert(s.clone(), i * nb);
        }
        for (s, &j) in &b.symbols {
            let mut name = s.clone();
            while symbols.contains_key(&name) {
                name.push('\'');
            }
            symbols.insert(name, j);
        }
        FiniteGroup { order: n, table, inverse, symbols, label: format!("{} x {}", a.label, b.label) }
    }

    /// Group generated by permutations of `0..degree`; `(g h)(x) = g(h(x))`.
    /// Generators are named `g1, g2, ...` unless `names` are supplied.
    pub fn from_permutations(gens: &[Vec<usize>], names: Option<&[&str]>) -> Result<Self> {
        let degree = gens.first().map_or(0, |g| g.len());
        for g in gens {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidInput("generators are not permutations of a common degree".into()));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y: Vec<usize> = elems[x].iter().map(|&k| g[k]).collect();
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(y);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let c: Vec<usize> = (0..degree).map(|k| elems[a][elems[b][k]]).collect();
                table[a * n + b] = index[&c] as u32;
            }
        }
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            inverse[a] = (0..n).find(|&b| table[a * n + b] == 0).unwrap() as u32;
        }
        let mut symbols = BTreeMap::new();
        for (k, g) in gens.iter().enumerate() {
            let name = match names {
                Some(ns) => ns[k].to_string(),
                None => format!("g{}", k + 1),
            };
            symbols.insert(name, index[g]);
        }
        Ok(FiniteGroup { order: n, table, inverse, symbols, label: String::new() })
    }

    pub fn symmetric(n: usize) -> Self {
        if n <= 1 {
            return Self::trivial().with_label(format!("S{n}"));
        }
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations(&[swap, cycle], Some(&["s", "c"])).unwrap().with_label(format!("S{n}"))
    }

    pub fn alternating(n: usize) -> Self {
        if n <= 2 {
            return Self::trivial().with_label(format!("A{n}"));
        }
        let three: Vec<usize> = (0..n).map(|i| if i < 3 { (i + 1) % 3 } else { i }).collect();
        let long: Vec<usize> = if n % 2 == 1 {
            (0..n).map(|i| (i + 1) % n).collect()
        } else {
            (0..n).map(|i| if i == 0 { 0 } else { i % (n - 1) + 1 }).collect()
        };
        Self::from_permutations(&[three, long], Some(&["a", "b"])).unwrap().with_label(format!("A{n}"))
    }

    /// Symmetries of the regular n-gon, order 2n.
    pub fn dihedral(n: usize) -> Self {
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(&[rot, refl], Some(&["r", "f"])).unwrap().with_label(format!("D{n}"))
    }

    /// The quaternion group {±1, ±i, ±j, ±k}.
    pub fn quaternion() -> Self {
        // units 1,i,j,k as 0..4; element index = 4*sign + unit
        let unit_mul = |a: usize, b: usize| -> (bool, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 1) => (true, 3),
                (2, 3) => (false, 1),
                (3, 2) => (true, 1),
                (3, 1) => (false, 2),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let table: Vec<Vec<usize>> = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (neg, u) = unit_mul(x % 4, y % 4);
                        let sign = (x / 4) ^ (y / 4) ^ (neg as usize);
                        sign * 4 + u
                    })
                    .collect()
            })
            .collect();
        let mut g = Self::from_table(table).unwrap().with_label("Q8".into());
        g.symbols.insert("i".into(), 1);
        g.symbols.insert("j".into(), 2);
        g
    }

    /// Names like `1`, `Z5`, `Z2xZ2`, `S3`, `A5`, `D4`, `Q8`; `x` separates
    /// direct factors.
    pub fn builtin(name: &str) -> Result<Self> {
        let parts: Vec<&str> = name.split('x').map(str::trim).collect();
        let mut acc: Option<FiniteGroup> = None;
        for p in parts {
            let g = Self::builtin_factor(p)?;
            acc = Some(match acc {
                None => g,
                Some(a) => FiniteGroup::direct_product(&a, &g),
            });
        }
        let mut g = acc.ok_or_else(|| Error::Parse(format!("empty group name '{name}'")))?;
        if name.contains('x') {
            g.label = name.to_string();
        }
        Ok(g)
    }

    fn builtin_factor(p: &str) -> Result<Self> {
        let num = |s: &str| -> Result<usize> {
            s.parse::<usize>().map_err(|_| Error::Parse(format!("unknown group '{p}'")))
        };
        if p == "1" || p == "trivial" {
            return Ok(Self::trivial());
        }
        if p == "Q8" {
            return Ok(Self::quaternion());
        }
        let (head, rest) = p.split_at(1.min(p.len()));
        let n = num(rest.trim_start_matches('/'))?;
        if n == 0 {
            return Err(Error::Parse(format!("unknown group '{p}'")));
        }
        match head {
            "Z" | "C" => Ok(Self::cyclic(n)),
            "S" => Ok(Self::symmetric(n)),
            "A" => Ok(Self::alternating(n)),
            "D" => Ok(Self::dihedral(n)),
            _ => Err(Error::Parse(format!("unknown group '{p}'"))),
        }
    }

    pub fn with_label(mut self, label: String) -> Self {
        self.label = label;
        self
    }

    pub fn with_symbol(mut self, name: &str, element: usize) -> Self {
        self.symbols.insert(name.to_string(), element);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn symbols(&self) -> &BTreeMap<String, usize> {
        &self.symbols
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.symbols.get(name).copied()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn pow(&self, g: usize, n: i64) -> usize {
        let base = if n < 0 { self.inv(g) } else { g };
        (0..n.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Checks identity, inverses and associativity triple by triple.
    pub fn validate(&self, bound: usize) -> Result<bool> {
        if self.order > bound {
            return Err(Error::OrderTooLarge { order: self.order, bound });
        }
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Ok(false);
            }
            let ai = self.inv(a);
            if self.mul(a, ai) != 0 || self.mul(ai, a) != 0 {
                return Ok(false);
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// A generating set chosen greedily by increasing element index,
    /// skipping elements already generated.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[0] = true;
        for g in 1..self.order {
            if !span[g] {
                gens.push(g);
                span = self.closure_flags(&gens);
            }
        }
        gens
    }

    /// Membership flags of the subgroup generated by `gens`.
    pub fn closure_flags(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                for y in [self.mul(x, g), self.mul(x, self.inv(g))] {
                    if !inside[y] {
                        inside[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        inside
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for x in 0..self.order {
            if seen[x] {
                continue;
            }
            let mut cls: Vec<usize> = (0..self.order).map(|g| self.conj(g, x)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &y in &cls {
                seen[y] = true;
            }
            classes.push(cls);
        }
        classes
    }

    pub fn into_arc(self) -> Arc<FiniteGroup> {
        Arc::new(self)
    }
}

/// Wire form of a finite group: a builtin name, a multiplication table, or
/// generating permutations.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Named(String),
    Table {
        order: usize,
        table: Vec<Vec<usize>>,
        #[serde(default)]
        symbols: BTreeMap<String, usize>,
    },
    Permutations {
        permutations: Vec<Vec<usize>>,
        #[serde(default)]
        names: Option<Vec<String>>,
    },
}

impl GroupSpec {
    /// Builds the realization; tables are checked exhaustively up to `bound`.
    pub fn build(&self, bound: usize) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Named(name) => FiniteGroup::builtin(name),
            GroupSpec::Table { order, table, symbols } => {
                if table.len() != *order {
                    return Err(Error::InvalidInput(format!("table has {} rows, order is {order}", table.len())));
                }
                let mut g = FiniteGroup::from_table(table.clone())?;
                if table.iter().enumerate().any(|(i, row)| row[0] != i) || table[0].iter().enumerate().any(|(j, &x)| x != j) {
                    return Err(Error::InvalidInput("element 0 must be the identity".into()));
                }
                if !g.validate(bound)? {
                    return Err(Error::InvalidInput("table is not a group".into()));
                }
                for (name, &e) in symbols {
                    if e >= *order {
                        return Err(Error::InvalidInput(format!("symbol {name} out of range")));
                    }
                    g = g.with_symbol(name, e);
                }
                Ok(g)
            }
            GroupSpec::Permutations { permutations, names } => {
                let names: Option<Vec<&str>> = names.as_ref().map(|v| v.iter().map(String::as_str).collect());
                if names.as_ref().is_some_and(|n| n.len() != permutations.len()) {
                    return Err(Error::InvalidInput("one name per permutation expected".into()));
                }
                FiniteGroup::from_permutations(permutations, names.as_deref())
            }
        }
    }

    pub fn of(g: &FiniteGroup) -> Self {
        GroupSpec::Table { order: g.order(), table: g.table_rows(), symbols: g.symbols().clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_have_expected_orders_and_pass_axioms() {
        for (name, order) in [("1", 1), ("Z5", 5), ("Z2xZ2", 4), ("S3", 6), ("A4", 12), ("A5", 60), ("D4", 8), ("Q8", 8), ("S4", 24)] {
            let g = FiniteGroup::builtin(name).unwrap();
            assert_eq!(g.order(), order, "{name}");
            assert!(g.validate(5040).unwrap(), "{name}");
        }
        assert!(!FiniteGroup::builtin("Q8").unwrap().is_abelian());
        assert!(FiniteGroup::builtin("Z2xZ2").unwrap().is_abelian());
    }

    #[test]
    fn broken_associativity_is_detected() {
        // Z/3 with one product swapped: still a Latin square with identity
        let mut t = FiniteGroup::cyclic(5).table_rows();
        t[1][1] = 3;
        t[1][2] = 2;
        let g = FiniteGroup::from_table(t);
        if let Ok(g) = g { assert!(!g.validate(100).unwrap()) }
        let mut t = FiniteGroup::cyclic(3).table_rows();
        t[1][2] = 1;
        t[1][1] = 0;
        t[1][0] = 1;
        let g = FiniteGroup::from_table(t).unwrap();
        assert!(!g.validate(100).unwrap());
    }

    #[test]
    fn order_bound_is_enforced() {
        let g = FiniteGroup::cyclic(10);
        assert!(matches!(g.validate(5), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn conjugacy_classes_of_s3() {
        let g = FiniteGroup::symmetric(3);
        let mut sizes: Vec<usize> = g.conjugacy_classes().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(g.generating_set().len(), 2);
    }
}
