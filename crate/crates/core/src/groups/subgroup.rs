use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::finite::FiniteGroup;
use super::hom::RealizationHom;
use crate::error::{Error, Result};

/// A subgroup of a finite realization, stored as its sorted member list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    #[serde(skip)]
    ambient: Arc<FiniteGroup>,
    members: Vec<usize>,
}

impl Subgroup {
    /// Subgroup generated by `gens`.
    pub fn generated(ambient: &Arc<FiniteGroup>, gens: &[usize]) -> Self {
        Self::from_flags(ambient, &ambient.closure_flags(gens))
    }

    pub fn trivial(ambient: &Arc<FiniteGroup>) -> Self {
        Subgroup { ambient: ambient.clone(), members: vec![0] }
    }

    pub fn whole(ambient: &Arc<FiniteGroup>) -> Self {
        Subgroup { ambient: ambient.clone(), members: (0..ambient.order()).collect() }
    }

    /// Checks closure before accepting an arbitrary member list.
    pub fn from_members(ambient: &Arc<FiniteGroup>, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        let mut flags = vec![false; ambient.order()];
        for &m in &members {
            if m >= ambient.order() {
                return Err(Error::InvalidInput(format!("element {m} out of range")));
            }
            flags[m] = true;
        }
        let closed = flags[0]
            && members.iter().all(|&a| flags[ambient.inv(a)] && members.iter().all(|&b| flags[ambient.mul(a, b)]));
        if !closed {
            return Err(Error::InvalidInput("member set is not a subgroup".into()));
        }
        Ok(Subgroup { ambient: ambient.clone(), members })
    }

    fn from_flags(ambient: &Arc<FiniteGroup>, flags: &[bool]) -> Self {
        let members = flags.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        Subgroup { ambient: ambient.clone(), members }
    }

    pub fn ambient(&self) -> &Arc<FiniteGroup> {
        &self.ambient
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.ambient.order()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn flags(&self) -> Vec<bool> {
        let mut f = vec![false; self.ambient.order()];
        for &m in &self.members {
            f[m] = true;
        }
        f
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.ambient;
        let flags = self.flags();
        (0..g.order()).all(|x| self.members.iter().all(|&n| flags[g.conj(x, n)]))
    }

    /// The subgroup as a standalone realization together with its inclusion.
    /// Element `i` of the realization is `members[i]`.
    pub fn realize(&self) -> (Arc<FiniteGroup>, RealizationHom) {
        let g = &self.ambient;
        let pos = |x: usize| self.members.binary_search(&x).unwrap();
        let table: Vec<Vec<usize>> =
            self.members.iter().map(|&a| self.members.iter().map(|&b| pos(g.mul(a, b))).collect()).collect();
        let h = FiniteGroup::from_table(table).expect("subgroup table").into_arc();
        let incl = RealizationHom::new(h.clone(), g.clone(), self.members.clone()).expect("inclusion");
        (h, incl)
    }
}

/// Smallest normal subgroup containing `seeds`.
pub fn normal_closure(g: &Arc<FiniteGroup>, seeds: &[usize]) -> Subgroup {
    let mut conjugates = BTreeSet::new();
    for &s in seeds {
        for x in 0..g.order() {
            conjugates.insert(g.conj(x, s));
        }
    }
    let gens: Vec<usize> = conjugates.into_iter().filter(|&c| c != 0).collect();
    Subgroup::generated(g, &gens)
}

/// `[A, B]`, generated by all `a b a^-1 b^-1`.
pub fn commutator_subgroup_with(g: &Arc<FiniteGroup>, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut comms = BTreeSet::new();
    for &x in a.members() {
        for &y in b.members() {
            comms.insert(g.commutator(x, y));
        }
    }
    comms.remove(&0);
    let gens: Vec<usize> = comms.into_iter().collect();
    Subgroup::generated(g, &gens)
}

pub fn derived_subgroup(g: &Arc<FiniteGroup>) -> Subgroup {
    let whole = Subgroup::whole(g);
    commutator_subgroup_with(g, &whole, &whole)
}

pub fn is_perfect(s: &Subgroup) -> bool {
    commutator_subgroup_with(s.ambient(), s, s).order() == s.order()
}

/// `[G, N] = N` for normal `N`.
pub fn is_relatively_perfect(g: &Arc<FiniteGroup>, n: &Subgroup) -> Result<bool> {
    if !n.is_normal() {
        return Err(Error::NotNormal);
    }
    Ok(commutator_subgroup_with(g, &Subgroup::whole(g), n).order() == n.order())
}

/// `H_1(G) = 0` and `H_2(G) = 0`.
pub fn is_superperfect(g: &Arc<FiniteGroup>, cfg: &crate::config::Config) -> Result<bool> {
    crate::grouphomology::homology_sphere_criterion(g, cfg)
}

/// Some element whose normal closure is the whole group, if one exists.
/// The trivial group returns the identity.
pub fn weight_le_one(g: &Arc<FiniteGroup>) -> Option<usize> {
    if g.order() == 1 {
        return Some(0);
    }
    let mut classes = g.conjugacy_classes();
    classes.sort_by_key(|c| c[0]);
    classes.iter().map(|c| c[0]).filter(|&x| x != 0).find(|&x| normal_closure(g, &[x]).is_whole())
}

/// All normal subgroups, ordered by size then members.
pub fn normal_subgroups(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let minimal: Vec<Vec<usize>> = g
        .conjugacy_classes()
        .iter()
        .map(|c| normal_closure(g, &c[..1]).members)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut frontier: Vec<Vec<usize>> = minimal.clone();
    found.extend(minimal.iter().cloned());
    while let Some(n) = frontier.pop() {
        for m in &minimal {
            let mut gens = n.clone();
            gens.extend_from_slice(m);
            let join = Subgroup::generated(g, &gens).members;
            if found.insert(join.clone()) {
                frontier.push(join);
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_iter().map(|members| Subgroup { ambient: g.clone(), members }).collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    out
}

pub fn enumerate_perfect_normal_subgroups(g: &Arc<FiniteGroup>, bound: usize) -> Result<Vec<Subgroup>> {
    if g.order() > bound {
        return Err(Error::OrderTooLarge { order: g.order(), bound });
    }
    Ok(normal_subgroups(g).into_iter().filter(is_perfect).collect())
}

/// `G/N` with cosets numbered by their smallest element, plus the
/// projection.
pub fn quotient(g: &Arc<FiniteGroup>, n: &Subgroup) -> Result<(Arc<FiniteGroup>, RealizationHom)> {
    if !n.is_normal() {
        return Err(Error::NotNormal);
    }
    let mut coset = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset[x] == usize::MAX {
            for &m in n.members() {
                coset[g.mul(x, m)] = reps.len();
            }
            reps.push(x);
        }
    }
    let table: Vec<Vec<usize>> = reps.iter().map(|&a| reps.iter().map(|&b| coset[g.mul(a, b)]).collect()).collect();
    let mut q = FiniteGroup::from_table(table)?;
    for (name, &e) in g.symbols() {
        if coset[e] != 0 {
            q = q.with_symbol(name, coset[e]);
        }
    }
    let q = q.into_arc();
    let proj = RealizationHom::new(g.clone(), q.clone(), coset)?;
    Ok((q, proj))
}

/// A Sylow p-subgroup, grown one order-p step at a time inside normalizers.
pub fn sylow(g: &Arc<FiniteGroup>, p: usize) -> Subgroup {
    let mut full = 1;
    let mut n = g.order();
    while n.is_multiple_of(p) {
        n /= p;
        full *= p;
    }
    let mut sub = Subgroup::trivial(g);
    while sub.order() < full {
        let flags = sub.flags();
        let normalizes = |x: usize| sub.members.iter().all(|&m| flags[g.conj(x, m)]);
        let x = (0..g.order())
            .find(|&x| !flags[x] && flags[g.pow(x, p as i64)] && normalizes(x))
            .expect("Sylow step");
        let mut gens = sub.members.clone();
        gens.push(x);
        sub = Subgroup::generated(g, &gens);
    }
    sub
}
