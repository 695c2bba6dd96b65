//! Finite groups given by multiplication tables, their subgroups, and finite G-sets.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default bound on group orders for subgroup enumeration.
pub const DEFAULT_GROUP_BOUND: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Checks the table for closure, associativity, identity and inverses.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidInput("a group needs at least one element".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidInput("multiplication table has the wrong shape".into()));
        }
        let uniq: BTreeSet<&String> = names.iter().collect();
        if uniq.len() != n {
            return Err(Error::InvalidInput("group element names must be distinct".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidInput("multiplication table has no identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidInput(format!(
                            "table is not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::InvalidInput(format!("{} has no inverse", names[a])))?;
            inverse.push(inv);
        }
        Ok(FiniteGroup { names, table, identity, inverse })
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_table(vec!["e".into()], vec![vec![0]]).unwrap()
    }

    /// Cyclic group with elements `e, g, g^2, ...`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(names, table).unwrap()
    }

    /// Symmetric group on `{0, ..., n-1}`, elements named in cycle notation, `(a b)(c d)`.
    pub fn symmetric(n: usize) -> Self {
        assert!((1..=4).contains(&n), "symmetric groups up to S4 are supported");
        let mut perms: Vec<Vec<usize>> = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut perms);
        perms.sort();
        let names: Vec<String> = perms.iter().map(|p| cycle_name(p)).collect();
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        // (pq)(i) = p(q(i)).
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| index(&q.iter().map(|&i| p[i]).collect())).collect())
            .collect();
        FiniteGroup::from_table(names, table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown group element {name:?}")))
    }

    pub fn check_bound(&self, bound: usize) -> Result<()> {
        if self.order() > bound {
            return Err(Error::GroupTooLarge { order: self.order(), bound });
        }
        Ok(())
    }

    /// `g⁻¹ S g` as a sorted element list.
    pub fn conjugate(&self, elements: &[usize], g: usize) -> Vec<usize> {
        let gi = self.inv(g);
        let mut out: Vec<usize> = elements.iter().map(|&h| self.mul(self.mul(gi, h), g)).collect();
        out.sort();
        out.dedup();
        out
    }

    fn closure(&self, gens: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = gens.clone();
        set.insert(self.identity);
        loop {
            let mut added = false;
            let cur: Vec<usize> = set.iter().copied().collect();
            for &a in &cur {
                for &b in &cur {
                    if set.insert(self.mul(a, b)) {
                        added = true;
                    }
                }
            }
            if !added {
                return set;
            }
        }
    }
}

fn permutations(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}

fn cycle_name(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut cycles = Vec::new();
    for s in 0..p.len() {
        if seen[s] || p[s] == s {
            continue;
        }
        let mut c = vec![s];
        seen[s] = true;
        let mut x = p[s];
        while x != s {
            seen[x] = true;
            c.push(x);
            x = p[x];
        }
        cycles.push(format!("({})", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")));
    }
    if cycles.is_empty() {
        "e".into()
    } else {
        cycles.concat()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    /// Sorted element indices.
    pub elements: Vec<usize>,
    /// Index of the conjugacy class, numbered in order of first appearance.
    pub conjugacy_class: usize,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }

    pub fn label(&self, group: &FiniteGroup) -> String {
        let names: Vec<&str> = self.elements.iter().map(|&g| group.name(g)).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// All subgroups of `G`, ordered by size and then element list. The trivial
/// subgroup comes first and `G` itself last.
pub fn subgroups(group: &FiniteGroup) -> Result<Vec<Subgroup>> {
    subgroups_with_bound(group, DEFAULT_GROUP_BOUND)
}

pub fn subgroups_with_bound(group: &FiniteGroup, bound: usize) -> Result<Vec<Subgroup>> {
    group.check_bound(bound)?;
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let trivial: BTreeSet<usize> = [group.identity()].into();
    let mut frontier = vec![trivial];
    found.insert(vec![group.identity()]);
    while let Some(s) = frontier.pop() {
        for g in 0..group.order() {
            if s.contains(&g) {
                continue;
            }
            let mut gens = s.clone();
            gens.insert(g);
            let c = group.closure(&gens);
            let v: Vec<usize> = c.iter().copied().collect();
            if found.insert(v) {
                frontier.push(c);
            }
        }
    }
    let mut list: Vec<Vec<usize>> = found.into_iter().collect();
    list.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for elements in list {
        let class = classes
            .iter()
            .position(|rep| (0..group.order()).any(|g| group.conjugate(rep, g) == elements))
            .unwrap_or_else(|| {
                classes.push(elements.clone());
                classes.len() - 1
            });
        out.push(Subgroup { elements, conjugacy_class: class });
    }
    Ok(out)
}

/// A finite set with a left action, `action[g][s] = g · s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    group: Arc<FiniteGroup>,
    names: Vec<String>,
    action: Vec<Vec<usize>>,
}

impl GSet {
    pub fn new(group: Arc<FiniteGroup>, names: Vec<String>, action: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if action.len() != group.order() || action.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidInput("G-set action has the wrong shape".into()));
        }
        for g in 0..group.order() {
            let mut seen = vec![false; n];
            for &x in &action[g] {
                seen[x] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::InvalidInput(format!("{} does not act bijectively", group.name(g))));
            }
            for h in 0..group.order() {
                for s in 0..n {
                    if action[g][action[h][s]] != action[group.mul(g, h)][s] {
                        return Err(Error::InvalidInput("action is not compatible with multiplication".into()));
                    }
                }
            }
        }
        if (0..n).any(|s| action[group.identity()][s] != s) {
            return Err(Error::InvalidInput("identity acts nontrivially".into()));
        }
        Ok(GSet { group, names, action })
    }

    /// Left cosets `G/H`, each named by its least element (in table order).
    pub fn cosets(group: &Arc<FiniteGroup>, h: &Subgroup) -> GSet {
        let reps = coset_reps(group, h);
        let names = reps.iter().map(|&r| group.name(r).to_string()).collect();
        let action = (0..group.order())
            .map(|g| reps.iter().map(|&r| coset_index(group, h, &reps, group.mul(g, r))).collect())
            .collect();
        GSet { group: group.clone(), names, action }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn act(&self, g: usize, s: usize) -> usize {
        self.action[g][s]
    }

    /// Elements fixed by every element of `k`.
    pub fn fixed(&self, k: &Subgroup) -> Vec<usize> {
        (0..self.len()).filter(|&s| k.elements.iter().all(|&g| self.act(g, s) == s)).collect()
    }

    /// Orbits, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.group.order()).map(|g| self.act(g, s)).collect();
            orbit.sort();
            orbit.dedup();
            for &x in &orbit {
                seen[x] = true;
            }
            out.push(orbit);
        }
        out
    }
}

/// Least representative of each left coset `gH`, in increasing order.
pub fn coset_reps(group: &FiniteGroup, h: &Subgroup) -> Vec<usize> {
    let mut reps = Vec::new();
    let mut seen = vec![false; group.order()];
    for g in 0..group.order() {
        if seen[g] {
            continue;
        }
        reps.push(g);
        for &x in &h.elements {
            seen[group.mul(g, x)] = true;
        }
    }
    reps
}

/// Index in `reps` of the coset containing `g`.
pub fn coset_index(group: &FiniteGroup, h: &Subgroup, reps: &[usize], g: usize) -> usize {
    let least = h.elements.iter().map(|&x| group.mul(g, x)).min().unwrap();
    reps.binary_search(&least).expect("least element is a representative")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_counts() {
        let c2 = FiniteGroup::cyclic(2);
        assert_eq!(subgroups(&c2).unwrap().len(), 2);
        let c4 = FiniteGroup::cyclic(4);
        let s = subgroups(&c4).unwrap();
        assert_eq!(s.iter().map(|h| h.order()).collect::<Vec<_>>(), vec![1, 2, 4]);
        let s3 = FiniteGroup::symmetric(3);
        let s = subgroups(&s3).unwrap();
        assert_eq!(s.len(), 6);
        let classes: BTreeSet<usize> = s.iter().map(|h| h.conjugacy_class).collect();
        assert_eq!(classes.len(), 4);
    }

    #[test]
    fn subgroups_by_brute_force() {
        // Independent check: every subset closed under multiplication.
        let s3 = FiniteGroup::symmetric(3);
        let n = s3.order();
        let mut count = 0;
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if set.iter().all(|&a| set.iter().all(|&b| set.contains(&s3.mul(a, b)))) {
                count += 1;
            }
        }
        assert_eq!(count, subgroups(&s3).unwrap().len());
        let s4 = FiniteGroup::symmetric(4);
        assert_eq!(subgroups(&s4).unwrap().len(), 30);
    }

    #[test]
    fn bound_is_enforced() {
        let c5 = FiniteGroup::cyclic(5);
        assert!(matches!(subgroups_with_bound(&c5, 4), Err(Error::GroupTooLarge { .. })));
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(FiniteGroup::from_table(vec!["a".into(), "b".into()], vec![vec![0, 0], vec![0, 0]]).is_err());
    }

    #[test]
    fn cosets_of_s3() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let subs = subgroups(&s3).unwrap();
        for h in &subs {
            let gs = GSet::cosets(&s3, h);
            assert_eq!(gs.len() * h.order(), 6);
            GSet::new(s3.clone(), gs.names().to_vec(), gs.action.clone()).unwrap();
            // (G/H)^H contains the identity coset.
            assert!(gs.fixed(h).contains(&0));
        }
    }
}
