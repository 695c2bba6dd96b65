//! Edge-path groups, coset enumeration and universal covers of finite
//! simplicial sets.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::dgcobar::nondegenerate_chain_complex;
use crate::equivariant::GSimplicialSet;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::FiniteGroup;
use crate::h0::{edge_presentation, inverse_word, H0Presentation, Letter, PWord};
use crate::simplicial::{NdRef, SimplexRef, SimplicialMap, SimplicialSet};
use crate::smith::smith_normal_form;

/// Generators and relations `left = right` of a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<(PWord, PWord)>,
}

impl GroupPresentation {
    fn as_h0(&self) -> H0Presentation {
        H0Presentation {
            generators: self.generators.clone(),
            relations: self.relations.clone(),
            marked: Vec::new(),
            localized: true,
            chains_type: false,
        }
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        self.as_h0().format_word(w)
    }

    pub fn parse(s: &str) -> Result<GroupPresentation> {
        let p = H0Presentation::parse(s)?;
        Ok(GroupPresentation { generators: p.generators, relations: p.relations })
    }

    /// Relators `l r⁻¹`, freely reduced, empty ones dropped.
    pub fn relators(&self) -> Vec<PWord> {
        self.relations
            .iter()
            .map(|(l, r)| {
                let mut w = l.clone();
                w.extend(inverse_word(r));
                free_reduce(&w)
            })
            .filter(|w| !w.is_empty())
            .collect()
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut p = self.as_h0();
        p.localized = false;
        write!(f, "{p}")
    }
}

pub fn free_reduce(w: &[Letter]) -> PWord {
    let mut out: PWord = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverted()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Generators are the nondegenerate edges, one relation `d₁σ = d₂σ · d₀σ` per
/// nondegenerate 2-simplex.
pub fn edge_path_presentation(x: &SimplicialSet) -> Result<GroupPresentation> {
    let p = edge_presentation(x)?;
    Ok(GroupPresentation { generators: p.generators, relations: p.relations })
}

/// Spanning-tree variant for connected, possibly non-reduced, inputs: edges in
/// a BFS tree of the 1-skeleton from vertex 0 are set to the identity.
pub fn spanning_tree_presentation(x: &SimplicialSet) -> Result<GroupPresentation> {
    if x.nd_count(0) == 0 {
        return Err(Error::InvalidInput("empty simplicial set".into()));
    }
    let tree = spanning_tree(x).ok_or_else(|| Error::InvalidInput("simplicial set is not connected".into()))?;
    let kept: Vec<usize> = (0..x.nd_count(1)).filter(|&e| !tree[e]).collect();
    let mut index = vec![None; x.nd_count(1)];
    for (k, &e) in kept.iter().enumerate() {
        index[e] = Some(k);
    }
    let word = |f: &SimplexRef| -> PWord {
        match f.is_degenerate() {
            false => index[f.base.index].map(|k| vec![Letter::gen(k)]).unwrap_or_default(),
            true => Vec::new(),
        }
    };
    let generators = kept.iter().map(|&e| x.nondegenerate(1)[e].name.clone()).collect();
    let relations = x
        .nondegenerate(2)
        .iter()
        .map(|s| {
            let mut right = word(&s.faces[2]);
            right.extend(word(&s.faces[0]));
            (word(&s.faces[1]), right)
        })
        .filter(|(l, r)| l != r)
        .collect();
    Ok(GroupPresentation { generators, relations })
}

/// Marks the tree edges of a BFS spanning tree; `None` if the edge graph is disconnected.
fn spanning_tree(x: &SimplicialSet) -> Option<Vec<bool>> {
    let nv = x.nd_count(0);
    let edges: Vec<(usize, usize)> = x
        .nondegenerate(1)
        .iter()
        .map(|e| (e.faces[1].base.index, e.faces[0].base.index))
        .collect();
    let mut seen = vec![false; nv];
    let mut tree = vec![false; edges.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for (k, &(a, b)) in edges.iter().enumerate() {
            let other = if a == v { b } else if b == v { a } else { continue };
            if !seen[other] {
                seen[other] = true;
                tree[k] = true;
                queue.push_back(other);
            }
        }
    }
    seen.iter().all(|&s| s).then_some(tree)
}

/// Whether the 1-skeleton is connected.
pub fn is_edge_connected(x: &SimplicialSet) -> bool {
    x.nd_count(0) > 0 && spanning_tree(x).is_some()
}

const UNDEF: usize = usize::MAX;

/// A coset table of the trivial subgroup; column `2g` is generator `g`, `2g+1` its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub table: Vec<Vec<usize>>,
    pub complete: bool,
    pub order: Option<usize>,
}

fn col(l: Letter) -> usize {
    2 * l.gen + l.inverse as usize
}

impl CosetTable {
    /// Coset reached from `c` by reading `w`.
    pub fn apply(&self, c: usize, w: &[Letter]) -> usize {
        w.iter().fold(c, |c, &l| self.table[c][col(l)])
    }

    /// A shortest word reaching each coset from coset 0.
    pub fn words(&self) -> Vec<PWord> {
        let n = self.table.len();
        let mut words: Vec<Option<PWord>> = vec![None; n];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0]);
        while let Some(c) = queue.pop_front() {
            for (k, &d) in self.table[c].iter().enumerate() {
                if words[d].is_none() {
                    let mut w = words[c].clone().unwrap();
                    w.push(Letter { gen: k / 2, inverse: k % 2 == 1 });
                    words[d] = Some(w);
                    queue.push_back(d);
                }
            }
        }
        words.into_iter().map(|w| w.unwrap()).collect()
    }

    /// The group as the regular representation of the table.
    pub fn group(&self, p: &GroupPresentation) -> Result<FiniteGroup> {
        let words = self.words();
        let names = words.iter().map(|w| if w.is_empty() { "1".to_string() } else { p.format_word(w) }).collect();
        let n = self.table.len();
        let table = (0..n).map(|i| (0..n).map(|j| self.apply(i, &words[j])).collect()).collect();
        FiniteGroup::from_table(names, table)
    }
}

struct Enumerator {
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    cols: usize,
    bound: usize,
    queue: Vec<usize>,
}

impl Enumerator {
    fn rep(&mut self, mut k: usize) -> usize {
        let mut root = k;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[k] != root {
            let next = self.parent[k];
            self.parent[k] = root;
            k = next;
        }
        root
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.table.len() >= self.bound {
            return Err(Error::Inconclusive(format!("coset enumeration exceeded {} cosets", self.bound)));
        }
        let d = self.table.len();
        self.table.push(vec![UNDEF; self.cols]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][x ^ 1] = c;
        Ok(())
    }

    fn merge(&mut self, k: usize, l: usize) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k == l {
            return;
        }
        let (lo, hi) = (k.min(l), k.max(l));
        self.parent[hi] = lo;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.table[g][x];
                if d == UNDEF {
                    continue;
                }
                if self.table[d][x ^ 1] == g {
                    self.table[d][x ^ 1] = UNDEF;
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.table[mu][x] != UNDEF {
                    let t = self.table[mu][x];
                    self.merge(nu, t);
                } else if self.table[nu][x ^ 1] != UNDEF {
                    let t = self.table[nu][x ^ 1];
                    self.merge(mu, t);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][x ^ 1] = mu;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        let mut f = c;
        let mut b = c;
        let mut i = 0;
        let mut j = w.len();
        loop {
            while i < j && self.table[f][w[i]] != UNDEF {
                f = self.table[f][w[i]];
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.table[b][w[j - 1] ^ 1] != UNDEF {
                b = self.table[b][w[j - 1] ^ 1];
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.table[f][w[i]] = b;
                self.table[b][w[i] ^ 1] = f;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// HLT enumeration of the cosets of the trivial subgroup, defining at most
/// `bound` cosets.
pub fn todd_coxeter(p: &GroupPresentation, bound: usize) -> Result<CosetTable> {
    let cols = 2 * p.generators.len();
    let relators: Vec<Vec<usize>> = p.relators().iter().map(|w| w.iter().map(|&l| col(l)).collect()).collect();
    let mut e = Enumerator { table: vec![vec![UNDEF; cols]], parent: vec![0], cols, bound: bound.max(1), queue: Vec::new() };
    let mut c = 0;
    while c < e.table.len() {
        for r in &relators {
            if !e.live(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        for x in 0..cols {
            if e.live(c) && e.table[c][x] == UNDEF {
                e.define(c, x)?;
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.live(c)).collect();
    let mut renumber = vec![UNDEF; e.table.len()];
    for (k, &c) in live.iter().enumerate() {
        renumber[c] = k;
    }
    let table: Vec<Vec<usize>> =
        live.iter().map(|&c| e.table[c].clone().into_iter().map(|d| renumber[e.rep(d)]).collect()).collect();
    let order = table.len();
    Ok(CosetTable { table, complete: true, order: Some(order) })
}

/// Rank and torsion coefficients of the abelianization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

pub fn abelianization(p: &GroupPresentation) -> Abelianization {
    let n = p.generators.len();
    let rows: Vec<Vec<i64>> = p
        .relators()
        .iter()
        .map(|w| {
            let mut row = vec![0i64; n];
            for l in w {
                row[l.gen] += if l.inverse { -1 } else { 1 };
            }
            row
        })
        .collect();
    let s = smith_normal_form(&rows, n);
    Abelianization { rank: n - s.rank, torsion: s.torsion() }
}

/// What is known about the order of a presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Finiteness {
    Finite(CosetTable),
    /// Certified infinite by a free abelian summand of this rank.
    Infinite { rank: usize },
    Inconclusive(String),
}

pub fn certify(p: &GroupPresentation, bound: usize) -> Finiteness {
    match todd_coxeter(p, bound) {
        Ok(t) => Finiteness::Finite(t),
        Err(e) => match abelianization(p).rank {
            0 => Finiteness::Inconclusive(e.to_string()),
            rank => Finiteness::Infinite { rank },
        },
    }
}

/// The universal cover as a twisted product `G × X`.
#[derive(Clone, Debug)]
pub struct CoverData {
    pub base: Arc<SimplicialSet>,
    pub group: Arc<FiniteGroup>,
    pub total: Arc<SimplicialSet>,
    pub projection: SimplicialMap,
    /// Left action `h · (g, x) = (hg, x)`.
    pub deck: GSimplicialSet,
}

/// Class of the `(0,1)`-edge of a simplex of dimension at least 1, as a coset column.
fn front_edge(x: &SimplicialSet, s: &SimplexRef) -> Option<usize> {
    let e = if s.dim == 1 { s.clone() } else { x.apply_monotone(s, &[0, 1]) };
    (!e.is_degenerate()).then_some(2 * e.base.index)
}

/// Simplices `(g, x)` with `d₀(g, x) = (g·[x₀₁], d₀x)` and every other operator
/// acting on `x`. Nondegenerate `(g, x)` is stored at `x.index * |G| + g`.
pub fn universal_cover(x: &Arc<SimplicialSet>, t: &CosetTable) -> Result<CoverData> {
    if !t.complete {
        return Err(Error::Inconclusive("coset table is incomplete".into()));
    }
    let p = edge_path_presentation(x)?;
    let group = Arc::new(t.group(&p)?);
    let order = group.order();
    let top = x.top_dim();
    let mut total = SimplicialSet::new(x.dimension_bound(), order == 1);
    for n in 0..=top {
        for (i, s) in x.nondegenerate(n).iter().enumerate() {
            let sref = SimplexRef::nondegenerate(NdRef { dim: n, index: i });
            let twist = if n == 0 { None } else { front_edge(x, &sref) };
            for g in 0..order {
                let faces = s
                    .faces
                    .iter()
                    .enumerate()
                    .map(|(k, f)| {
                        let h = match (k, twist) {
                            (0, Some(c)) => t.table[g][c],
                            _ => g,
                        };
                        SimplexRef { dim: f.dim, word: f.word.clone(), base: NdRef { dim: f.base.dim, index: f.base.index * order + h } }
                    })
                    .collect();
                total.add_simplex_refs(&format!("{}[{}]", s.name, group.name(g)), n, faces)?;
            }
        }
    }
    let total = Arc::new(total);
    let images = (0..=x.dimension_bound())
        .map(|n| {
            (0..total.nd_count(n))
                .map(|k| SimplexRef::nondegenerate(NdRef { dim: n, index: k / order }))
                .collect()
        })
        .collect();
    let projection = SimplicialMap::new(total.clone(), x.clone(), images)?;
    let action = (0..order)
        .map(|h| {
            (0..=x.dimension_bound())
                .map(|n| (0..total.nd_count(n)).map(|k| (k / order) * order + group.mul(h, k % order)).collect())
                .collect()
        })
        .collect();
    let deck = GSimplicialSet::new(group.clone(), total.clone(), action)?;
    Ok(CoverData { base: x.clone(), group, total, projection, deck })
}

/// Homology of the universal cover; requires `π₁` to enumerate within `bound` cosets.
pub fn cover_homology(x: &Arc<SimplicialSet>, field: &Field, bound: usize) -> Result<Vec<usize>> {
    let p = edge_path_presentation(x)?;
    let t = match certify(&p, bound) {
        Finiteness::Finite(t) => t,
        Finiteness::Infinite { rank } => {
            return Err(Error::Unsupported(format!("π₁ is infinite (abelianization rank {rank})")))
        }
        Finiteness::Inconclusive(m) => return Err(Error::Inconclusive(m)),
    };
    let cover = universal_cover(x, &t)?;
    Ok(nondegenerate_chain_complex(&cover.total, field)?.homology_dims())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn model_groups() {
        let order = |x: SimplicialSet| todd_coxeter(&edge_path_presentation(&x).unwrap(), 100).map(|t| t.order);
        assert_eq!(order(models::rp2()).unwrap(), Some(2));
        assert_eq!(order(models::s2()).unwrap(), Some(1));
        assert_eq!(order(models::point()).unwrap(), Some(1));
        assert!(matches!(order(models::s1()), Err(Error::Inconclusive(_))));
        assert_eq!(abelianization(&edge_path_presentation(&models::s1()).unwrap()).rank, 1);
    }

    #[test]
    fn classical_presentations() {
        let cases = [
            ("< a, b | a*a*a = 1, b*b = 1, a*b = b*a^-1 >", 6),
            ("< a, b | a*a = 1, b*b*b = 1, a*b*a*b*a*b = 1 >", 12),
            ("< a, b | a*a = 1, b*b*b = 1, a*b*a*b*a*b*a*b = 1 >", 24),
            ("< a, b | a*a = 1, b*b*b = 1, a*b*a*b*a*b*a*b*a*b = 1 >", 60),
            ("< a | a*a*a*a*a = 1 >", 5),
        ];
        for (s, n) in cases {
            let p = GroupPresentation::parse(s).unwrap();
            let t = todd_coxeter(&p, 2000).unwrap();
            assert_eq!(t.order, Some(n), "{s}");
            assert_eq!(t.group(&p).unwrap().order(), n);
        }
    }

    #[test]
    fn rp2_cover() {
        let x = Arc::new(models::rp2());
        let t = todd_coxeter(&edge_path_presentation(&x).unwrap(), 10).unwrap();
        let c = universal_cover(&x, &t).unwrap();
        c.total.validate().unwrap();
        assert_eq!(c.total.nd_count(2), 4);
        assert_eq!(cover_homology(&x, &Field::rational(), 10).unwrap()[..3], [1, 0, 1]);
        assert!(matches!(cover_homology(&Arc::new(models::s1()), &Field::rational(), 50), Err(Error::Unsupported(_))));
    }
}
