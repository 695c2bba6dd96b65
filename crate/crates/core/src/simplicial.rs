//! Finite simplicial sets stored by their nondegenerate simplices.
//!
//! Every simplex is written in Eilenberg–Zilber form `s_{i_r} ... s_{i_1} y`
//! with `i_r > ... > i_1` and `y` nondegenerate. Internally the degeneracy
//! word is the same thing as a monotone surjection `θ : [n] -> [k]`, whose
//! repeated positions `θ(j) = θ(j+1)` are exactly the indices of the word.
//! All simplicial operators are computed by composing monotone maps and
//! factoring them as surjection followed by injection; injections are pushed
//! through the stored face data one coface at a time.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A strictly decreasing list of degeneracy indices `i_r > ... > i_1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegeneracyWord(Vec<usize>);

impl DegeneracyWord {
    pub fn empty() -> Self {
        DegeneracyWord(Vec::new())
    }

    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidInput(format!("degeneracy word {indices:?} is not strictly decreasing")));
        }
        Ok(DegeneracyWord(indices))
    }

    /// Canonical form of `s_{ops[last]} ... s_{ops[0]}` applied to a `k`-simplex.
    pub fn canonicalize(ops: &[usize], k: usize) -> Result<Self> {
        let mut theta: Vec<usize> = (0..=k).collect();
        for &j in ops {
            let n = theta.len() - 1;
            if j > n {
                return Err(Error::InvalidInput(format!("s{j} applied to a {n}-simplex")));
            }
            theta = (0..=n + 1).map(|i| theta[if i <= j { i } else { i - 1 }]).collect();
        }
        Ok(word_of_surjection(&theta))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses `""`, `"s0"`, `"s2s1s0"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(DegeneracyWord::empty());
        }
        let mut out = Vec::new();
        for part in s.split('s').skip(1) {
            let i: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad degeneracy word {s:?}")))?;
            out.push(i);
        }
        if !s.starts_with('s') || out.is_empty() {
            return Err(Error::Parse(format!("bad degeneracy word {s:?}")));
        }
        DegeneracyWord::new(out)
    }

    /// The surjection `[k + r] -> [k]` this word stands for.
    pub fn surjection(&self, k: usize) -> Vec<usize> {
        let n = k + self.0.len();
        let mut theta = Vec::with_capacity(n + 1);
        let mut v = 0;
        theta.push(0);
        for j in 0..n {
            if !self.0.contains(&j) {
                v += 1;
            }
            theta.push(v);
        }
        theta
    }

    /// Whether the word can act on a `k`-simplex.
    pub fn valid_for(&self, k: usize) -> bool {
        let n = k + self.0.len();
        self.0.iter().all(|&i| i < n)
    }
}

impl fmt::Display for DegeneracyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.0 {
            write!(f, "s{i}")?;
        }
        Ok(())
    }
}

fn word_of_surjection(theta: &[usize]) -> DegeneracyWord {
    let mut w: Vec<usize> = (0..theta.len().saturating_sub(1)).filter(|&j| theta[j] == theta[j + 1]).collect();
    w.reverse();
    DegeneracyWord(w)
}

/// Splits a monotone map into a surjection followed by an injection.
fn factor(alpha: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut inj: Vec<usize> = alpha.to_vec();
    inj.dedup();
    let surj = alpha.iter().map(|a| inj.binary_search(a).unwrap()).collect();
    (surj, inj)
}

/// Position of a nondegenerate simplex: dimension and index within that dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NdRef {
    pub dim: usize,
    pub index: usize,
}

/// An arbitrary simplex in canonical form `word · base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexRef {
    pub dim: usize,
    pub word: DegeneracyWord,
    pub base: NdRef,
}

impl SimplexRef {
    pub fn nondegenerate(base: NdRef) -> Self {
        SimplexRef { dim: base.dim, word: DegeneracyWord::empty(), base }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.word.is_empty()
    }

    fn surjection(&self) -> Vec<usize> {
        self.word.surjection(self.base.dim)
    }

    fn from_surjection(theta: &[usize], base: NdRef) -> Self {
        SimplexRef { dim: theta.len() - 1, word: word_of_surjection(theta), base }
    }

    /// `θ^* self` for a monotone surjection `θ : [m] -> [dim]`.
    pub fn degenerate_by(&self, theta: &[usize]) -> Self {
        let rho = self.surjection();
        let comp: Vec<usize> = theta.iter().map(|&t| rho[t]).collect();
        SimplexRef::from_surjection(&comp, self.base)
    }
}

/// A stored nondegenerate simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub name: String,
    /// `faces[i]` is `d_i` of this simplex; empty for vertices.
    pub faces: Vec<SimplexRef>,
}

/// A failed simplicial identity `d_i d_j = d_{j-1} d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityViolation {
    pub simplex: String,
    pub dim: usize,
    pub i: usize,
    pub j: usize,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for IdentityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(d{}, d{}) on {}-simplex {}: d{} d{} = {} but d{} d{} = {}",
            self.i,
            self.j,
            self.dim,
            self.simplex,
            self.i,
            self.j,
            self.lhs,
            self.j - 1,
            self.i,
            self.rhs
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    dimension_bound: usize,
    reduced: bool,
    nd: Vec<Vec<Simplex>>,
    lookup: Vec<HashMap<String, usize>>,
}

impl SimplicialSet {
    pub fn new(dimension_bound: usize, reduced: bool) -> Self {
        SimplicialSet {
            dimension_bound,
            reduced,
            nd: vec![Vec::new(); dimension_bound + 1],
            lookup: vec![HashMap::new(); dimension_bound + 1],
        }
    }

    pub fn dimension_bound(&self) -> usize {
        self.dimension_bound
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn set_reduced(&mut self, reduced: bool) {
        self.reduced = reduced;
    }

    /// Highest dimension holding a nondegenerate simplex.
    pub fn top_dim(&self) -> usize {
        (0..=self.dimension_bound).rev().find(|&n| !self.nd[n].is_empty()).unwrap_or(0)
    }

    pub fn nondegenerate(&self, n: usize) -> &[Simplex] {
        self.nd.get(n).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn nd_count(&self, n: usize) -> usize {
        self.nondegenerate(n).len()
    }

    pub fn nd_refs(&self, n: usize) -> impl Iterator<Item = NdRef> + '_ {
        (0..self.nd_count(n)).map(move |index| NdRef { dim: n, index })
    }

    pub fn all_nd_refs(&self) -> Vec<NdRef> {
        (0..=self.dimension_bound).flat_map(|n| self.nd_refs(n)).collect()
    }

    pub fn simplex(&self, r: NdRef) -> &Simplex {
        &self.nd[r.dim][r.index]
    }

    pub fn name(&self, r: NdRef) -> &str {
        &self.nd[r.dim][r.index].name
    }

    pub fn find(&self, dim: usize, name: &str) -> Option<NdRef> {
        self.lookup.get(dim)?.get(name).map(|&index| NdRef { dim, index })
    }

    /// Finds a nondegenerate simplex by name in any dimension; errors when ambiguous.
    pub fn find_any(&self, name: &str) -> Result<NdRef> {
        let hits: Vec<NdRef> = (0..=self.dimension_bound).filter_map(|n| self.find(n, name)).collect();
        match hits.as_slice() {
            [r] => Ok(*r),
            [] => Err(Error::UnknownSimplex(name.to_string())),
            _ => Err(Error::InvalidInput(format!("simplex name {name:?} occurs in several dimensions"))),
        }
    }

    pub fn basepoint(&self) -> Option<NdRef> {
        (self.nd_count(0) > 0).then_some(NdRef { dim: 0, index: 0 })
    }

    /// Adds a nondegenerate simplex; `faces` are `(word, name)` pairs, one per face.
    pub fn add_simplex(&mut self, name: &str, faces: &[(&str, &str)]) -> Result<NdRef> {
        let dim = faces.len().saturating_sub(1);
        if faces.len() == 1 {
            return Err(Error::InvalidInput(format!("simplex {name:?} has exactly one face")));
        }
        let mut refs = Vec::with_capacity(faces.len());
        for (w, fname) in faces {
            let word = DegeneracyWord::parse(w)?;
            let base_dim = (dim - 1).checked_sub(word.len()).ok_or_else(|| {
                Error::InvalidInput(format!("face word {w:?} too long for a face of {name:?}"))
            })?;
            let base = self
                .find(base_dim, fname)
                .ok_or_else(|| Error::UnknownSimplex(format!("{fname} (dimension {base_dim}, face of {name})")))?;
            refs.push(SimplexRef { dim: dim - 1, word, base });
        }
        self.add_simplex_refs(name, dim, refs)
    }

    pub fn add_simplex_refs(&mut self, name: &str, dim: usize, faces: Vec<SimplexRef>) -> Result<NdRef> {
        if dim > self.dimension_bound {
            return Err(Error::DimensionBound { requested: dim, bound: self.dimension_bound });
        }
        if self.lookup[dim].contains_key(name) {
            return Err(Error::InvalidInput(format!("duplicate {dim}-simplex name {name:?}")));
        }
        let expected = if dim == 0 { 0 } else { dim + 1 };
        if faces.len() != expected {
            return Err(Error::InvalidInput(format!("{dim}-simplex {name:?} needs {expected} faces")));
        }
        for f in &faces {
            if f.dim + 1 != dim || f.base.dim + f.word.len() != f.dim || !f.word.valid_for(f.base.dim) {
                return Err(Error::InvalidInput(format!("malformed face of {name:?}")));
            }
            if f.base.index >= self.nd_count(f.base.dim) {
                return Err(Error::UnknownSimplex(format!("face of {name:?}")));
            }
        }
        let index = self.nd[dim].len();
        self.nd[dim].push(Simplex { name: name.to_string(), faces });
        self.lookup[dim].insert(name.to_string(), index);
        Ok(NdRef { dim, index })
    }

    /// Applies a stored coface chain: `η^* y` for a monotone injection `η : [m] -> [y.dim]`.
    fn apply_injection(&self, y: NdRef, eta: &[usize]) -> SimplexRef {
        let k = y.dim;
        if eta.len() == k + 1 {
            return SimplexRef::nondegenerate(y);
        }
        let v = (0..=k).rev().find(|v| !eta.contains(v)).unwrap();
        let eta1: Vec<usize> = eta.iter().map(|&e| if e > v { e - 1 } else { e }).collect();
        let face = &self.nd[k][y.index].faces[v];
        let rho = face.surjection();
        let comp: Vec<usize> = eta1.iter().map(|&e| rho[e]).collect();
        let (pi, iota) = factor(&comp);
        self.apply_injection(face.base, &iota).degenerate_by(&pi)
    }

    /// `α^* x` for a monotone map `α : [m] -> [x.dim]`.
    pub fn apply_monotone(&self, x: &SimplexRef, alpha: &[usize]) -> SimplexRef {
        let theta = x.surjection();
        let comp: Vec<usize> = alpha.iter().map(|&a| theta[a]).collect();
        let (pi, iota) = factor(&comp);
        self.apply_injection(x.base, &iota).degenerate_by(&pi)
    }

    pub fn face(&self, x: &SimplexRef, i: usize) -> SimplexRef {
        assert!(x.dim > 0 && i <= x.dim, "d{i} on a {}-simplex", x.dim);
        let alpha: Vec<usize> = (0..=x.dim).filter(|&v| v != i).collect();
        self.apply_monotone(x, &alpha)
    }

    pub fn degeneracy(&self, x: &SimplexRef, j: usize) -> SimplexRef {
        assert!(j <= x.dim, "s{j} on a {}-simplex", x.dim);
        let sigma: Vec<usize> = (0..=x.dim + 1).map(|i| if i <= j { i } else { i - 1 }).collect();
        x.degenerate_by(&sigma)
    }

    /// All `n`-simplices: nondegenerate ones first, then by base dimension descending.
    pub fn simplices(&self, n: usize) -> Result<Vec<SimplexRef>> {
        if n > self.dimension_bound {
            return Err(Error::DimensionBound { requested: n, bound: self.dimension_bound });
        }
        let mut out = Vec::new();
        for k in (0..=n).rev() {
            let words = words_of_length(n, n - k);
            for base in self.nd_refs(k) {
                for w in &words {
                    out.push(SimplexRef { dim: n, word: w.clone(), base });
                }
            }
        }
        Ok(out)
    }

    pub fn count_simplices(&self, n: usize) -> Result<usize> {
        if n > self.dimension_bound {
            return Err(Error::DimensionBound { requested: n, bound: self.dimension_bound });
        }
        Ok((0..=n).map(|k| self.nd_count(k) * binomial(n, n - k)).sum())
    }

    pub fn format_simplex(&self, x: &SimplexRef) -> String {
        format!("{}{}", x.word, self.name(x.base))
    }

    /// First failure of `d_i d_j = d_{j-1} d_i` (i < j) over nondegenerate simplices.
    pub fn check_identities(&self) -> Option<IdentityViolation> {
        for n in 2..=self.dimension_bound {
            for r in self.nd_refs(n) {
                let x = SimplexRef::nondegenerate(r);
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = self.face(&self.face(&x, j), i);
                        let rhs = self.face(&self.face(&x, i), j - 1);
                        if lhs != rhs {
                            return Some(IdentityViolation {
                                simplex: self.name(r).to_string(),
                                dim: n,
                                i,
                                j,
                                lhs: self.format_simplex(&lhs),
                                rhs: self.format_simplex(&rhs),
                            });
                        }
                    }
                }
            }
        }
        None
    }

    pub fn validate(&self) -> Result<()> {
        if self.reduced && self.nd_count(0) != 1 {
            return Err(Error::NotReduced(format!("{} vertices", self.nd_count(0))));
        }
        for n in 1..=self.dimension_bound {
            for s in &self.nd[n] {
                for f in &s.faces {
                    if f.base.index >= self.nd_count(f.base.dim) {
                        return Err(Error::UnknownSimplex(format!("face of {}", s.name)));
                    }
                }
            }
        }
        match self.check_identities() {
            Some(v) => Err(Error::Violation(v.to_string())),
            None => Ok(()),
        }
    }

    /// Copy with a different dimension bound; fails if simplices would be dropped.
    pub fn with_dimension_bound(&self, d: usize) -> Result<SimplicialSet> {
        if d < self.top_dim() {
            return Err(Error::DimensionBound { requested: self.top_dim(), bound: d });
        }
        let mut out = SimplicialSet::new(d, self.reduced);
        for n in 0..=self.top_dim() {
            for s in &self.nd[n] {
                out.add_simplex_refs(&s.name, n, s.faces.clone())?;
            }
        }
        Ok(out)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Canonical words of length `r` acting on `(n - r)`-simplices, in lexicographic order.
fn words_of_length(n: usize, r: usize) -> Vec<DegeneracyWord> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<DegeneracyWord>) {
        if cur.len() == r {
            let mut w = cur.clone();
            w.reverse();
            out.push(DegeneracyWord(w));
            return;
        }
        for j in start..n {
            cur.push(j);
            rec(j + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

/// A simplicial map, given by the images of the nondegenerate simplices.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
    images: Vec<Vec<SimplexRef>>,
}

impl PartialEq for SimplicialMap {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.images == other.images
    }
}

impl SimplicialMap {
    pub fn new(source: Arc<SimplicialSet>, target: Arc<SimplicialSet>, images: Vec<Vec<SimplexRef>>) -> Result<Self> {
        if target.dimension_bound() < source.dimension_bound() {
            return Err(Error::DimensionBound {
                requested: source.dimension_bound(),
                bound: target.dimension_bound(),
            });
        }
        for n in 0..=source.dimension_bound() {
            let imgs = images.get(n).map(|v| v.as_slice()).unwrap_or(&[]);
            if imgs.len() != source.nd_count(n) {
                return Err(Error::InvalidInput(format!("map needs {} images in dimension {n}", source.nd_count(n))));
            }
            for y in imgs {
                if y.dim != n || y.base.index >= target.nd_count(y.base.dim) {
                    return Err(Error::InvalidInput(format!("image of a {n}-simplex has the wrong shape")));
                }
            }
        }
        let mut images = images;
        images.resize(source.dimension_bound() + 1, Vec::new());
        Ok(SimplicialMap { source, target, images })
    }

    /// Builds a map from `(source name, word, target name)` triples. Vertices may be
    /// omitted when the target is reduced.
    pub fn from_names(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        images: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let mut table: Vec<Vec<Option<SimplexRef>>> =
            (0..=source.dimension_bound()).map(|n| vec![None; source.nd_count(n)]).collect();
        for (s, w, t) in images {
            let r = source.find_any(s)?;
            let word = DegeneracyWord::parse(w)?;
            let bd = r.dim.checked_sub(word.len()).ok_or_else(|| Error::InvalidInput(format!("word {w:?} too long")))?;
            let base = target.find(bd, t).ok_or_else(|| Error::UnknownSimplex(format!("{t} (dimension {bd})")))?;
            if !word.valid_for(bd) {
                return Err(Error::InvalidInput(format!("word {w:?} invalid on a {bd}-simplex")));
            }
            table[r.dim][r.index] = Some(SimplexRef { dim: r.dim, word, base });
        }
        if let Some(bp) = target.basepoint().filter(|_| target.nd_count(0) == 1) {
            for slot in table[0].iter_mut().filter(|s| s.is_none()) {
                *slot = Some(SimplexRef::nondegenerate(bp));
            }
        }
        let mut out = Vec::new();
        for (n, row) in table.into_iter().enumerate() {
            let mut v = Vec::new();
            for (i, slot) in row.into_iter().enumerate() {
                v.push(slot.ok_or_else(|| {
                    Error::InvalidInput(format!("no image for {}", source.name(NdRef { dim: n, index: i })))
                })?);
            }
            out.push(v);
        }
        SimplicialMap::new(source, target, out)
    }

    pub fn identity(x: Arc<SimplicialSet>) -> Self {
        let images = (0..=x.dimension_bound()).map(|n| x.nd_refs(n).map(SimplexRef::nondegenerate).collect()).collect();
        SimplicialMap { source: x.clone(), target: x, images }
    }

    pub fn source(&self) -> &Arc<SimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn image_of(&self, r: NdRef) -> &SimplexRef {
        &self.images[r.dim][r.index]
    }

    pub fn apply(&self, x: &SimplexRef) -> SimplexRef {
        self.image_of(x.base).degenerate_by(&x.surjection())
    }

    /// Checks `f(d_i y) = d_i f(y)` for every nondegenerate `y`.
    pub fn validate(&self) -> Result<()> {
        if self.target.dimension_bound() < self.source.dimension_bound() {
            return Err(Error::DimensionBound {
                requested: self.source.dimension_bound(),
                bound: self.target.dimension_bound(),
            });
        }
        for n in 1..=self.source.dimension_bound() {
            for r in self.source.nd_refs(n) {
                let x = SimplexRef::nondegenerate(r);
                let fx = self.apply(&x);
                for i in 0..=n {
                    let a = self.apply(&self.source.face(&x, i));
                    let b = self.target.face(&fx, i);
                    if a != b {
                        return Err(Error::Violation(format!(
                            "map does not commute with d{i} on {}: f(d{i} x) = {} but d{i} f(x) = {}",
                            self.source.name(r),
                            self.target.format_simplex(&a),
                            self.target.format_simplex(&b)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap> {
        if *self.target != *other.source {
            return Err(Error::InvalidInput("maps are not composable".into()));
        }
        let images = self.images.iter().map(|row| row.iter().map(|y| other.apply(y)).collect()).collect();
        SimplicialMap::new(self.source.clone(), other.target.clone(), images)
    }

    /// Injective on all simplices: nondegenerate images, pairwise distinct.
    pub fn is_monomorphism(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.images.iter().flatten().all(|y| !y.is_degenerate() && seen.insert(y.base))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_monomorphism()
            && (0..=self.target.dimension_bound()).all(|n| {
                self.target.nd_count(n) == self.images.get(n).map(|v| v.len()).unwrap_or(0)
            })
    }

    pub fn images(&self) -> &[Vec<SimplexRef>] {
        &self.images
    }
}

/// Searches for an isomorphism `x -> y` by backtracking over nondegenerate simplices.
pub fn find_isomorphism(x: &Arc<SimplicialSet>, y: &Arc<SimplicialSet>) -> Option<SimplicialMap> {
    let d = x.dimension_bound().max(y.dimension_bound());
    for n in 0..=d {
        if x.nd_count(n) != y.nd_count(n) {
            return None;
        }
    }
    let order: Vec<NdRef> = x.all_nd_refs();
    let mut images: Vec<Vec<Option<NdRef>>> = (0..=x.dimension_bound()).map(|n| vec![None; x.nd_count(n)]).collect();
    let mut used: Vec<Vec<bool>> = (0..=y.dimension_bound()).map(|n| vec![false; y.nd_count(n)]).collect();

    fn map_ref(images: &[Vec<Option<NdRef>>], s: &SimplexRef) -> SimplexRef {
        SimplexRef { dim: s.dim, word: s.word.clone(), base: images[s.base.dim][s.base.index].unwrap() }
    }

    fn rec(
        pos: usize,
        order: &[NdRef],
        x: &SimplicialSet,
        y: &SimplicialSet,
        images: &mut Vec<Vec<Option<NdRef>>>,
        used: &mut Vec<Vec<bool>>,
    ) -> bool {
        let Some(&r) = order.get(pos) else { return true };
        let faces = &x.simplex(r).faces;
        for cand in y.nd_refs(r.dim) {
            if used[r.dim][cand.index] {
                continue;
            }
            let ok = faces.iter().zip(&y.simplex(cand).faces).all(|(a, b)| map_ref(images, a) == *b);
            if !ok {
                continue;
            }
            images[r.dim][r.index] = Some(cand);
            used[r.dim][cand.index] = true;
            if rec(pos + 1, order, x, y, images, used) {
                return true;
            }
            images[r.dim][r.index] = None;
            used[r.dim][cand.index] = false;
        }
        false
    }

    if !rec(0, &order, x, y, &mut images, &mut used) {
        return None;
    }
    let imgs = images
        .into_iter()
        .map(|row| row.into_iter().map(|r| SimplexRef::nondegenerate(r.unwrap())).collect())
        .collect();
    SimplicialMap::new(x.clone(), y.clone(), imgs).ok()
}

pub fn isomorphic(x: &Arc<SimplicialSet>, y: &Arc<SimplicialSet>) -> bool {
    find_isomorphism(x, y).is_some()
}

/// One-vertex union of reduced simplicial sets with its inclusions.
#[derive(Clone, Debug)]
pub struct Wedge {
    pub space: Arc<SimplicialSet>,
    pub inclusions: Vec<SimplicialMap>,
}

/// Wedge of reduced simplicial sets. A name already used in the same
/// dimension by an earlier summand becomes `name@k` for the `k`-th input
/// (primed further if that is taken too).
pub fn wedge(inputs: &[Arc<SimplicialSet>]) -> Result<Wedge> {
    let first = inputs.first().ok_or_else(|| Error::InvalidInput("wedge of no spaces".into()))?;
    for (k, x) in inputs.iter().enumerate() {
        if !x.is_reduced() || x.nd_count(0) != 1 {
            return Err(Error::NotReduced(format!("wedge summand {k}")));
        }
    }
    let d = inputs.iter().map(|x| x.dimension_bound()).max().unwrap();
    let mut w = SimplicialSet::new(d, true);
    let bp = w.add_simplex_refs(first.name(NdRef { dim: 0, index: 0 }), 0, Vec::new())?;
    let mut tables: Vec<Vec<Vec<NdRef>>> = Vec::new();
    for (k, x) in inputs.iter().enumerate() {
        let mut table: Vec<Vec<NdRef>> = vec![vec![bp]];
        for n in 1..=x.dimension_bound() {
            let mut row = Vec::new();
            for s in x.nondegenerate(n) {
                let name = fresh_name(&w, n, &s.name, &k.to_string());
                let faces = s
                    .faces
                    .iter()
                    .map(|f| SimplexRef { dim: f.dim, word: f.word.clone(), base: table[f.base.dim][f.base.index] })
                    .collect();
                row.push(w.add_simplex_refs(&name, n, faces)?);
            }
            table.push(row);
        }
        tables.push(table);
    }
    let space = Arc::new(w);
    let inclusions = inputs
        .iter()
        .zip(tables)
        .map(|(x, t)| {
            let imgs = t.into_iter().map(|row| row.into_iter().map(SimplexRef::nondegenerate).collect()).collect();
            SimplicialMap::new(x.clone(), space.clone(), imgs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Wedge { space, inclusions })
}

/// Pushout of `X <- A -> Y` where at least one leg is a monomorphism.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub space: Arc<SimplicialSet>,
    pub from_x: SimplicialMap,
    pub from_y: SimplicialMap,
    /// Which nondegenerate simplex of `P` each one came from: `(true, r)` for
    /// `r` in the non-collapsed leg's target.
    origin: Vec<Vec<(bool, NdRef)>>,
    mono_is_x: bool,
    f: SimplicialMap,
    g: SimplicialMap,
}

/// Degreewise set pushout of `f : A -> X` and `g : A -> Y`.
///
/// With `f` a monomorphism the nondegenerate simplices of `P` are those of
/// `Y` followed by those of `X` outside `f(A)`; symmetrically for `g`. Names
/// from the glued-in side that clash with existing ones get an `@1` suffix.
pub fn pushout(f: &SimplicialMap, g: &SimplicialMap) -> Result<Pushout> {
    if *f.source() != *g.source() {
        return Err(Error::InvalidInput("pushout legs have different sources".into()));
    }
    let (m, h, mono_is_x) = if f.is_monomorphism() {
        (f, g, true)
    } else if g.is_monomorphism() {
        (g, f, false)
    } else {
        return Err(Error::NotMonomorphism("neither pushout leg is injective".into()));
    };
    let big = m.target().clone();
    let other = h.target().clone();
    let d = big.dimension_bound().max(other.dimension_bound());
    let mut p = SimplicialSet::new(d, false);
    let mut origin: Vec<Vec<(bool, NdRef)>> = vec![Vec::new(); d + 1];
    // Where each nondegenerate simplex of `other` and `big` lands in P.
    let mut other_to_p: Vec<Vec<SimplexRef>> = vec![Vec::new(); other.dimension_bound() + 1];
    let mut big_to_p: Vec<Vec<Option<SimplexRef>>> =
        (0..=big.dimension_bound()).map(|n| vec![None; big.nd_count(n)]).collect();
    let a = m.source().clone();
    for r in a.all_nd_refs() {
        let mb = m.image_of(r).base;
        big_to_p[mb.dim][mb.index] = Some(SimplexRef::nondegenerate(NdRef { dim: 0, index: 0 })); // placeholder
    }
    for n in 0..=d {
        for r in other.nd_refs(n) {
            let s = other.simplex(r);
            let faces = s.faces.iter().map(|f| translate(&other_to_p, f)).collect();
            let pr = p.add_simplex_refs(&s.name, n, faces)?;
            other_to_p[n].push(SimplexRef::nondegenerate(pr));
            origin[n].push((false, r));
        }
        // Images of A-simplices under h, now that dimension n of `other` is placed.
        for r in a.nd_refs(n) {
            let mb = m.image_of(r).base;
            let hy = h.image_of(r);
            big_to_p[mb.dim][mb.index] = Some(translate(&other_to_p, hy));
        }
        for r in big.nd_refs(n) {
            if big_to_p[n][r.index].is_some() {
                continue;
            }
            let s = big.simplex(r);
            let faces = s
                .faces
                .iter()
                .map(|f| big_to_p[f.base.dim][f.base.index].as_ref().unwrap().degenerate_by(&f.surjection()))
                .collect();
            let name = fresh_name(&p, n, &s.name, "1");
            let pr = p.add_simplex_refs(&name, n, faces)?;
            big_to_p[n][r.index] = Some(SimplexRef::nondegenerate(pr));
            origin[n].push((true, r));
        }
    }
    let reduced = p.nd_count(0) == 1;
    p.set_reduced(reduced);
    let space = Arc::new(p);
    let from_big = SimplicialMap::new(
        big.clone(),
        space.clone(),
        big_to_p.into_iter().map(|row| row.into_iter().map(|x| x.unwrap()).collect()).collect(),
    )?;
    let from_other = SimplicialMap::new(other.clone(), space.clone(), other_to_p)?;
    let (from_x, from_y) = if mono_is_x { (from_big, from_other) } else { (from_other, from_big) };
    Ok(Pushout { space, from_x, from_y, origin, mono_is_x, f: f.clone(), g: g.clone() })
}

/// `name`, or `name@tag` if taken, with primes appended until unused.
pub(crate) fn fresh_name(x: &SimplicialSet, n: usize, name: &str, tag: &str) -> String {
    if x.find(n, name).is_none() {
        return name.to_string();
    }
    let mut cand = format!("{name}@{tag}");
    while x.find(n, &cand).is_some() {
        cand.push('\'');
    }
    cand
}

fn translate(table: &[Vec<SimplexRef>], s: &SimplexRef) -> SimplexRef {
    table[s.base.dim][s.base.index].degenerate_by(&s.surjection())
}

impl Pushout {
    /// The map `P -> Z` induced by a cone `u : X -> Z`, `v : Y -> Z`.
    pub fn induced(&self, u: &SimplicialMap, v: &SimplicialMap) -> Result<SimplicialMap> {
        if **u.source() != **self.f.target() || **v.source() != **self.g.target() || **u.target() != **v.target() {
            return Err(Error::InvalidInput("cone does not match the pushout diagram".into()));
        }
        let a = self.f.source();
        for r in a.all_nd_refs() {
            let x = SimplexRef::nondegenerate(r);
            if u.apply(&self.f.apply(&x)) != v.apply(&self.g.apply(&x)) {
                return Err(Error::Violation(format!("cone does not commute on {}", a.name(r))));
            }
        }
        let (big_map, other_map) = if self.mono_is_x { (u, v) } else { (v, u) };
        let images = self
            .origin
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(from_big, r)| {
                        let x = SimplexRef::nondegenerate(r);
                        if from_big {
                            big_map.apply(&x)
                        } else {
                            other_map.apply(&x)
                        }
                    })
                    .collect()
            })
            .collect();
        let out = SimplicialMap::new(self.space.clone(), u.target().clone(), images)?;
        out.validate()?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use proptest::prelude::*;

    fn names(x: &SimplicialSet, n: usize) -> Vec<String> {
        x.simplices(n).unwrap().iter().map(|s| x.format_simplex(s)).collect()
    }

    #[test]
    fn circle_simplices() {
        let s1 = models::s1();
        assert_eq!(names(&s1, 1), vec!["a", "s0*"]);
        assert_eq!(names(&s1, 2), vec!["s0a", "s1a", "s1s0*"]);
        assert_eq!(s1.count_simplices(2).unwrap(), 3);
        assert!(matches!(s1.simplices(s1.dimension_bound() + 1), Err(Error::DimensionBound { .. })));
    }

    #[test]
    fn point_in_dimension_three() {
        let p = models::point();
        assert_eq!(names(&p, 3), vec!["s2s1s0*"]);
    }

    #[test]
    fn faces_of_degenerate_simplices() {
        let s1 = models::s1();
        let a = SimplexRef::nondegenerate(NdRef { dim: 1, index: 0 });
        let s0a = s1.degeneracy(&a, 0);
        // d0 s0 = d1 s0 = id, d2 s0 = s0 d1.
        assert_eq!(s1.face(&s0a, 0), a);
        assert_eq!(s1.face(&s0a, 1), a);
        assert_eq!(s1.format_simplex(&s1.face(&s0a, 2)), "s0*");
    }

    #[test]
    fn corrupted_two_simplex_is_reported() {
        let mut x = SimplicialSet::new(2, false);
        x.add_simplex("u", &[]).unwrap();
        x.add_simplex("v", &[]).unwrap();
        x.add_simplex("e", &[("", "v"), ("", "u")]).unwrap();
        x.add_simplex("f", &[("", "u"), ("", "v")]).unwrap();
        // d0 d1 t = d0 f = u but d0 d0 t = d0 e = v.
        x.add_simplex("t", &[("", "e"), ("", "f"), ("", "e")]).unwrap();
        let v = x.check_identities().unwrap();
        assert_eq!((v.i, v.j), (0, 1));
        assert!(x.validate().is_err());
    }

    #[test]
    fn unknown_face_is_an_error() {
        let mut x = SimplicialSet::new(1, true);
        x.add_simplex("*", &[]).unwrap();
        assert!(matches!(x.add_simplex("a", &[("", "*"), ("", "q")]), Err(Error::UnknownSimplex(_))));
    }

    #[test]
    fn wedges() {
        let s1 = Arc::new(models::s1());
        let s2 = Arc::new(models::s2());
        let w = wedge(&[s1.clone(), s1.clone()]).unwrap();
        assert_eq!((w.space.nd_count(0), w.space.nd_count(1)), (1, 2));
        for i in &w.inclusions {
            i.validate().unwrap();
        }
        let w = wedge(&[s1.clone()]).unwrap();
        assert_eq!(*w.space, *s1);
        let w = wedge(&[s1, s2]).unwrap();
        assert_eq!((w.space.nd_count(0), w.space.nd_count(1), w.space.nd_count(2)), (1, 1, 1));
    }

    #[test]
    fn wedge_associative_and_unital() {
        let s1 = Arc::new(models::s1());
        let rp2 = Arc::new(models::rp2());
        let t2 = Arc::new(models::t2());
        let left = wedge(&[wedge(&[s1.clone(), rp2.clone()]).unwrap().space, t2.clone()]).unwrap().space;
        let right = wedge(&[s1.clone(), wedge(&[rp2.clone(), t2.clone()]).unwrap().space]).unwrap().space;
        assert!(isomorphic(&left, &right));
        let unit = wedge(&[Arc::new(models::point().with_dimension_bound(4).unwrap()), rp2.clone()]).unwrap().space;
        assert!(isomorphic(&unit, &rp2));
    }

    #[test]
    fn collapse_of_wedge_is_a_map() {
        let w = Arc::new(models::wedge_s1_s1());
        let s1 = Arc::new(models::s1());
        let names: Vec<String> = w.nondegenerate(1).iter().map(|s| s.name.clone()).collect();
        let f = SimplicialMap::from_names(
            w,
            s1,
            &[(names[0].as_str(), "", "a"), (names[1].as_str(), "", "a")],
        )
        .unwrap();
        f.validate().unwrap();
        assert!(!f.is_monomorphism());
    }

    #[test]
    fn bad_degeneracy_shape_is_a_violation() {
        let s1 = Arc::new(models::s1());
        let t2 = Arc::new(models::t2());
        // Send the upper triangle of the torus to s1 a: its d2 face must then be a,
        // but it is sent to s0 *.
        let f = SimplicialMap::from_names(
            t2,
            s1,
            &[("a", "", "*"), ("b", "s0", "*"), ("c", "s0", "*"), ("U", "s1", "a"), ("L", "s1s0", "*")],
        );
        // "a" is a 1-simplex so word "" into a 0-simplex is rejected as malformed.
        assert!(f.is_err());
        let s1 = Arc::new(models::s1());
        let t2 = Arc::new(models::t2());
        let f = SimplicialMap::from_names(
            t2,
            s1,
            &[("a", "s0", "*"), ("b", "s0", "*"), ("c", "s0", "*"), ("U", "s1", "a"), ("L", "s1s0", "*")],
        )
        .unwrap();
        assert!(matches!(f.validate(), Err(Error::Violation(_))));
    }

    #[test]
    fn identity_on_rp2() {
        let rp2 = Arc::new(models::rp2());
        SimplicialMap::identity(rp2).validate().unwrap();
    }

    #[test]
    fn map_into_smaller_bound_is_rejected() {
        let s1 = Arc::new(models::s1());
        let small = Arc::new(models::s1().with_dimension_bound(1).unwrap());
        assert!(matches!(
            SimplicialMap::new(s1, small, vec![]),
            Err(Error::DimensionBound { .. })
        ));
    }

    #[test]
    fn pushouts() {
        let point = Arc::new(models::point().with_dimension_bound(4).unwrap());
        let s1 = Arc::new(models::s1());
        let rp2 = Arc::new(models::rp2());
        let i1 = SimplicialMap::from_names(point.clone(), s1.clone(), &[]).unwrap();
        let i2 = SimplicialMap::from_names(point.clone(), rp2.clone(), &[]).unwrap();
        let po = pushout(&i1, &i2).unwrap();
        assert!(isomorphic(&po.space, &wedge(&[s1.clone(), rp2.clone()]).unwrap().space));

        let d2 = Arc::new(models::delta(2));
        let bd = Arc::new(models::boundary_delta(2));
        let pt = Arc::new(models::point().with_dimension_bound(d2.dimension_bound()).unwrap());
        let inc = models::boundary_inclusion(&bd, &d2).unwrap();
        let collapse = models::collapse_to_point(&bd, &pt).unwrap();
        let po = pushout(&inc, &collapse).unwrap();
        assert!(po.space.is_reduced());
        assert!(isomorphic(&po.space, &Arc::new(models::s2())));
        po.from_x.validate().unwrap();
        po.from_y.validate().unwrap();

        let id = SimplicialMap::identity(s1.clone());
        let po = pushout(&id, &id).unwrap();
        assert!(isomorphic(&po.space, &s1));
    }

    #[test]
    fn pushout_needs_a_monomorphism() {
        let w = Arc::new(models::wedge_s1_s1());
        let s1 = Arc::new(models::s1());
        let names: Vec<String> = w.nondegenerate(1).iter().map(|s| s.name.clone()).collect();
        let f = SimplicialMap::from_names(w, s1, &[(names[0].as_str(), "", "a"), (names[1].as_str(), "", "a")]).unwrap();
        assert!(matches!(pushout(&f, &f), Err(Error::NotMonomorphism(_))));
    }

    #[test]
    fn pushout_universal_property() {
        let d2 = Arc::new(models::delta(2));
        let bd = Arc::new(models::boundary_delta(2));
        let pt = Arc::new(models::point().with_dimension_bound(d2.dimension_bound()).unwrap());
        let inc = models::boundary_inclusion(&bd, &d2).unwrap();
        let collapse = models::collapse_to_point(&bd, &pt).unwrap();
        let po = pushout(&inc, &collapse).unwrap();
        // Cone into the point.
        let u = models::collapse_to_point(&d2, &pt).unwrap();
        let v = SimplicialMap::identity(pt.clone());
        let w = po.induced(&u, &v).unwrap();
        assert_eq!(po.from_x.then(&w).unwrap(), u);
        assert_eq!(po.from_y.then(&w).unwrap(), v);
        // A cone into S2 given by the quotient map.
        let s2 = Arc::new(models::s2());
        let q = SimplicialMap::from_names(d2.clone(), s2.clone(), &[
            ("01", "s0", "*"), ("02", "s0", "*"), ("12", "s0", "*"), ("012", "", "σ"),
        ])
        .unwrap();
        q.validate().unwrap();
        let v = SimplicialMap::from_names(pt.clone(), s2.clone(), &[]).unwrap();
        let w = po.induced(&q, &v).unwrap();
        assert!(w.is_isomorphism());
    }

    #[test]
    fn pushout_of_mono_is_mono() {
        let s1 = Arc::new(models::s1());
        let w = wedge(&[s1.clone(), s1.clone()]).unwrap();
        let inc = &w.inclusions[0];
        let t = Arc::new(models::t2());
        let to_t = SimplicialMap::from_names(s1.clone(), t, &[("a", "", "a")]).unwrap();
        to_t.validate().unwrap();
        let po = pushout(inc, &to_t).unwrap();
        assert!(po.from_y.is_monomorphism());
        po.from_x.validate().unwrap();
    }

    proptest! {
        #[test]
        fn canonical_form_idempotent(k in 0usize..3, ops in prop::collection::vec(0usize..6, 0..5)) {
            // Clamp each operator to be valid at its step.
            let ops: Vec<usize> = ops.iter().enumerate().map(|(step, &j)| j % (k + step + 1)).collect();
            let w = DegeneracyWord::canonicalize(&ops, k).unwrap();
            // Re-applying the canonical word (innermost first) reproduces it.
            let mut inner: Vec<usize> = w.indices().to_vec();
            inner.reverse();
            prop_assert_eq!(DegeneracyWord::canonicalize(&inner, k).unwrap(), w.clone());
            prop_assert_eq!(w.len(), ops.len());
        }

        #[test]
        fn counts_match_brute_force(which in 0usize..5, n in 0usize..5) {
            let x = match which {
                0 => models::s1(),
                1 => models::rp2(),
                2 => models::t2(),
                3 => models::delta(2),
                _ => models::s2(),
            };
            // Every sequence of degeneracies applied to every nondegenerate simplex.
            let mut seen = BTreeSet::new();
            for k in 0..=n {
                for base in x.nd_refs(k) {
                    let r = n - k;
                    let mut stack = vec![SimplexRef::nondegenerate(base)];
                    for _ in 0..r {
                        stack = stack
                            .iter()
                            .flat_map(|s| (0..=s.dim).map(|j| x.degeneracy(s, j)).collect::<Vec<_>>())
                            .collect();
                    }
                    seen.extend(stack);
                }
            }
            let listed: BTreeSet<SimplexRef> = x.simplices(n).unwrap().into_iter().collect();
            prop_assert_eq!(listed.len(), x.count_simplices(n).unwrap());
            prop_assert_eq!(listed, seen);
        }

        #[test]
        fn simplicial_identities_on_all_simplices(which in 0usize..4, n in 2usize..5) {
            let x = match which {
                0 => models::rp2(),
                1 => models::t2(),
                2 => models::delta(3),
                _ => models::s2(),
            };
            for s in x.simplices(n).unwrap() {
                for j in 0..=n {
                    for i in 0..j {
                        prop_assert_eq!(x.face(&x.face(&s, j), i), x.face(&x.face(&s, i), j - 1));
                    }
                    // d_i s_j relations.
                    let sj = x.degeneracy(&s, j);
                    prop_assert_eq!(x.face(&sj, j), s.clone());
                    prop_assert_eq!(x.face(&sj, j + 1), s.clone());
                }
            }
        }
    }
}
