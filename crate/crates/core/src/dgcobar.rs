//! Normalized chains with the Alexander–Whitney coproduct, homology and the truncated cobar construction.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{dense_to_sparse, sparse_to_dense, Matrix, Rref, Vector};
use crate::scoalg::{chains, SimplicialCoalgebra};
use crate::simplicial::SimplicialSet;

/// A finite chain complex `C_0 <- C_1 <- ... <- C_top`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    field: Field,
    /// `d[n] : C_n -> C_{n-1}`, with `d[0]` the zero map to the zero space.
    d: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub dim: usize,
    /// Cycles whose classes form a basis.
    pub representatives: Vec<Vector>,
}

impl ChainComplex {
    pub fn new(field: &Field, d: Vec<Matrix>) -> Result<Self> {
        for n in 1..d.len() {
            if d[n].rows() != d[n - 1].cols() {
                return Err(Error::DimensionMismatch(format!("differential shapes at degree {n}")));
            }
        }
        if d.first().is_some_and(|m| m.rows() != 0) {
            return Err(Error::DimensionMismatch("d_0 must map to zero".into()));
        }
        Ok(ChainComplex { field: field.clone(), d })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn top(&self) -> usize {
        self.d.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.d.iter().map(|m| m.cols()).collect()
    }

    pub fn differential(&self, n: usize) -> &Matrix {
        &self.d[n]
    }

    pub fn is_complex(&self) -> bool {
        (1..self.d.len()).all(|n| self.d[n - 1].mul(&self.d[n]).map(|m| m.is_zero()).unwrap_or(false))
    }

    /// `H_n`, available below the top degree.
    pub fn homology(&self, n: usize) -> Result<Homology> {
        if n >= self.top() {
            return Err(Error::DimensionBound { requested: n, bound: self.top().saturating_sub(1) });
        }
        let f = &self.field;
        let cycles = self.d[n].kernel();
        let mut boundaries = Rref::from_vectors(f, self.d[n].cols(), &self.d[n + 1].image());
        let mut representatives = Vec::new();
        for z in cycles {
            if boundaries.insert(dense_to_sparse(f, &z)) {
                representatives.push(z);
            }
        }
        Ok(Homology { dim: representatives.len(), representatives })
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        (0..self.top()).map(|n| self.homology(n).expect("below top").dim).collect()
    }
}

/// One term `c · e_j ⊗ e_k` with `e_j` in degree `p`.
pub type AwTerm = (usize, usize, usize, Elem);

/// Normalized chains with the Alexander–Whitney coproduct.
#[derive(Clone, Debug)]
pub struct DgCoalgebra {
    field: Field,
    basis: Vec<Vec<String>>,
    complex: ChainComplex,
    /// `coproduct[n][i]` lists `(p, j, k, c)`: `c · e_j^{(p)} ⊗ e_k^{(n-p)}`.
    coproduct: Vec<Vec<Vec<AwTerm>>>,
    counit: Vec<Elem>,
    origin: Option<Arc<SimplicialSet>>,
}

/// The quotient of `C_n` by degenerate elements.
struct Normalization {
    rref: Rref,
    kept: Vec<usize>,
}

impl Normalization {
    fn project(&self, f: &Field, v: &[Elem]) -> Vector {
        let r = sparse_to_dense(f, &self.rref.reduce(&dense_to_sparse(f, v)), v.len());
        self.kept.iter().map(|&k| r[k].clone()).collect()
    }
}

fn add_term<K: Ord>(f: &Field, t: &mut BTreeMap<K, Elem>, key: K, c: Elem) {
    if f.is_zero(&c) {
        return;
    }
    let e = t.entry(key).or_insert_with(|| f.zero());
    *e = f.add(e, &c);
}

fn nonzero<K: Ord>(f: &Field, mut t: BTreeMap<K, Elem>) -> BTreeMap<K, Elem> {
    t.retain(|_, c| !f.is_zero(c));
    t
}

/// `𝒩_*(C)`: degenerate directions quotiented, `d = Σ (-1)^i d_i`,
/// `Δ = Σ_p (front_p ⊗ back_{n-p}) Δ_n`.
pub fn normalized_chains(c: &SimplicialCoalgebra) -> Result<DgCoalgebra> {
    if !c.is_connected() {
        return Err(Error::Violation("normalized chains need a connected coalgebra".into()));
    }
    let f = c.field().clone();
    let top = c.dimension_bound();
    let norms: Vec<Normalization> = (0..=top)
        .map(|n| {
            let dim = c.degree(n).dim();
            let degenerate: Vec<Vector> = if n == 0 {
                Vec::new()
            } else {
                (0..n).flat_map(|j| c.degeneracy(n - 1, j).image()).collect()
            };
            let rref = Rref::from_vectors(&f, dim, &degenerate);
            let kept: Vec<usize> = (0..dim).filter(|k| !rref.pivots().contains(k)).collect();
            Normalization { rref, kept }
        })
        .collect();
    let basis: Vec<Vec<String>> =
        (0..=top).map(|n| norms[n].kept.iter().map(|&k| c.degree(n).basis()[k].clone()).collect()).collect();
    let unit = |n: usize, k: usize| {
        let mut v = vec![f.zero(); c.degree(n).dim()];
        v[k] = f.one();
        v
    };
    let mut d = vec![Matrix::zeros(&f, 0, norms[0].kept.len())];
    for n in 1..=top {
        let cols: Vec<Vector> = norms[n]
            .kept
            .iter()
            .map(|&k| {
                let x = unit(n, k);
                let mut acc = vec![f.zero(); c.degree(n - 1).dim()];
                for i in 0..=n {
                    let y = c.face(n, i).mul_vec(&x);
                    for (a, b) in acc.iter_mut().zip(&y) {
                        *a = if i % 2 == 0 { f.add(a, b) } else { f.sub(a, b) };
                    }
                }
                norms[n - 1].project(&f, &acc)
            })
            .collect();
        d.push(Matrix::from_columns(&f, norms[n - 1].kept.len(), &cols));
    }
    let front = |n: usize, p: usize, v: Vector| (p + 1..=n).rev().fold(v, |v, m| c.face(m, m).mul_vec(&v));
    let back = |n: usize, q: usize, v: Vector| (q + 1..=n).rev().fold(v, |v, m| c.face(m, 0).mul_vec(&v));
    let mut coproduct = Vec::new();
    for n in 0..=top {
        let per: Vec<Vec<AwTerm>> = norms[n]
            .kept
            .iter()
            .map(|&k| {
                let mut t: BTreeMap<(usize, usize, usize), Elem> = BTreeMap::new();
                for (j, l, coef) in c.degree(n).delta_of(k) {
                    for p in 0..=n {
                        let u = norms[p].project(&f, &front(n, p, unit(n, *j)));
                        let w = norms[n - p].project(&f, &back(n, n - p, unit(n, *l)));
                        for (a, x) in u.iter().enumerate() {
                            if f.is_zero(x) {
                                continue;
                            }
                            for (b, y) in w.iter().enumerate() {
                                add_term(&f, &mut t, (p, a, b), f.mul(coef, &f.mul(x, y)));
                            }
                        }
                    }
                }
                nonzero(&f, t).into_iter().map(|((p, a, b), x)| (p, a, b, x)).collect()
            })
            .collect();
        coproduct.push(per);
    }
    let counit = norms[0].kept.iter().map(|&k| c.degree(0).counit()[k].clone()).collect();
    let complex = ChainComplex::new(&f, d)?;
    Ok(DgCoalgebra { field: f, basis, complex, coproduct, counit, origin: None })
}

/// `𝒩_*(F[X])`, remembering `X` for edge-path readings.
pub fn normalized_chains_of(x: &Arc<SimplicialSet>, field: &Field) -> Result<DgCoalgebra> {
    let mut d = normalized_chains(&chains(x, field)?)?;
    d.origin = Some(x.clone());
    Ok(d)
}

/// Normalized chains of `X` on its nondegenerate simplices, for inputs that
/// need not be connected or reduced.
pub fn nondegenerate_chain_complex(x: &SimplicialSet, field: &Field) -> Result<ChainComplex> {
    let d = (0..=x.dimension_bound())
        .map(|n| {
            let rows = if n == 0 { 0 } else { x.nd_count(n - 1) };
            let entries = x.nondegenerate(n).iter().enumerate().flat_map(|(j, s)| {
                s.faces
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| !f.is_degenerate())
                    .map(move |(i, f)| (f.base.index, j, field.from_i64(if i % 2 == 0 { 1 } else { -1 })))
                    .collect::<Vec<_>>()
            });
            Matrix::from_entries(field, rows, x.nd_count(n), entries)
        })
        .collect();
    ChainComplex::new(field, d)
}

impl DgCoalgebra {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dimension_bound(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.len()).collect()
    }

    pub fn basis(&self, n: usize) -> &[String] {
        &self.basis[n]
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn differential(&self, n: usize) -> &Matrix {
        self.complex.differential(n)
    }

    pub fn coproduct(&self, n: usize, i: usize) -> &[AwTerm] {
        &self.coproduct[n][i]
    }

    pub fn origin(&self) -> Option<&Arc<SimplicialSet>> {
        self.origin.as_ref()
    }

    pub fn homology(&self, n: usize) -> Result<Homology> {
        self.complex.homology(n)
    }

    fn delta_vec(&self, n: usize, v: &[Elem]) -> BTreeMap<(usize, usize, usize), Elem> {
        let f = &self.field;
        let mut t = BTreeMap::new();
        for (i, x) in v.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (p, j, k, c) in &self.coproduct[n][i] {
                add_term(f, &mut t, (*p, *j, *k), f.mul(x, c));
            }
        }
        nonzero(f, t)
    }

    pub fn is_coassociative(&self) -> bool {
        let f = &self.field;
        (0..=self.dimension_bound()).all(|n| {
            (0..self.basis[n].len()).all(|i| {
                let mut left = BTreeMap::new();
                let mut right = BTreeMap::new();
                for (p, j, k, c) in &self.coproduct[n][i] {
                    for (p1, a, b, x) in &self.coproduct[*p][*j] {
                        add_term(f, &mut left, (*p1, *p - *p1, *a, *b, *k), f.mul(c, x));
                    }
                    for (q1, a, b, x) in &self.coproduct[n - *p][*k] {
                        add_term(f, &mut right, (*p, *q1, *j, *a, *b), f.mul(c, x));
                    }
                }
                nonzero(f, left) == nonzero(f, right)
            })
        })
    }

    /// `Δ d = (d ⊗ 1 + (-1)^p 1 ⊗ d) Δ`.
    pub fn is_chain_map(&self) -> bool {
        let f = &self.field;
        (1..=self.dimension_bound()).all(|n| {
            (0..self.basis[n].len()).all(|i| {
                let dx = self.differential(n).column(i);
                let lhs = self.delta_vec(n - 1, &dx);
                let mut rhs = BTreeMap::new();
                for (p, j, k, c) in &self.coproduct[n][i] {
                    if *p > 0 {
                        let col = self.differential(*p).column(*j);
                        for (a, x) in col.iter().enumerate() {
                            add_term(f, &mut rhs, (*p - 1, a, *k), f.mul(c, x));
                        }
                    }
                    let q = n - *p;
                    if q > 0 {
                        let col = self.differential(q).column(*k);
                        for (b, x) in col.iter().enumerate() {
                            let term = f.mul(c, x);
                            add_term(f, &mut rhs, (*p, *j, b), if p % 2 == 0 { term } else { f.neg(&term) });
                        }
                    }
                }
                lhs == nonzero(f, rhs)
            })
        })
    }

    pub fn has_counit(&self) -> bool {
        let f = &self.field;
        (0..=self.dimension_bound()).all(|n| {
            (0..self.basis[n].len()).all(|i| {
                let dim = self.basis[n].len();
                let mut l = vec![f.zero(); dim];
                let mut r = vec![f.zero(); dim];
                for (p, j, k, c) in &self.coproduct[n][i] {
                    if *p == 0 {
                        l[*k] = f.add(&l[*k], &f.mul(c, &self.counit[*j]));
                    }
                    if *p == n {
                        r[*j] = f.add(&r[*j], &f.mul(c, &self.counit[*k]));
                    }
                }
                let mut e = vec![f.zero(); dim];
                e[i] = f.one();
                l == e && r == e
            })
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !self.complex.is_complex() {
            return Err(Error::Violation("d² ≠ 0 on normalized chains".into()));
        }
        if !self.is_coassociative() {
            return Err(Error::Violation("Alexander–Whitney coproduct is not coassociative".into()));
        }
        if !self.is_chain_map() {
            return Err(Error::Violation("Alexander–Whitney coproduct is not a chain map".into()));
        }
        if !self.has_counit() {
            return Err(Error::Violation("counit axiom fails".into()));
        }
        if self.dims()[0] != 1 || self.coproduct[0][0] != [(0, 0, 0, self.field.one())] {
            return Err(Error::Violation("coaugmentation is not group-like".into()));
        }
        Ok(())
    }
}

/// A generator `s⁻¹x` of the cobar construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
    /// Degree and index of `x` in the normalized chains.
    pub source: (usize, usize),
}

/// `Ω(D)` truncated to words of degree at most `degree_cap` and length at most `length_cap`.
#[derive(Clone, Debug)]
pub struct FreeDgAlgebraTruncated {
    field: Field,
    generators: Vec<Generator>,
    degree_cap: usize,
    length_cap: usize,
    /// `words[n]` lists the retained words of degree `n`.
    words: Vec<Vec<Vec<usize>>>,
    /// `d(s⁻¹x)` as a combination of words of length one or two.
    generator_differential: Vec<Vec<(Vec<usize>, Elem)>>,
    complex: ChainComplex,
}

pub type Word = Vec<usize>;

/// The truncated cobar construction. Errors when generators up to the degree cap
/// are not available in `D`.
pub fn cobar(dg: &DgCoalgebra, degree_cap: usize, length_cap: usize) -> Result<FreeDgAlgebraTruncated> {
    let f = dg.field().clone();
    if degree_cap + 1 > dg.dimension_bound() {
        return Err(Error::DimensionBound { requested: degree_cap + 1, bound: dg.dimension_bound() });
    }
    if dg.dims()[0] != 1 {
        return Err(Error::Violation("cobar needs a connected coalgebra".into()));
    }
    let mut generators = Vec::new();
    let mut gen_index: HashMap<(usize, usize), usize> = HashMap::new();
    for k in 1..=degree_cap + 1 {
        for (i, name) in dg.basis(k).iter().enumerate() {
            gen_index.insert((k, i), generators.len());
            generators.push(Generator { name: name.clone(), degree: k - 1, source: (k, i) });
        }
    }
    let mut generator_differential = Vec::new();
    for g in &generators {
        let (k, i) = g.source;
        let mut t: BTreeMap<Word, Elem> = BTreeMap::new();
        if k >= 2 {
            let col = dg.differential(k).column(i);
            for (j, x) in col.iter().enumerate() {
                add_term(&f, &mut t, vec![gen_index[&(k - 1, j)]], f.neg(x));
            }
        }
        for (p, a, b, c) in dg.coproduct(k, i) {
            if *p == 0 || *p == k {
                continue;
            }
            let term = if p % 2 == 0 { c.clone() } else { f.neg(c) };
            add_term(&f, &mut t, vec![gen_index[&(*p, *a)], gen_index[&(k - p, *b)]], term);
        }
        generator_differential.push(nonzero(&f, t).into_iter().collect());
    }
    // Words by degree, generated in order of length.
    let mut words: Vec<Vec<Word>> = vec![Vec::new(); degree_cap + 1];
    words[0].push(Vec::new());
    let mut frontier: Vec<(Word, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..length_cap {
        let mut next = Vec::new();
        for (w, deg) in &frontier {
            for (gi, g) in generators.iter().enumerate() {
                let d = deg + g.degree;
                if d <= degree_cap {
                    let mut v = w.clone();
                    v.push(gi);
                    words[d].push(v.clone());
                    next.push((v, d));
                }
            }
        }
        frontier = next;
    }
    let index: Vec<HashMap<Word, usize>> =
        words.iter().map(|ws| ws.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect()).collect();
    let mut d = vec![Matrix::zeros(&f, 0, words[0].len())];
    for n in 1..=degree_cap {
        let mut entries = Vec::new();
        for (col, w) in words[n].iter().enumerate() {
            for (v, c) in differentiate(&f, &generators, &generator_differential, w) {
                if let Some(&row) = index[n - 1].get(&v) {
                    entries.push((row, col, c));
                }
            }
        }
        d.push(Matrix::from_entries(&f, words[n - 1].len(), words[n].len(), entries));
    }
    let complex = ChainComplex::new(&f, d)?;
    Ok(FreeDgAlgebraTruncated { field: f, generators, degree_cap, length_cap, words, generator_differential, complex })
}

/// `d(g_1 ⋯ g_m) = Σ (-1)^{|g_1|+…+|g_{i-1}|} g_1 ⋯ d(g_i) ⋯ g_m`.
fn differentiate(f: &Field, gens: &[Generator], gd: &[Vec<(Word, Elem)>], w: &[usize]) -> BTreeMap<Word, Elem> {
    let mut t = BTreeMap::new();
    let mut sign_deg = 0;
    for (i, &g) in w.iter().enumerate() {
        for (v, c) in &gd[g] {
            let mut out = w[..i].to_vec();
            out.extend(v);
            out.extend(&w[i + 1..]);
            add_term(f, &mut t, out, if sign_deg % 2 == 0 { c.clone() } else { f.neg(c) });
        }
        sign_deg += gens[g].degree;
    }
    nonzero(f, t)
}

impl FreeDgAlgebraTruncated {
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn length_cap(&self) -> usize {
        self.length_cap
    }

    pub fn words(&self, n: usize) -> &[Word] {
        &self.words[n]
    }

    pub fn generator_differential(&self, g: usize) -> &[(Word, Elem)] {
        &self.generator_differential[g]
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    /// Without degree-0 generators, and with the length cap at least the degree cap,
    /// every word of degree at most the cap is retained.
    pub fn is_exact(&self) -> bool {
        self.generators.iter().all(|g| g.degree > 0) && self.length_cap >= self.degree_cap
    }

    /// `d² = 0` on every retained word, computed without truncation.
    pub fn check_d_squared(&self) -> bool {
        let f = &self.field;
        self.words.iter().flatten().all(|w| {
            let mut t = BTreeMap::new();
            for (v, c) in differentiate(f, &self.generators, &self.generator_differential, w) {
                for (u, x) in differentiate(f, &self.generators, &self.generator_differential, &v) {
                    add_term(f, &mut t, u, f.mul(&c, &x));
                }
            }
            nonzero(f, t).is_empty()
        })
    }

    /// `H_n` for `n` below the degree cap.
    pub fn homology(&self, n: usize) -> Result<Homology> {
        self.complex.homology(n)
    }

    pub fn format_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&g| format!("[{}]", self.generators[g].name)).collect::<Vec<_>>().join("")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn nc(x: SimplicialSet, f: &Field) -> DgCoalgebra {
        normalized_chains_of(&Arc::new(x), f).unwrap()
    }

    #[test]
    fn circle_and_sphere_dims() {
        let f2 = Field::prime(2).unwrap();
        let s1 = nc(models::s1(), &f2);
        assert_eq!(s1.dims(), vec![1, 1, 0, 0, 0]);
        assert!(s1.differential(1).is_zero());
        let s2 = nc(models::s2(), &Field::rational());
        assert_eq!(&s2.dims()[..3], &[1, 0, 1]);
        s2.validate().unwrap();
    }

    #[test]
    fn projective_plane_homology() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let a = nc(models::rp2(), &f2);
        assert_eq!(a.complex().homology_dims()[..3], [1, 1, 1]);
        let b = nc(models::rp2(), &f3);
        assert_eq!(b.complex().homology_dims()[..3], [1, 0, 0]);
    }

    #[test]
    fn sphere_cobar() {
        let q = Field::rational();
        let s2 = models::s2().with_dimension_bound(6).unwrap();
        let om = cobar(&nc(s2, &q), 5, 8).unwrap();
        assert_eq!(om.generators().len(), 1);
        assert!(om.check_d_squared());
        assert!(om.is_exact());
        for n in 0..5 {
            assert_eq!(om.homology(n).unwrap().dim, 1);
        }
    }
}
