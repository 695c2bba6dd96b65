//! Finite-dimensional coalgebras given by structure tensors.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{is_zero_vec, unit_vector, vec_scale, Matrix, Subspace, Vector};
use crate::poly::{characteristic_polynomial, poly_roots};

/// Sparse element of `C ⊗ C`, keyed by pairs of basis indices.
pub type Tensor = BTreeMap<(usize, usize), Elem>;

/// Largest `|F|^dim` enumerated by the brute-force group-like search.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalgebra {
    field: Field,
    basis: Vec<String>,
    /// `delta[i]` lists `(j, k, c)` with `Δ e_i = Σ c e_j ⊗ e_k`.
    delta: Vec<Vec<(usize, usize, Elem)>>,
    counit: Vec<Elem>,
}

fn tensor_add(field: &Field, t: &mut Tensor, key: (usize, usize), c: Elem) {
    if field.is_zero(&c) {
        return;
    }
    let e = t.entry(key).or_insert_with(|| field.zero());
    *e = field.add(e, &c);
    if field.is_zero(e) {
        t.remove(&key);
    }
}

impl Coalgebra {
    pub fn new(field: &Field, basis: Vec<String>, delta: Vec<Vec<(usize, usize, Elem)>>, counit: Vec<Elem>) -> Result<Self> {
        let n = basis.len();
        if delta.len() != n || counit.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{n} basis elements, {} coproducts, {} counit values",
                delta.len(),
                counit.len()
            )));
        }
        let mut normalized = Vec::with_capacity(n);
        for terms in delta {
            let mut t = Tensor::new();
            for (j, k, c) in terms {
                if j >= n || k >= n {
                    return Err(Error::DimensionMismatch(format!("tensor index ({j}, {k}) out of range {n}")));
                }
                tensor_add(field, &mut t, (j, k), c);
            }
            normalized.push(t.into_iter().map(|((j, k), c)| (j, k, c)).collect());
        }
        Ok(Coalgebra { field: field.clone(), basis, delta: normalized, counit })
    }

    /// `Δ e_i = e_i ⊗ e_i`, `ε e_i = 1`.
    pub fn diagonal(field: &Field, basis: Vec<String>) -> Self {
        let delta = (0..basis.len()).map(|i| vec![(i, i, field.one())]).collect();
        let counit = vec![field.one(); basis.len()];
        Coalgebra { field: field.clone(), basis, delta, counit }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn delta_of(&self, i: usize) -> &[(usize, usize, Elem)] {
        &self.delta[i]
    }

    pub fn counit(&self) -> &[Elem] {
        &self.counit
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    pub fn apply_delta(&self, v: &[Elem]) -> Tensor {
        let f = &self.field;
        let mut t = Tensor::new();
        for (i, vi) in v.iter().enumerate() {
            if f.is_zero(vi) {
                continue;
            }
            for (j, k, c) in &self.delta[i] {
                tensor_add(f, &mut t, (*j, *k), f.mul(vi, c));
            }
        }
        t
    }

    pub fn apply_counit(&self, v: &[Elem]) -> Elem {
        let f = &self.field;
        v.iter().zip(&self.counit).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
    }

    pub fn is_grouplike(&self, v: &[Elem]) -> bool {
        let f = &self.field;
        if v.len() != self.dim() || !f.is_one(&self.apply_counit(v)) {
            return false;
        }
        let mut square = Tensor::new();
        for (j, a) in v.iter().enumerate() {
            for (k, b) in v.iter().enumerate() {
                tensor_add(f, &mut square, (j, k), f.mul(a, b));
            }
        }
        self.apply_delta(v) == square
    }

    pub fn is_diagonal(&self) -> bool {
        let f = &self.field;
        self.delta
            .iter()
            .enumerate()
            .all(|(i, t)| t.len() == 1 && t[0].0 == i && t[0].1 == i && f.is_one(&t[0].2))
            && self.counit.iter().all(|c| f.is_one(c))
    }

    pub fn is_coassociative(&self) -> bool {
        let f = &self.field;
        (0..self.dim()).all(|i| {
            let mut left: BTreeMap<(usize, usize, usize), Elem> = BTreeMap::new();
            let mut right: BTreeMap<(usize, usize, usize), Elem> = BTreeMap::new();
            let put = |m: &mut BTreeMap<(usize, usize, usize), Elem>, key, c: Elem| {
                let e = m.entry(key).or_insert_with(|| f.zero());
                *e = f.add(e, &c);
            };
            for (j, k, c) in &self.delta[i] {
                for (a, b, d) in &self.delta[*j] {
                    put(&mut left, (*a, *b, *k), f.mul(c, d));
                }
                for (a, b, d) in &self.delta[*k] {
                    put(&mut right, (*j, *a, *b), f.mul(c, d));
                }
            }
            left.retain(|_, c| !f.is_zero(c));
            right.retain(|_, c| !f.is_zero(c));
            left == right
        })
    }

    pub fn has_counit(&self) -> bool {
        let f = &self.field;
        let n = self.dim();
        (0..n).all(|i| {
            let mut l = vec![f.zero(); n];
            let mut r = vec![f.zero(); n];
            for (j, k, c) in &self.delta[i] {
                l[*k] = f.add(&l[*k], &f.mul(&self.counit[*j], c));
                r[*j] = f.add(&r[*j], &f.mul(&self.counit[*k], c));
            }
            let e = unit_vector(f, n, i);
            l == e && r == e
        })
    }

    pub fn is_cocommutative(&self) -> bool {
        self.delta.iter().all(|t| {
            let m: BTreeMap<(usize, usize), &Elem> = t.iter().map(|(j, k, c)| ((*j, *k), c)).collect();
            t.iter().all(|(j, k, c)| m.get(&(*k, *j)) == Some(&c))
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !self.is_coassociative() {
            return Err(Error::Violation("coproduct is not coassociative".into()));
        }
        if !self.has_counit() {
            return Err(Error::Violation("counit axiom fails".into()));
        }
        if !self.is_cocommutative() {
            return Err(Error::Violation("coproduct is not cocommutative".into()));
        }
        Ok(())
    }

    pub fn renamed(&self, basis: Vec<String>) -> Coalgebra {
        assert_eq!(basis.len(), self.dim());
        Coalgebra { basis, ..self.clone() }
    }

    /// Human-readable name of a vector in this basis.
    pub fn format_vector(&self, v: &[Elem]) -> String {
        let f = &self.field;
        let terms: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !f.is_zero(c))
            .map(|(i, c)| {
                if f.is_one(c) {
                    return self.basis[i].clone();
                }
                let c = f.format(c);
                if c.contains(['+', '*']) {
                    format!("({c})*{}", self.basis[i])
                } else {
                    format!("{c}*{}", self.basis[i])
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Name for a basis vector of a subspace: the original name for unit vectors.
    pub(crate) fn name_of(&self, v: &[Elem]) -> String {
        let f = &self.field;
        let nz: Vec<usize> = (0..v.len()).filter(|&i| !f.is_zero(&v[i])).collect();
        if nz.len() == 1 && f.is_one(&v[nz[0]]) {
            self.basis[nz[0]].clone()
        } else {
            self.format_vector(v)
        }
    }

    /// The subcoalgebra spanned by `v`, in the reduced-echelon basis of `v`.
    pub fn restrict(&self, v: &Subspace) -> Result<Subcoalgebra> {
        let f = &self.field;
        let basis = v.basis();
        let pivots = v.pivots().to_vec();
        let mut delta = Vec::with_capacity(basis.len());
        for b in &basis {
            let t = self.apply_delta(b);
            let mut terms = Vec::new();
            for (a, &p) in pivots.iter().enumerate() {
                for (c, &q) in pivots.iter().enumerate() {
                    if let Some(x) = t.get(&(p, q)) {
                        terms.push((a, c, x.clone()));
                    }
                }
            }
            let mut back = Tensor::new();
            for (a, c, x) in &terms {
                for (i, bi) in basis[*a].iter().enumerate() {
                    if f.is_zero(bi) {
                        continue;
                    }
                    for (j, bj) in basis[*c].iter().enumerate() {
                        tensor_add(f, &mut back, (i, j), f.mul(x, &f.mul(bi, bj)));
                    }
                }
            }
            if back != t {
                return Err(Error::Violation(format!("{} has coproduct outside the subspace", self.format_vector(b))));
            }
            delta.push(terms);
        }
        let counit = basis.iter().map(|b| self.apply_counit(b)).collect();
        let names = basis.iter().map(|b| self.name_of(b)).collect();
        let coalgebra = Coalgebra::new(f, names, delta, counit)?;
        let inclusion = Matrix::from_columns(f, self.dim(), &basis);
        Ok(Subcoalgebra { coalgebra, inclusion, subspace: v.clone() })
    }

    /// Whether `m` (columns indexed by this basis) is a coalgebra map into `target`.
    pub fn is_coalgebra_map(&self, target: &Coalgebra, m: &Matrix) -> bool {
        let f = &self.field;
        if m.cols() != self.dim() || m.rows() != target.dim() {
            return false;
        }
        let cols: Vec<Vector> = (0..self.dim()).map(|j| m.column(j)).collect();
        (0..self.dim()).all(|i| {
            if target.apply_counit(&cols[i]) != self.counit[i] {
                return false;
            }
            let mut pushed = Tensor::new();
            for (j, k, c) in &self.delta[i] {
                for (a, x) in cols[*j].iter().enumerate() {
                    if f.is_zero(x) {
                        continue;
                    }
                    for (b, y) in cols[*k].iter().enumerate() {
                        tensor_add(f, &mut pushed, (a, b), f.mul(c, &f.mul(x, y)));
                    }
                }
            }
            pushed == target.apply_delta(&cols[i])
        })
    }

    /// Same structure after matching basis elements by name.
    pub fn equals_by_names(&self, other: &Coalgebra) -> bool {
        let Some(perm) = name_permutation(&self.basis, &other.basis) else {
            return false;
        };
        if self.field != other.field {
            return false;
        }
        (0..self.dim()).all(|i| {
            let mapped: Vec<(usize, usize, Elem)> = {
                let mut t: Vec<_> = self.delta[i].iter().map(|(j, k, c)| (perm[*j], perm[*k], c.clone())).collect();
                t.sort();
                t
            };
            mapped == other.delta[perm[i]] && self.counit[i] == other.counit[perm[i]]
        })
    }
}

/// `perm[i]` is the index in `b` of the name `a[i]`, when the names agree as sets.
pub(crate) fn name_permutation(a: &[String], b: &[String]) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let index: BTreeMap<&str, usize> = b.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    if index.len() != b.len() {
        return None;
    }
    a.iter().map(|s| index.get(s.as_str()).copied()).collect()
}

#[derive(Clone, Debug)]
pub struct Subcoalgebra {
    pub coalgebra: Coalgebra,
    /// Columns are the basis of the subspace.
    pub inclusion: Matrix,
    pub subspace: Subspace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupLikeMethod {
    /// Only valid when every basis element is group-like.
    Diagonal,
    /// Enumerates all of `F^dim`; finite fields only.
    BruteForce,
    /// Joint eigenvectors of `(φ ⊗ id)Δ` over the dual basis.
    Characters,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLikes {
    pub elements: Vec<Vector>,
    /// False when some eigenvalue search could not be finished.
    pub complete: bool,
    pub method: GroupLikeMethod,
}

fn canonical_order(field: &Field, mut v: Vec<Vector>) -> Vec<Vector> {
    let lead = |x: &Vector| x.iter().position(|c| !field.is_zero(c)).unwrap_or(x.len());
    v.sort_by(|a, b| (lead(a), a).cmp(&(lead(b), b)));
    v.dedup();
    v
}

/// Group-like elements: the diagonal fast path when it applies, otherwise the character search.
pub fn grouplikes(c: &Coalgebra) -> GroupLikes {
    if c.is_diagonal() {
        grouplikes_with(c, GroupLikeMethod::Diagonal).expect("diagonal coalgebra")
    } else {
        grouplikes_with(c, GroupLikeMethod::Characters).expect("character search never errors")
    }
}

pub fn grouplikes_with(c: &Coalgebra, method: GroupLikeMethod) -> Result<GroupLikes> {
    let f = c.field();
    let n = c.dim();
    let elements = match method {
        GroupLikeMethod::Diagonal => {
            if !c.is_diagonal() {
                return Err(Error::Unsupported("coalgebra is not diagonal in its basis".into()));
            }
            (0..n).map(|i| unit_vector(f, n, i)).collect()
        }
        GroupLikeMethod::BruteForce => brute_force(c)?,
        GroupLikeMethod::Characters => {
            let (found, complete) = characters(c);
            return Ok(GroupLikes { elements: canonical_order(f, found), complete, method });
        }
    };
    Ok(GroupLikes { elements: canonical_order(f, elements), complete: true, method })
}

fn brute_force(c: &Coalgebra) -> Result<Vec<Vector>> {
    let f = c.field();
    let q = f.order().ok_or_else(|| Error::Unsupported("brute force needs a finite field".into()))?;
    let n = c.dim();
    let total = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if n > 12 || q > 16 || total > BRUTE_FORCE_LIMIT as u128 {
        return Err(Error::Unsupported(format!("brute force over {q}^{n} vectors")));
    }
    let elems = f.elements();
    let mut digits = vec![0usize; n];
    let mut out = Vec::new();
    loop {
        let v: Vector = digits.iter().map(|&d| elems[d].clone()).collect();
        if c.is_grouplike(&v) {
            out.push(v);
        }
        let mut i = 0;
        while i < n {
            digits[i] += 1;
            if digits[i] < elems.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok(out)
}

/// `T_i v = (e_i^* ⊗ id) Δ v`.
fn contraction(c: &Coalgebra, i: usize) -> Matrix {
    let n = c.dim();
    let entries = (0..n).flat_map(|col| {
        c.delta_of(col).iter().filter(|(j, _, _)| *j == i).map(move |(_, k, x)| (*k, col, x.clone())).collect::<Vec<_>>()
    });
    Matrix::from_entries(c.field(), n, n, entries)
}

/// A group-like `g` satisfies `T_i g = g_i g` for every `i`; for cocommutative `C`
/// each joint eigenspace holds at most one group-like, the eigenvector scaled to `ε = 1`.
fn characters(c: &Coalgebra) -> (Vec<Vector>, bool) {
    let f = c.field();
    let n = c.dim();
    let mut complete = true;
    let mut spaces = vec![Subspace::whole(f, n)];
    for i in 0..n {
        let t = contraction(c, i);
        let mut next = Vec::new();
        for w in spaces {
            let basis = w.basis();
            let k = basis.len();
            let images: Vec<Vector> = basis.iter().map(|b| t.mul_vec(b)).collect();
            let Some(coords) = images.iter().map(|v| w.coordinates(v)).collect::<Option<Vec<Vector>>>() else {
                // Not invariant: the operators do not commute, so fall back to checking this space directly.
                complete = false;
                next.push(w);
                continue;
            };
            let m: Vec<Vec<Elem>> = (0..k).map(|r| (0..k).map(|col| coords[col][r].clone()).collect()).collect();
            let roots = match poly_roots(&characteristic_polynomial(f, &m)) {
                Ok(r) => r,
                Err(_) => {
                    complete = false;
                    next.push(w);
                    continue;
                }
            };
            for (lambda, _) in roots {
                let shifted: Vec<Vector> = (0..k)
                    .map(|r| (0..k).map(|col| if r == col { f.sub(&m[r][col], &lambda) } else { m[r][col].clone() }).collect())
                    .collect();
                let kernel = Matrix::from_rows(f, k, &shifted).expect("square").kernel();
                let vs: Vec<Vector> = kernel
                    .iter()
                    .map(|coef| {
                        let mut v = vec![f.zero(); n];
                        for (a, b) in coef.iter().zip(&basis) {
                            for (x, y) in v.iter_mut().zip(b) {
                                *x = f.add(x, &f.mul(a, y));
                            }
                        }
                        v
                    })
                    .collect();
                next.push(Subspace::spanned_by(f, n, &vs));
            }
        }
        spaces = next;
    }
    let mut out = Vec::new();
    for w in spaces {
        if w.dim() > 1 {
            complete = false;
        }
        for v in w.basis() {
            let e = c.apply_counit(&v);
            if f.is_zero(&e) || is_zero_vec(f, &v) {
                continue;
            }
            let g = vec_scale(f, &f.inv(&e).expect("nonzero"), &v);
            if c.is_grouplike(&g) {
                out.push(g);
            }
        }
    }
    (out, complete)
}

/// Largest subcoalgebra inside `w`: iterate `V ↦ {v ∈ V : Δv ∈ V ⊗ V}` until stable.
pub fn largest_subcoalgebra(c: &Coalgebra, w: &Subspace) -> Subspace {
    let f = c.field();
    let n = c.dim();
    let mut v = w.clone();
    loop {
        let ann = v.annihilator();
        if ann.is_empty() || v.dim() == 0 {
            return v;
        }
        let basis = v.basis();
        // Column j: all contractions (α ⊗ id)Δ b_j and (id ⊗ α)Δ b_j stacked.
        let cols: Vec<Vector> = basis
            .iter()
            .map(|b| {
                let t = c.apply_delta(b);
                let mut col = vec![f.zero(); 2 * ann.len() * n];
                for (a, alpha) in ann.iter().enumerate() {
                    for ((j, k), x) in &t {
                        let left = a * 2 * n + k;
                        col[left] = f.add(&col[left], &f.mul(&alpha[*j], x));
                        let right = a * 2 * n + n + j;
                        col[right] = f.add(&col[right], &f.mul(&alpha[*k], x));
                    }
                }
                col
            })
            .collect();
        let m = Matrix::from_columns(f, 2 * ann.len() * n, &cols);
        let kept: Vec<Vector> = m
            .kernel()
            .iter()
            .map(|coef| {
                let mut out = vec![f.zero(); n];
                for (a, b) in coef.iter().zip(&basis) {
                    for (x, y) in out.iter_mut().zip(b) {
                        *x = f.add(x, &f.mul(a, y));
                    }
                }
                out
            })
            .collect();
        let next = Subspace::spanned_by(f, n, &kept);
        if next.dim() == v.dim() {
            return v;
        }
        v = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn single_grouplike() {
        let f = Field::rational();
        let c = Coalgebra::diagonal(&f, names(&["g"]));
        c.validate().unwrap();
        let g = grouplikes_with(&c, GroupLikeMethod::Characters).unwrap();
        assert_eq!(g.elements, vec![vec![f.one()]]);
        assert!(g.complete);
    }

    #[test]
    fn diagonal_basis_is_recovered_by_characters() {
        for f in [Field::rational(), Field::prime(3).unwrap(), Field::finite(2, 2).unwrap()] {
            let c = Coalgebra::diagonal(&f, names(&["a", "b", "c", "d"]));
            let via = grouplikes_with(&c, GroupLikeMethod::Characters).unwrap();
            let fast = grouplikes(&c);
            assert_eq!(via.elements, fast.elements);
            assert_eq!(fast.method, GroupLikeMethod::Diagonal);
            assert_eq!(via.elements.len(), 4);
        }
    }

    #[test]
    fn change_of_basis_keeps_grouplikes() {
        // Basis u = a, w = a + b of the diagonal coalgebra on {a, b}:
        // Δu = u⊗u, Δw = u⊗u + (w-u)⊗(w-u) = 2u⊗u - u⊗w - w⊗u + w⊗w.
        let f = Field::rational();
        let two = f.from_i64(2);
        let m1 = f.from_i64(-1);
        let c = Coalgebra::new(
            &f,
            names(&["u", "w"]),
            vec![vec![(0, 0, f.one())], vec![(0, 0, two), (0, 1, m1.clone()), (1, 0, m1), (1, 1, f.one())]],
            vec![f.one(), f.from_i64(2)],
        )
        .unwrap();
        c.validate().unwrap();
        let g = grouplikes(&c);
        assert_eq!(g.method, GroupLikeMethod::Characters);
        // a = u and b = w - u.
        assert_eq!(g.elements, vec![vec![f.from_i64(-1), f.one()], vec![f.one(), f.zero()]]);
    }

    #[test]
    fn brute_force_agrees_with_characters_over_f4() {
        let f = Field::finite(2, 2).unwrap();
        let t = f.generator_t();
        // Basis u = a + b, w = t a + (t+1) b of the diagonal coalgebra on {a, b}.
        let diag = Coalgebra::diagonal(&f, names(&["a", "b"]));
        let p = Matrix::from_columns(&f, 2, &[vec![f.one(), f.one()], vec![t.clone(), f.add(&t, &f.one())]]);
        let pinv = p.inverse().unwrap();
        let mut delta = Vec::new();
        for j in 0..2 {
            let col = p.column(j);
            let tsr = diag.apply_delta(&col);
            let mut terms = Vec::new();
            for ((x, y), c) in tsr {
                for r in 0..2 {
                    for s in 0..2 {
                        let coef = f.mul(&c, &f.mul(&pinv.get(r, x), &pinv.get(s, y)));
                        terms.push((r, s, coef));
                    }
                }
            }
            delta.push(terms);
        }
        let counit = (0..2).map(|j| diag.apply_counit(&p.column(j))).collect();
        let c = Coalgebra::new(&f, names(&["u", "w"]), delta, counit).unwrap();
        c.validate().unwrap();
        let brute = grouplikes_with(&c, GroupLikeMethod::BruteForce).unwrap();
        let chars = grouplikes_with(&c, GroupLikeMethod::Characters).unwrap();
        assert_eq!(brute.elements, chars.elements);
        assert_eq!(brute.elements.len(), 2);
    }

    #[test]
    fn largest_subcoalgebra_of_swap_invariants() {
        // chains(S¹∨S¹)₁ over F2 with basis a, b, s0*.
        let f = f2();
        let c = Coalgebra::diagonal(&f, names(&["a", "b", "s0*"]));
        let w = Subspace::spanned_by(&f, 3, &[vec![f.zero(), f.zero(), f.one()], vec![f.one(), f.one(), f.zero()]]);
        let v = largest_subcoalgebra(&c, &w);
        assert_eq!(v.basis(), vec![vec![f.zero(), f.zero(), f.one()]]);
        let sub = c.restrict(&v).unwrap();
        assert_eq!(sub.coalgebra.basis(), &["s0*".to_string()]);
        assert!(largest_subcoalgebra(&c, &Subspace::whole(&f, 3)).dim() == 3);
        assert!(largest_subcoalgebra(&c, &Subspace::zero(&f, 3)).dim() == 0);
    }

    #[test]
    fn non_cocommutative_is_rejected() {
        let f = Field::rational();
        let c = Coalgebra::new(&f, names(&["x", "y"]), vec![vec![(0, 1, f.one())], vec![]], vec![f.zero(), f.zero()]).unwrap();
        assert!(c.validate().is_err());
        assert!(!c.is_cocommutative());
    }
}
