//! Exact linear algebra over a [`Field`].
//!
//! Matrices are stored densely below `DENSE_LIMIT` entries and as a
//! coordinate list above it. Elimination always runs on sparse rows and keeps
//! the basis fully reduced, so kernels and coordinates fall out directly.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Matrices with at most this many entries are stored densely.
pub const DENSE_LIMIT: usize = 64 * 64;

pub type Vector = Vec<Elem>;
pub type SparseRow = Vec<(usize, Elem)>;

#[derive(Clone, PartialEq)]
enum Storage {
    Dense(Vec<Elem>),
    Sparse(BTreeMap<(usize, usize), Elem>),
}

#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.entries() == other.entries()
    }
}
impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field.name())?;
        if self.rows * self.cols <= 400 {
            for i in 0..self.rows {
                let row: Vec<String> = (0..self.cols).map(|j| self.field.format(&self.get(i, j))).collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        let storage = if rows * cols <= DENSE_LIMIT {
            Storage::Dense(vec![field.zero(); rows * cols])
        } else {
            Storage::Sparse(BTreeMap::new())
        };
        Matrix { field: field.clone(), rows, cols, storage }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, cols: usize, rows: &[Vector]) -> Result<Matrix> {
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has length {} != {cols}", r.len())));
            }
            for (j, e) in r.iter().enumerate() {
                m.set(i, j, e.clone());
            }
        }
        Ok(m)
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: &Field, rows: usize, cols: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, e) in c.iter().enumerate() {
                m.set(i, j, e.clone());
            }
        }
        m
    }

    pub fn from_entries(
        field: &Field,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Elem)>,
    ) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for (i, j, e) in entries {
            let cur = m.get(i, j);
            m.set(i, j, field.add(&cur, &e));
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        match &self.storage {
            Storage::Dense(v) => v[i * self.cols + j].clone(),
            Storage::Sparse(m) => m.get(&(i, j)).cloned().unwrap_or_else(|| self.field.zero()),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, e: Elem) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        let zero = self.field.is_zero(&e);
        match &mut self.storage {
            Storage::Dense(v) => v[i * self.cols + j] = e,
            Storage::Sparse(m) => {
                if zero {
                    m.remove(&(i, j));
                } else {
                    m.insert((i, j), e);
                }
            }
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, Elem)> {
        match &self.storage {
            Storage::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, e)| !self.field.is_zero(e))
                .map(|(idx, e)| (idx / self.cols, idx % self.cols, e.clone()))
                .collect(),
            Storage::Sparse(m) => m.iter().map(|(&(i, j), e)| (i, j, e.clone())).collect(),
        }
    }

    pub fn sparse_rows(&self) -> Vec<SparseRow> {
        let mut rows = vec![Vec::new(); self.rows];
        for (i, j, e) in self.entries() {
            rows[i].push((j, e));
        }
        rows
    }

    pub fn row(&self, i: usize) -> Vector {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries().is_empty()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_entries(&self.field, self.cols, self.rows, self.entries().into_iter().map(|(i, j, e)| (j, i, e)))
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length");
        let f = &self.field;
        let mut out = vec![f.zero(); self.rows];
        for (i, j, e) in self.entries() {
            if !f.is_zero(&v[j]) {
                out[i] = f.add(&out[i], &f.mul(&e, &v[j]));
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let other_rows = other.sparse_rows();
        let mut acc: BTreeMap<(usize, usize), Elem> = BTreeMap::new();
        for (i, k, a) in self.entries() {
            for (j, b) in &other_rows[k] {
                let slot = acc.entry((i, *j)).or_insert_with(|| f.zero());
                *slot = f.add(slot, &f.mul(&a, b));
            }
        }
        Ok(Matrix::from_entries(f, self.rows, other.cols, acc.into_iter().map(|((i, j), e)| (i, j, e))))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix difference".into()));
        }
        let f = &self.field;
        let mut m = self.clone();
        for (i, j, e) in other.entries() {
            let cur = m.get(i, j);
            m.set(i, j, f.sub(&cur, &e));
        }
        Ok(m)
    }

    pub fn rref(&self) -> Rref {
        Rref::from_rows(&self.field, self.cols, self.sparse_rows())
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of `{x : Mx = 0}`.
    pub fn kernel(&self) -> Vec<Vector> {
        self.rref().kernel_basis()
    }

    /// Basis of the column space, taken from the pivot columns of `self`.
    pub fn image(&self) -> Vec<Vector> {
        let r = self.rref();
        r.pivots().iter().map(|&j| self.column(j)).collect()
    }

    /// All solutions of `Mx = rhs`: a particular solution and a kernel basis, or `None`.
    pub fn solve(&self, rhs: &[Elem]) -> Result<Option<(Vector, Vec<Vector>)>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {} but the matrix has {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let mut rows = self.sparse_rows();
        for (i, b) in rhs.iter().enumerate() {
            if !f.is_zero(b) {
                rows[i].push((self.cols, b.clone()));
            }
        }
        let aug = Rref::from_rows(f, self.cols + 1, rows);
        if aug.pivots().contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &p) in aug.rows.iter().zip(aug.pivots()) {
            if let Some((_, e)) = row.iter().find(|(j, _)| *j == self.cols) {
                x[p] = e.clone();
            }
        }
        Ok(Some((x, self.kernel())))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_invertible() {
            return Err(Error::InvalidInput("matrix is not invertible".into()));
        }
        let n = self.rows;
        let f = &self.field;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![f.zero(); n];
            e[j] = f.one();
            let (x, _) = self.solve(&e)?.expect("invertible system is solvable");
            cols.push(x);
        }
        Ok(Matrix::from_columns(f, n, &cols))
    }
}

/// `target += c * src` on sorted sparse rows.
pub fn row_axpy(field: &Field, target: &SparseRow, c: &Elem, src: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(target.len() + src.len());
    let (mut a, mut b) = (0, 0);
    while a < target.len() || b < src.len() {
        let ja = target.get(a).map(|x| x.0).unwrap_or(usize::MAX);
        let jb = src.get(b).map(|x| x.0).unwrap_or(usize::MAX);
        if ja < jb {
            out.push(target[a].clone());
            a += 1;
        } else if jb < ja {
            let v = field.mul(c, &src[b].1);
            if !field.is_zero(&v) {
                out.push((jb, v));
            }
            b += 1;
        } else {
            let v = field.add(&target[a].1, &field.mul(c, &src[b].1));
            if !field.is_zero(&v) {
                out.push((ja, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

/// A fully reduced row-echelon basis: every pivot is 1 and its column is zero
/// in every other row.
#[derive(Clone, Debug)]
pub struct Rref {
    field: Field,
    ncols: usize,
    rows: Vec<SparseRow>,
    pivots: Vec<usize>,
}

impl Rref {
    pub fn empty(field: &Field, ncols: usize) -> Rref {
        Rref { field: field.clone(), ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows(field: &Field, ncols: usize, rows: Vec<SparseRow>) -> Rref {
        let mut r = Rref::empty(field, ncols);
        for mut row in rows {
            row.sort_by_key(|x| x.0);
            row.retain(|(_, e)| !field.is_zero(e));
            r.insert(row);
        }
        r
    }

    pub fn from_vectors(field: &Field, ncols: usize, vectors: &[Vector]) -> Rref {
        Rref::from_rows(field, ncols, vectors.iter().map(|v| dense_to_sparse(field, v)).collect())
    }

    /// Reduces `row` against the basis, returning the remainder.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let f = &self.field;
        let mut r = row.clone();
        // Basis rows vanish at each other's pivots, so one pass suffices.
        for (j, e) in row {
            if let Ok(idx) = self.pivots.binary_search(j) {
                let c = f.neg(e);
                r = row_axpy(f, &r, &c, &self.rows[idx]);
            }
        }
        r
    }

    /// Adds a row; returns whether the rank increased.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let f = self.field.clone();
        let r = self.reduce(&row);
        let Some((pc, lead)) = r.first().cloned() else {
            return false;
        };
        let inv = f.inv(&lead).expect("nonzero pivot");
        let r: SparseRow = r.into_iter().map(|(j, e)| (j, f.mul(&e, &inv))).collect();
        for existing in self.rows.iter_mut() {
            if let Some((_, e)) = existing.iter().find(|(j, _)| *j == pc) {
                let c = f.neg(e);
                *existing = row_axpy(&f, existing, &c, &r);
            }
        }
        let pos = self.pivots.binary_search(&pc).unwrap_err();
        self.pivots.insert(pos, pc);
        self.rows.insert(pos, r);
        true
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn sparse_basis(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.rows.iter().map(|r| sparse_to_dense(&self.field, r, self.ncols)).collect()
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.reduce(&dense_to_sparse(&self.field, v)).is_empty()
    }

    /// Coordinates of `v` in the reduced basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Elem]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn kernel_basis(&self) -> Vec<Vector> {
        let f = &self.field;
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|j| self.pivots.binary_search(j).is_err()) {
            let mut v = vec![f.zero(); self.ncols];
            v[free] = f.one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if let Some((_, e)) = row.iter().find(|(j, _)| *j == free) {
                    v[p] = f.neg(e);
                }
            }
            out.push(v);
        }
        out
    }
}

pub fn dense_to_sparse(field: &Field, v: &[Elem]) -> SparseRow {
    v.iter().enumerate().filter(|(_, e)| !field.is_zero(e)).map(|(j, e)| (j, e.clone())).collect()
}

pub fn sparse_to_dense(field: &Field, r: &SparseRow, n: usize) -> Vector {
    let mut v = vec![field.zero(); n];
    for (j, e) in r {
        v[*j] = e.clone();
    }
    v
}

pub fn is_zero_vec(field: &Field, v: &[Elem]) -> bool {
    v.iter().all(|e| field.is_zero(e))
}

pub fn vec_add(field: &Field, a: &[Elem], b: &[Elem]) -> Vector {
    a.iter().zip(b).map(|(x, y)| field.add(x, y)).collect()
}

pub fn vec_sub(field: &Field, a: &[Elem], b: &[Elem]) -> Vector {
    a.iter().zip(b).map(|(x, y)| field.sub(x, y)).collect()
}

pub fn vec_scale(field: &Field, c: &Elem, a: &[Elem]) -> Vector {
    a.iter().map(|x| field.mul(c, x)).collect()
}

pub fn unit_vector(field: &Field, n: usize, i: usize) -> Vector {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// A linear subspace of `F^n`.
#[derive(Clone, Debug)]
pub struct Subspace {
    rref: Rref,
}

impl Subspace {
    pub fn spanned_by(field: &Field, n: usize, vectors: &[Vector]) -> Subspace {
        Subspace { rref: Rref::from_vectors(field, n, vectors) }
    }

    pub fn whole(field: &Field, n: usize) -> Subspace {
        let vs: Vec<Vector> = (0..n).map(|i| unit_vector(field, n, i)).collect();
        Subspace::spanned_by(field, n, &vs)
    }

    pub fn zero(field: &Field, n: usize) -> Subspace {
        Subspace { rref: Rref::empty(field, n) }
    }

    pub fn field(&self) -> &Field {
        &self.rref.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.rref.ncols
    }

    pub fn dim(&self) -> usize {
        self.rref.rank()
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.rref.basis()
    }

    pub fn pivots(&self) -> &[usize] {
        self.rref.pivots()
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.rref.contains(v)
    }

    pub fn coordinates(&self, v: &[Elem]) -> Option<Vector> {
        self.rref.coordinates(v)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis().iter().all(|v| other.contains(v))
    }

    /// Linear functionals (as vectors) vanishing on the subspace.
    pub fn annihilator(&self) -> Vec<Vector> {
        self.rref.kernel_basis()
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let f = self.field().clone();
        let n = self.ambient_dim();
        let a = self.basis();
        let b = other.basis();
        let mut cols: Vec<Vector> = a.clone();
        cols.extend(b.iter().map(|v| v.iter().map(|e| f.neg(e)).collect()));
        if cols.is_empty() {
            return Subspace::zero(&f, n);
        }
        let m = Matrix::from_columns(&f, n, &cols);
        let vs: Vec<Vector> = m
            .kernel()
            .into_iter()
            .map(|k| {
                let mut v = vec![f.zero(); n];
                for (c, u) in k.iter().zip(&a) {
                    if !f.is_zero(c) {
                        v = vec_add(&f, &v, &vec_scale(&f, c, u));
                    }
                }
                v
            })
            .collect();
        Subspace::spanned_by(&f, n, &vs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational;
    use proptest::prelude::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(Matrix::identity(&f2(), 2).kernel().is_empty());
    }

    #[test]
    fn all_ones_rank_one() {
        let f = f2();
        let m = Matrix::from_rows(&f, 2, &[vec![f.one(), f.one()], vec![f.one(), f.one()]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn boundary_of_triangle_degree_one() {
        // Edges 01, 02, 12 of the boundary of the 2-simplex; columns are edges.
        let q = Field::rational();
        let z = rational(0, 1);
        let o = rational(1, 1);
        let m1 = rational(-1, 1);
        let d1 = Matrix::from_rows(
            &q,
            3,
            &[vec![m1.clone(), m1.clone(), z.clone()], vec![o.clone(), z.clone(), m1.clone()], vec![z, o.clone(), o]],
        )
        .unwrap();
        assert_eq!(d1.kernel().len(), 1);
        assert_eq!(d1.rank(), 2);
    }

    #[test]
    fn solve_reports_mismatch_and_inconsistency() {
        let f = f2();
        let m = Matrix::from_rows(&f, 2, &[vec![f.one(), f.one()], vec![f.one(), f.one()]]).unwrap();
        assert!(matches!(m.solve(&[f.one()]), Err(Error::DimensionMismatch(_))));
        assert!(m.solve(&[f.one(), f.zero()]).unwrap().is_none());
        let (x, k) = m.solve(&[f.one(), f.one()]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), vec![f.one(), f.one()]);
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn large_matrices_are_sparse() {
        let f = f2();
        let m = Matrix::identity(&f, 100);
        assert!(m.is_sparse());
        assert_eq!(m.rank(), 100);
        assert!(!Matrix::identity(&f, 10).is_sparse());
    }

    #[test]
    fn subspace_intersection() {
        let f = Field::prime(3).unwrap();
        let e = |i| unit_vector(&f, 3, i);
        let a = Subspace::spanned_by(&f, 3, &[e(0), e(1)]);
        let b = Subspace::spanned_by(&f, 3, &[e(1), e(2)]);
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&e(1)));
        assert_eq!(a.annihilator().len(), 1);
    }

    fn small_matrix() -> impl Strategy<Value = (Field, Matrix)> {
        (1usize..7, 1usize..7, prop::collection::vec(0u32..9, 49), 0usize..3).prop_map(|(r, c, data, which)| {
            let f = match which {
                0 => Field::prime(2).unwrap(),
                1 => Field::finite(3, 2).unwrap(),
                _ => Field::rational(),
            };
            let entries = (0..r).flat_map(|i| (0..c).map(move |j| (i, j))).map(|(i, j)| {
                let v = data[i * 7 + j];
                let e = match f.order() {
                    Some(q) => Elem::Fin(v % q as u32),
                    None => rational(v as i64 - 4, 1),
                };
                (i, j, e)
            });
            let m = Matrix::from_entries(&f, r, c, entries.collect::<Vec<_>>());
            (f, m)
        })
    }

    proptest! {
        #[test]
        fn kernel_is_annihilated_and_rank_nullity((f, m) in small_matrix()) {
            let k = m.kernel();
            for v in &k {
                prop_assert!(is_zero_vec(&f, &m.mul_vec(v)));
            }
            prop_assert_eq!(m.rank() + k.len(), m.cols());
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert_eq!(m.image().len(), m.rank());
        }
    }
}
