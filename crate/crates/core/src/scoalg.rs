//! Simplicial coalgebras: chains on simplicial sets, points, wedge sums and fixed points.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::coalgebra::{
    grouplikes, grouplikes_with, largest_subcoalgebra, name_permutation, Coalgebra, GroupLikeMethod,
};
use crate::equivariant::GSimplicialSet;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::group::{FiniteGroup, GSet, Subgroup};
use crate::linalg::{unit_vector, Matrix, Subspace, Vector};
use crate::simplicial::{fresh_name, SimplexRef, SimplicialMap, SimplicialSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCoalgebra {
    field: Field,
    degrees: Vec<Coalgebra>,
    /// `faces[n][i] : C_n -> C_{n-1}`; empty for `n = 0`.
    faces: Vec<Vec<Matrix>>,
    /// `degeneracies[n][j] : C_n -> C_{n+1}` for `n` below the bound.
    degeneracies: Vec<Vec<Matrix>>,
}

fn matrix_matches(a: &Matrix, b: &Matrix, rows: &[usize], cols: &[usize]) -> bool {
    let ea = a.entries();
    ea.len() == b.entries().len() && ea.iter().all(|(r, c, e)| b.get(rows[*r], cols[*c]) == *e)
}

impl SimplicialCoalgebra {
    pub fn new(
        field: &Field,
        degrees: Vec<Coalgebra>,
        faces: Vec<Vec<Matrix>>,
        degeneracies: Vec<Vec<Matrix>>,
    ) -> Result<Self> {
        let top = degrees.len().checked_sub(1).ok_or_else(|| Error::InvalidInput("no degrees".into()))?;
        let bad = |what: String| Err(Error::DimensionMismatch(what));
        if faces.len() != top + 1 || degeneracies.len() != top {
            return bad("operator count does not match the degrees".into());
        }
        for n in 0..=top {
            let expected = if n == 0 { 0 } else { n + 1 };
            if faces[n].len() != expected {
                return bad(format!("degree {n} needs {expected} faces"));
            }
            for m in &faces[n] {
                if m.cols() != degrees[n].dim() || m.rows() != degrees[n - 1].dim() {
                    return bad(format!("face shape in degree {n}"));
                }
            }
            if n < top {
                if degeneracies[n].len() != n + 1 {
                    return bad(format!("degree {n} needs {} degeneracies", n + 1));
                }
                for m in &degeneracies[n] {
                    if m.cols() != degrees[n].dim() || m.rows() != degrees[n + 1].dim() {
                        return bad(format!("degeneracy shape in degree {n}"));
                    }
                }
            }
        }
        Ok(SimplicialCoalgebra { field: field.clone(), degrees, faces, degeneracies })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dimension_bound(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn degree(&self, n: usize) -> &Coalgebra {
        &self.degrees[n]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|c| c.dim()).collect()
    }

    pub fn face(&self, n: usize, i: usize) -> &Matrix {
        &self.faces[n][i]
    }

    pub fn degeneracy(&self, n: usize, j: usize) -> &Matrix {
        &self.degeneracies[n][j]
    }

    /// `C_0` is the one-dimensional coalgebra with `Δ1 = 1 ⊗ 1`.
    pub fn is_connected(&self) -> bool {
        let c0 = &self.degrees[0];
        c0.dim() == 1 && c0.is_grouplike(&[self.field.one()])
    }

    /// `s_0^n` of the unit of `C_0`.
    pub fn coaugmentation(&self, n: usize) -> Result<Vector> {
        if !self.is_connected() {
            return Err(Error::Violation("coaugmentation needs a connected coalgebra".into()));
        }
        let mut v = vec![self.field.one()];
        for m in 0..n {
            v = self.degeneracies[m][0].mul_vec(&v);
        }
        Ok(v)
    }

    /// Coalgebra axioms per degree, operators are coalgebra maps, simplicial identities.
    pub fn validate(&self) -> Result<()> {
        let top = self.dimension_bound();
        for (n, c) in self.degrees.iter().enumerate() {
            c.validate().map_err(|e| Error::Violation(format!("degree {n}: {e}")))?;
        }
        for n in 1..=top {
            for (i, m) in self.faces[n].iter().enumerate() {
                if !self.degrees[n].is_coalgebra_map(&self.degrees[n - 1], m) {
                    return Err(Error::Violation(format!("d{i} on degree {n} is not a coalgebra map")));
                }
            }
        }
        for n in 0..top {
            for (j, m) in self.degeneracies[n].iter().enumerate() {
                if !self.degrees[n].is_coalgebra_map(&self.degrees[n + 1], m) {
                    return Err(Error::Violation(format!("s{j} on degree {n} is not a coalgebra map")));
                }
            }
        }
        let mul = |a: &Matrix, b: &Matrix| a.mul(b).expect("shapes checked");
        let fail = |what: String| Err(Error::Violation(format!("simplicial identity {what}")));
        for n in 2..=top {
            for j in 1..=n {
                for i in 0..j {
                    if mul(&self.faces[n - 1][i], &self.faces[n][j]) != mul(&self.faces[n - 1][j - 1], &self.faces[n][i]) {
                        return fail(format!("d{i}d{j} in degree {n}"));
                    }
                }
            }
        }
        for n in 0..top.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let l = mul(&self.degeneracies[n + 1][i], &self.degeneracies[n][j]);
                    let r = mul(&self.degeneracies[n + 1][j + 1], &self.degeneracies[n][i]);
                    if l != r {
                        return fail(format!("s{i}s{j} in degree {n}"));
                    }
                }
            }
        }
        for n in 0..top {
            let id = Matrix::identity(&self.field, self.degrees[n].dim());
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let l = mul(&self.faces[n + 1][i], &self.degeneracies[n][j]);
                    let r = if i == j || i == j + 1 {
                        id.clone()
                    } else if i < j {
                        mul(&self.degeneracies[n - 1][j - 1], &self.faces[n][i])
                    } else {
                        mul(&self.degeneracies[n - 1][j], &self.faces[n][i - 1])
                    };
                    if l != r {
                        return fail(format!("d{i}s{j} in degree {n}"));
                    }
                }
            }
        }
        Ok(())
    }

    fn permutations(&self, other: &SimplicialCoalgebra) -> Option<Vec<Vec<usize>>> {
        if self.dimension_bound() != other.dimension_bound() || self.field != other.field {
            return None;
        }
        self.degrees.iter().zip(&other.degrees).map(|(a, b)| name_permutation(a.basis(), b.basis())).collect()
    }

    /// Equal after matching basis elements by name in every degree.
    pub fn equals_by_names(&self, other: &SimplicialCoalgebra) -> bool {
        let Some(perm) = self.permutations(other) else {
            return false;
        };
        let top = self.dimension_bound();
        (0..=top).all(|n| self.degrees[n].equals_by_names(&other.degrees[n]))
            && (1..=top).all(|n| {
                (0..=n).all(|i| matrix_matches(&self.faces[n][i], &other.faces[n][i], &perm[n - 1], &perm[n]))
            })
            && (0..top).all(|n| {
                (0..=n).all(|j| {
                    matrix_matches(&self.degeneracies[n][j], &other.degeneracies[n][j], &perm[n + 1], &perm[n])
                })
            })
    }
}

fn simplex_index(x: &SimplicialSet) -> Result<(Vec<Vec<SimplexRef>>, Vec<HashMap<SimplexRef, usize>>)> {
    let bases = (0..=x.dimension_bound()).map(|n| x.simplices(n)).collect::<Result<Vec<_>>>()?;
    let index = bases.iter().map(|b| b.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect()).collect();
    Ok((bases, index))
}

/// `F[X]`: basis `simplices(X, n)`, diagonal coproduct, counit 1 on the basis.
pub fn chains(x: &SimplicialSet, field: &Field) -> Result<SimplicialCoalgebra> {
    let d = x.dimension_bound();
    let (bases, index) = simplex_index(x)?;
    let degrees = bases
        .iter()
        .map(|b| Coalgebra::diagonal(field, b.iter().map(|s| x.format_simplex(s)).collect()))
        .collect();
    let op = |n: usize, m: usize, img: &dyn Fn(&SimplexRef) -> SimplexRef| {
        let entries = bases[n].iter().enumerate().map(|(c, s)| (index[m][&img(s)], c, field.one()));
        Matrix::from_entries(field, bases[m].len(), bases[n].len(), entries)
    };
    let faces = (0..=d)
        .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| op(n, n - 1, &|s| x.face(s, i))).collect() })
        .collect();
    let degeneracies = (0..d).map(|n| (0..=n).map(|j| op(n, n + 1, &|s| x.degeneracy(s, j))).collect()).collect();
    SimplicialCoalgebra::new(field, degrees, faces, degeneracies)
}

/// `F[f]` degreewise, in the bases of [`chains`].
pub fn chains_map(f: &SimplicialMap, field: &Field) -> Result<Vec<Matrix>> {
    let (src, _) = simplex_index(f.source())?;
    let (tgt, index) = simplex_index(f.target())?;
    Ok(src
        .iter()
        .enumerate()
        .map(|(n, b)| {
            let entries = b.iter().enumerate().map(|(c, s)| (index[n][&f.apply(s)], c, field.one()));
            Matrix::from_entries(field, tgt[n].len(), b.len(), entries)
        })
        .collect())
}

/// `P(C)` with the vector behind every simplex.
#[derive(Clone, Debug)]
pub struct Points {
    pub space: Arc<SimplicialSet>,
    /// `vectors[n][k]` is the group-like of the `k`-th entry of `space.simplices(n)`.
    pub vectors: Vec<Vec<Vector>>,
    lookup: Vec<HashMap<Vector, SimplexRef>>,
}

impl Points {
    pub fn simplex_of(&self, n: usize, v: &[Elem]) -> Option<&SimplexRef> {
        self.lookup.get(n)?.get(v)
    }
}

pub fn points(c: &SimplicialCoalgebra) -> Result<Points> {
    points_with(c, None)
}

/// Degreewise group-likes assembled into a simplicial set. The result is
/// marked reduced exactly when there is one vertex.
pub fn points_with(c: &SimplicialCoalgebra, method: Option<GroupLikeMethod>) -> Result<Points> {
    let top = c.dimension_bound();
    let mut space = SimplicialSet::new(top, false);
    let mut lookup: Vec<HashMap<Vector, SimplexRef>> = Vec::new();
    let mut order: Vec<Vec<Vector>> = Vec::new();
    for n in 0..=top {
        let cn = c.degree(n);
        let gl = match method {
            None => grouplikes(cn),
            Some(m) => grouplikes_with(cn, m)?,
        };
        if !gl.complete {
            return Err(Error::Inconclusive(format!("group-like search in degree {n} did not finish")));
        }
        let found: HashSet<&Vector> = gl.elements.iter().collect();
        let mut here: HashMap<Vector, SimplexRef> = HashMap::new();
        let mut here_order = Vec::new();
        if n > 0 {
            for v in &order[n - 1] {
                let r = &lookup[n - 1][v];
                for j in 0..n {
                    let w = c.degeneracy(n - 1, j).mul_vec(v);
                    if !found.contains(&w) {
                        return Err(Error::Violation(format!("s{j} of a group-like in degree {} is not group-like", n - 1)));
                    }
                    let s = space.degeneracy(r, j);
                    match here.get(&w) {
                        Some(t) if *t != s => {
                            return Err(Error::Violation(format!("degeneracies disagree in degree {n}")));
                        }
                        Some(_) => {}
                        None => {
                            here.insert(w.clone(), s);
                            here_order.push(w);
                        }
                    }
                }
            }
        }
        let mut nondeg = Vec::new();
        for g in &gl.elements {
            if here.contains_key(g) {
                continue;
            }
            let faces = if n == 0 {
                Vec::new()
            } else {
                (0..=n)
                    .map(|i| {
                        let fv = c.face(n, i).mul_vec(g);
                        lookup[n - 1].get(&fv).cloned().ok_or_else(|| {
                            Error::Violation(format!("d{i} of a group-like in degree {n} is not group-like"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            let name = fresh_name(&space, n, &cn.name_of(g), "g");
            let r = space.add_simplex_refs(&name, n, faces)?;
            nondeg.push((g.clone(), SimplexRef::nondegenerate(r)));
        }
        let mut ordered: Vec<Vector> = nondeg.iter().map(|(g, _)| g.clone()).collect();
        for (g, r) in nondeg {
            here.insert(g, r);
        }
        ordered.extend(here_order);
        lookup.push(here);
        order.push(ordered);
    }
    let reduced = space.nd_count(0) == 1;
    space.set_reduced(reduced);
    let space = Arc::new(space);
    let vectors = (0..=top)
        .map(|n| {
            let by_ref: HashMap<&SimplexRef, &Vector> = lookup[n].iter().map(|(v, r)| (r, v)).collect();
            space.simplices(n).map(|ss| ss.iter().map(|s| by_ref[s].clone()).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Points { space, vectors, lookup })
}

/// `P(M) : P(C) -> P(D)` for a degreewise coalgebra map `M`.
pub fn points_map(src: &Points, tgt: &Points, m: &[Matrix]) -> Result<SimplicialMap> {
    let x = &src.space;
    let images = (0..=x.dimension_bound())
        .map(|n| {
            (0..x.nd_count(n))
                .map(|i| {
                    let w = m[n].mul_vec(&src.vectors[n][i]);
                    tgt.simplex_of(n, &w)
                        .cloned()
                        .ok_or_else(|| Error::Violation(format!("image of a group-like in degree {n} is not group-like")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SimplicialMap::new(x.clone(), tgt.space.clone(), images)
}

/// `η : X -> P(F[X])` for `c = chains(X)` and `p = points(c)`.
pub fn unit_map(x: &Arc<SimplicialSet>, c: &SimplicialCoalgebra, p: &Points) -> Result<SimplicialMap> {
    let images = (0..=x.dimension_bound())
        .map(|n| {
            (0..x.nd_count(n))
                .map(|i| {
                    let e = unit_vector(c.field(), c.degree(n).dim(), i);
                    p.simplex_of(n, &e)
                        .cloned()
                        .ok_or_else(|| Error::Violation(format!("basis simplex {i} in degree {n} is not a point")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SimplicialMap::new(x.clone(), p.space.clone(), images)
}

/// `ε_C : F[P(C)] -> C`; column `k` of degree `n` is the `k`-th point.
pub fn counit_maps(c: &SimplicialCoalgebra, p: &Points) -> Vec<Matrix> {
    (0..=c.dimension_bound()).map(|n| Matrix::from_columns(c.field(), c.degree(n).dim(), &p.vectors[n])).collect()
}

#[derive(Clone, Debug)]
pub struct UnitCheck {
    pub eta: SimplicialMap,
    /// Sizes of `simplices(X, n)` and of the group-likes of `F[X]_n`, per degree.
    pub counts: Vec<(usize, usize)>,
    pub bijective: bool,
    pub commutes: bool,
}

impl UnitCheck {
    pub fn passed(&self) -> bool {
        self.bijective && self.commutes
    }
}

/// Checks that `X -> P(F[X])` is a degreewise bijection commuting with every
/// face and degeneracy. Group-likes come from the character search, not the diagonal shortcut.
pub fn unit_check(x: &Arc<SimplicialSet>, field: &Field) -> Result<UnitCheck> {
    if !x.is_reduced() {
        return Err(Error::NotReduced("unit check input".into()));
    }
    let c = chains(x, field)?;
    let p = points_with(&c, Some(GroupLikeMethod::Characters))?;
    let eta = unit_map(x, &c, &p)?;
    let y = &p.space;
    let mut bijective = true;
    let mut commutes = eta.validate().is_ok();
    let mut counts = Vec::new();
    for n in 0..=x.dimension_bound() {
        let xs = x.simplices(n)?;
        let images: HashSet<SimplexRef> = xs.iter().map(|s| eta.apply(s)).collect();
        let total = y.count_simplices(n)?;
        counts.push((xs.len(), p.vectors[n].len()));
        bijective &= images.len() == xs.len() && total == xs.len() && p.vectors[n].len() == xs.len();
        for s in &xs {
            let e = eta.apply(s);
            if n > 0 {
                commutes &= (0..=n).all(|i| eta.apply(&x.face(s, i)) == y.face(&e, i));
            }
            if n < x.dimension_bound() {
                commutes &= (0..=n).all(|j| eta.apply(&x.degeneracy(s, j)) == y.degeneracy(&e, j));
            }
        }
    }
    Ok(UnitCheck { eta, counts, bijective, commutes })
}

/// A simplicial coalgebra with a `G`-action by coalgebra automorphisms.
#[derive(Clone, Debug)]
pub struct GSimplicialCoalgebra {
    coalgebra: SimplicialCoalgebra,
    group: Arc<FiniteGroup>,
    /// `action[g][n]` acts on `C_n`.
    action: Vec<Vec<Matrix>>,
}

impl GSimplicialCoalgebra {
    pub fn new(group: Arc<FiniteGroup>, coalgebra: SimplicialCoalgebra, action: Vec<Vec<Matrix>>) -> Result<Self> {
        let c = GSimplicialCoalgebra { coalgebra, group, action };
        c.validate()?;
        Ok(c)
    }

    pub fn trivial(group: Arc<FiniteGroup>, coalgebra: SimplicialCoalgebra) -> Self {
        let ids: Vec<Matrix> = coalgebra.dims().iter().map(|&d| Matrix::identity(coalgebra.field(), d)).collect();
        let action = vec![ids; group.order()];
        GSimplicialCoalgebra { coalgebra, group, action }
    }

    pub fn coalgebra(&self) -> &SimplicialCoalgebra {
        &self.coalgebra
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn action(&self, g: usize, n: usize) -> &Matrix {
        &self.action[g][n]
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.coalgebra;
        let top = c.dimension_bound();
        let g = &self.group;
        if self.action.len() != g.order() || self.action.iter().any(|a| a.len() != top + 1) {
            return Err(Error::DimensionMismatch("action table shape".into()));
        }
        let mul = |a: &Matrix, b: &Matrix| a.mul(b).expect("square");
        for n in 0..=top {
            let id = Matrix::identity(c.field(), c.degree(n).dim());
            if self.action[g.identity()][n] != id {
                return Err(Error::Violation(format!("identity acts nontrivially in degree {n}")));
            }
            for a in 0..g.order() {
                let m = &self.action[a][n];
                if !c.degree(n).is_coalgebra_map(c.degree(n), m) {
                    return Err(Error::Violation(format!("{} is not a coalgebra map in degree {n}", g.name(a))));
                }
                for b in 0..g.order() {
                    if mul(m, &self.action[b][n]) != self.action[g.mul(a, b)][n] {
                        return Err(Error::Violation(format!("action is not a homomorphism in degree {n}")));
                    }
                }
                if n > 0 {
                    for i in 0..=n {
                        if mul(c.face(n, i), m) != mul(&self.action[a][n - 1], c.face(n, i)) {
                            return Err(Error::Violation(format!("action does not commute with d{i} in degree {n}")));
                        }
                    }
                }
                if n < top {
                    for j in 0..=n {
                        if mul(c.degeneracy(n, j), m) != mul(&self.action[a][n + 1], c.degeneracy(n, j)) {
                            return Err(Error::Violation(format!("action does not commute with s{j} in degree {n}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn equals_by_names(&self, other: &GSimplicialCoalgebra) -> bool {
        if *self.group != *other.group || !self.coalgebra.equals_by_names(&other.coalgebra) {
            return false;
        }
        let perm = self.coalgebra.permutations(&other.coalgebra).expect("names matched");
        (0..self.group.order())
            .all(|g| (0..perm.len()).all(|n| matrix_matches(&self.action[g][n], &other.action[g][n], &perm[n], &perm[n])))
    }
}

/// `F_G[X]`: chains with the linearized action.
pub fn chains_equivariant(y: &GSimplicialSet, field: &Field) -> Result<GSimplicialCoalgebra> {
    let x = y.space();
    let c = chains(x, field)?;
    let (bases, index) = simplex_index(x)?;
    let action = (0..y.group().order())
        .map(|g| {
            bases
                .iter()
                .enumerate()
                .map(|(n, b)| {
                    let entries = b.iter().enumerate().map(|(col, s)| (index[n][&y.act(g, s)], col, field.one()));
                    Matrix::from_entries(field, b.len(), b.len(), entries)
                })
                .collect()
        })
        .collect();
    GSimplicialCoalgebra::new(y.group().clone(), c, action)
}

/// `P_G(C)`: the points with the induced action.
pub fn points_equivariant(c: &GSimplicialCoalgebra) -> Result<(Points, GSimplicialSet)> {
    let p = points(&c.coalgebra)?;
    let x = &p.space;
    let action = (0..c.group.order())
        .map(|g| {
            (0..=x.dimension_bound())
                .map(|n| {
                    (0..x.nd_count(n))
                        .map(|i| {
                            let w = c.action[g][n].mul_vec(&p.vectors[n][i]);
                            match p.simplex_of(n, &w) {
                                Some(r) if !r.is_degenerate() => Ok(r.base.index),
                                _ => Err(Error::Violation(format!("action moves a point off the nondegenerate points in degree {n}"))),
                            }
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let y = GSimplicialSet::new(c.group.clone(), x.clone(), action)?;
    Ok((p, y))
}

#[derive(Clone, Debug)]
pub struct FixedCoalgebra {
    pub coalgebra: SimplicialCoalgebra,
    /// Columns span the fixed subcoalgebra inside `C_n`.
    pub inclusions: Vec<Matrix>,
}

/// `C^H`: in each degree the largest subcoalgebra of the `H`-invariant vectors.
pub fn coalg_fixed_points(c: &GSimplicialCoalgebra, h: &Subgroup) -> Result<FixedCoalgebra> {
    let sc = &c.coalgebra;
    let f = sc.field();
    let top = sc.dimension_bound();
    let mut subs = Vec::new();
    for n in 0..=top {
        let d = sc.degree(n).dim();
        let mut entries = Vec::new();
        let mut row = 0;
        for &g in &h.elements {
            if g == c.group.identity() {
                continue;
            }
            let m = &c.action[g][n];
            for r in 0..d {
                for col in 0..d {
                    let mut e = m.get(r, col);
                    if r == col {
                        e = f.sub(&e, &f.one());
                    }
                    if !f.is_zero(&e) {
                        entries.push((row + r, col, e));
                    }
                }
            }
            row += d;
        }
        let invariants = if row == 0 {
            Subspace::whole(f, d)
        } else {
            Subspace::spanned_by(f, d, &Matrix::from_entries(f, row, d, entries).kernel())
        };
        let v = largest_subcoalgebra(sc.degree(n), &invariants);
        subs.push(sc.degree(n).restrict(&v)?);
    }
    let restrict = |m: &Matrix, from: usize, to: usize, what: &str| -> Result<Matrix> {
        let cols = subs[from]
            .subspace
            .basis()
            .iter()
            .map(|b| {
                subs[to]
                    .subspace
                    .coordinates(&m.mul_vec(b))
                    .ok_or_else(|| Error::Violation(format!("{what} does not preserve the fixed subcoalgebra")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(f, subs[to].coalgebra.dim(), &cols))
    };
    let faces = (0..=top)
        .map(|n| {
            if n == 0 {
                return Ok(Vec::new());
            }
            (0..=n).map(|i| restrict(sc.face(n, i), n, n - 1, &format!("d{i}"))).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let degeneracies = (0..top)
        .map(|n| (0..=n).map(|j| restrict(sc.degeneracy(n, j), n, n + 1, &format!("s{j}"))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let inclusions = subs.iter().map(|s| s.inclusion.clone()).collect();
    let degrees = subs.into_iter().map(|s| s.coalgebra).collect();
    Ok(FixedCoalgebra { coalgebra: SimplicialCoalgebra::new(f, degrees, faces, degeneracies)?, inclusions })
}

/// Wedge of connected simplicial coalgebras, with where each summand basis element lands.
struct WedgeData {
    coalgebra: SimplicialCoalgebra,
    /// `quotient[n][p][i]`: image of basis element `i` of summand `p` in degree `n`, sparse.
    quotient: Vec<Vec<Vec<Vec<(usize, Elem)>>>>,
    /// `origin[n][k]` is the summand and index a new basis element comes from.
    origin: Vec<Vec<(usize, usize)>>,
}

fn apply_sparse(field: &Field, q: &[Vec<(usize, Elem)>], v: &[Elem], dim: usize) -> Vector {
    let mut out = vec![field.zero(); dim];
    for (i, c) in v.iter().enumerate() {
        if field.is_zero(c) {
            continue;
        }
        for (k, x) in &q[i] {
            out[*k] = field.add(&out[*k], &field.mul(c, x));
        }
    }
    out
}

fn wedge_data(parts: &[&SimplicialCoalgebra], name: impl Fn(usize, &str, bool) -> String) -> Result<WedgeData> {
    let first = parts.first().ok_or_else(|| Error::InvalidInput("empty wedge".into()))?;
    let f = first.field().clone();
    for p in parts {
        if *p.field() != f {
            return Err(Error::MixedFields(f.name(), p.field().name()));
        }
        if !p.is_connected() {
            return Err(Error::Violation("wedge summands must be connected".into()));
        }
    }
    let top = parts.iter().map(|p| p.dimension_bound()).min().unwrap();
    let mut quotient = Vec::new();
    let mut origin = Vec::new();
    let mut names_all = Vec::new();
    for n in 0..=top {
        let coaug: Vec<Vector> = parts.iter().map(|p| p.coaugmentation(n)).collect::<Result<_>>()?;
        let pivot: Vec<usize> =
            coaug.iter().map(|c| c.iter().position(|e| !f.is_zero(e)).expect("group-like is nonzero")).collect();
        let mut org = Vec::new();
        let mut names = Vec::new();
        let mut q: Vec<Vec<Vec<(usize, Elem)>>> = parts.iter().map(|p| vec![Vec::new(); p.degree(n).dim()]).collect();
        for (p, part) in parts.iter().enumerate() {
            for i in 0..part.degree(n).dim() {
                if p > 0 && i == pivot[p] {
                    continue;
                }
                let is_base = p == 0 && i == pivot[0];
                q[p][i] = vec![(org.len(), f.one())];
                org.push((p, i));
                names.push(name(p, &part.degree(n).basis()[i], is_base));
            }
        }
        let dim = org.len();
        let base = apply_sparse(&f, &q[0], &coaug[0], dim);
        for p in 1..parts.len() {
            let t = pivot[p];
            let mut rest = coaug[p].clone();
            rest[t] = f.zero();
            let rest = apply_sparse(&f, &q[p], &rest, dim);
            let inv = f.inv(&coaug[p][t])?;
            q[p][t] = base
                .iter()
                .zip(&rest)
                .enumerate()
                .map(|(k, (a, b))| (k, f.mul(&inv, &f.sub(a, b))))
                .filter(|(_, e)| !f.is_zero(e))
                .collect();
        }
        quotient.push(q);
        origin.push(org);
        names_all.push(names);
    }
    let mut degrees = Vec::new();
    for n in 0..=top {
        let q = &quotient[n];
        let delta = origin[n]
            .iter()
            .map(|&(p, i)| {
                let mut terms = Vec::new();
                for (j, k, c) in parts[p].degree(n).delta_of(i) {
                    for (a, x) in &q[p][*j] {
                        for (b, y) in &q[p][*k] {
                            terms.push((*a, *b, f.mul(c, &f.mul(x, y))));
                        }
                    }
                }
                terms
            })
            .collect();
        let counit = origin[n].iter().map(|&(p, i)| parts[p].degree(n).counit()[i].clone()).collect();
        degrees.push(Coalgebra::new(&f, names_all[n].clone(), delta, counit)?);
    }
    let op = |n: usize, m: usize, get: &dyn Fn(&SimplicialCoalgebra) -> &Matrix| {
        let cols: Vec<Vector> = origin[n]
            .iter()
            .map(|&(p, i)| apply_sparse(&f, &quotient[m][p], &get(parts[p]).column(i), origin[m].len()))
            .collect();
        Matrix::from_columns(&f, origin[m].len(), &cols)
    };
    let faces = (0..=top)
        .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| op(n, n - 1, &|c| c.face(n, i))).collect() })
        .collect();
    let degeneracies = (0..top).map(|n| (0..=n).map(|j| op(n, n + 1, &|c| c.degeneracy(n, j))).collect()).collect();
    let coalgebra = SimplicialCoalgebra::new(&f, degrees, faces, degeneracies)?;
    Ok(WedgeData { coalgebra, quotient, origin })
}

/// Coproduct of connected simplicial coalgebras: direct sum with the
/// coaugmentations identified. Clashing names from `d` get `@1`.
pub fn wedge_sum(c: &SimplicialCoalgebra, d: &SimplicialCoalgebra) -> Result<SimplicialCoalgebra> {
    let taken: Vec<HashSet<String>> = c.degrees.iter().map(|x| x.basis().iter().cloned().collect()).collect();
    let w = wedge_data(&[c, d], |_, name, _| name.to_string())?;
    let mut out = w.coalgebra;
    for (n, deg) in out.degrees.iter_mut().enumerate() {
        let mut used: HashSet<String> = HashSet::new();
        let names: Vec<String> = deg
            .basis()
            .iter()
            .zip(&w.origin[n])
            .map(|(s, &(p, _))| {
                let mut cand = s.clone();
                if p > 0 && (taken[n].contains(&cand) || used.contains(&cand)) {
                    cand = format!("{s}@1");
                    while taken[n].contains(&cand) || used.contains(&cand) {
                        cand.push('\'');
                    }
                }
                used.insert(cand.clone());
                cand
            })
            .collect();
        *deg = deg.renamed(names);
    }
    Ok(out)
}

/// `⊕_{S} C` over a `G`-set `S`, with `G` permuting the summands. Basis
/// elements are named `x[s]`; the coaugmentation keeps its name.
pub fn indexed_wedge_sum(s: &GSet, c: &SimplicialCoalgebra) -> Result<GSimplicialCoalgebra> {
    if s.is_empty() {
        return Err(Error::InvalidInput("empty indexing set".into()));
    }
    let parts: Vec<&SimplicialCoalgebra> = vec![c; s.len()];
    let labels = s.names();
    let w = wedge_data(&parts, |p, name, is_base| if is_base { name.to_string() } else { format!("{name}[{}]", labels[p]) })?;
    let f = c.field();
    let group = s.group().clone();
    let action = (0..group.order())
        .map(|g| {
            (0..=w.coalgebra.dimension_bound())
                .map(|n| {
                    let dim = w.origin[n].len();
                    let cols: Vec<Vector> = w.origin[n]
                        .iter()
                        .map(|&(p, i)| {
                            let mut v = vec![f.zero(); dim];
                            for (k, x) in &w.quotient[n][s.act(g, p)][i] {
                                v[*k] = x.clone();
                            }
                            v
                        })
                        .collect();
                    Matrix::from_columns(f, dim, &cols)
                })
                .collect()
        })
        .collect();
    GSimplicialCoalgebra::new(group, w.coalgebra, action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn chain_dimensions() {
        let f2 = Field::prime(2).unwrap();
        let c = chains(&models::s1(), &f2).unwrap();
        assert_eq!(c.dims()[1], 2);
        assert_eq!(c.degree(1).basis(), &["a".to_string(), "s0*".to_string()]);
        let rp2 = chains(&models::rp2(), &f2).unwrap();
        assert_eq!(rp2.dims()[2], 7);
        let pt = chains(&models::point(), &Field::rational()).unwrap();
        assert_eq!(pt.dims(), vec![1; 5]);
        for x in [models::s1(), models::rp2(), models::t2()] {
            chains(&x, &f2).unwrap().validate().unwrap();
        }
    }
}
