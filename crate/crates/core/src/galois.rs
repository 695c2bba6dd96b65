//! Semilinear Galois actions on `F̄[S]`, their fixed `F_q`-forms and the points functor.
//!
//! The Galois group is truncated to `Gal(F_{q^m}/F_q)`, cyclic of order `m`
//! and generated by `φ(a) = a^q`.

use std::collections::{BTreeMap, HashMap};

use crate::coalgebra::{grouplikes_with, Coalgebra, GroupLikeMethod};
use crate::equivariant::GSimplicialSet;
use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, Field};
use crate::linalg::{dense_to_sparse, Matrix, Rref, Vector};
use crate::scoalg::{chains, chains_equivariant, points_equivariant, GSimplicialCoalgebra, Points, SimplicialCoalgebra};
use crate::simplicial::{SimplexRef, SimplicialMap, SimplicialSet};

#[derive(Clone, Debug)]
pub struct FieldExtension {
    pub base: Field,
    pub top: Field,
    pub embedding: Embedding,
    /// `[top : base]`, the order of the Galois group.
    pub m: u32,
    /// `|base|`.
    pub q: u64,
}

impl FieldExtension {
    pub fn new(p: u32, k_base: u32, k_top: u32) -> Result<Self> {
        if k_base == 0 || k_top % k_base != 0 {
            return Err(Error::InvalidField(format!("F_{p}^{k_base} is not a subfield of F_{p}^{k_top}")));
        }
        let base = Field::finite(p, k_base)?;
        let top = Field::finite(p, k_top)?;
        let embedding = Embedding::new(&base, &top)?;
        let q = base.order().expect("finite field");
        Ok(FieldExtension { base, top, embedding, m: k_top / k_base, q })
    }

    pub fn frobenius(&self, a: &Elem) -> Elem {
        self.top.pow(a, self.q)
    }

    pub fn frobenius_vec(&self, v: &[Elem]) -> Vector {
        v.iter().map(|a| self.frobenius(a)).collect()
    }

    /// Sizes of the Frobenius orbits on the top field, in code order of their least element.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.top.order().unwrap() as usize];
        let mut out = Vec::new();
        for a in self.top.elements() {
            let Elem::Fin(c) = a else { unreachable!() };
            if seen[c as usize] {
                continue;
            }
            let mut b = a.clone();
            let mut size = 0;
            loop {
                let Elem::Fin(d) = b else { unreachable!() };
                seen[d as usize] = true;
                size += 1;
                b = self.frobenius(&b);
                if b == a {
                    break;
                }
            }
            out.push(size);
        }
        out
    }

    pub fn embed_matrix(&self, m: &Matrix) -> Matrix {
        Matrix::from_entries(&self.top, m.rows(), m.cols(), m.entries().into_iter().map(|(i, j, e)| (i, j, self.embedding.embed(&e))))
    }

    /// Entrywise preimage in the base field.
    pub fn pull_back_matrix(&self, m: &Matrix) -> Result<Matrix> {
        let entries = m
            .entries()
            .into_iter()
            .map(|(i, j, e)| {
                self.embedding
                    .pull_back(&e)
                    .map(|b| (i, j, b))
                    .ok_or_else(|| Error::Violation(format!("entry ({i}, {j}) is not Frobenius-fixed")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_entries(&self.base, m.rows(), m.cols(), entries))
    }
}

/// A finite set with an action of the cyclic Galois group, given by its generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearGSet {
    names: Vec<String>,
    perm: Vec<usize>,
    m: u32,
}

impl SemilinearGSet {
    pub fn new(names: Vec<String>, perm: Vec<usize>, m: u32) -> Result<Self> {
        let n = names.len();
        if perm.len() != n {
            return Err(Error::DimensionMismatch(format!("{} names but {} images", n, perm.len())));
        }
        let mut seen = vec![false; n];
        for &t in &perm {
            if t >= n || seen[t] {
                return Err(Error::InvalidInput("generator does not act by a permutation".into()));
            }
            seen[t] = true;
        }
        let s = SemilinearGSet { names, perm, m };
        if let Some(o) = s.orbits().iter().find(|o| m as usize % o.len() != 0) {
            return Err(Error::InvalidInput(format!("orbit of size {} does not divide {m}", o.len())));
        }
        Ok(s)
    }

    pub fn trivial(names: Vec<String>, m: u32) -> Self {
        let perm = (0..names.len()).collect();
        SemilinearGSet { names, perm, m }
    }

    /// Consecutive orbits of the given sizes, named `s0, s1, ...`.
    pub fn from_orbit_sizes(sizes: &[usize], m: u32) -> Result<Self> {
        let n: usize = sizes.iter().sum();
        let mut perm = Vec::with_capacity(n);
        let mut start = 0;
        for &k in sizes {
            perm.extend((0..k).map(|j| start + (j + 1) % k));
            start += k;
        }
        SemilinearGSet::new((0..n).map(|i| format!("s{i}")).collect(), perm, m)
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

    pub fn generator(&self) -> &[usize] {
        &self.perm
    }

    pub fn galois_order(&self) -> u32 {
        self.m
    }

    /// `φ^j · s`.
    pub fn act(&self, j: u32, s: usize) -> usize {
        (0..j % self.m).fold(s, |t, _| self.perm[t])
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut orbit = vec![s];
            seen[s] = true;
            let mut t = self.perm[s];
            while t != s {
                seen[t] = true;
                orbit.push(t);
                t = self.perm[t];
            }
            out.push(orbit);
        }
        out
    }

    pub fn orbit_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.orbits().iter().map(|o| o.len()).collect();
        t.sort_unstable();
        t
    }

    pub fn is_trivial(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &t)| i == t)
    }

    pub fn fixed(&self) -> Vec<usize> {
        (0..self.len()).filter(|&s| self.perm[s] == s).collect()
    }

    /// Finite G-sets for a cyclic group are classified by their orbit sizes.
    pub fn isomorphic(&self, other: &SemilinearGSet) -> bool {
        self.m == other.m && self.orbit_type() == other.orbit_type()
    }

    pub fn is_equivariant(&self, other: &SemilinearGSet, f: &[usize]) -> bool {
        f.len() == self.len() && (0..self.len()).all(|s| f[s] < other.len() && f[self.perm[s]] == other.perm[f[s]])
    }
}

/// One representative of every isomorphism class of `Gal`-sets with `1..=max_size` elements.
pub fn galois_sets(m: u32, max_size: usize) -> Vec<SemilinearGSet> {
    let divisors: Vec<usize> = (1..=m as usize).filter(|d| m as usize % d == 0).collect();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn rec(divisors: &[usize], from: usize, left: usize, m: u32, stack: &mut Vec<usize>, out: &mut Vec<SemilinearGSet>) {
        if !stack.is_empty() {
            out.push(SemilinearGSet::from_orbit_sizes(stack, m).expect("orbit sizes divide m"));
        }
        for (k, &d) in divisors.iter().enumerate().skip(from) {
            if d <= left {
                stack.push(d);
                rec(divisors, k, left - d, m, stack, out);
                stack.pop();
            }
        }
    }
    rec(&divisors, 0, max_size, m, &mut stack, &mut out);
    out
}

/// `F̄[S]^Gal` with the basis that realizes it inside `F̄[S]`.
#[derive(Clone, Debug)]
pub struct GaloisForm {
    pub coalgebra: Coalgebra,
    /// Column `i` is the `i`-th basis vector of the fixed form inside `top^S`.
    pub basis: Matrix,
    pub inverse: Matrix,
}

/// Fixed vectors of `v ↦ (s ↦ φ(v_{φ⁻¹s}))` by restriction of scalars to `F_p`.
fn fixed_vectors(perm: &[usize], e: &FieldExtension) -> Result<Vec<Vector>> {
    let top = &e.top;
    let p = top.characteristic();
    let fp = Field::prime(p)?;
    let k = top.degree() as usize;
    let n = perm.len();
    let unit = |c: usize| {
        let mut coords = vec![0u32; k];
        coords[c] = 1;
        top.from_prime_coords(&coords)
    };
    let mut entries = Vec::new();
    for s in 0..n {
        for c in 0..k {
            let col = s * k + c;
            let image = top.coords_over_prime(&e.frobenius(&unit(c)));
            for (r, &x) in image.iter().enumerate() {
                entries.push((perm[s] * k + r, col, fp.from_i64(x as i64)));
            }
            entries.push((col, col, fp.from_i64(-1)));
        }
    }
    let system = Matrix::from_entries(&fp, n * k, n * k, entries);
    let code = |a: &Elem| fp.coords_over_prime(a)[0];
    Ok(system
        .kernel()
        .into_iter()
        .map(|w| (0..n).map(|s| top.from_prime_coords(&w[s * k..(s + 1) * k].iter().map(code).collect::<Vec<_>>())).collect())
        .collect())
}

fn fixed_form(names: &[String], perm: &[usize], e: &FieldExtension) -> Result<GaloisForm> {
    let top = &e.top;
    let n = perm.len();
    let mut span = Rref::empty(top, n);
    let mut chosen: Vec<Vector> = Vec::new();
    for v in fixed_vectors(perm, e)? {
        if span.insert(dense_to_sparse(top, &v)) {
            chosen.push(v);
        }
    }
    if chosen.len() != n {
        return Err(Error::Violation(format!("fixed vectors span dimension {} of {n}", chosen.len())));
    }
    // Rescale by base-field leading coefficients so trivial orbits give unit vectors.
    for v in chosen.iter_mut() {
        let lead = v.iter().find(|a| !top.is_zero(a)).expect("nonzero").clone();
        if e.embedding.pull_back(&lead).is_some() {
            let inv = top.inv(&lead)?;
            *v = v.iter().map(|a| top.mul(a, &inv)).collect();
        }
    }
    let lead = |v: &Vector| v.iter().position(|a| !top.is_zero(a)).unwrap_or(n);
    chosen.sort_by_key(lead);
    let basis = Matrix::from_columns(top, n, &chosen);
    let inverse = basis.inverse()?;
    let ambient = Coalgebra::diagonal(top, names.to_vec());
    let mut delta = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc: BTreeMap<(usize, usize), Elem> = BTreeMap::new();
        for s in 0..n {
            let b = basis.get(s, i);
            if top.is_zero(&b) {
                continue;
            }
            let col: Vec<(usize, Elem)> = (0..n).map(|j| (j, inverse.get(j, s))).filter(|(_, x)| !top.is_zero(x)).collect();
            for (j, x) in &col {
                for (k, y) in &col {
                    let c = acc.entry((*j, *k)).or_insert_with(|| top.zero());
                    *c = top.add(c, &top.mul(&b, &top.mul(x, y)));
                }
            }
        }
        let row = acc
            .into_iter()
            .filter(|(_, c)| !top.is_zero(c))
            .map(|((j, k), c)| {
                e.embedding
                    .pull_back(&c)
                    .map(|b| (j, k, b))
                    .ok_or_else(|| Error::Violation("structure constant outside the base field".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        delta.push(row);
    }
    let counit = (0..n)
        .map(|i| {
            let sum = (0..n).fold(top.zero(), |a, s| top.add(&a, &basis.get(s, i)));
            e.embedding.pull_back(&sum).ok_or_else(|| Error::Violation("counit outside the base field".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let names = chosen.iter().map(|v| ambient.format_vector(v)).collect();
    let coalgebra = Coalgebra::new(&e.base, names, delta, counit)?;
    coalgebra.validate()?;
    Ok(GaloisForm { coalgebra, basis, inverse })
}

fn check_order(s: &SemilinearGSet, e: &FieldExtension) -> Result<()> {
    if s.m != e.m {
        return Err(Error::InvalidInput(format!("Galois set of order {} over an extension of degree {}", s.m, e.m)));
    }
    Ok(())
}

pub fn galois_fixed_coalgebra(s: &SemilinearGSet, e: &FieldExtension) -> Result<GaloisForm> {
    check_order(s, e)?;
    fixed_form(&s.names, &s.perm, e)
}

pub fn extend_scalars(a: &Coalgebra, e: &FieldExtension) -> Result<Coalgebra> {
    if a.field() != &e.base {
        return Err(Error::MixedFields(a.field().name(), e.base.name()));
    }
    let delta = (0..a.dim())
        .map(|i| a.delta_of(i).iter().map(|(j, k, c)| (*j, *k, e.embedding.embed(c))).collect())
        .collect();
    let counit = a.counit().iter().map(|c| e.embedding.embed(c)).collect();
    Coalgebra::new(&e.top, a.basis().to_vec(), delta, counit)
}

/// The canonical map `F̄[S]^Gal ⊗ F̄ -> F̄[S]`, checked to be a coalgebra isomorphism.
pub fn descent_check(s: &SemilinearGSet, e: &FieldExtension) -> Result<Matrix> {
    let form = galois_fixed_coalgebra(s, e)?;
    let extended = extend_scalars(&form.coalgebra, e)?;
    let ambient = Coalgebra::diagonal(&e.top, s.names.clone());
    if !form.basis.is_invertible() {
        return Err(Error::Violation("canonical map is not invertible".into()));
    }
    if !extended.is_coalgebra_map(&ambient, &form.basis) {
        return Err(Error::Violation("canonical map is not a coalgebra map".into()));
    }
    Ok(form.basis)
}

/// `P_Gal(A)`: group-likes of `A ⊗ F̄` permuted by Frobenius on coefficients.
#[derive(Clone, Debug)]
pub struct GaloisPoints {
    pub set: SemilinearGSet,
    /// Coordinates in the basis of `A`.
    pub vectors: Vec<Vector>,
    pub method: GroupLikeMethod,
    lookup: HashMap<Vector, usize>,
}

impl GaloisPoints {
    pub fn index_of(&self, v: &[Elem]) -> Option<usize> {
        self.lookup.get(v).copied()
    }
}

pub fn points_galois(a: &Coalgebra, e: &FieldExtension) -> Result<GaloisPoints> {
    let extended = extend_scalars(a, e)?;
    let found = if extended.is_diagonal() {
        grouplikes_with(&extended, GroupLikeMethod::Diagonal)?
    } else {
        let g = grouplikes_with(&extended, GroupLikeMethod::Characters)?;
        if g.complete {
            g
        } else {
            grouplikes_with(&extended, GroupLikeMethod::BruteForce)
                .map_err(|err| Error::Inconclusive(format!("group-like search over {}: {err}", e.top.name())))?
        }
    };
    let lookup: HashMap<Vector, usize> = found.elements.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let perm = found
        .elements
        .iter()
        .map(|v| {
            lookup
                .get(&e.frobenius_vec(v))
                .copied()
                .ok_or_else(|| Error::Violation("Frobenius moves a group-like off the group-likes".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let names = found.elements.iter().map(|v| extended.format_vector(v)).collect();
    let set = SemilinearGSet::new(names, perm, e.m)?;
    Ok(GaloisPoints { set, vectors: found.elements, method: found.method, lookup })
}

/// The map on points induced by a base-field coalgebra map `m`.
pub fn galois_points_map(m: &Matrix, src: &GaloisPoints, tgt: &GaloisPoints, e: &FieldExtension) -> Result<Vec<usize>> {
    let m = e.embed_matrix(m);
    src.vectors
        .iter()
        .map(|v| tgt.index_of(&m.mul_vec(v)).ok_or_else(|| Error::Violation("image of a group-like is not group-like".into())))
        .collect()
}

/// `η : S -> P_Gal(F̄[S]^Gal)`, `s ↦ e_s` written in the fixed basis.
#[derive(Clone, Debug)]
pub struct GaloisUnit {
    pub form: GaloisForm,
    pub points: GaloisPoints,
    pub map: Vec<usize>,
    pub bijective: bool,
    pub equivariant: bool,
}

impl GaloisUnit {
    pub fn passed(&self) -> bool {
        self.bijective && self.equivariant
    }
}

pub fn galois_unit(s: &SemilinearGSet, e: &FieldExtension) -> Result<GaloisUnit> {
    let form = galois_fixed_coalgebra(s, e)?;
    let points = points_galois(&form.coalgebra, e)?;
    let map = (0..s.len())
        .map(|k| {
            points
                .index_of(&form.inverse.column(k))
                .ok_or_else(|| Error::Violation(format!("{} is not sent to a point", s.names[k])))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut hit = vec![false; points.set.len()];
    map.iter().for_each(|&t| hit[t] = true);
    let bijective = map.len() == points.set.len() && hit.iter().all(|&h| h);
    let equivariant = s.is_equivariant(&points.set, &map);
    Ok(GaloisUnit { form, points, map, bijective, equivariant })
}

/// `F̄[f]^Gal` for an equivariant map `f : S -> T`, in the fixed bases.
pub fn fixed_map(f: &[usize], s: &SemilinearGSet, t: &SemilinearGSet, e: &FieldExtension) -> Result<Matrix> {
    if !s.is_equivariant(t, f) {
        return Err(Error::InvalidInput("map of Galois sets is not equivariant".into()));
    }
    let fs = galois_fixed_coalgebra(s, e)?;
    let ft = galois_fixed_coalgebra(t, e)?;
    let push = Matrix::from_entries(&e.top, t.len(), s.len(), f.iter().enumerate().map(|(k, &j)| (j, k, e.top.one())));
    e.pull_back_matrix(&ft.inverse.mul(&push)?.mul(&fs.basis)?)
}

/// Result of descending `F̄[X]` along a Galois action commuting with `G`.
#[derive(Clone, Debug)]
pub struct EquivariantDescent {
    pub coalgebra: GSimplicialCoalgebra,
    /// Degreewise basis changes into `top[X_n]`.
    pub forms: Vec<GaloisForm>,
    pub points: Points,
    pub recovered: GSimplicialSet,
    /// `η : X -> P(C ⊗ F̄)`.
    pub unit: SimplicialMap,
    pub unit_is_isomorphism: bool,
    pub g_equivariant: bool,
    pub galois_equivariant: bool,
}

impl EquivariantDescent {
    pub fn passed(&self) -> bool {
        self.unit_is_isomorphism && self.g_equivariant && self.galois_equivariant
    }
}

fn simplex_positions(x: &SimplicialSet) -> Result<(Vec<Vec<SimplexRef>>, Vec<HashMap<SimplexRef, usize>>)> {
    let bases = (0..=x.dimension_bound()).map(|n| x.simplices(n)).collect::<Result<Vec<_>>>()?;
    let index = bases.iter().map(|b| b.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
    Ok((bases, index))
}

fn extend_simplicial(c: &SimplicialCoalgebra, e: &FieldExtension) -> Result<SimplicialCoalgebra> {
    let top = c.dimension_bound();
    let degrees = (0..=top).map(|n| extend_scalars(c.degree(n), e)).collect::<Result<Vec<_>>>()?;
    let faces = (0..=top).map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| e.embed_matrix(c.face(n, i))).collect() }).collect();
    let degeneracies = (0..top).map(|n| (0..=n).map(|j| e.embed_matrix(c.degeneracy(n, j))).collect()).collect();
    SimplicialCoalgebra::new(&e.top, degrees, faces, degeneracies)
}

/// Degreewise fixed forms of `top[X]` under a Galois action `sigma` (an automorphism of `X`
/// with `sigma^m = id`) commuting with the `G`-action, and the recovery of `X` from them.
pub fn equivariant_descent(x: &GSimplicialSet, sigma: &SimplicialMap, e: &FieldExtension) -> Result<EquivariantDescent> {
    let space = x.space();
    if sigma.source() != space || sigma.target() != space || !sigma.is_isomorphism() {
        return Err(Error::InvalidInput("Galois action must be an automorphism of the underlying set".into()));
    }
    let (bases, index) = simplex_positions(space)?;
    let perms: Vec<Vec<usize>> =
        bases.iter().enumerate().map(|(n, b)| b.iter().map(|s| index[n][&sigma.apply(s)]).collect()).collect();
    let group = x.group().clone();
    for (n, b) in bases.iter().enumerate() {
        for (i, s) in b.iter().enumerate() {
            let mut t = i;
            for _ in 0..e.m {
                t = perms[n][t];
            }
            if t != i {
                return Err(Error::InvalidInput(format!("Galois generator does not have order dividing {}", e.m)));
            }
            for g in 0..group.order() {
                if x.act(g, &sigma.apply(s)) != sigma.apply(&x.act(g, s)) {
                    return Err(Error::Violation("Galois and group actions do not commute".into()));
                }
            }
        }
    }
    let ambient = chains(space, &e.top)?;
    let ambient_g = chains_equivariant(x, &e.top)?;
    let forms = (0..=space.dimension_bound())
        .map(|n| fixed_form(ambient.degree(n).basis(), &perms[n], e))
        .collect::<Result<Vec<_>>>()?;
    let descend = |m: &Matrix, from: usize, to: usize| -> Result<Matrix> {
        e.pull_back_matrix(&forms[to].inverse.mul(m)?.mul(&forms[from].basis)?)
    };
    let d = space.dimension_bound();
    let faces = (0..=d)
        .map(|n| if n == 0 { Ok(Vec::new()) } else { (0..=n).map(|i| descend(ambient.face(n, i), n, n - 1)).collect() })
        .collect::<Result<Vec<_>>>()?;
    let degeneracies =
        (0..d).map(|n| (0..=n).map(|j| descend(ambient.degeneracy(n, j), n, n + 1)).collect()).collect::<Result<Vec<_>>>()?;
    let degrees = forms.iter().map(|f| f.coalgebra.clone()).collect();
    let base = SimplicialCoalgebra::new(&e.base, degrees, faces, degeneracies)?;
    base.validate()?;
    let action = (0..group.order())
        .map(|g| (0..=d).map(|n| descend(ambient_g.action(g, n), n, n)).collect())
        .collect::<Result<Vec<_>>>()?;
    let coalgebra = GSimplicialCoalgebra::new(group.clone(), base, action)?;

    let extended = extend_simplicial(coalgebra.coalgebra(), e)?;
    let extended_g = GSimplicialCoalgebra::new(
        group.clone(),
        extended,
        (0..group.order()).map(|g| (0..=d).map(|n| e.embed_matrix(coalgebra.action(g, n))).collect()).collect(),
    )?;
    let (points, recovered) = points_equivariant(&extended_g)?;
    let vector_of = |n: usize, i: usize| forms[n].inverse.column(i);
    let images = (0..=d)
        .map(|n| {
            (0..space.nd_count(n))
                .map(|i| {
                    points
                        .simplex_of(n, &vector_of(n, i))
                        .cloned()
                        .ok_or_else(|| Error::Violation(format!("simplex {i} in degree {n} is not sent to a point")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = SimplicialMap::new(space.clone(), points.space.clone(), images)?;
    let unit_is_isomorphism = unit.validate().is_ok() && unit.is_isomorphism();
    let g_equivariant = x.is_equivariant(&recovered, &unit);
    let galois_equivariant = (0..=d).all(|n| {
        (0..bases[n].len()).all(|i| vector_of(n, perms[n][i]) == e.frobenius_vec(&vector_of(n, i)))
    });
    Ok(EquivariantDescent {
        coalgebra,
        forms,
        points,
        recovered,
        unit,
        unit_is_isomorphism,
        g_equivariant,
        galois_equivariant,
    })
}

/// Convenience for a trivial Galois action.
pub fn trivial_descent(x: &GSimplicialSet, e: &FieldExtension) -> Result<EquivariantDescent> {
    equivariant_descent(x, &SimplicialMap::identity(x.space().clone()), e)
}
