//! Simplicial sets with a finite group action, fixed points, the orbit
//! category, the functors `Φ` and `Θ` between G-objects and orbit diagrams,
//! and finite checks of the cellularity conditions.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{coset_index, coset_reps, subgroups, FiniteGroup, GSet, Subgroup};
use crate::simplicial::{fresh_name, pushout, NdRef, SimplexRef, SimplicialMap, SimplicialSet};

/// A simplicial set with `G` acting by automorphisms; `action[g][n][i]` is the
/// index of `g · x` for the `i`-th nondegenerate `n`-simplex `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct GSimplicialSet {
    group: Arc<FiniteGroup>,
    space: Arc<SimplicialSet>,
    action: Vec<Vec<Vec<usize>>>,
}

impl GSimplicialSet {
    pub fn new(group: Arc<FiniteGroup>, space: Arc<SimplicialSet>, action: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let y = GSimplicialSet { group, space, action };
        y.validate()?;
        Ok(y)
    }

    pub fn trivial(group: Arc<FiniteGroup>, space: Arc<SimplicialSet>) -> Self {
        let ident: Vec<Vec<usize>> = (0..=space.dimension_bound()).map(|n| (0..space.nd_count(n)).collect()).collect();
        let action = vec![ident; group.order()];
        GSimplicialSet { group, space, action }
    }

    /// Builds an action from `(element, [(simplex, image)])` lists; simplices
    /// not mentioned are fixed.
    pub fn from_names(
        group: Arc<FiniteGroup>,
        space: Arc<SimplicialSet>,
        moves: &[(&str, Vec<(&str, &str)>)],
    ) -> Result<Self> {
        let mut y = GSimplicialSet::trivial(group.clone(), space.clone());
        for (g, pairs) in moves {
            let gi = group.index_of(g)?;
            for (a, b) in pairs {
                let ra = space.find_any(a)?;
                let rb = space.find(ra.dim, b).ok_or_else(|| Error::UnknownSimplex(b.to_string()))?;
                y.action[gi][ra.dim][ra.index] = rb.index;
            }
        }
        y.validate()?;
        Ok(y)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn space(&self) -> &Arc<SimplicialSet> {
        &self.space
    }

    pub fn action_table(&self) -> &[Vec<Vec<usize>>] {
        &self.action
    }

    pub fn act_nd(&self, g: usize, r: NdRef) -> NdRef {
        NdRef { dim: r.dim, index: self.action[g][r.dim][r.index] }
    }

    pub fn act(&self, g: usize, x: &SimplexRef) -> SimplexRef {
        SimplexRef { dim: x.dim, word: x.word.clone(), base: self.act_nd(g, x.base) }
    }

    pub fn as_map(&self, g: usize) -> SimplicialMap {
        let images = (0..=self.space.dimension_bound())
            .map(|n| self.space.nd_refs(n).map(|r| SimplexRef::nondegenerate(self.act_nd(g, r))).collect())
            .collect();
        SimplicialMap::new(self.space.clone(), self.space.clone(), images).expect("shape checked")
    }

    /// Each element acts by a simplicial automorphism and `g ↦ g·(−)` is a homomorphism.
    pub fn validate(&self) -> Result<()> {
        let x = &self.space;
        if self.action.len() != self.group.order() {
            return Err(Error::InvalidInput("action needs one permutation per group element".into()));
        }
        for g in 0..self.group.order() {
            let per = &self.action[g];
            if per.len() != x.dimension_bound() + 1 {
                return Err(Error::InvalidInput("action has the wrong number of dimensions".into()));
            }
            for n in 0..=x.dimension_bound() {
                let mut seen = vec![false; x.nd_count(n)];
                if per[n].len() != x.nd_count(n) {
                    return Err(Error::InvalidInput(format!("action in dimension {n} has the wrong length")));
                }
                for &i in &per[n] {
                    if i >= seen.len() || seen[i] {
                        return Err(Error::Violation(format!(
                            "{} does not permute the {n}-simplices",
                            self.group.name(g)
                        )));
                    }
                    seen[i] = true;
                }
            }
            self.as_map(g).validate().map_err(|e| {
                Error::Violation(format!("{} is not a simplicial map: {e}", self.group.name(g)))
            })?;
        }
        let e = self.group.identity();
        for n in 0..=x.dimension_bound() {
            for i in 0..x.nd_count(n) {
                if self.action[e][n][i] != i {
                    return Err(Error::Violation("identity acts nontrivially".into()));
                }
                for g in 0..self.group.order() {
                    for h in 0..self.group.order() {
                        if self.action[g][n][self.action[h][n][i]] != self.action[self.group.mul(g, h)][n][i] {
                            return Err(Error::Violation(format!(
                                "action of {}·{} differs from the composite",
                                self.group.name(g),
                                self.group.name(h)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether `f : self -> other` commutes with the actions.
    pub fn is_equivariant(&self, other: &GSimplicialSet, f: &SimplicialMap) -> bool {
        (0..self.group.order()).all(|g| {
            self.space.all_nd_refs().into_iter().all(|r| {
                let x = SimplexRef::nondegenerate(r);
                f.apply(&self.act(g, &x)) == other.act(g, &f.apply(&x))
            })
        })
    }
}

/// `X^H` together with how it sits inside `X`.
#[derive(Clone, Debug)]
pub struct FixedPoints {
    pub space: Arc<SimplicialSet>,
    /// Index in `X` of each nondegenerate simplex of `X^H`.
    pub to_original: Vec<Vec<usize>>,
    /// Index in `X^H` of each nondegenerate simplex of `X`, if fixed.
    pub from_original: Vec<Vec<Option<usize>>>,
}

impl FixedPoints {
    pub fn inclusion(&self, original: &Arc<SimplicialSet>) -> SimplicialMap {
        let images = self
            .to_original
            .iter()
            .enumerate()
            .map(|(n, row)| row.iter().map(|&i| SimplexRef::nondegenerate(NdRef { dim: n, index: i })).collect())
            .collect();
        SimplicialMap::new(self.space.clone(), original.clone(), images).expect("fixed points sit inside X")
    }

    fn translate(&self, x: &SimplexRef) -> Option<SimplexRef> {
        let i = self.from_original[x.base.dim][x.base.index]?;
        Some(SimplexRef { dim: x.dim, word: x.word.clone(), base: NdRef { dim: x.base.dim, index: i } })
    }
}

/// Simplices fixed by every element of `h`. For `h = {e}` the result equals `X`.
pub fn fixed_points(y: &GSimplicialSet, h: &Subgroup) -> FixedPoints {
    let x = &y.space;
    let mut out = SimplicialSet::new(x.dimension_bound(), x.is_reduced());
    let mut to_original = Vec::new();
    let mut from_original: Vec<Vec<Option<usize>>> = Vec::new();
    for n in 0..=x.dimension_bound() {
        let mut to = Vec::new();
        let mut from = vec![None; x.nd_count(n)];
        for r in x.nd_refs(n) {
            if h.elements.iter().all(|&g| y.act_nd(g, r) == r) {
                let s = x.simplex(r);
                let faces: Vec<SimplexRef> = s
                    .faces
                    .iter()
                    .map(|f| {
                        let i = from_original[f.base.dim].get(f.base.index).copied().flatten();
                        let i: usize = i.expect("faces of fixed simplices are fixed");
                        SimplexRef { dim: f.dim, word: f.word.clone(), base: NdRef { dim: f.base.dim, index: i } }
                    })
                    .collect::<Vec<_>>();
                let new = out.add_simplex_refs(&s.name, n, faces).expect("copied from a valid set");
                from[r.index] = Some(new.index);
                to.push(r.index);
            }
        }
        to_original.push(to);
        from_original.push(from);
    }
    FixedPoints { space: Arc::new(out), to_original, from_original }
}

/// Restricts an equivariant map to `H`-fixed points.
pub fn restrict_to_fixed(f: &SimplicialMap, src: &FixedPoints, tgt: &FixedPoints) -> Result<SimplicialMap> {
    let images = src
        .to_original
        .iter()
        .enumerate()
        .map(|(n, row)| {
            row.iter()
                .map(|&i| {
                    let fx = f.apply(&SimplexRef::nondegenerate(NdRef { dim: n, index: i }));
                    tgt.translate(&fx).ok_or_else(|| Error::Violation("map does not preserve fixed points".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SimplicialMap::new(src.space.clone(), tgt.space.clone(), images)
}

/// A wedge of labelled copies of reduced simplicial sets: part `p` appears once
/// for each of its labels. Positive-dimensional simplex `x` of part `p` with
/// label `l` is named `x[l]`; the basepoint keeps its name.
#[derive(Clone, Debug)]
pub struct IndexedWedge {
    pub space: Arc<SimplicialSet>,
    /// `table[p][l][n][i]` is the index in the wedge of simplex `(n, i)` of part `p`, copy `l`.
    table: Vec<Vec<Vec<Vec<usize>>>>,
}

impl IndexedWedge {
    pub fn build(parts: &[(Arc<SimplicialSet>, Vec<String>)]) -> Result<IndexedWedge> {
        let mut d = 0;
        for (x, _) in parts {
            if !x.is_reduced() || x.nd_count(0) != 1 {
                return Err(Error::NotReduced("wedge summand".into()));
            }
            d = d.max(x.dimension_bound());
        }
        let base_name = parts.first().map(|(x, _)| x.name(NdRef { dim: 0, index: 0 }).to_string());
        let mut w = SimplicialSet::new(d, true);
        w.add_simplex_refs(base_name.as_deref().unwrap_or("*"), 0, Vec::new())?;
        let mut table = Vec::new();
        for (x, labels) in parts {
            let mut per_label = Vec::new();
            for label in labels {
                let mut t: Vec<Vec<usize>> = vec![vec![0]];
                for n in 1..=x.dimension_bound() {
                    let mut row = Vec::new();
                    for s in x.nondegenerate(n) {
                        let faces = s
                            .faces
                            .iter()
                            .map(|f| SimplexRef {
                                dim: f.dim,
                                word: f.word.clone(),
                                base: NdRef { dim: f.base.dim, index: t[f.base.dim][f.base.index] },
                            })
                            .collect();
                        let name = fresh_name(&w, n, &format!("{}[{}]", s.name, label), "c");
                        row.push(w.add_simplex_refs(&name, n, faces)?.index);
                    }
                    t.push(row);
                }
                per_label.push(t);
            }
            table.push(per_label);
        }
        Ok(IndexedWedge { space: Arc::new(w), table })
    }

    pub fn index(&self, part: usize, label: usize, r: NdRef) -> NdRef {
        NdRef { dim: r.dim, index: self.table[part][label][r.dim][r.index] }
    }

    /// Map to another indexed wedge over the same parts, copy `(p, l)` going
    /// identically onto copy `(p, relabel(p, l))`.
    pub fn relabel_map(&self, target: &IndexedWedge, relabel: impl Fn(usize, usize) -> usize) -> Result<SimplicialMap> {
        let x = &self.space;
        let mut images: Vec<Vec<Option<SimplexRef>>> =
            (0..=x.dimension_bound()).map(|n| vec![None; x.nd_count(n)]).collect();
        images[0][0] = Some(SimplexRef::nondegenerate(NdRef { dim: 0, index: 0 }));
        for (p, per_label) in self.table.iter().enumerate() {
            for (l, t) in per_label.iter().enumerate() {
                let l2 = relabel(p, l);
                for (n, row) in t.iter().enumerate().skip(1) {
                    for (i, &w) in row.iter().enumerate() {
                        let tgt = target.table[p][l2][n][i];
                        images[n][w] = Some(SimplexRef::nondegenerate(NdRef { dim: n, index: tgt }));
                    }
                }
            }
        }
        let images = images.into_iter().map(|row| row.into_iter().map(|s| s.unwrap()).collect()).collect();
        SimplicialMap::new(x.clone(), target.space.clone(), images)
    }

    /// Permutation action on copies induced by actions on each part's labels.
    fn action_from(&self, group: &FiniteGroup, act: impl Fn(usize, usize, usize) -> usize) -> Vec<Vec<Vec<usize>>> {
        let x = &self.space;
        (0..group.order())
            .map(|g| {
                let mut per: Vec<Vec<usize>> = (0..=x.dimension_bound()).map(|n| (0..x.nd_count(n)).collect()).collect();
                for (p, per_label) in self.table.iter().enumerate() {
                    for (l, t) in per_label.iter().enumerate() {
                        let l2 = act(g, p, l);
                        for (n, row) in t.iter().enumerate().skip(1) {
                            for (i, &w) in row.iter().enumerate() {
                                per[n][w] = self.table[p][l2][n][i];
                            }
                        }
                    }
                }
                per
            })
            .collect()
    }
}

/// `S ⊗ X`: the wedge of `|S|` copies of `X`, `G` permuting copies through `S`.
pub fn tensor_set(s: &GSet, x: &Arc<SimplicialSet>) -> Result<GSimplicialSet> {
    let w = IndexedWedge::build(&[(x.clone(), s.names().to_vec())])?;
    let action = w.action_from(s.group(), |g, _, l| s.act(g, l));
    GSimplicialSet::new(s.group().clone(), w.space.clone(), action)
}

/// `S ⊗ f` for a map `f : A -> X`, with the two tensored G-objects.
pub fn tensor_map(s: &GSet, f: &SimplicialMap) -> Result<(GSimplicialSet, GSimplicialSet, SimplicialMap)> {
    let wa = IndexedWedge::build(&[(f.source().clone(), s.names().to_vec())])?;
    let wx = IndexedWedge::build(&[(f.target().clone(), s.names().to_vec())])?;
    let a = GSimplicialSet::new(s.group().clone(), wa.space.clone(), wa.action_from(s.group(), |g, _, l| s.act(g, l)))?;
    let x = GSimplicialSet::new(s.group().clone(), wx.space.clone(), wx.action_from(s.group(), |g, _, l| s.act(g, l)))?;
    let src = f.source();
    let mut images: Vec<Vec<Option<SimplexRef>>> =
        (0..=wa.space.dimension_bound()).map(|n| vec![None; wa.space.nd_count(n)]).collect();
    for l in 0..s.len() {
        for r in src.all_nd_refs() {
            let fr = f.image_of(r);
            let img = SimplexRef { dim: fr.dim, word: fr.word.clone(), base: wx.index(0, l, fr.base) };
            let w = wa.index(0, l, r);
            images[w.dim][w.index] = Some(img);
        }
    }
    let images = images.into_iter().map(|row| row.into_iter().map(|s| s.unwrap()).collect()).collect();
    let m = SimplicialMap::new(wa.space.clone(), wx.space.clone(), images)?;
    Ok((a, x, m))
}

/// The orbit category: every subgroup is an object `G/H`, and a morphism
/// `G/H -> G/K` is a coset `gK` with `g⁻¹Hg ⊆ K`, acting by `xH ↦ xgK`.
#[derive(Clone, Debug)]
pub struct OrbitCategory {
    group: Arc<FiniteGroup>,
    subgroups: Vec<Subgroup>,
    cosets: Vec<GSet>,
    reps: Vec<Vec<usize>>,
    homs: Vec<Vec<Vec<usize>>>,
}

impl OrbitCategory {
    pub fn new(group: Arc<FiniteGroup>) -> Result<Self> {
        let subs = subgroups(&group)?;
        let cosets: Vec<GSet> = subs.iter().map(|h| GSet::cosets(&group, h)).collect();
        let reps: Vec<Vec<usize>> = subs.iter().map(|h| coset_reps(&group, h)).collect();
        let homs = subs
            .iter()
            .map(|h| {
                subs.iter()
                    .enumerate()
                    .map(|(k, ks)| {
                        (0..reps[k].len())
                            .filter(|&c| {
                                let g = reps[k][c];
                                group.conjugate(&h.elements, g).iter().all(|&x| ks.contains(x))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(OrbitCategory { group, subgroups: subs, cosets, reps, homs })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn object_count(&self) -> usize {
        self.subgroups.len()
    }

    pub fn trivial_object(&self) -> usize {
        0
    }

    pub fn cosets(&self, h: usize) -> &GSet {
        &self.cosets[h]
    }

    /// Morphisms `G/H -> G/K` as coset indices in `G/K`.
    pub fn hom(&self, h: usize, k: usize) -> &[usize] {
        &self.homs[h][k]
    }

    pub fn representative(&self, k: usize, coset: usize) -> usize {
        self.reps[k][coset]
    }

    /// `ψ ∘ φ` for `φ = gK : G/H -> G/K` and `ψ = g'L : G/K -> G/L`, which is `gg'L`.
    pub fn compose(&self, k: usize, phi: usize, l: usize, psi: usize) -> usize {
        let g = self.reps[k][phi];
        let g2 = self.reps[l][psi];
        coset_index(&self.group, &self.subgroups[l], &self.reps[l], self.group.mul(g, g2))
    }

    /// The identity of `G/H`.
    pub fn identity(&self, h: usize) -> usize {
        coset_index(&self.group, &self.subgroups[h], &self.reps[h], self.group.identity())
    }

    /// Image of the coset `xH` under `φ = gK`.
    pub fn apply(&self, h: usize, k: usize, phi: usize, x_coset: usize) -> usize {
        let x = self.reps[h][x_coset];
        let g = self.reps[k][phi];
        coset_index(&self.group, &self.subgroups[k], &self.reps[k], self.group.mul(x, g))
    }

    /// The morphism `G/e -> G/e` given by right multiplication by `g`.
    pub fn free_endomorphism(&self, g: usize) -> usize {
        coset_index(&self.group, &self.subgroups[0], &self.reps[0], g)
    }
}

/// How a diagram was assembled: each cell contributes the generator
/// `O_G(−, G/H) ⊗ X`, attached along its basepoint.
#[derive(Clone, Debug)]
pub struct Cell {
    pub subgroup: usize,
    pub space: Arc<SimplicialSet>,
}

/// A contravariant functor from the orbit category to simplicial sets.
#[derive(Clone, Debug)]
pub struct OrbitDiagram {
    category: Arc<OrbitCategory>,
    values: Vec<Arc<SimplicialSet>>,
    /// `(H, K, φ)` for `φ : G/H -> G/K` holds the map `X(G/K) -> X(G/H)`.
    maps: BTreeMap<(usize, usize, usize), SimplicialMap>,
    cells: Option<Vec<Cell>>,
}

impl OrbitDiagram {
    pub fn category(&self) -> &Arc<OrbitCategory> {
        &self.category
    }

    pub fn value(&self, h: usize) -> &Arc<SimplicialSet> {
        &self.values[h]
    }

    pub fn map(&self, h: usize, k: usize, phi: usize) -> &SimplicialMap {
        &self.maps[&(h, k, phi)]
    }

    pub fn cells(&self) -> Option<&[Cell]> {
        self.cells.as_deref()
    }

    /// The constant diagram at `x`.
    pub fn constant(category: Arc<OrbitCategory>, x: Arc<SimplicialSet>) -> Self {
        let n = category.object_count();
        let mut maps = BTreeMap::new();
        for h in 0..n {
            for k in 0..n {
                for &phi in category.hom(h, k) {
                    maps.insert((h, k, phi), SimplicialMap::identity(x.clone()));
                }
            }
        }
        OrbitDiagram { category, values: vec![x; n], maps, cells: None }
    }

    /// Identities go to identities, every map is simplicial, and
    /// `X(ψ∘φ) = X(φ)∘X(ψ)` on all composable pairs.
    pub fn validate(&self) -> Result<()> {
        let c = &self.category;
        let n = c.object_count();
        for h in 0..n {
            let id = self.map(h, h, c.identity(h));
            if *id != SimplicialMap::identity(self.values[h].clone()) {
                return Err(Error::Violation(format!("identity of object {h} is not sent to the identity")));
            }
            for k in 0..n {
                for &phi in c.hom(h, k) {
                    self.map(h, k, phi).validate()?;
                    for l in 0..n {
                        for &psi in c.hom(k, l) {
                            let comp = c.compose(k, phi, l, psi);
                            let lhs = self.map(h, l, comp);
                            let rhs = self.map(k, l, psi).then(self.map(h, k, phi))?;
                            if *lhs != rhs {
                                return Err(Error::Violation(format!(
                                    "functoriality fails for objects ({h}, {k}, {l})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `Φ(Y)`: `G/H ↦ Y^H`, and `φ = gK` acts by `y ↦ g·y : Y^K -> Y^H`.
pub fn phi(y: &GSimplicialSet) -> Result<OrbitDiagram> {
    let category = Arc::new(OrbitCategory::new(y.group.clone())?);
    phi_over(y, category)
}

fn phi_over(y: &GSimplicialSet, category: Arc<OrbitCategory>) -> Result<OrbitDiagram> {
    let fixed: Vec<FixedPoints> = category.subgroups().iter().map(|h| fixed_points(y, h)).collect();
    let n = category.object_count();
    let mut maps = BTreeMap::new();
    for h in 0..n {
        for k in 0..n {
            for &phi in category.hom(h, k) {
                let g = category.representative(k, phi);
                let m = restrict_to_fixed(&y.as_map(g), &fixed[k], &fixed[h])?;
                maps.insert((h, k, phi), m);
            }
        }
    }
    let values = fixed.iter().map(|f| f.space.clone()).collect();
    Ok(OrbitDiagram { category, values, maps, cells: None })
}

/// `Θ(D) = D(G/e)` with `g` acting through the endomorphism `x ↦ xg` of `G/e`.
pub fn theta(d: &OrbitDiagram) -> Result<GSimplicialSet> {
    let c = &d.category;
    let e = c.trivial_object();
    if c.subgroups()[e].order() != 1 {
        return Err(Error::InvalidInput("diagram has no free orbit".into()));
    }
    let x = d.values[e].clone();
    let action = (0..c.group().order())
        .map(|g| {
            let m = d.map(e, e, c.free_endomorphism(g));
            (0..=x.dimension_bound())
                .map(|n| {
                    x.nd_refs(n)
                        .map(|r| {
                            let img = m.image_of(r);
                            if img.is_degenerate() {
                                Err(Error::Violation("free-orbit endomorphism is not an automorphism".into()))
                            } else {
                                Ok(img.base.index)
                            }
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GSimplicialSet::new(c.group().clone(), x, action)
}

fn cell_wedge(category: &OrbitCategory, cells: &[Cell], k: usize) -> Result<IndexedWedge> {
    let parts: Vec<(Arc<SimplicialSet>, Vec<String>)> = cells
        .iter()
        .map(|cell| {
            let labels = category
                .hom(k, cell.subgroup)
                .iter()
                .map(|&c| category.cosets(cell.subgroup).names()[c].clone())
                .collect();
            (cell.space.clone(), labels)
        })
        .collect();
    IndexedWedge::build(&parts)
}

/// The diagram `G/K ↦ ⋁_cells O_G(G/K, G/H) ⊗ X`, with morphisms acting by precomposition.
pub fn cell_diagram(category: Arc<OrbitCategory>, cells: Vec<Cell>) -> Result<OrbitDiagram> {
    for cell in &cells {
        if cell.subgroup >= category.object_count() {
            return Err(Error::InvalidInput("cell refers to an unknown subgroup".into()));
        }
    }
    let n = category.object_count();
    let wedges: Vec<IndexedWedge> = (0..n).map(|k| cell_wedge(&category, &cells, k)).collect::<Result<_>>()?;
    let mut maps = BTreeMap::new();
    for h in 0..n {
        for k in 0..n {
            for &phi in category.hom(h, k) {
                // Copy ψ ∈ Hom(G/K, G/H_c) goes to ψ∘φ ∈ Hom(G/H, G/H_c).
                let m = wedges[k].relabel_map(&wedges[h], |p, l| {
                    let hc = cells[p].subgroup;
                    let psi = category.hom(k, hc)[l];
                    let comp = category.compose(k, phi, hc, psi);
                    category.hom(h, hc).iter().position(|&x| x == comp).expect("composite is a morphism")
                })?;
                maps.insert((h, k, phi), m);
            }
        }
    }
    let values = wedges.into_iter().map(|w| w.space).collect();
    Ok(OrbitDiagram { category, values, maps, cells: Some(cells) })
}

/// Result of checking `η : D -> Φ(Θ(D))`.
#[derive(Clone, Debug)]
pub struct UnitReport {
    /// Per object: whether `η` is an isomorphism there.
    pub isomorphism: Vec<bool>,
    pub natural: bool,
}

impl UnitReport {
    pub fn passed(&self) -> bool {
        self.natural && self.isomorphism.iter().all(|&b| b)
    }
}

/// Checks that the unit is an object-wise isomorphism. Only diagrams built by
/// [`cell_diagram`] are accepted.
pub fn elmendorf_unit_check(d: &OrbitDiagram) -> Result<UnitReport> {
    if d.cells.is_none() {
        return Err(Error::NotCellular("diagram has no cell structure from generators".into()));
    }
    d.validate()?;
    let c = d.category.clone();
    let y = theta(d)?;
    let fixed: Vec<FixedPoints> = c.subgroups().iter().map(|h| fixed_points(&y, h)).collect();
    let target = phi_over(&y, c.clone())?;
    let e = c.trivial_object();
    let mut etas = Vec::new();
    let mut iso = Vec::new();
    for k in 0..c.object_count() {
        // η at G/K is D(π) for the projection π = eK : G/e -> G/K.
        let pi = c.identity(k);
        let proj = d.map(e, k, pi);
        let full = restrict_to_fixed(proj, &identity_fixed(d.value(k)), &fixed[k])?;
        iso.push(full.validate().is_ok() && full.is_isomorphism());
        etas.push(full);
    }
    let mut natural = true;
    for h in 0..c.object_count() {
        for k in 0..c.object_count() {
            for &phi in c.hom(h, k) {
                let left = d.map(h, k, phi).then(&etas[h])?;
                let right = etas[k].then(target.map(h, k, phi))?;
                if left != right {
                    natural = false;
                }
            }
        }
    }
    Ok(UnitReport { isomorphism: iso, natural })
}

/// Fixed points of the trivial action: all of `x`.
fn identity_fixed(x: &Arc<SimplicialSet>) -> FixedPoints {
    let to_original = (0..=x.dimension_bound()).map(|n| (0..x.nd_count(n)).collect()).collect();
    let from_original = (0..=x.dimension_bound()).map(|n| (0..x.nd_count(n)).map(Some).collect()).collect();
    FixedPoints { space: x.clone(), to_original, from_original }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularityEntry {
    pub h: usize,
    pub k: usize,
    pub condition: u8,
    pub passed: bool,
    pub detail: String,
}

/// Checks the three cellularity conditions for `(−)^H` on every pair `(H, K)`,
/// using the monomorphism `f : A ↪ X` of reduced simplicial sets.
///
/// 1. `(G/K ⊗ X ⊔_{G/K ⊗ A} *)^H` agrees with the pushout of the fixed points.
/// 2. Fixed points of the skeleton chain of `G/K ⊗ X` exhaust `(G/K ⊗ X)^H`
///    (a finite spot check of filtered colimits).
/// 3. `(G/K)^H ⊗ X -> (G/K ⊗ X)^H` is an isomorphism.
pub fn check_cellularity(group: &Arc<FiniteGroup>, f: &SimplicialMap) -> Result<Vec<CellularityEntry>> {
    if !f.is_monomorphism() {
        return Err(Error::NotMonomorphism("cellularity needs a monomorphism".into()));
    }
    let x = f.target().clone();
    if !x.is_reduced() || !f.source().is_reduced() {
        return Err(Error::NotReduced("cellularity input".into()));
    }
    let subs = subgroups(group)?;
    let mut out = Vec::new();
    for (ki, k) in subs.iter().enumerate() {
        let s = GSet::cosets(group, k);
        let (ta, tx, tf) = tensor_map(&s, f)?;
        let point = Arc::new(SimplicialSet::clone(&crate::models::point()).with_dimension_bound(ta.space.dimension_bound())?);
        let gpoint = GSimplicialSet::trivial(group.clone(), point.clone());
        let collapse = crate::models::collapse_to_point(ta.space(), &point)?;
        let po = pushout(&tf, &collapse)?;
        // G acts on the pushout through the universal property.
        let action = (0..group.order())
            .map(|g| {
                let u = tx.as_map(g).then(&po.from_x)?;
                let v = gpoint.as_map(g).then(&po.from_y)?;
                let m = po.induced(&u, &v)?;
                Ok((0..=po.space.dimension_bound())
                    .map(|n| po.space.nd_refs(n).map(|r| m.image_of(r).base.index).collect())
                    .collect())
            })
            .collect::<Result<Vec<Vec<Vec<usize>>>>>()?;
        let gp = GSimplicialSet::new(group.clone(), po.space.clone(), action)?;
        for (hi, h) in subs.iter().enumerate() {
            // Condition 3.
            let fixed_s: Vec<String> = s.fixed(h).iter().map(|&i| s.names()[i].clone()).collect();
            let small = IndexedWedge::build(&[(x.clone(), fixed_s.clone())])?;
            let fx = fixed_points(&tx, h);
            let big = IndexedWedge::build(&[(x.clone(), s.names().to_vec())])?;
            let fixed_idx = s.fixed(h);
            let cmp = small.relabel_map(&big, |_, l| fixed_idx[l]).and_then(|m| restrict_to_fixed(&m, &identity_fixed(&small.space), &fx));
            let (passed, detail) = match cmp {
                Ok(m) if m.validate().is_ok() && m.is_isomorphism() => (true, format!("{} fixed copies", fixed_s.len())),
                Ok(_) => (false, "comparison map is not an isomorphism".to_string()),
                Err(e) => (false, e.to_string()),
            };
            out.push(CellularityEntry { h: hi, k: ki, condition: 3, passed, detail });

            // Condition 1.
            let fa = fixed_points(&ta, h);
            let fp = fixed_points(&gp, h);
            let fpt = fixed_points(&gpoint, h);
            let res = (|| -> Result<bool> {
                let f_h = restrict_to_fixed(&tf, &fa, &fx)?;
                let c_h = restrict_to_fixed(&collapse, &fa, &fpt)?;
                let small_po = pushout(&f_h, &c_h)?;
                let u = restrict_to_fixed(&po.from_x, &fx, &fp)?;
                let v = restrict_to_fixed(&po.from_y, &fpt, &fp)?;
                let m = small_po.induced(&u, &v)?;
                Ok(m.is_isomorphism())
            })();
            let (passed, detail) = match res {
                Ok(true) => (true, "fixed points of the pushout are the pushout of fixed points".to_string()),
                Ok(false) => (false, "comparison map is not an isomorphism".to_string()),
                Err(e) => (false, e.to_string()),
            };
            out.push(CellularityEntry { h: hi, k: ki, condition: 1, passed, detail });

            // Condition 2: the H-fixed simplices of the last three skeleta of
            // G/K ⊗ X land in (G/K ⊗ X)^H and together exhaust it.
            let top = tx.space.top_dim().max(2);
            let stages: Vec<usize> = (top - 2..=top).collect();
            let mut covered: Vec<Vec<bool>> =
                (0..=fx.space.dimension_bound()).map(|n| vec![false; fx.space.nd_count(n)]).collect();
            let mut ok = true;
            for &stage in &stages {
                for n in 0..=stage.min(tx.space.dimension_bound()) {
                    for r in tx.space.nd_refs(n) {
                        if h.elements.iter().all(|&g| tx.act_nd(g, r) == r) {
                            match fx.from_original[n][r.index] {
                                Some(i) => covered[n][i] = true,
                                None => ok = false,
                            }
                        }
                    }
                }
            }
            let passed = ok && covered.iter().flatten().all(|&b| b);
            let detail = format!("skeleton chain {stages:?}");
            out.push(CellularityEntry { h: hi, k: ki, condition: 2, passed, detail });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn swap_wedge() -> GSimplicialSet {
        let w = Arc::new(models::wedge_s1_s1());
        GSimplicialSet::from_names(c2(), w, &[("g", vec![("a", "b"), ("b", "a")])]).unwrap()
    }

    #[test]
    fn fixed_points_of_swap_is_point() {
        let y = swap_wedge();
        let subs = subgroups(y.group()).unwrap();
        let f = fixed_points(&y, &subs[1]);
        assert_eq!((0..=4).map(|n| f.space.nd_count(n)).collect::<Vec<_>>(), vec![1, 0, 0, 0, 0]);
        let e = fixed_points(&y, &subs[0]);
        assert_eq!(*e.space, **y.space());
    }

    #[test]
    fn trivial_action_fixed_points() {
        let x = Arc::new(models::rp2());
        let y = GSimplicialSet::trivial(c2(), x.clone());
        for h in subgroups(y.group()).unwrap() {
            assert_eq!(*fixed_points(&y, &h).space, *x);
        }
    }

    #[test]
    fn tensor_examples() {
        let g = c2();
        let subs = subgroups(&g).unwrap();
        let s1 = Arc::new(models::s1());
        let one = tensor_set(&GSet::cosets(&g, &subs[1]), &s1).unwrap();
        assert_eq!(one.space().nd_count(1), 1);
        assert!(one.action_table().iter().all(|per| per[1] == vec![0]));
        let two = tensor_set(&GSet::cosets(&g, &subs[0]), &s1).unwrap();
        let names: Vec<&str> = two.space().nondegenerate(1).iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, vec!["a[e]", "a[g]"]);
        assert_eq!(two.action_table()[1][1], vec![1, 0]);
    }

    #[test]
    fn orbit_category_hom_counts() {
        let cat = OrbitCategory::new(c2()).unwrap();
        assert_eq!(cat.hom(0, 0).len(), 2);
        assert_eq!(cat.hom(1, 0).len(), 0);
        assert_eq!(cat.hom(0, 1).len(), 1);
        assert_eq!(cat.hom(1, 1).len(), 1);
        // Independent count for S3: |{gK : g⁻¹Hg ⊆ K}| by brute force over g.
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let cat = OrbitCategory::new(s3.clone()).unwrap();
        let subs = cat.subgroups().to_vec();
        for (h, hs) in subs.iter().enumerate() {
            for (k, ks) in subs.iter().enumerate() {
                let good = (0..6).filter(|&g| s3.conjugate(&hs.elements, g).iter().all(|&x| ks.contains(x))).count();
                assert_eq!(cat.hom(h, k).len(), good / ks.order());
            }
        }
    }

    #[test]
    fn phi_of_swap_and_theta_roundtrip() {
        let y = swap_wedge();
        let d = phi(&y).unwrap();
        d.validate().unwrap();
        assert_eq!(d.value(1).nd_count(1), 0);
        let back = theta(&d).unwrap();
        assert_eq!(back, y);
    }

    #[test]
    fn phi_of_free_orbit_is_point_away_from_e() {
        let g = Arc::new(FiniteGroup::symmetric(3));
        let subs = subgroups(&g).unwrap();
        let y = tensor_set(&GSet::cosets(&g, &subs[0]), &Arc::new(models::s1())).unwrap();
        let d = phi(&y).unwrap();
        for h in 1..subs.len() {
            assert_eq!(d.value(h).all_nd_refs().len(), 1);
        }
        assert_eq!(theta(&d).unwrap(), y);
    }

    #[test]
    fn constant_diagram() {
        let cat = Arc::new(OrbitCategory::new(c2()).unwrap());
        let x = Arc::new(models::s1());
        let d = OrbitDiagram::constant(cat, x.clone());
        d.validate().unwrap();
        assert_eq!(theta(&d).unwrap(), GSimplicialSet::trivial(c2(), x));
        assert!(matches!(elmendorf_unit_check(&d), Err(Error::NotCellular(_))));
    }

    #[test]
    fn represented_diagram_unravels_to_free_tensor() {
        let g = c2();
        let cat = Arc::new(OrbitCategory::new(g.clone()).unwrap());
        let s1 = Arc::new(models::s1());
        let d = cell_diagram(cat.clone(), vec![Cell { subgroup: 0, space: s1.clone() }]).unwrap();
        let expect = tensor_set(&GSet::cosets(&g, &cat.subgroups()[0]), &s1).unwrap();
        assert_eq!(theta(&d).unwrap(), expect);
        assert!(elmendorf_unit_check(&d).unwrap().passed());
    }

    #[test]
    fn unit_on_generators() {
        let g = c2();
        let cat = Arc::new(OrbitCategory::new(g).unwrap());
        let s1 = Arc::new(models::s1());
        let d = cell_diagram(cat.clone(), vec![Cell { subgroup: 1, space: s1.clone() }]).unwrap();
        let r = elmendorf_unit_check(&d).unwrap();
        assert_eq!(r.isomorphism, vec![true, true]);
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let cat = Arc::new(OrbitCategory::new(s3).unwrap());
        let cells = (0..cat.object_count())
            .map(|h| Cell { subgroup: h, space: Arc::new(if h % 2 == 0 { models::s1() } else { models::rp2() }) })
            .collect();
        let d = cell_diagram(cat, cells).unwrap();
        assert!(elmendorf_unit_check(&d).unwrap().passed());
    }

    #[test]
    fn cellularity_c2_circle() {
        let g = c2();
        let s1 = Arc::new(models::s1());
        let pt = Arc::new(models::point());
        let f = SimplicialMap::from_names(pt, s1, &[]).unwrap();
        let r = check_cellularity(&g, &f).unwrap();
        assert_eq!(r.len(), 4 * 3);
        assert!(r.iter().all(|e| e.passed), "{r:?}");
        let trivial = Arc::new(FiniteGroup::trivial());
        assert!(check_cellularity(&trivial, &f).unwrap().iter().all(|e| e.passed));
    }

    #[test]
    fn cellularity_s3_sphere_and_summand() {
        let g = Arc::new(FiniteGroup::symmetric(3));
        let s2 = Arc::new(models::s2());
        let f = SimplicialMap::from_names(Arc::new(models::point()), s2, &[]).unwrap();
        assert!(check_cellularity(&g, &f).unwrap().iter().all(|e| e.passed));
        let s1 = Arc::new(models::s1());
        let w = crate::simplicial::wedge(&[s1.clone(), s1]).unwrap();
        let r = check_cellularity(&c2(), &w.inclusions[0]).unwrap();
        assert!(r.iter().all(|e| e.passed), "{r:?}");
    }

    #[test]
    fn fixed_points_preserve_monos() {
        let g = c2();
        let s1 = Arc::new(models::s1());
        let w = crate::simplicial::wedge(&[s1.clone(), s1]).unwrap();
        let s = GSet::cosets(&g, &subgroups(&g).unwrap()[0]);
        let (ta, tx, tf) = tensor_map(&s, &w.inclusions[0]).unwrap();
        assert!(ta.is_equivariant(&tx, &tf));
        for h in subgroups(&g).unwrap() {
            let m = restrict_to_fixed(&tf, &fixed_points(&ta, &h), &fixed_points(&tx, &h)).unwrap();
            assert!(m.is_monomorphism());
        }
    }
}
