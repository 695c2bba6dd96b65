//! Sound, cap-relative decision procedures for the three equivalence notions.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dgcobar::{cobar, nondegenerate_chain_complex, normalized_chains_of, ChainComplex, DgCoalgebra, FreeDgAlgebraTruncated};
use crate::equivariant::{fixed_points, restrict_to_fixed, GSimplicialSet};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::subgroups;
use crate::h0::{alphabet, localized_presentation, map_word, presentation_map, CompletionBounds, RewriteSystem};
use crate::linalg::{dense_to_sparse, Matrix, Rref};
use crate::pi1::{abelianization, certify, edge_path_presentation, universal_cover, Finiteness};
use crate::simplicial::{NdRef, SimplexRef, SimplicialMap, SimplicialSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Answer {
    Yes,
    No,
    Inconclusive,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Answer::Yes => "Yes",
            Answer::No => "No",
            Answer::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

/// `1`: cobar homology of chains, `2`: `π₁` and cover homology, `3`: homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Notion {
    Categorical,
    Pi1,
    Homology,
}

impl Notion {
    pub fn number(self) -> u8 {
        match self {
            Notion::Categorical => 1,
            Notion::Pi1 => 2,
            Notion::Homology => 3,
        }
    }

    pub fn from_number(n: u8) -> Result<Notion> {
        match n {
            1 => Ok(Notion::Categorical),
            2 => Ok(Notion::Pi1),
            3 => Ok(Notion::Homology),
            _ => Err(Error::InvalidInput(format!("no equivalence notion {n}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Homology is compared in degrees `0..=degree`.
    pub degree: usize,
    pub cobar_degree: usize,
    pub cobar_length: usize,
    pub cosets: usize,
    pub rewrite_rules: usize,
    pub rewrite_steps: usize,
    /// Longest normal form enumerated when counting `H₀`.
    pub normal_form_length: usize,
}

impl Default for Caps {
    fn default() -> Self {
        let b = CompletionBounds::default();
        Caps {
            degree: 4,
            cobar_degree: 3,
            cobar_length: 3,
            cosets: 1000,
            rewrite_rules: b.max_rules,
            rewrite_steps: b.max_steps,
            normal_form_length: 32,
        }
    }
}

impl Caps {
    fn bounds(&self) -> CompletionBounds {
        CompletionBounds { max_rules: self.rewrite_rules, max_steps: self.rewrite_steps }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub answer: Answer,
    pub notion: Notion,
    pub caps: Caps,
    /// First degree at which a comparison failed.
    pub failed_degree: Option<usize>,
    pub evidence: Vec<String>,
}

impl Verdict {
    fn new(answer: Answer, notion: Notion, caps: &Caps, evidence: impl Into<String>) -> Verdict {
        Verdict { answer, notion, caps: *caps, failed_degree: None, evidence: vec![evidence.into()] }
    }

    fn failed_at(mut self, n: usize) -> Verdict {
        self.failed_degree = Some(n);
        self
    }
}

pub fn oracle(notion: Notion, f: &SimplicialMap, field: &Field, caps: &Caps) -> Result<Verdict> {
    match notion {
        Notion::Categorical => is_cat_f_equiv(f, field, caps),
        Notion::Pi1 => is_pi1_f_equiv(f, field, caps),
        Notion::Homology => is_f_equiv(f, field, caps),
    }
}

/// First degree where `maps` fails to induce an isomorphism, with a description.
fn compare_homology(
    src: &ChainComplex,
    tgt: &ChainComplex,
    maps: &[Matrix],
    degrees: std::ops::Range<usize>,
) -> Result<Option<(usize, String)>> {
    let f = src.field();
    for n in degrees {
        let hs = src.homology(n)?;
        let ht = tgt.homology(n)?;
        if hs.dim != ht.dim {
            return Ok(Some((n, format!("H_{n} dimensions {} vs {}", hs.dim, ht.dim))));
        }
        let mut span = Rref::from_vectors(f, tgt.dims()[n], &tgt.differential(n + 1).image());
        for z in &hs.representatives {
            if !span.insert(dense_to_sparse(f, &maps[n].mul_vec(z))) {
                return Ok(Some((n, format!("induced map on H_{n} is not injective"))));
            }
        }
    }
    Ok(None)
}

fn extended(x: &SimplicialSet, bound: usize) -> Result<SimplicialSet> {
    x.with_dimension_bound(bound.max(x.dimension_bound()))
}

/// The map on nondegenerate chains, degree by degree.
fn nd_chain_map(f: &SimplicialMap, field: &Field, top: usize) -> Vec<Matrix> {
    let (x, y) = (f.source(), f.target());
    (0..=top)
        .map(|n| {
            let entries = (0..x.nd_count(n)).filter_map(|i| {
                let fx = f.image_of(NdRef { dim: n, index: i });
                (!fx.is_degenerate()).then(|| (fx.base.index, i, field.one()))
            });
            Matrix::from_entries(field, y.nd_count(n), x.nd_count(n), entries.collect::<Vec<_>>())
        })
        .collect()
}

/// Homology of nondegenerate chains compared in degrees `0..=caps.degree`.
pub fn is_f_equiv(f: &SimplicialMap, field: &Field, caps: &Caps) -> Result<Verdict> {
    let bound = caps.degree + 1;
    let x = extended(f.source(), bound)?;
    let y = extended(f.target(), bound)?;
    let cx = nondegenerate_chain_complex(&x, field)?;
    let cy = nondegenerate_chain_complex(&y, field)?;
    let maps = nd_chain_map(f, field, caps.degree);
    Ok(match compare_homology(&cx, &cy, &maps, 0..caps.degree + 1)? {
        Some((n, why)) => Verdict::new(Answer::No, Notion::Homology, caps, why).failed_at(n),
        None => Verdict::new(
            Answer::Yes,
            Notion::Homology,
            caps,
            format!("{}-homology isomorphism through degree {}", field.name(), caps.degree),
        ),
    })
}

fn is_reduced(x: &SimplicialSet) -> bool {
    x.nd_count(0) == 1
}

/// `π₁` isomorphism through coset tables, then homology of the universal covers.
pub fn is_pi1_f_equiv(f: &SimplicialMap, field: &Field, caps: &Caps) -> Result<Verdict> {
    let v = |a, e: String| Verdict::new(a, Notion::Pi1, caps, e);
    let (x, y) = (f.source(), f.target());
    if !is_reduced(x) || !is_reduced(y) {
        return Ok(v(Answer::Inconclusive, "an end is not reduced".into()));
    }
    if f.is_isomorphism() {
        return Ok(v(Answer::Yes, "simplicial isomorphism".into()));
    }
    let (px, py) = (edge_path_presentation(x)?, edge_path_presentation(y)?);
    let (tx, ty) = match (certify(&px, caps.cosets), certify(&py, caps.cosets)) {
        (Finiteness::Finite(tx), Finiteness::Finite(ty)) => (tx, ty),
        (Finiteness::Finite(t), Finiteness::Infinite { rank }) | (Finiteness::Infinite { rank }, Finiteness::Finite(t)) => {
            return Ok(v(
                Answer::No,
                format!("π₁ of order {} against an infinite π₁ (abelianization rank {rank})", t.table.len()),
            ))
        }
        _ => {
            let (ax, ay) = (abelianization(&px), abelianization(&py));
            if ax != ay {
                return Ok(v(
                    Answer::No,
                    format!("abelianizations differ: rank {} {:?} vs rank {} {:?}", ax.rank, ax.torsion, ay.rank, ay.torsion),
                ));
            }
            return Ok(v(Answer::Inconclusive, format!("π₁ finiteness not certified within {} cosets", caps.cosets)));
        }
    };
    let (nx, ny) = (tx.table.len(), ty.table.len());
    if nx != ny {
        return Ok(v(Answer::No, format!("π₁ orders {nx} vs {ny}")));
    }
    let images = presentation_map(f);
    let phi: Vec<usize> = tx.words().iter().map(|w| ty.apply(0, &map_word(&images, w))).collect();
    let mut seen = vec![false; ny];
    for &g in &phi {
        if seen[g] {
            return Ok(v(Answer::No, "induced map on π₁ is not injective".into()));
        }
        seen[g] = true;
    }
    let cx = universal_cover(x, &tx)?;
    let cy = universal_cover(y, &ty)?;
    let lifted: Vec<Vec<SimplexRef>> = (0..=cx.total.dimension_bound())
        .map(|n| {
            (0..cx.total.nd_count(n))
                .map(|k| {
                    let fx = f.image_of(NdRef { dim: n, index: k / nx });
                    let base = NdRef { dim: fx.base.dim, index: fx.base.index * ny + phi[k % nx] };
                    SimplexRef { dim: fx.dim, word: fx.word.clone(), base }
                })
                .collect()
        })
        .collect();
    let lift = SimplicialMap::new(cx.total.clone(), cy.total.clone(), lifted)?;
    let h = is_f_equiv(&lift, field, caps)?;
    Ok(match h.answer {
        Answer::Yes => v(Answer::Yes, format!("π₁ isomorphism of order {nx}; covers agree through degree {}", caps.degree)),
        _ => {
            let mut out = v(Answer::No, format!("π₁ isomorphism of order {nx}, but on covers: {}", h.evidence.join("; ")));
            out.failed_degree = h.failed_degree;
            out
        }
    })
}

/// `Ω(f)` on retained words of each degree.
fn cobar_map(
    f: &SimplicialMap,
    dx: &DgCoalgebra,
    dy: &DgCoalgebra,
    ox: &FreeDgAlgebraTruncated,
    oy: &FreeDgAlgebraTruncated,
) -> Vec<Matrix> {
    let field = dx.field();
    let (x, y) = (f.source(), f.target());
    let gy: HashMap<(usize, &str), usize> = oy
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| ((g.source.0, dy.basis(g.source.0)[g.source.1].as_str()), i))
        .collect();
    let gen_image: Vec<Option<usize>> = ox
        .generators()
        .iter()
        .map(|g| {
            let (k, i) = g.source;
            let r = x.find(k, &dx.basis(k)[i])?;
            let fx = f.image_of(r);
            if fx.is_degenerate() {
                return None;
            }
            gy.get(&(k, y.format_simplex(fx).as_str())).copied()
        })
        .collect();
    (0..=ox.degree_cap())
        .map(|n| {
            let index: HashMap<&[usize], usize> =
                oy.words(n).iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
            let entries = ox.words(n).iter().enumerate().filter_map(|(j, w)| {
                let image: Option<Vec<usize>> = w.iter().map(|&g| gen_image[g]).collect();
                index.get(image?.as_slice()).map(|&i| (i, j, field.one()))
            });
            Matrix::from_entries(field, oy.words(n).len(), ox.words(n).len(), entries.collect::<Vec<_>>())
        })
        .collect()
}

/// Cobar homology of chains: exact comparison for 1-reduced ends, `H₀` through
/// presentations otherwise.
pub fn is_cat_f_equiv(f: &SimplicialMap, field: &Field, caps: &Caps) -> Result<Verdict> {
    let v = |a, e: String| Verdict::new(a, Notion::Categorical, caps, e);
    let (x, y) = (f.source(), f.target());
    if f.is_isomorphism() {
        return Ok(v(Answer::Yes, "simplicial isomorphism".into()));
    }
    if !is_reduced(x) || !is_reduced(y) {
        return Ok(v(Answer::Inconclusive, "an end is not reduced".into()));
    }
    let n = caps.cobar_degree;
    let dx = normalized_chains_of(&Arc::new(extended(x, n + 1)?), field)?;
    let dy = normalized_chains_of(&Arc::new(extended(y, n + 1)?), field)?;
    if x.nd_count(1) == 0 && y.nd_count(1) == 0 {
        if caps.cobar_length < n {
            return Ok(v(Answer::Inconclusive, format!("length cap {} below degree cap {n}", caps.cobar_length)));
        }
        let ox = cobar(&dx, n, caps.cobar_length)?;
        let oy = cobar(&dy, n, caps.cobar_length)?;
        let maps = cobar_map(f, &dx, &dy, &ox, &oy);
        return Ok(match compare_homology(ox.complex(), oy.complex(), &maps, 0..n)? {
            Some((k, why)) => v(Answer::No, format!("cobar {why}")).failed_at(k),
            None => v(Answer::Yes, format!("cobar homology isomorphism below degree {n}")),
        });
    }
    // H₀ is the group algebra of π₁; its Krull dimension is the abelianization rank.
    let (px, py) = (edge_path_presentation(x)?, edge_path_presentation(y)?);
    let (rx, ry) = (abelianization(&px).rank, abelianization(&py).rank);
    if rx != ry {
        return Ok(v(Answer::No, format!("H₀ abelianization ranks {rx} vs {ry}")).failed_at(0));
    }
    let (lx, ly) = (localized_presentation(&dx)?, localized_presentation(&dy)?);
    let (sx, sy) = match (RewriteSystem::complete(&lx, caps.bounds()), RewriteSystem::complete(&ly, caps.bounds())) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Ok(v(Answer::Inconclusive, format!("H₀ rewriting: {e}"))),
    };
    let nfx = sx.normal_forms(&alphabet(&lx), caps.normal_form_length);
    let nfy = sy.normal_forms(&alphabet(&ly), caps.normal_form_length);
    let (fx, fy) = match (nfx, nfy) {
        (Some(a), Some(b)) => (a, b),
        (None, None) => return Ok(v(Answer::Inconclusive, "H₀ infinite-dimensional on both ends".into())),
        (a, b) => {
            let (finite, other) = match a {
                Some(a) => (a.len(), &py),
                None => (b.map_or(0, |b| b.len()), &px),
            };
            return Ok(match certify(other, caps.cosets) {
                Finiteness::Infinite { .. } => {
                    v(Answer::No, format!("H₀ of dimension {finite} against an infinite-dimensional H₀")).failed_at(0)
                }
                _ => v(Answer::Inconclusive, "H₀ dimension not certified".into()),
            });
        }
    };
    if fx.len() != fy.len() {
        return Ok(v(Answer::No, format!("H₀ dimensions {} vs {}", fx.len(), fy.len())).failed_at(0));
    }
    let images = presentation_map(f);
    let mut hit: Vec<_> = fx.iter().map(|w| sy.normal_form(&map_word(&images, w))).collect();
    hit.sort();
    hit.dedup();
    if hit.len() != fy.len() {
        return Ok(v(Answer::No, "induced map on H₀ is not bijective on group elements".into()).failed_at(0));
    }
    Ok(v(Answer::Inconclusive, "H₀ isomorphic; positive degrees of the localized cobar are not decided".into()))
}

/// Verdicts on `H`-fixed points for every subgroup `H`.
#[derive(Clone, Debug, Serialize)]
pub struct GVerdict {
    pub rows: Vec<(String, Verdict)>,
    pub aggregate: Answer,
}

pub fn g_equivalence(
    src: &GSimplicialSet,
    tgt: &GSimplicialSet,
    f: &SimplicialMap,
    notion: Notion,
    field: &Field,
    caps: &Caps,
) -> Result<GVerdict> {
    let group = src.group();
    if group.as_ref() != tgt.group().as_ref() {
        return Err(Error::InvalidInput("G-map between different groups".into()));
    }
    if !src.is_equivariant(tgt, f) {
        return Err(Error::Violation("map is not equivariant".into()));
    }
    let mut rows = Vec::new();
    for h in subgroups(group)? {
        let (fs, ft) = (fixed_points(src, &h), fixed_points(tgt, &h));
        let fh = restrict_to_fixed(f, &fs, &ft)?;
        rows.push((h.label(group), oracle(notion, &fh, field, caps)?));
    }
    let answers: Vec<Answer> = rows.iter().map(|(_, v)| v.answer).collect();
    let aggregate = if answers.contains(&Answer::No) {
        Answer::No
    } else if answers.iter().all(|a| *a == Answer::Yes) {
        Answer::Yes
    } else {
        Answer::Inconclusive
    };
    Ok(GVerdict { rows, aggregate })
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditRow {
    pub name: String,
    pub verdicts: [Verdict; 3],
    pub monotone: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn violations(&self) -> Vec<&AuditRow> {
        self.rows.iter().filter(|r| !r.monotone).collect()
    }
}

/// `v₁ = Yes ⇒ v₂ ≠ No` and `v₂ = Yes ⇒ v₃ = Yes`.
pub fn monotone(v: &[Answer; 3]) -> bool {
    (v[0] != Answer::Yes || v[1] != Answer::No) && (v[1] != Answer::Yes || v[2] == Answer::Yes)
}

pub fn inclusion_audit(maps: &[(String, SimplicialMap)], field: &Field, caps: &Caps) -> Result<AuditReport> {
    let rows = maps
        .iter()
        .map(|(name, f)| {
            let verdicts =
                [is_cat_f_equiv(f, field, caps)?, is_pi1_f_equiv(f, field, caps)?, is_f_equiv(f, field, caps)?];
            let answers = [verdicts[0].answer, verdicts[1].answer, verdicts[2].answer];
            Ok(AuditRow { name: name.clone(), verdicts, monotone: monotone(&answers) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditReport { rows })
}
