//! JSON formats for spaces, groups, actions, maps, coalgebras and Galois data.
//!
//! Every top-level document may carry `"schema": 1`; other versions are rejected.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::coalgebra::Coalgebra;
use crate::equivariant::GSimplicialSet;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::galois::{FieldExtension, SemilinearGSet};
use crate::group::FiniteGroup;
use crate::linalg::Matrix;
use crate::scoalg::SimplicialCoalgebra;
use crate::simplicial::{SimplicialMap, SimplicialSet};

pub const SCHEMA: u32 = 1;

fn check_schema(schema: Option<u32>) -> Result<()> {
    match schema {
        None | Some(SCHEMA) => Ok(()),
        Some(v) => Err(Error::Parse(format!("unsupported schema version {v}"))),
    }
}

/// Parses a document, reporting line and column on failure.
pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    from_str(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexJson {
    pub name: String,
    /// `[word, name]` per face, `d_0` first.
    #[serde(default)]
    pub faces: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialSetJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub dimension_bound: usize,
    pub reduced: bool,
    /// Dimension (as a decimal string) to nondegenerate simplices.
    pub simplices: BTreeMap<String, Vec<SimplexJson>>,
}

impl SimplicialSetJson {
    pub fn build(&self) -> Result<SimplicialSet> {
        check_schema(self.schema)?;
        let mut by_dim: Vec<(usize, &Vec<SimplexJson>)> = self
            .simplices
            .iter()
            .map(|(k, v)| k.parse::<usize>().map(|d| (d, v)).map_err(|_| Error::Parse(format!("dimension key {k:?}"))))
            .collect::<Result<_>>()?;
        by_dim.sort_by_key(|(d, _)| *d);
        let mut x = SimplicialSet::new(self.dimension_bound, self.reduced);
        for (d, list) in by_dim {
            for s in list {
                let faces: Vec<(&str, &str)> = s.faces.iter().map(|(w, n)| (w.as_str(), n.as_str())).collect();
                let expected = if d == 0 { 0 } else { d + 1 };
                if faces.len() != expected {
                    return Err(Error::InvalidInput(format!("{} is listed in dimension {d} with {} faces", s.name, faces.len())));
                }
                x.add_simplex(&s.name, &faces)?;
            }
        }
        x.validate()?;
        Ok(x)
    }

    pub fn from_set(x: &SimplicialSet) -> Self {
        let mut simplices = BTreeMap::new();
        for n in 0..=x.top_dim() {
            let list = x
                .nondegenerate(n)
                .iter()
                .map(|s| SimplexJson {
                    name: s.name.clone(),
                    faces: s.faces.iter().map(|f| (f.word.to_string(), x.name(f.base).to_string())).collect(),
                })
                .collect::<Vec<_>>();
            if !list.is_empty() {
                simplices.insert(n.to_string(), list);
            }
        }
        SimplicialSetJson { schema: Some(SCHEMA), dimension_bound: x.dimension_bound(), reduced: x.is_reduced(), simplices }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub elements: Vec<String>,
    /// `table[a][b]` names the product `ab`.
    pub table: Vec<Vec<String>>,
}

impl GroupJson {
    pub fn build(&self) -> Result<FiniteGroup> {
        check_schema(self.schema)?;
        let index: BTreeMap<&str, usize> = self.elements.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let table = self
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|n| index.get(n.as_str()).copied().ok_or_else(|| Error::InvalidInput(format!("unknown group element {n:?}"))))
                    .collect()
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        FiniteGroup::from_table(self.elements.clone(), table)
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        let names = g.names();
        let table = g.table().iter().map(|row| row.iter().map(|&k| names[k].clone()).collect()).collect();
        GroupJson { schema: Some(SCHEMA), elements: names.to_vec(), table }
    }
}

/// Group element to `{simplex: image}`; unlisted simplices are fixed.
pub type ActionJson = BTreeMap<String, BTreeMap<String, String>>;

pub fn build_action(group: &Arc<FiniteGroup>, space: &Arc<SimplicialSet>, action: &ActionJson) -> Result<GSimplicialSet> {
    let moves: Vec<(&str, Vec<(&str, &str)>)> = action
        .iter()
        .map(|(g, m)| (g.as_str(), m.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect()))
        .collect();
    GSimplicialSet::from_names(group.clone(), space.clone(), &moves)
}

pub fn action_json(y: &GSimplicialSet) -> ActionJson {
    let x = y.space();
    let g = y.group();
    let mut out = BTreeMap::new();
    for e in 0..g.order() {
        let mut moves = BTreeMap::new();
        for n in 0..=x.dimension_bound() {
            for r in x.nd_refs(n) {
                let image = y.act_nd(e, r);
                if image != r {
                    moves.insert(x.name(r).to_string(), x.name(image).to_string());
                }
            }
        }
        if !moves.is_empty() {
            out.insert(g.name(e).to_string(), moves);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSpaceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub space: SimplicialSetJson,
    #[serde(default)]
    pub action: ActionJson,
}

impl GSpaceJson {
    pub fn build(&self, group: &Arc<FiniteGroup>) -> Result<GSimplicialSet> {
        check_schema(self.schema)?;
        build_action(group, &Arc::new(self.space.build()?), &self.action)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub source: SimplicialSetJson,
    pub target: SimplicialSetJson,
    /// `[source simplex, degeneracy word, target simplex]`.
    pub images: Vec<(String, String, String)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub source_action: ActionJson,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub target_action: ActionJson,
}

impl MapJson {
    pub fn build(&self) -> Result<SimplicialMap> {
        check_schema(self.schema)?;
        let images: Vec<(&str, &str, &str)> = self.images.iter().map(|(a, w, b)| (a.as_str(), w.as_str(), b.as_str())).collect();
        let f = SimplicialMap::from_names(Arc::new(self.source.build()?), Arc::new(self.target.build()?), &images)?;
        f.validate()?;
        Ok(f)
    }

    pub fn build_equivariant(&self, group: &Arc<FiniteGroup>) -> Result<(GSimplicialSet, GSimplicialSet, SimplicialMap)> {
        let f = self.build()?;
        let src = build_action(group, f.source(), &self.source_action)?;
        let tgt = build_action(group, f.target(), &self.target_action)?;
        Ok((src, tgt, f))
    }

    pub fn from_map(f: &SimplicialMap) -> Self {
        let x = f.source();
        let y = f.target();
        let images = (0..=x.dimension_bound())
            .flat_map(|n| x.nd_refs(n).collect::<Vec<_>>())
            .map(|r| {
                let img = f.image_of(r);
                (x.name(r).to_string(), img.word.to_string(), y.name(img.base).to_string())
            })
            .collect();
        MapJson {
            schema: Some(SCHEMA),
            source: SimplicialSetJson::from_set(x),
            target: SimplicialSetJson::from_set(y),
            images,
            source_action: BTreeMap::new(),
            target_action: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoalgebraBody {
    pub basis: Vec<String>,
    /// `delta[i]` lists `[j, k, c]` for the term `c · b_j ⊗ b_k` of `Δ b_i`.
    pub delta: Vec<Vec<(usize, usize, String)>>,
    pub counit: Vec<String>,
}

impl CoalgebraBody {
    fn build(&self, field: &Field) -> Result<Coalgebra> {
        let delta = self
            .delta
            .iter()
            .map(|row| row.iter().map(|(j, k, c)| Ok((*j, *k, field.parse_elem(c)?))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let counit = self.counit.iter().map(|c| field.parse_elem(c)).collect::<Result<Vec<_>>>()?;
        let c = Coalgebra::new(field, self.basis.clone(), delta, counit)?;
        c.validate()?;
        Ok(c)
    }

    fn from_coalgebra(c: &Coalgebra) -> Self {
        let f = c.field();
        CoalgebraBody {
            basis: c.basis().to_vec(),
            delta: (0..c.dim()).map(|i| c.delta_of(i).iter().map(|(j, k, e)| (*j, *k, f.format(e))).collect()).collect(),
            counit: c.counit().iter().map(|e| f.format(e)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoalgebraJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub field: String,
    #[serde(flatten)]
    pub body: CoalgebraBody,
}

impl CoalgebraJson {
    pub fn build(&self) -> Result<Coalgebra> {
        check_schema(self.schema)?;
        self.body.build(&Field::parse(&self.field)?)
    }

    pub fn from_coalgebra(c: &Coalgebra) -> Self {
        CoalgebraJson { schema: Some(SCHEMA), field: c.field().name(), body: CoalgebraBody::from_coalgebra(c) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// `[row, column, value]`; unlisted entries are zero.
    pub entries: Vec<(usize, usize, String)>,
}

impl SparseMatrixJson {
    pub fn build(&self, field: &Field) -> Result<Matrix> {
        let entries = self
            .entries
            .iter()
            .map(|(i, j, c)| {
                if *i >= self.rows || *j >= self.cols {
                    return Err(Error::InvalidInput(format!("entry ({i}, {j}) outside a {}x{} matrix", self.rows, self.cols)));
                }
                Ok((*i, *j, field.parse_elem(c)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_entries(field, self.rows, self.cols, entries))
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        let f = m.field();
        SparseMatrixJson { rows: m.rows(), cols: m.cols(), entries: m.entries().into_iter().map(|(i, j, e)| (i, j, f.format(&e))).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialCoalgebraJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub field: String,
    pub degrees: Vec<CoalgebraBody>,
    /// `faces[n][i]`; empty for degree 0.
    pub faces: Vec<Vec<SparseMatrixJson>>,
    pub degeneracies: Vec<Vec<SparseMatrixJson>>,
}

impl SimplicialCoalgebraJson {
    pub fn build(&self) -> Result<SimplicialCoalgebra> {
        check_schema(self.schema)?;
        let field = Field::parse(&self.field)?;
        let degrees = self.degrees.iter().map(|d| d.build(&field)).collect::<Result<Vec<_>>>()?;
        let ops = |v: &Vec<Vec<SparseMatrixJson>>| {
            v.iter().map(|row| row.iter().map(|m| m.build(&field)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()
        };
        let c = SimplicialCoalgebra::new(&field, degrees, ops(&self.faces)?, ops(&self.degeneracies)?)?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_coalgebra(c: &SimplicialCoalgebra) -> Self {
        let top = c.dimension_bound();
        SimplicialCoalgebraJson {
            schema: Some(SCHEMA),
            field: c.field().name(),
            degrees: (0..=top).map(|n| CoalgebraBody::from_coalgebra(c.degree(n))).collect(),
            faces: (0..=top)
                .map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| SparseMatrixJson::from_matrix(c.face(n, i))).collect() })
                .collect(),
            degeneracies: (0..top).map(|n| (0..=n).map(|j| SparseMatrixJson::from_matrix(c.degeneracy(n, j))).collect()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionJson {
    pub p: u32,
    pub k_base: u32,
    pub k_top: u32,
}

impl ExtensionJson {
    pub fn build(&self) -> Result<FieldExtension> {
        FieldExtension::new(self.p, self.k_base, self.k_top)
    }
}

/// A Galois set as the permutation by which Frobenius acts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisSetJson {
    pub names: Vec<String>,
    /// Image of each name under the generator.
    pub frobenius: Vec<String>,
}

impl GaloisSetJson {
    pub fn build(&self, m: u32) -> Result<SemilinearGSet> {
        let perm = self
            .frobenius
            .iter()
            .map(|n| self.names.iter().position(|x| x == n).ok_or_else(|| Error::InvalidInput(format!("unknown element {n:?}"))))
            .collect::<Result<Vec<_>>>()?;
        SemilinearGSet::new(self.names.clone(), perm, m)
    }

    pub fn from_set(s: &SemilinearGSet) -> Self {
        GaloisSetJson { names: s.names().to_vec(), frobenius: s.generator().iter().map(|&t| s.names()[t].clone()).collect() }
    }
}

/// Input of the descent command: a Galois set, or a space with a Galois
/// automorphism (and optionally a group action commuting with it).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub extension: ExtensionJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<GaloisSetJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SimplicialSetJson>,
    /// `{simplex: image}` under Frobenius; unlisted simplices are fixed.
    #[serde(default)]
    pub galois: BTreeMap<String, String>,
    #[serde(default)]
    pub action: ActionJson,
}

impl DescentJson {
    pub fn check(&self) -> Result<()> {
        check_schema(self.schema)?;
        match (&self.set, &self.space) {
            (Some(_), None) | (None, Some(_)) => Ok(()),
            _ => Err(Error::InvalidInput("descent input needs exactly one of \"set\" and \"space\"".into())),
        }
    }

    /// The Galois automorphism of `space` described by `galois`.
    pub fn galois_map(&self, space: &Arc<SimplicialSet>) -> Result<SimplicialMap> {
        let mut images = Vec::new();
        for n in 0..=space.dimension_bound() {
            for r in space.nd_refs(n) {
                let name = space.name(r).to_string();
                let image = self.galois.get(&name).cloned().unwrap_or_else(|| name.clone());
                images.push((name, image));
            }
        }
        let triples: Vec<(&str, &str, &str)> = images.iter().map(|(a, b)| (a.as_str(), "", b.as_str())).collect();
        SimplicialMap::from_names(space.clone(), space.clone(), &triples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn simplicial_set_roundtrip() {
        for (_, x) in models::corpus() {
            let j = SimplicialSetJson::from_set(&x);
            let text = serde_json::to_string(&j).unwrap();
            let back: SimplicialSetJson = from_str(&text).unwrap();
            assert_eq!(back.build().unwrap(), x);
        }
    }

    #[test]
    fn parse_errors_carry_locations() {
        let e = from_str::<SimplicialSetJson>("{\n  \"dimension_bound\": 2,\n  \"reduced\": tru\n}").unwrap_err();
        assert!(e.to_string().contains("line 4"), "{e}");
        let bad = r#"{"schema": 2, "dimension_bound": 1, "reduced": true, "simplices": {}}"#;
        assert!(from_str::<SimplicialSetJson>(bad).unwrap().build().is_err());
    }

    #[test]
    fn group_and_map_roundtrip() {
        let g = FiniteGroup::symmetric(3);
        assert_eq!(GroupJson::from_group(&g).build().unwrap(), g);
        for (_, f) in models::audit_maps().unwrap() {
            assert_eq!(MapJson::from_map(&f).build().unwrap(), f);
        }
    }

    #[test]
    fn coalgebra_roundtrip() {
        let f = Field::finite(3, 2).unwrap();
        let c = crate::scoalg::chains(&models::rp2(), &f).unwrap();
        let j = SimplicialCoalgebraJson::from_coalgebra(&c);
        let back: SimplicialCoalgebraJson = from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(back.build().unwrap(), c);
        let d = c.degree(1).clone();
        assert_eq!(CoalgebraJson::from_coalgebra(&d).build().unwrap(), d);
    }
}
