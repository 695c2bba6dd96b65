use std::path::{Path, PathBuf};
use std::sync::Arc;

use equicobar::acceptance::run_all;
use equicobar::dgcobar::{nondegenerate_chain_complex, normalized_chains_of};
use equicobar::equivariant::{fixed_points, phi, theta};
use equicobar::galois::{descent_check, equivariant_descent, galois_fixed_coalgebra, galois_unit};
use equicobar::h0::h0_presentation;
use equicobar::io::{
    self, CoalgebraJson, DescentJson, GSpaceJson, GaloisSetJson, GroupJson, MapJson, SimplicialCoalgebraJson,
    SimplicialSetJson,
};
use equicobar::pi1::{abelianization, edge_path_presentation, spanning_tree_presentation};
use equicobar::scoalg::{coalg_fixed_points, unit_check};
use equicobar::{
    certify, chains_equivariant, check_cellularity, cobar, g_equivalence, grouplikes, grouplikes_with, isomorphic, oracle,
    points, subgroups, todd_coxeter, universal_cover, Answer, Error, Field, Finiteness, FiniteGroup, GroupLikeMethod,
    Notion, Result, SimplicialSet, Verdict,
};
use serde_json::{json, Value};

use crate::{JobSpec, Status};

pub enum Job {
    Validate(PathBuf),
    Homology(PathBuf),
    Cobar(PathBuf),
    Pi1(PathBuf),
    Cover(PathBuf),
    Points(PathBuf),
    FixedPoints(PathBuf, PathBuf),
    OrbitDiagram(PathBuf, PathBuf),
    Cellularity(PathBuf, PathBuf),
    Equivalence(u8, PathBuf, Option<PathBuf>),
    Descent(PathBuf, Option<PathBuf>),
    Corpus,
}

pub fn run(job: &Job, spec: &JobSpec) -> Result<(Value, Status)> {
    let field = || Field::parse(spec.field.as_deref().unwrap_or("Q"));
    match job {
        Job::Validate(p) => validate(p),
        Job::Homology(p) => homology(space(p)?.as_ref(), &field()?),
        Job::Cobar(p) => cobar_report(&space(p)?, &field()?, spec),
        Job::Pi1(p) => pi1(space(p)?.as_ref(), spec),
        Job::Cover(p) => cover(&space(p)?, &field()?, spec),
        Job::Points(p) => points_report(p, &field()?),
        Job::FixedPoints(p, g) => fixed_points_report(p, &group(g)?, &field()?),
        Job::OrbitDiagram(p, g) => orbit_diagram(p, &group(g)?),
        Job::Cellularity(m, g) => cellularity(m, &group(g)?),
        Job::Equivalence(n, m, g) => equivalence(Notion::from_number(*n)?, m, g.as_deref(), &field()?, spec),
        Job::Descent(p, g) => descent(p, g.as_deref()),
        Job::Corpus => corpus(),
    }
}

fn space(path: &Path) -> Result<Arc<SimplicialSet>> {
    Ok(Arc::new(io::read::<SimplicialSetJson>(path)?.build()?))
}

fn group(path: &Path) -> Result<Arc<FiniteGroup>> {
    Ok(Arc::new(io::read::<GroupJson>(path)?.build()?))
}

fn counts(x: &SimplicialSet) -> Vec<usize> {
    (0..=x.top_dim()).map(|n| x.nd_count(n)).collect()
}

fn status_of(a: Answer) -> Status {
    match a {
        Answer::Yes => Status::Success,
        Answer::No => Status::Negative,
        Answer::Inconclusive => Status::Inconclusive,
    }
}

fn check(ok: bool) -> Status {
    if ok {
        Status::Success
    } else {
        Status::Negative
    }
}

fn homology_dims(x: &SimplicialSet, f: &Field) -> Result<Vec<usize>> {
    let complex = if x.is_reduced() {
        normalized_chains_of(&Arc::new(x.clone()), f)?.complex().clone()
    } else {
        nondegenerate_chain_complex(x, f)?
    };
    let mut dims = complex.homology_dims();
    dims.truncate(x.top_dim() + 1);
    Ok(dims)
}

/// Input kinds recognized by their keys.
enum Kind {
    Set,
    Map,
    Group,
    Coalgebra,
    SimplicialCoalgebra,
    GSpace,
    Descent,
}

fn detect(path: &Path) -> Result<(Kind, String)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let v: Value = parse(path, &text)?;
    let has = |k: &str| v.get(k).is_some();
    let kind = if has("extension") {
        Kind::Descent
    } else if has("images") {
        Kind::Map
    } else if has("degrees") {
        Kind::SimplicialCoalgebra
    } else if has("delta") {
        Kind::Coalgebra
    } else if has("elements") {
        Kind::Group
    } else if has("space") {
        Kind::GSpace
    } else if has("simplices") {
        Kind::Set
    } else {
        return Err(Error::InvalidInput(format!("{}: unrecognized document", path.display())));
    };
    Ok((kind, text))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
    io::from_str(text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Structural failures of a well-formed document are reported, not raised.
fn validate(path: &Path) -> Result<(Value, Status)> {
    let (kind, text) = detect(path)?;
    let built: std::result::Result<(&str, Value), Error> = match kind {
        Kind::Set => parse::<SimplicialSetJson>(path, &text)?.build().map(|x| ("simplicial set", json!({ "simplices": counts(&x) }))),
        Kind::Map => parse::<MapJson>(path, &text)?.build().map(|f| ("map", json!({ "source": counts(f.source()), "target": counts(f.target()) }))),
        Kind::Group => parse::<GroupJson>(path, &text)?.build().map(|g| ("group", json!({ "order": g.order() }))),
        Kind::Coalgebra => parse::<CoalgebraJson>(path, &text)?.build().map(|c| ("coalgebra", json!({ "dimension": c.dim() }))),
        Kind::SimplicialCoalgebra => {
            parse::<SimplicialCoalgebraJson>(path, &text)?.build().map(|c| ("simplicial coalgebra", json!({ "dimensions": c.dims() })))
        }
        Kind::GSpace => parse::<GSpaceJson>(path, &text)?
            .space
            .build()
            .map(|x| ("space with action", json!({ "simplices": counts(&x) }))),
        Kind::Descent => {
            let d = parse::<DescentJson>(path, &text)?;
            d.check().and_then(|_| d.extension.build()).map(|e| ("descent input", json!({ "degree": e.m })))
        }
    };
    Ok(match built {
        Ok((kind, summary)) => (json!({ "kind": kind, "valid": true, "summary": summary }), Status::Success),
        Err(e) => (json!({ "valid": false, "error": e.to_string() }), Status::Negative),
    })
}

fn homology(x: &SimplicialSet, f: &Field) -> Result<(Value, Status)> {
    Ok((json!({ "field": f.name(), "dims": homology_dims(x, f)? }), Status::Success))
}

fn cobar_report(x: &Arc<SimplicialSet>, f: &Field, spec: &JobSpec) -> Result<(Value, Status)> {
    let (n, l) = (spec.caps.cobar_degree, spec.caps.cobar_length);
    let x = if x.dimension_bound() < n + 1 { Arc::new(x.with_dimension_bound(n + 1)?) } else { x.clone() };
    let dg = normalized_chains_of(&x, f)?;
    let om = cobar(&dg, n, l)?;
    let dims = (0..n).map_while(|k| om.homology(k).ok().map(|h| h.dim)).collect::<Vec<_>>();
    let generators: Vec<&str> = om.generators().iter().map(|g| g.name.as_str()).collect();
    let presentation = if om.generators().iter().any(|g| g.degree == 0) {
        Some(h0_presentation(&dg)?.to_string())
    } else {
        None
    };
    let report = json!({
        "field": f.name(),
        "caps": { "degree": n, "length": l },
        "exact": om.is_exact(),
        "dims": dims,
        "generators": generators,
        "presentation": presentation,
    });
    Ok((report, Status::Success))
}

fn pi1(x: &SimplicialSet, spec: &JobSpec) -> Result<(Value, Status)> {
    let p = if x.is_reduced() { edge_path_presentation(x)? } else { spanning_tree_presentation(x)? };
    let ab = abelianization(&p);
    let (finiteness, status) = match certify(&p, spec.caps.cosets) {
        Finiteness::Finite(t) => (json!({ "finite": true, "order": t.order }), Status::Success),
        Finiteness::Infinite { rank } => {
            (json!({ "finite": false, "certificate": format!("abelianization has free rank {rank}") }), Status::Success)
        }
        Finiteness::Inconclusive(why) => (json!({ "finite": null, "reason": why }), Status::Inconclusive),
    };
    let report = json!({
        "presentation": p.to_string(),
        "abelianization": { "rank": ab.rank, "torsion": ab.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>() },
        "finiteness": finiteness,
        "caps": { "cosets": spec.caps.cosets },
    });
    Ok((report, status))
}

fn cover(x: &Arc<SimplicialSet>, f: &Field, spec: &JobSpec) -> Result<(Value, Status)> {
    let p = if x.is_reduced() { edge_path_presentation(x)? } else { spanning_tree_presentation(x)? };
    let t = match certify(&p, spec.caps.cosets) {
        Finiteness::Finite(t) => t,
        Finiteness::Infinite { rank } => {
            return Err(Error::Unsupported(format!("fundamental group is infinite (free rank {rank})")));
        }
        Finiteness::Inconclusive(why) => return Err(Error::Inconclusive(why)),
    };
    let c = universal_cover(x, &t)?;
    c.total.validate()?;
    let simply_connected = todd_coxeter(&spanning_tree_presentation(&c.total)?, spec.caps.cosets)?.order == Some(1);
    let report = json!({
        "field": f.name(),
        "order": c.group.order(),
        "simplices": counts(&c.total),
        "homology": homology_dims(&c.total, f)?,
        "simply_connected": simply_connected,
        "space": SimplicialSetJson::from_set(&c.total),
    });
    Ok((report, check(simply_connected)))
}

fn points_report(path: &Path, f: &Field) -> Result<(Value, Status)> {
    let (kind, text) = detect(path)?;
    match kind {
        Kind::Coalgebra => {
            let c = parse::<CoalgebraJson>(path, &text)?.build()?;
            let mut g = grouplikes(&c);
            if !g.complete {
                if let Ok(b) = grouplikes_with(&c, GroupLikeMethod::BruteForce) {
                    g = b;
                }
            }
            let names: Vec<String> = g.elements.iter().map(|v| c.format_vector(v)).collect();
            let status = if g.complete { Status::Success } else { Status::Inconclusive };
            Ok((json!({ "grouplikes": names, "complete": g.complete, "method": format!("{:?}", g.method) }), status))
        }
        Kind::SimplicialCoalgebra => {
            let c = parse::<SimplicialCoalgebraJson>(path, &text)?.build()?;
            let p = points(&c)?;
            Ok((json!({ "simplices": counts(&p.space), "space": SimplicialSetJson::from_set(&p.space) }), Status::Success))
        }
        Kind::Set => {
            let x = Arc::new(parse::<SimplicialSetJson>(path, &text)?.build()?);
            let u = unit_check(&x, f)?;
            let report = json!({ "field": f.name(), "bijective": u.bijective, "commutes": u.commutes, "simplices": counts(&x) });
            Ok((report, check(u.passed())))
        }
        _ => Err(Error::InvalidInput("points needs a coalgebra, a simplicial coalgebra or a simplicial set".into())),
    }
}

fn fixed_points_report(path: &Path, g: &Arc<FiniteGroup>, f: &Field) -> Result<(Value, Status)> {
    let y = io::read::<GSpaceJson>(path)?.build(g)?;
    let c = chains_equivariant(&y, f)?;
    let mut rows = Vec::new();
    let mut all = true;
    for h in subgroups(g)? {
        let direct = fixed_points(&y, &h);
        let fixed = coalg_fixed_points(&c, &h)?;
        let agrees = isomorphic(&points(&fixed.coalgebra)?.space, &direct.space);
        all &= agrees;
        rows.push(json!({
            "subgroup": h.label(g),
            "simplices": counts(&direct.space),
            "coalgebra_dims": fixed.coalgebra.dims(),
            "agrees": agrees,
        }));
    }
    Ok((json!({ "field": f.name(), "subgroups": rows }), check(all)))
}

fn orbit_diagram(path: &Path, g: &Arc<FiniteGroup>) -> Result<(Value, Status)> {
    let y = io::read::<GSpaceJson>(path)?.build(g)?;
    let d = phi(&y)?;
    d.validate()?;
    let cat = d.category();
    let objects: Vec<Value> = (0..cat.object_count())
        .map(|h| json!({ "subgroup": cat.subgroups()[h].label(g), "simplices": counts(d.value(h)) }))
        .collect();
    let roundtrip = theta(&d)? == y;
    Ok((json!({ "objects": objects, "roundtrip": roundtrip }), check(roundtrip)))
}

fn cellularity(path: &Path, g: &Arc<FiniteGroup>) -> Result<(Value, Status)> {
    let f = io::read::<MapJson>(path)?.build()?;
    let subs = subgroups(g)?;
    let entries = check_cellularity(g, &f)?;
    let all = entries.iter().all(|e| e.passed);
    let rows: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "h": subs[e.h].label(g),
                "k": subs[e.k].label(g),
                "condition": e.condition,
                "passed": e.passed,
                "detail": e.detail,
            })
        })
        .collect();
    Ok((json!({ "entries": rows }), check(all)))
}

fn verdict_json(v: &Verdict, subgroup: &str) -> Value {
    json!({
        "notion": v.notion.number(),
        "subgroup": subgroup,
        "verdict": v.answer.to_string(),
        "caps": v.caps,
        "failed_degree": v.failed_degree,
        "evidence": v.evidence,
    })
}

fn equivalence(notion: Notion, path: &Path, g: Option<&Path>, f: &Field, spec: &JobSpec) -> Result<(Value, Status)> {
    let m = io::read::<MapJson>(path)?;
    match g {
        None => {
            let v = oracle(notion, &m.build()?, f, &spec.caps)?;
            Ok((json!({ "field": f.name(), "verdict": verdict_json(&v, "e") }), status_of(v.answer)))
        }
        Some(g) => {
            let g = group(g)?;
            let (src, tgt, map) = m.build_equivariant(&g)?;
            let r = g_equivalence(&src, &tgt, &map, notion, f, &spec.caps)?;
            let rows: Vec<Value> = r.rows.iter().map(|(label, v)| verdict_json(v, label)).collect();
            let report = json!({ "field": f.name(), "subgroups": rows, "aggregate": r.aggregate.to_string() });
            Ok((report, status_of(r.aggregate)))
        }
    }
}

fn descent(path: &Path, g: Option<&Path>) -> Result<(Value, Status)> {
    let d = io::read::<DescentJson>(path)?;
    d.check()?;
    let e = d.extension.build()?;
    let extension = json!({ "base": e.base.name(), "top": e.top.name(), "degree": e.m });
    if let Some(s) = &d.set {
        let s = s.build(e.m)?;
        let form = galois_fixed_coalgebra(&s, &e)?;
        descent_check(&s, &e)?;
        let unit = galois_unit(&s, &e)?;
        let report = json!({
            "extension": extension,
            "dimension": form.coalgebra.dim(),
            "coalgebra": CoalgebraJson::from_coalgebra(&form.coalgebra),
            "descent": true,
            "points": GaloisSetJson::from_set(&unit.points.set),
            "unit": { "bijective": unit.bijective, "equivariant": unit.equivariant },
        });
        return Ok((report, check(unit.passed())));
    }
    let x = Arc::new(d.space.as_ref().expect("checked").build()?);
    let g = match g {
        Some(p) => group(p)?,
        None => Arc::new(FiniteGroup::trivial()),
    };
    let y = io::build_action(&g, &x, &d.action)?;
    let sigma = d.galois_map(&x)?;
    let r = equivariant_descent(&y, &sigma, &e)?;
    let report = json!({
        "extension": extension,
        "dimensions": r.coalgebra.coalgebra().dims(),
        "unit_is_isomorphism": r.unit_is_isomorphism,
        "group_equivariant": r.g_equivariant,
        "galois_equivariant": r.galois_equivariant,
    });
    Ok((report, check(r.passed())))
}

fn corpus() -> Result<(Value, Status)> {
    let results = run_all();
    let all = results.iter().all(|r| r.passed);
    Ok((json!({ "criteria": results, "passed": all }), check(all)))
}
