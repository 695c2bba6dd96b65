//! Standard simplicial models.
//!
//! Every model carries dimension bound `max(top dimension, 4)`.
//!
//! | model | vertices | edges | 2-simplices | higher |
//! |---|---|---|---|---|
//! | `point` | 1 | 0 | 0 | 0 |
//! | `S1` | 1 | 1 | 0 | 0 |
//! | `S2` | 1 | 0 | 1 | 0 |
//! | `RP2` | 1 | 2 | 2 | 0 |
//! | `T2` | 1 | 3 | 2 | 0 |
//! | `wedge_S1_S1` | 1 | 2 | 0 | 0 |
//! | `Δn` | n+1 | C(n+1,2) | C(n+1,3) | ... |
//! | `∂Δn` | as `Δn` without the top simplex | | | |

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::equivariant::GSimplicialSet;
use crate::group::FiniteGroup;
use crate::simplicial::{wedge, NdRef, SimplexRef, SimplicialMap, SimplicialSet};

pub const MIN_BOUND: usize = 4;

fn bound(top: usize) -> usize {
    top.max(MIN_BOUND)
}

fn reduced_with_base(top: usize) -> SimplicialSet {
    let mut x = SimplicialSet::new(bound(top), true);
    x.add_simplex("*", &[]).expect("fresh set");
    x
}

pub fn point() -> SimplicialSet {
    reduced_with_base(0)
}

/// Circle: vertex `*`, edge `a`.
pub fn s1() -> SimplicialSet {
    let mut x = reduced_with_base(1);
    x.add_simplex("a", &[("", "*"), ("", "*")]).unwrap();
    x
}

/// `Δ²/∂Δ²`: vertex `*`, 2-simplex `σ` with every face `s0 *`.
pub fn s2() -> SimplicialSet {
    let mut x = reduced_with_base(2);
    x.add_simplex("σ", &[("s0", "*"), ("s0", "*"), ("s0", "*")]).unwrap();
    x
}

/// Projective plane: edges `a`, `b`; `σ1 = (a, b, a)` and `σ2 = (b, a, a)` as `(d0, d1, d2)`.
/// The edge-path relations read `b = a a` and `a = a b`.
pub fn rp2() -> SimplicialSet {
    let mut x = reduced_with_base(2);
    x.add_simplex("a", &[("", "*"), ("", "*")]).unwrap();
    x.add_simplex("b", &[("", "*"), ("", "*")]).unwrap();
    x.add_simplex("σ1", &[("", "a"), ("", "b"), ("", "a")]).unwrap();
    x.add_simplex("σ2", &[("", "b"), ("", "a"), ("", "a")]).unwrap();
    x
}

/// Torus: edges `a`, `b`, diagonal `c`; `U = (b, c, a)`, `L = (a, c, b)`,
/// giving `c = a b` and `c = b a`.
pub fn t2() -> SimplicialSet {
    let mut x = reduced_with_base(2);
    for e in ["a", "b", "c"] {
        x.add_simplex(e, &[("", "*"), ("", "*")]).unwrap();
    }
    x.add_simplex("U", &[("", "b"), ("", "c"), ("", "a")]).unwrap();
    x.add_simplex("L", &[("", "a"), ("", "c"), ("", "b")]).unwrap();
    x
}

pub fn wedge_s1_s1() -> SimplicialSet {
    let mut x = reduced_with_base(1);
    x.add_simplex("a", &[("", "*"), ("", "*")]).unwrap();
    x.add_simplex("b", &[("", "*"), ("", "*")]).unwrap();
    x
}

fn face_name(vs: &[usize], n: usize) -> String {
    let sep = if n >= 10 { "," } else { "" };
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(sep)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn simplex_skeleton(n: usize, top: usize) -> SimplicialSet {
    let mut x = SimplicialSet::new(bound(n), n == 0);
    for k in 0..=top {
        for vs in subsets(n, k + 1) {
            let name = face_name(&vs, n);
            let face_names: Vec<String> = if k == 0 {
                Vec::new()
            } else {
                (0..=k)
                    .map(|i| {
                        let mut f = vs.clone();
                        f.remove(i);
                        face_name(&f, n)
                    })
                    .collect()
            };
            let faces: Vec<(&str, &str)> = face_names.iter().map(|f| ("", f.as_str())).collect();
            x.add_simplex(&name, &faces).unwrap();
        }
    }
    x
}

/// Standard `n`-simplex; nondegenerate simplices are vertex lists like `012`.
pub fn delta(n: usize) -> SimplicialSet {
    simplex_skeleton(n, n)
}

/// Boundary of the standard `n`-simplex (`n ≥ 1`).
pub fn boundary_delta(n: usize) -> SimplicialSet {
    assert!(n >= 1, "the boundary of a point is empty");
    simplex_skeleton(n, n - 1)
}

/// Inclusion of a subcomplex matched by names.
pub fn boundary_inclusion(sub: &Arc<SimplicialSet>, whole: &Arc<SimplicialSet>) -> Result<SimplicialMap> {
    let images = (0..=sub.dimension_bound())
        .map(|n| {
            sub.nondegenerate(n)
                .iter()
                .map(|s| {
                    whole
                        .find(n, &s.name)
                        .map(SimplexRef::nondegenerate)
                        .ok_or_else(|| Error::UnknownSimplex(s.name.clone()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let f = SimplicialMap::new(sub.clone(), whole.clone(), images)?;
    f.validate()?;
    Ok(f)
}

/// The unique map to a one-vertex simplicial set sending everything to the basepoint.
pub fn collapse_to_point(x: &Arc<SimplicialSet>, target: &Arc<SimplicialSet>) -> Result<SimplicialMap> {
    if target.nd_count(0) != 1 {
        return Err(Error::NotReduced("collapse target".into()));
    }
    let bp = SimplexRef::nondegenerate(NdRef { dim: 0, index: 0 });
    let images = (0..=x.dimension_bound())
        .map(|n| {
            let theta = vec![0; n + 1];
            vec![bp.degenerate_by(&theta); x.nd_count(n)]
        })
        .collect();
    SimplicialMap::new(x.clone(), target.clone(), images)
}

/// One vertex, one edge `e` and a 2-simplex `h` with every face `e`: contractible.
pub fn dunce_hat() -> SimplicialSet {
    let mut x = reduced_with_base(2);
    x.add_simplex("e", &[("", "*"), ("", "*")]).unwrap();
    x.add_simplex("h", &[("", "e"), ("", "e"), ("", "e")]).unwrap();
    x
}

/// The six reduced spaces used throughout the checks.
pub fn corpus() -> Vec<(&'static str, SimplicialSet)> {
    vec![("point", point()), ("S1", s1()), ("S2", s2()), ("RP2", rp2()), ("T2", t2()), ("S1vS1", wedge_s1_s1())]
}

/// `S¹ ∨ S¹` with the non-identity element of `group` (of order 2) swapping `a` and `b`.
pub fn swap_wedge(group: &Arc<FiniteGroup>) -> Result<GSimplicialSet> {
    if group.order() != 2 {
        return Err(Error::InvalidInput("swap needs a group of order 2".into()));
    }
    let g = group.name(1 - group.identity()).to_string();
    GSimplicialSet::from_names(group.clone(), Arc::new(wedge_s1_s1()), &[(g.as_str(), vec![("a", "b"), ("b", "a")])])
}

/// The maps of the inclusion audit: identities and collapses of the corpus and
/// the dunce hat, plus folds, inclusions and a retraction.
pub fn audit_maps() -> Result<Vec<(String, SimplicialMap)>> {
    let pt = Arc::new(point());
    let mut out = Vec::new();
    let mut spaces = corpus();
    spaces.push(("dunce", dunce_hat()));
    for (name, x) in spaces {
        let x = Arc::new(x);
        out.push((format!("id {name}"), SimplicialMap::identity(x.clone())));
        out.push((format!("{name} -> point"), collapse_to_point(&x, &pt)?));
    }
    let circle = Arc::new(s1());
    let projective = Arc::new(rp2());
    let w = Arc::new(wedge_s1_s1());
    out.push(("fold S1vS1 -> S1".into(), SimplicialMap::from_names(w.clone(), circle.clone(), &[("a", "", "a"), ("b", "", "a")])?));
    out.push((
        "S1vS1 -> S1 collapse b".into(),
        SimplicialMap::from_names(w, circle.clone(), &[("a", "", "a"), ("b", "s0", "*")])?,
    ));
    out.push(("S1 -> RP2".into(), SimplicialMap::from_names(circle, projective.clone(), &[("a", "", "a")])?));
    let rd = wedge(&[projective.clone(), Arc::new(dunce_hat())])?;
    let back = SimplicialMap::from_names(
        rd.space.clone(),
        projective.clone(),
        &[("a", "", "a"), ("b", "", "b"), ("σ1", "", "σ1"), ("σ2", "", "σ2"), ("e", "s0", "*"), ("h", "s1s0", "*")],
    )?;
    out.push(("RP2 v dunce -> RP2".into(), back));
    out.push(("RP2 -> RP2 v dunce".into(), rd.inclusions[0].clone()));
    let rs = wedge(&[projective, Arc::new(s2())])?;
    out.push(("RP2 -> RP2 v S2".into(), rs.inclusions[0].clone()));
    out.push(("point -> S2".into(), wedge(&[pt, Arc::new(s2())])?.inclusions[0].clone()));
    Ok(out)
}

/// Looks up a model by name: `point`, `Δn` (or `delta<n>`), `∂Δn` (or
/// `boundary<n>`), `S1`, `S2`, `RP2`, `T2`, `wedge_S1_S1`.
pub fn standard_model(name: &str) -> Result<SimplicialSet> {
    let n = name.trim();
    let lower = n.to_ascii_lowercase();
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::InvalidInput(format!("unknown model {name:?}")));
    if let Some(rest) = n.strip_prefix("∂Δ").or_else(|| lower.strip_prefix("boundary")) {
        let k = num(rest)?;
        if k == 0 {
            return Err(Error::InvalidInput("∂Δ0 is empty".into()));
        }
        return Ok(boundary_delta(k));
    }
    if let Some(rest) = n.strip_prefix('Δ').or_else(|| lower.strip_prefix("delta")) {
        return Ok(delta(num(rest)?));
    }
    match lower.as_str() {
        "point" | "pt" => Ok(point()),
        "s1" => Ok(s1()),
        "s2" => Ok(s2()),
        "rp2" => Ok(rp2()),
        "t2" => Ok(t2()),
        "wedge_s1_s1" => Ok(wedge_s1_s1()),
        _ => Err(Error::InvalidInput(format!("unknown model {name:?}"))),
    }
}

pub const MODEL_NAMES: [&str; 8] = ["point", "S1", "S2", "RP2", "T2", "wedge_S1_S1", "Δ2", "∂Δ2"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_models_validate() {
        for name in MODEL_NAMES.iter().chain(&["Δ3", "∂Δ3", "delta0", "boundary1"]) {
            let x = standard_model(name).unwrap();
            x.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(standard_model("Klein").is_err());
    }

    #[test]
    fn documented_counts() {
        let c = |x: &SimplicialSet| (0..=3).map(|n| x.nd_count(n)).collect::<Vec<_>>();
        assert_eq!(c(&s1()), vec![1, 1, 0, 0]);
        assert_eq!(c(&s2()), vec![1, 0, 1, 0]);
        assert_eq!(c(&rp2()), vec![1, 2, 2, 0]);
        assert_eq!(c(&t2()), vec![1, 3, 2, 0]);
        assert_eq!(c(&delta(3)), vec![4, 6, 4, 1]);
        assert_eq!(c(&boundary_delta(3)), vec![4, 6, 4, 0]);
        assert!(rp2().is_reduced() && !delta(1).is_reduced());
    }
}
