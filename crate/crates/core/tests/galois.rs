use std::sync::Arc;

use equicobar::coalgebra::{grouplikes_with, Coalgebra, GroupLikeMethod};
use equicobar::galois::{
    descent_check, equivariant_descent, extend_scalars, fixed_map, galois_fixed_coalgebra, galois_points_map,
    galois_sets, galois_unit, points_galois, trivial_descent, FieldExtension, SemilinearGSet,
};
use equicobar::scoalg::{chains_equivariant, GSimplicialCoalgebra};
use equicobar::{isomorphic, models, Elem, Error, FiniteGroup, GSimplicialSet, Matrix, SimplicialMap, SimplicialSet};

fn ext(p: u32, kb: u32, kt: u32) -> FieldExtension {
    FieldExtension::new(p, kb, kt).unwrap()
}

fn swap(m: u32) -> SemilinearGSet {
    SemilinearGSet::new(vec!["s".into(), "t".into()], vec![1, 0], m).unwrap()
}

/// All vectors `v ∈ top^S` with `v_{σs} = φ(v_s)`, by enumeration.
fn fixed_by_enumeration(s: &SemilinearGSet, e: &FieldExtension) -> Vec<Vec<Elem>> {
    let elems = e.top.elements();
    let n = s.len();
    let mut out = Vec::new();
    let total = elems.len().pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let v: Vec<Elem> = (0..n)
            .map(|_| {
                let d = c % elems.len();
                c /= elems.len();
                elems[d].clone()
            })
            .collect();
        if (0..n).all(|k| v[s.generator()[k]] == e.frobenius(&v[k])) {
            out.push(v);
        }
    }
    out
}

fn brute_count(c: &Coalgebra) -> usize {
    grouplikes_with(c, GroupLikeMethod::BruteForce).unwrap().elements.len()
}

#[test]
fn extension_basics() {
    let e = ext(2, 1, 2);
    assert_eq!((e.m, e.q), (2, 2));
    assert_eq!(e.orbit_sizes(), vec![1, 1, 2]);
    assert_eq!(ext(3, 1, 2).orbit_sizes().iter().filter(|&&k| k == 2).count(), 3);
    assert_eq!(ext(2, 2, 4).orbit_sizes().iter().filter(|&&k| k == 1).count(), 4);
    assert!(FieldExtension::new(2, 2, 3).is_err());
    for e in [ext(2, 1, 4), ext(2, 2, 4), ext(3, 1, 2)] {
        for a in e.base.elements() {
            let x = e.embedding.embed(&a);
            assert_eq!(e.frobenius(&x), x);
        }
        for a in e.top.elements() {
            let fixed = e.frobenius(&a) == a;
            assert_eq!(fixed, e.embedding.pull_back(&a).is_some());
        }
    }
    assert!(SemilinearGSet::new(vec!["a".into(), "b".into(), "c".into()], vec![1, 2, 0], 2).is_err());
    assert!(SemilinearGSet::new(vec!["a".into(), "b".into()], vec![0, 0], 2).is_err());
    let s = SemilinearGSet::from_orbit_sizes(&[1, 2], 2).unwrap();
    assert_eq!(s.generator(), &[0, 2, 1]);
    assert_eq!(s.act(3, 1), 2);
    // Divisors of 2 with at most 3 elements: 1, 2, 11, 12, 111.
    assert_eq!(galois_sets(2, 3).len(), 5);
}

#[test]
fn fixed_coalgebra_examples() {
    let e = ext(2, 1, 2);
    let trivial = SemilinearGSet::trivial(vec!["x".into(), "y".into(), "z".into()], 2);
    let form = galois_fixed_coalgebra(&trivial, &e).unwrap();
    assert_eq!(form.coalgebra, Coalgebra::diagonal(&e.base, vec!["x".into(), "y".into(), "z".into()]));
    assert_eq!(form.basis, Matrix::identity(&e.top, 3));

    for e in [ext(2, 1, 2), ext(3, 1, 2)] {
        let s = swap(2);
        let form = galois_fixed_coalgebra(&s, &e).unwrap();
        assert_eq!(form.coalgebra.dim(), 2);
        // The columns lie in {(a, a^q)} and are independent over the top field.
        let fixed = fixed_by_enumeration(&s, &e);
        assert_eq!(fixed.len() as u64, e.q.pow(2));
        for k in 0..2 {
            assert!(fixed.contains(&form.basis.column(k)));
        }
        assert!(form.basis.is_invertible());
        assert_eq!(brute_count(&form.coalgebra), 0);
        let over_top = extend_scalars(&form.coalgebra, &e).unwrap();
        let g = grouplikes_with(&over_top, GroupLikeMethod::BruteForce).unwrap().elements;
        assert_eq!(g.len(), 2);
        assert_eq!(e.frobenius_vec(&g[0]), g[1]);
        assert_eq!(e.frobenius_vec(&g[1]), g[0]);
    }
}

#[test]
fn descent_examples() {
    let e = ext(2, 1, 2);
    let trivial = SemilinearGSet::trivial(vec!["x".into(), "y".into()], 2);
    assert_eq!(descent_check(&trivial, &e).unwrap(), Matrix::identity(&e.top, 2));
    let b = descent_check(&swap(2), &e).unwrap();
    assert_eq!((b.rows(), b.cols()), (2, 2));
    assert!(b.is_invertible());
    // Blockwise: a fixed point followed by a swapped pair.
    let union = SemilinearGSet::from_orbit_sizes(&[1, 2], 2).unwrap();
    let whole = descent_check(&union, &e).unwrap();
    let block = descent_check(&SemilinearGSet::from_orbit_sizes(&[2], 2).unwrap(), &e).unwrap();
    assert_eq!(whole.get(0, 0), e.top.one());
    for k in 1..3 {
        assert!(e.top.is_zero(&whole.get(0, k)));
        assert!(e.top.is_zero(&whole.get(k, 0)));
        for j in 1..3 {
            assert_eq!(whole.get(j, k), block.get(j - 1, k - 1));
        }
    }
}

#[test]
fn points_examples() {
    let e = ext(2, 1, 2);
    let s = swap(2);
    let form = galois_fixed_coalgebra(&s, &e).unwrap();
    let pts = points_galois(&form.coalgebra, &e).unwrap();
    assert!(pts.set.isomorphic(&s));
    assert_eq!(pts.set.generator(), &[1, 0]);
    for f in [ext(2, 1, 3), ext(3, 1, 2)] {
        let d = Coalgebra::diagonal(&f.base, vec!["u".into(), "v".into(), "w".into()]);
        let p = points_galois(&d, &f).unwrap();
        assert!(p.set.is_trivial());
        assert_eq!(p.set.names(), d.basis());
    }
    let wrong = Coalgebra::diagonal(&e.top, vec!["u".into()]);
    assert!(matches!(points_galois(&wrong, &e), Err(Error::MixedFields(..))));
}

#[test]
fn unit_is_natural() {
    let e = ext(2, 1, 2);
    let s = SemilinearGSet::from_orbit_sizes(&[2], 2).unwrap();
    let t = SemilinearGSet::from_orbit_sizes(&[1, 2, 1], 2).unwrap();
    let f = [1, 2];
    let m = fixed_map(&f, &s, &t, &e).unwrap();
    let fs = galois_fixed_coalgebra(&s, &e).unwrap();
    let ft = galois_fixed_coalgebra(&t, &e).unwrap();
    assert!(fs.coalgebra.is_coalgebra_map(&ft.coalgebra, &m));
    let us = galois_unit(&s, &e).unwrap();
    let ut = galois_unit(&t, &e).unwrap();
    assert!(us.passed() && ut.passed());
    let pm = galois_points_map(&m, &us.points, &ut.points, &e).unwrap();
    for k in 0..s.len() {
        assert_eq!(pm[us.map[k]], ut.map[f[k]]);
    }
    assert!(fixed_map(&[0, 1], &s, &t, &e).is_err());
}

/// Every action type with at most six elements over the test extensions.
#[test]
fn exhaustive_descent() {
    let extensions = [(2, 1, 2, 6), (2, 1, 3, 6), (3, 1, 2, 6), (2, 2, 4, 4)];
    for (p, kb, kt, max) in extensions {
        let e = ext(p, kb, kt);
        for s in galois_sets(e.m, max) {
            let form = galois_fixed_coalgebra(&s, &e).unwrap();
            assert_eq!(form.coalgebra.dim(), s.len());
            form.coalgebra.validate().unwrap();
            for k in 0..s.len() {
                let v = form.basis.column(k);
                assert_eq!(e.frobenius_vec(&v), (0..s.len()).map(|j| v[s.generator()[j]].clone()).collect::<Vec<_>>());
            }
            descent_check(&s, &e).unwrap();
            let unit = galois_unit(&s, &e).unwrap();
            assert!(unit.passed(), "{:?}", s.orbit_type());
            assert!(unit.points.set.isomorphic(&s));
            let base = brute_count(&form.coalgebra);
            let top = unit.points.set.len();
            assert_eq!(base, s.fixed().len());
            assert!(base <= top);
            assert_eq!(base == top, s.is_trivial());
        }
    }
}

fn c2() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2))
}

fn three_circles() -> Arc<SimplicialSet> {
    let mut x = SimplicialSet::new(3, true);
    x.add_simplex("*", &[]).unwrap();
    for e in ["a", "b", "c"] {
        x.add_simplex(e, &[("", "*"), ("", "*")]).unwrap();
    }
    Arc::new(x)
}

#[test]
fn trivial_galois_recovers_chains() {
    let e = ext(2, 1, 2);
    let g = c2();
    let name = g.name(1).to_string();
    let y = GSimplicialSet::from_names(g, Arc::new(models::wedge_s1_s1()), &[(name.as_str(), vec![("a", "b"), ("b", "a")])])
        .unwrap();
    let d = trivial_descent(&y, &e).unwrap();
    assert!(d.passed());
    assert!(d.coalgebra.equals_by_names(&chains_equivariant(&y, &e.base).unwrap()));
    assert!(isomorphic(&d.points.space, y.space()));
}

#[test]
fn twisted_wedge_is_recovered() {
    let e = ext(2, 1, 2);
    let w = Arc::new(models::wedge_s1_s1());
    let sigma = SimplicialMap::from_names(w.clone(), w.clone(), &[("a", "", "b"), ("b", "", "a")]).unwrap();
    let y = GSimplicialSet::trivial(c2(), w.clone());
    let d = equivariant_descent(&y, &sigma, &e).unwrap();
    assert!(d.passed());
    assert_eq!(d.coalgebra.coalgebra().dims(), equicobar::scoalg::chains(&w, &e.base).unwrap().dims());
    // Over the base field only the degenerate edge is a point in degree 1.
    assert_eq!(brute_count(d.coalgebra.coalgebra().degree(1)), 1);
    assert!(!GSimplicialCoalgebra::equals_by_names(&d.coalgebra, &chains_equivariant(&y, &e.base).unwrap()));

    let x = three_circles();
    let g = c2();
    let name = g.name(1).to_string();
    let y = GSimplicialSet::from_names(g, x.clone(), &[(name.as_str(), vec![("a", "b"), ("b", "a")])]).unwrap();
    let commuting = SimplicialMap::from_names(x.clone(), x.clone(), &[("a", "", "b"), ("b", "", "a"), ("c", "", "c")]).unwrap();
    assert!(equivariant_descent(&y, &commuting, &e).unwrap().passed());
    let clashing = SimplicialMap::from_names(x.clone(), x.clone(), &[("a", "", "a"), ("b", "", "c"), ("c", "", "b")]).unwrap();
    assert!(matches!(equivariant_descent(&y, &clashing, &e), Err(Error::Violation(_))));
    let cube = SimplicialMap::from_names(x.clone(), x.clone(), &[("a", "", "b"), ("b", "", "c"), ("c", "", "a")]).unwrap();
    assert!(equivariant_descent(&GSimplicialSet::trivial(c2(), x), &cube, &e).is_err());
}
