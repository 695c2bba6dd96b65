use std::sync::Arc;

use equicobar::coalgebra::{grouplikes, grouplikes_with, largest_subcoalgebra, Coalgebra, GroupLikeMethod};
use equicobar::models;
use equicobar::scoalg::{
    chains, chains_equivariant, chains_map, coalg_fixed_points, counit_maps, indexed_wedge_sum, points,
    points_equivariant, points_map, unit_check, unit_map, wedge_sum,
};
use equicobar::{
    fixed_points, isomorphic, subgroups, tensor_set, wedge, Field, FiniteGroup, GSet, GSimplicialSet, Matrix,
    SimplicialMap, SimplicialSet, Subspace, Vector,
};
use proptest::prelude::*;

fn arc(x: SimplicialSet) -> Arc<SimplicialSet> {
    Arc::new(x)
}

fn f2() -> Field {
    Field::prime(2).unwrap()
}

fn swap_wedge() -> GSimplicialSet {
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    GSimplicialSet::from_names(c2, arc(models::wedge_s1_s1()), &[("g", vec![("a", "b"), ("b", "a")])]).unwrap()
}

/// G-sets on corpus spaces for `C2`, `C3`, `S3`.
fn equivariant_corpus() -> Vec<GSimplicialSet> {
    let mut out = vec![swap_wedge()];
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)] {
        let g = Arc::new(g);
        for h in subgroups(&g).unwrap() {
            let s = GSet::cosets(&g, &h);
            out.push(tensor_set(&s, &arc(models::s1())).unwrap());
        }
        out.push(GSimplicialSet::trivial(g.clone(), arc(models::rp2())));
    }
    out
}

#[test]
fn unit_check_examples() {
    let f3 = Field::prime(3).unwrap();
    for (x, f) in [(models::s1(), f2()), (models::point(), Field::rational()), (models::rp2(), f3)] {
        let r = unit_check(&arc(x), &f).unwrap();
        assert!(r.passed(), "{r:?}");
    }
    let s1 = unit_check(&arc(models::s1()), &f2()).unwrap();
    assert_eq!(s1.counts[1], (2, 2));
    assert!(unit_check(&arc(models::delta(1)), &f2()).is_err());
}

#[test]
fn points_of_point_chains_is_point() {
    let p = points(&chains(&models::point(), &Field::rational()).unwrap()).unwrap();
    assert!(isomorphic(&p.space, &arc(models::point())));
    assert!(p.space.is_reduced());
}

#[test]
fn chains_grouplikes_are_exactly_the_basis() {
    let f = Field::prime(5).unwrap();
    let c = chains(&models::t2(), &f).unwrap();
    for n in 0..=3 {
        let fast = grouplikes(c.degree(n));
        let slow = grouplikes_with(c.degree(n), GroupLikeMethod::Characters).unwrap();
        assert_eq!(fast.elements, slow.elements);
        assert_eq!(fast.elements.len(), c.degree(n).dim());
    }
}

#[test]
fn swap_fixed_points_are_chains_of_a_point() {
    let y = swap_wedge();
    let c = chains_equivariant(&y, &f2()).unwrap();
    let c2 = subgroups(y.group()).unwrap().pop().unwrap();
    assert_eq!(c2.order(), 2);
    let fixed = coalg_fixed_points(&c, &c2).unwrap();
    fixed.coalgebra.validate().unwrap();
    let pt = chains(&models::point(), &f2()).unwrap();
    assert!(fixed.coalgebra.equals_by_names(&pt));
    let p = points(&fixed.coalgebra).unwrap();
    assert!(isomorphic(&p.space, &fixed_points(&y, &c2).space));
}

#[test]
fn trivial_action_fixed_points_are_everything() {
    let g = Arc::new(FiniteGroup::cyclic(3));
    let y = GSimplicialSet::trivial(g.clone(), arc(models::t2()));
    let c = chains_equivariant(&y, &Field::rational()).unwrap();
    for h in subgroups(&g).unwrap() {
        let fixed = coalg_fixed_points(&c, &h).unwrap();
        assert!(fixed.coalgebra.equals_by_names(c.coalgebra()));
    }
}

#[test]
fn equivariant_compatibility() {
    for f in [f2(), Field::prime(3).unwrap()] {
        for y in equivariant_corpus() {
            let c = chains_equivariant(&y, &f).unwrap();
            for h in subgroups(y.group()).unwrap() {
                let via_coalgebra = points(&coalg_fixed_points(&c, &h).unwrap().coalgebra).unwrap();
                let direct = fixed_points(&y, &h);
                assert!(isomorphic(&via_coalgebra.space, &direct.space), "H = {}", h.label(y.group()));
                let direct_chains = chains(&direct.space, &f).unwrap();
                assert!(coalg_fixed_points(&c, &h).unwrap().coalgebra.equals_by_names(&direct_chains));
            }
        }
    }
}

#[test]
fn equivariant_points_recover_the_action() {
    for y in equivariant_corpus() {
        let c = chains_equivariant(&y, &f2()).unwrap();
        let (p, py) = points_equivariant(&c).unwrap();
        let eta = unit_map(y.space(), c.coalgebra(), &p).unwrap();
        assert!(eta.is_isomorphism());
        assert!(y.is_equivariant(&py, &eta));
    }
}

#[test]
fn wedge_sum_matches_chains_of_wedge() {
    let f = Field::rational();
    let s1 = arc(models::s1());
    let c = chains(&s1, &f).unwrap();
    let w = wedge_sum(&c, &c).unwrap();
    w.validate().unwrap();
    assert_eq!(w.dims()[1], 3);
    let cw = chains(&wedge(&[s1.clone(), s1.clone()]).unwrap().space, &f).unwrap();
    assert!(w.equals_by_names(&cw));
    let mixed = chains(&wedge(&[arc(models::rp2()), arc(models::t2())]).unwrap().space, &f).unwrap();
    let ws = wedge_sum(&chains(&models::rp2(), &f).unwrap(), &chains(&models::t2(), &f).unwrap()).unwrap();
    assert!(ws.equals_by_names(&mixed));
    let pt = chains(&models::point(), &f).unwrap();
    assert!(wedge_sum(&c, &pt).unwrap().equals_by_names(&c));
    assert!(wedge_sum(&c, &chains(&models::s1(), &f2()).unwrap()).is_err());
}

#[test]
fn indexed_wedge_sum_matches_tensor_with_orbit() {
    let f = f2();
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric(3)] {
        let g = Arc::new(g);
        for h in subgroups(&g).unwrap() {
            let s = GSet::cosets(&g, &h);
            for x in [models::s1(), models::rp2()] {
                let x = arc(x);
                let lhs = chains_equivariant(&tensor_set(&s, &x).unwrap(), &f).unwrap();
                let rhs = indexed_wedge_sum(&s, &chains(&x, &f).unwrap()).unwrap();
                assert!(lhs.equals_by_names(&rhs), "G/{}", h.label(&g));
            }
        }
    }
}

fn corpus_maps() -> Vec<SimplicialMap> {
    let pt = arc(models::point());
    let mut out = Vec::new();
    for x in [models::s1(), models::rp2(), models::t2()] {
        out.push(models::collapse_to_point(&arc(x), &pt).unwrap());
    }
    let w = wedge(&[arc(models::s1()), arc(models::rp2())]).unwrap();
    out.extend(w.inclusions);
    out.push(models::boundary_inclusion(&arc(models::boundary_delta(2)), &arc(models::delta(2))).unwrap());
    out.push(SimplicialMap::from_names(arc(models::s1()), arc(models::rp2()), &[("a", "", "a")]).unwrap());
    out
}

#[test]
fn unit_is_natural() {
    let f = Field::prime(3).unwrap();
    for m in corpus_maps() {
        let cx = chains(m.source(), &f).unwrap();
        let cy = chains(m.target(), &f).unwrap();
        let (px, py) = (points(&cx).unwrap(), points(&cy).unwrap());
        let eta_x = unit_map(m.source(), &cx, &px).unwrap();
        let eta_y = unit_map(m.target(), &cy, &py).unwrap();
        let pf = points_map(&px, &py, &chains_map(&m, &f).unwrap()).unwrap();
        assert_eq!(eta_x.then(&pf).unwrap(), m.then(&eta_y).unwrap());
    }
}

#[test]
fn triangle_identity() {
    let f = Field::rational();
    for x in [models::s1(), models::rp2(), models::t2(), models::delta(2)] {
        let x = arc(x);
        let c = chains(&x, &f).unwrap();
        let p = points(&c).unwrap();
        let eta = unit_map(&x, &c, &p).unwrap();
        let counit = counit_maps(&c, &p);
        for (n, m) in chains_map(&eta, &f).unwrap().iter().enumerate() {
            assert_eq!(counit[n].mul(m).unwrap(), Matrix::identity(&f, c.degree(n).dim()));
        }
    }
}

/// The diagonal coalgebra on `n` elements written in the basis given by the columns of `p`.
fn change_basis(f: &Field, n: usize, p: &Matrix) -> Coalgebra {
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let diag = Coalgebra::diagonal(f, names.clone());
    let pinv = p.inverse().unwrap();
    let delta = (0..n)
        .map(|j| {
            let mut terms = Vec::new();
            for ((x, y), c) in diag.apply_delta(&p.column(j)) {
                for r in 0..n {
                    for s in 0..n {
                        terms.push((r, s, f.mul(&c, &f.mul(&pinv.get(r, x), &pinv.get(s, y)))));
                    }
                }
            }
            terms
        })
        .collect();
    let counit = (0..n).map(|j| diag.apply_counit(&p.column(j))).collect();
    Coalgebra::new(f, names, delta, counit).unwrap()
}

fn invertible(f: &Field, n: usize, seed: &[u32]) -> Option<Matrix> {
    let q = f.order().unwrap() as u32;
    let cols: Vec<Vector> = (0..n).map(|j| (0..n).map(|i| f.elem(seed[i * n + j] % q)).collect()).collect();
    let m = Matrix::from_columns(f, n, &cols);
    m.is_invertible().then_some(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grouplikes_independent_and_cross_validated(n in 1usize..4, seed in prop::collection::vec(0u32..9, 9)) {
        let f = Field::prime(3).unwrap();
        if let Some(p) = invertible(&f, n, &seed) {
            let c = change_basis(&f, n, &p);
            prop_assert!(c.validate().is_ok());
            let chars = grouplikes_with(&c, GroupLikeMethod::Characters).unwrap();
            let brute = grouplikes_with(&c, GroupLikeMethod::BruteForce).unwrap();
            prop_assert_eq!(&chars.elements, &brute.elements);
            prop_assert_eq!(chars.elements.len(), n);
            prop_assert_eq!(Subspace::spanned_by(&f, n, &chars.elements).dim(), n);
        }
    }

    #[test]
    fn largest_subcoalgebra_idempotent_and_monotone(
        n in 1usize..5,
        seed in prop::collection::vec(0u32..9, 16),
        w1 in prop::collection::vec(0u32..3, 8),
        w2 in prop::collection::vec(0u32..3, 8),
    ) {
        let f = Field::prime(3).unwrap();
        if let Some(p) = invertible(&f, n, &seed) {
            let c = change_basis(&f, n, &p);
            let vecs = |w: &[u32], k: usize| -> Vec<Vector> {
                (0..k).map(|r| (0..n).map(|i| f.elem(w[(r * n + i) % w.len()])).collect()).collect()
            };
            let small = Subspace::spanned_by(&f, n, &vecs(&w1, 1));
            let mut big_vecs = small.basis();
            big_vecs.extend(vecs(&w2, 1));
            let big = Subspace::spanned_by(&f, n, &big_vecs);
            let v_small = largest_subcoalgebra(&c, &small);
            let v_big = largest_subcoalgebra(&c, &big);
            prop_assert!(v_small.is_subspace_of(&small));
            prop_assert!(v_small.is_subspace_of(&v_big));
            let again = largest_subcoalgebra(&c, &v_big);
            prop_assert!(again.is_subspace_of(&v_big) && v_big.is_subspace_of(&again));
            prop_assert!(c.restrict(&v_big).is_ok());
        }
    }
}
