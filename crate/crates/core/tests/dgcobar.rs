use std::sync::Arc;

use equicobar::dgcobar::{cobar, normalized_chains, normalized_chains_of, DgCoalgebra};
use equicobar::h0::{
    alphabet, edge_presentation, h0_presentation, localize_h0, localized_presentation, map_word, marked_elements,
    presentation_map, word_problem_normalize, Normalized, RewriteSystem, CompletionBounds,
};
use equicobar::models;
use equicobar::scoalg::chains;
use equicobar::{wedge, Error, Field, SimplicialMap, SimplicialSet};
use proptest::prelude::*;

fn arc(x: SimplicialSet) -> Arc<SimplicialSet> {
    Arc::new(x)
}

fn nc(x: SimplicialSet, f: &Field) -> DgCoalgebra {
    normalized_chains_of(&arc(x), f).unwrap()
}

fn fields() -> Vec<Field> {
    vec![Field::rational(), Field::prime(2).unwrap(), Field::prime(3).unwrap()]
}

fn corpus() -> Vec<SimplicialSet> {
    let w = wedge(&[arc(models::s1()), arc(models::s2())]).unwrap().space;
    vec![models::point(), models::s1(), models::s2(), models::rp2(), models::t2(), models::wedge_s1_s1(), (*w).clone()]
}

#[test]
fn homology_examples() {
    let q = Field::rational();
    assert_eq!(nc(models::t2(), &q).complex().homology_dims()[..3], [1, 2, 1]);
    for f in fields() {
        assert_eq!(nc(models::s2(), &f).complex().homology_dims()[..3], [1, 0, 1]);
        assert_eq!(nc(models::point(), &f).complex().homology_dims(), vec![1, 0, 0, 0]);
    }
    let f3 = Field::prime(3).unwrap();
    let h1 = nc(models::rp2(), &f3).homology(1).unwrap();
    assert_eq!(h1.dim, 0);
    assert!(nc(models::s1(), &q).homology(4).is_err());
}

#[test]
fn alexander_whitney_structure() {
    for f in fields() {
        for x in corpus() {
            nc(x, &f).validate().unwrap();
        }
    }
}

#[test]
fn normalized_chains_of_a_coalgebra_match_the_space() {
    let f = Field::prime(3).unwrap();
    let a = normalized_chains(&chains(&models::t2(), &f).unwrap()).unwrap();
    let b = nc(models::t2(), &f);
    assert_eq!(a.dims(), b.dims());
    assert!(a.origin().is_none());
    assert!(matches!(h0_presentation(&a), Err(Error::Inconclusive(_))));
}

#[test]
fn cobar_examples() {
    let q = Field::rational();
    let s2 = nc(models::s2().with_dimension_bound(6).unwrap(), &q);
    let om = cobar(&s2, 5, 6).unwrap();
    assert_eq!(om.generators().len(), 1);
    assert_eq!(om.generators()[0].degree, 1);
    assert!(om.generator_differential(0).is_empty());
    // Brute force: the only word of degree n is σ^n.
    for n in 0..=5 {
        assert_eq!(om.words(n), &[vec![0; n]]);
    }
    for n in 0..5 {
        assert_eq!(om.homology(n).unwrap().dim, 1);
    }
    let s1 = cobar(&nc(models::s1(), &q), 2, 5).unwrap();
    assert!(!s1.is_exact());
    assert_eq!(s1.generators()[0].degree, 0);
    // Degree 0 of the free algebra on `a`: one class per length 0..=5.
    assert_eq!(s1.homology(0).unwrap().dim, 6);
    let pt = cobar(&nc(models::point(), &q), 3, 4).unwrap();
    assert!(pt.generators().is_empty());
    assert_eq!(pt.homology(0).unwrap().dim, 1);
    assert!(cobar(&nc(models::s2(), &q), 4, 3).is_err());
}

#[test]
fn cobar_d_squared_on_corpus() {
    for f in fields() {
        for x in corpus() {
            let om = cobar(&nc(x, &f), 3, 4).unwrap();
            assert!(om.check_d_squared());
            assert!(om.complex().is_complex());
        }
    }
}

#[test]
fn simply_connected_cobar_ignores_length_cap() {
    let s2 = arc(models::s2());
    let w = wedge(&[s2.clone(), s2.clone()]).unwrap().space;
    for f in fields() {
        for x in [models::s2(), (*w).clone(), models::point()] {
            let d = nc(x.with_dimension_bound(5).unwrap(), &f);
            let short = cobar(&d, 4, 4).unwrap();
            let long = cobar(&d, 4, 7).unwrap();
            assert!(short.is_exact());
            for n in 0..4 {
                assert_eq!(short.homology(n).unwrap().dim, long.homology(n).unwrap().dim);
            }
        }
    }
}

#[test]
fn marks_and_localization() {
    let q = Field::rational();
    let p = h0_presentation(&nc(models::s1(), &q)).unwrap();
    assert_eq!(marked_elements(&p).unwrap(), vec![0]);
    assert!(marked_elements(&h0_presentation(&nc(models::s2(), &q)).unwrap()).unwrap().is_empty());
    assert_eq!(marked_elements(&h0_presentation(&nc(models::rp2(), &q)).unwrap()).unwrap(), vec![0, 1]);
    let s1 = localized_presentation(&nc(models::s1(), &q)).unwrap();
    assert_eq!(s1.to_string(), "< a | a*a^-1 = 1, a^-1*a = 1 >");
    let pt = localized_presentation(&nc(models::point(), &q)).unwrap();
    assert_eq!(pt.to_string(), "< | >");
    let rp2 = localized_presentation(&nc(models::rp2(), &q)).unwrap();
    let sys = RewriteSystem::complete(&rp2, CompletionBounds::default()).unwrap();
    assert_eq!(sys.normal_forms(&alphabet(&rp2), 6).unwrap().len(), 2);
    let mut unmarked = edge_presentation(&models::rp2()).unwrap();
    unmarked.chains_type = false;
    assert!(marked_elements(&unmarked).is_err());
    assert_eq!(localize_h0(&unmarked).relations.len(), 2);
}

#[test]
fn h0_of_wedge_is_free_product() {
    let xs = [models::s1(), models::rp2(), models::t2(), models::s2()];
    for x in &xs {
        for y in &xs {
            let w = wedge(&[arc(x.clone()), arc(y.clone())]).unwrap().space;
            let pw = edge_presentation(&w).unwrap();
            let fp = edge_presentation(x).unwrap().free_product(&edge_presentation(y).unwrap());
            assert_eq!(pw.relations, fp.relations);
            assert_eq!(pw.generators.len(), fp.generators.len());
            assert_eq!(&pw.generators[..x.nd_count(1)], &fp.generators[..x.nd_count(1)]);
        }
    }
}

#[test]
fn presentation_maps_respect_relations() {
    let s1 = arc(models::s1());
    let rp2 = arc(models::rp2());
    let t2 = arc(models::t2());
    let maps = [
        SimplicialMap::from_names(s1.clone(), rp2.clone(), &[("a", "", "b")]).unwrap(),
        SimplicialMap::from_names(s1.clone(), t2.clone(), &[("a", "", "c")]).unwrap(),
        models::collapse_to_point(&rp2, &arc(models::point())).unwrap(),
        wedge(&[rp2.clone(), t2.clone()]).unwrap().inclusions[1].clone(),
    ];
    for f in maps {
        let mut src = edge_presentation(f.source()).unwrap();
        src.marked = marked_elements(&src).unwrap();
        let src = localize_h0(&src);
        let mut tgt = edge_presentation(f.target()).unwrap();
        tgt.marked = marked_elements(&tgt).unwrap();
        let tgt = localize_h0(&tgt);
        let images = presentation_map(&f);
        for (l, r) in &src.relations {
            let a = word_problem_normalize(&tgt, &map_word(&images, l));
            let b = word_problem_normalize(&tgt, &map_word(&images, r));
            assert!(matches!(a, Normalized::Normal(_)), "{a:?} {}", tgt);
            assert_eq!(a, b);
        }
    }
}

/// A reduced 2-dimensional simplicial set with random triangle faces.
fn random_complex(edges: usize, triangles: &[[usize; 3]]) -> SimplicialSet {
    let mut x = SimplicialSet::new(4, true);
    x.add_simplex("*", &[]).unwrap();
    let names: Vec<String> = (0..edges).map(|i| format!("e{i}")).collect();
    for e in &names {
        x.add_simplex(e, &[("", "*"), ("", "*")]).unwrap();
    }
    for (t, faces) in triangles.iter().enumerate() {
        let fs: Vec<(&str, &str)> =
            faces.iter().map(|&k| if k < edges { ("", names[k].as_str()) } else { ("s0", "*") }).collect();
        x.add_simplex(&format!("t{t}"), &fs).unwrap();
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_cobar_d_squared(edges in 0usize..3, tris in prop::collection::vec([0usize..4, 0usize..4, 0usize..4], 0..3), p in prop::sample::select(vec![0u32, 2, 3])) {
        let f = if p == 0 { Field::rational() } else { Field::prime(p).unwrap() };
        let x = random_complex(edges, &tris);
        let d = nc(x, &f);
        prop_assert!(d.validate().is_ok());
        let om = cobar(&d, 2, 3).unwrap();
        prop_assert!(om.check_d_squared());
    }
}
