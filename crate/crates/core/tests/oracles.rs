use std::sync::Arc;

use equicobar::dgcobar::normalized_chains_of;
use equicobar::h0::{alphabet, localized_presentation, CompletionBounds, RewriteSystem};
use equicobar::models;
use equicobar::oracles::{
    g_equivalence, inclusion_audit, is_cat_f_equiv, is_f_equiv, is_pi1_f_equiv, monotone, oracle, Answer, Caps,
    Notion,
};
use equicobar::equivariant::restrict_to_fixed;
use equicobar::{
    fixed_points, subgroups, wedge, Field, FiniteGroup, GSimplicialSet, SimplicialMap,
    SimplicialSet,
};

fn arc(x: SimplicialSet) -> Arc<SimplicialSet> {
    Arc::new(x)
}

fn pt() -> Arc<SimplicialSet> {
    arc(models::point())
}

fn collapse(x: SimplicialSet) -> SimplicialMap {
    models::collapse_to_point(&arc(x), &pt()).unwrap()
}

fn dunce_hat() -> SimplicialSet {
    models::dunce_hat()
}

fn f2() -> Field {
    Field::prime(2).unwrap()
}

fn f3() -> Field {
    Field::prime(3).unwrap()
}

fn corpus_maps() -> Vec<(String, SimplicialMap)> {
    models::audit_maps().unwrap()
}

#[test]
fn homology_oracle_examples() {
    let caps = Caps::default();
    assert_eq!(is_f_equiv(&SimplicialMap::identity(arc(models::t2())), &Field::rational(), &caps).unwrap().answer, Answer::Yes);
    let c = collapse(models::rp2());
    let v = is_f_equiv(&c, &f3(), &Caps { degree: 2, ..caps }).unwrap();
    assert_eq!(v.answer, Answer::Yes);
    let v = is_f_equiv(&c, &f2(), &caps).unwrap();
    assert_eq!(v.answer, Answer::No);
    assert_eq!(v.failed_degree, Some(1));
}

#[test]
fn pi1_oracle_examples() {
    let caps = Caps::default();
    let v = is_pi1_f_equiv(&SimplicialMap::identity(arc(models::rp2())), &f2(), &caps).unwrap();
    assert_eq!(v.answer, Answer::Yes);
    let v = is_pi1_f_equiv(&collapse(models::rp2()), &f2(), &caps).unwrap();
    assert_eq!(v.answer, Answer::No);
    assert!(v.evidence[0].contains("orders 2 vs 1"), "{:?}", v.evidence);
    assert_eq!(is_pi1_f_equiv(&SimplicialMap::identity(arc(models::s1())), &f2(), &caps).unwrap().answer, Answer::Yes);
    let s1 = arc(models::s1());
    let double = SimplicialMap::from_names(s1.clone(), arc(models::wedge_s1_s1()), &[("a", "", "a")]).unwrap();
    let v = is_pi1_f_equiv(&double, &f2(), &caps).unwrap();
    assert_eq!(v.answer, Answer::No);
    // ℤ → ⟨a, b | b = a²⟩ ≅ ℤ sending the generator to a²: equal abelianizations, nothing certified.
    let twice = arc(models::s1());
    let mut x = SimplicialSet::new(4, true);
    x.add_simplex("*", &[]).unwrap();
    x.add_simplex("a", &[("", "*"), ("", "*")]).unwrap();
    x.add_simplex("b", &[("", "*"), ("", "*")]).unwrap();
    x.add_simplex("t", &[("", "a"), ("", "b"), ("", "a")]).unwrap();
    let x = arc(x);
    let square = SimplicialMap::from_names(twice, x, &[("a", "", "b")]).unwrap();
    assert_eq!(is_pi1_f_equiv(&square, &f2(), &caps).unwrap().answer, Answer::Inconclusive);
}

#[test]
fn categorical_oracle_examples() {
    let caps = Caps::default();
    let q = Field::rational();
    assert_eq!(is_cat_f_equiv(&SimplicialMap::identity(arc(models::s2())), &q, &caps).unwrap().answer, Answer::Yes);
    let v = is_cat_f_equiv(&collapse(models::s2()), &q, &caps).unwrap();
    assert_eq!(v.answer, Answer::No);
    assert_eq!(v.failed_degree, Some(1));
    let s1 = arc(models::s1());
    let fold = SimplicialMap::from_names(arc(models::wedge_s1_s1()), s1, &[("a", "", "a"), ("b", "", "a")]).unwrap();
    let v = is_cat_f_equiv(&fold, &q, &caps).unwrap();
    assert_eq!(v.answer, Answer::No);
    assert_eq!(v.failed_degree, Some(0));
    let v = is_cat_f_equiv(&collapse(models::rp2()), &f3(), &caps).unwrap();
    assert_eq!(v.answer, Answer::No);
    assert!(v.evidence[0].contains("dimensions 2 vs 1"), "{:?}", v.evidence);
    assert_eq!(is_cat_f_equiv(&collapse(dunce_hat()), &q, &caps).unwrap().answer, Answer::Inconclusive);
    let s2 = arc(models::s2().with_dimension_bound(6).unwrap());
    let w = wedge(&[s2.clone(), s2.clone()]).unwrap();
    let v = is_cat_f_equiv(&w.inclusions[0], &q, &Caps { cobar_degree: 4, cobar_length: 4, ..caps }).unwrap();
    assert_eq!(v.answer, Answer::No);
    assert_eq!(v.failed_degree, Some(1));
    let short = Caps { cobar_length: 1, ..caps };
    assert_eq!(is_cat_f_equiv(&collapse(models::s2()), &q, &short).unwrap().answer, Answer::Inconclusive);
}

/// Certified verdicts against homology dimensions from the Alexander–Whitney
/// complex and group orders from Knuth–Bendix normal forms.
#[test]
fn verdicts_are_sound() {
    let caps = Caps::default();
    for field in [Field::rational(), f2(), f3()] {
        for (name, f) in corpus_maps() {
            let hx = normalized_chains_of(&arc(f.source().with_dimension_bound(5).unwrap()), &field).unwrap();
            let hy = normalized_chains_of(&arc(f.target().with_dimension_bound(5).unwrap()), &field).unwrap();
            let dims_equal = hx.complex().homology_dims() == hy.complex().homology_dims();
            let v3 = is_f_equiv(&f, &field, &caps).unwrap();
            if !dims_equal {
                assert_eq!(v3.answer, Answer::No, "{name}");
            }
            let order = |x: &Arc<SimplicialSet>| {
                let p = localized_presentation(&normalized_chains_of(x, &field).unwrap()).unwrap();
                let sys = RewriteSystem::complete(&p, CompletionBounds::default()).ok()?;
                sys.normal_forms(&alphabet(&p), 32).map(|v| v.len())
            };
            let v2 = is_pi1_f_equiv(&f, &field, &caps).unwrap();
            if v2.answer == Answer::Yes {
                assert_eq!(order(f.source()), order(f.target()), "{name}");
                assert!(dims_equal, "{name}");
            }
            if let (Some(a), Some(b)) = (order(f.source()), order(f.target())) {
                if a != b {
                    assert_eq!(v2.answer, Answer::No, "{name}");
                    assert_ne!(is_cat_f_equiv(&f, &field, &caps).unwrap().answer, Answer::Yes, "{name}");
                }
            }
        }
    }
}

#[test]
fn audit_is_monotone() {
    let caps = Caps::default();
    for field in [Field::rational(), f2(), f3()] {
        let report = inclusion_audit(&corpus_maps(), &field, &caps).unwrap();
        assert!(report.violations().is_empty());
        for row in &report.rows {
            if row.name.starts_with("id ") {
                assert!(row.verdicts.iter().all(|v| v.answer == Answer::Yes), "{}", row.name);
            }
        }
    }
    let rp2 = inclusion_audit(&[("RP2 -> point".into(), collapse(models::rp2()))], &f3(), &caps).unwrap();
    let a: Vec<Answer> = rp2.rows[0].verdicts.iter().map(|v| v.answer).collect();
    assert_eq!(a, vec![Answer::No, Answer::No, Answer::Yes]);
    let w = arc(models::wedge_s1_s1());
    let fold = SimplicialMap::from_names(w, arc(models::s1()), &[("a", "", "a"), ("b", "", "a")]).unwrap();
    let r = inclusion_audit(&[("fold".into(), fold)], &Field::rational(), &caps).unwrap();
    assert!(r.rows[0].verdicts.iter().all(|v| v.answer == Answer::No));
    let dunce = inclusion_audit(&[("dunce".into(), collapse(dunce_hat()))], &Field::rational(), &caps).unwrap();
    let a: Vec<Answer> = dunce.rows[0].verdicts.iter().map(|v| v.answer).collect();
    assert_eq!(a, vec![Answer::Inconclusive, Answer::Yes, Answer::Yes]);
    assert!(!monotone(&[Answer::Yes, Answer::No, Answer::Yes]));
    assert!(!monotone(&[Answer::Inconclusive, Answer::Yes, Answer::No]));
}

fn c2() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2))
}

fn swap_wedge(g: &Arc<FiniteGroup>) -> GSimplicialSet {
    models::swap_wedge(g).unwrap()
}

#[test]
fn equivariant_examples() {
    let g = c2();
    let caps = Caps::default();
    let y = swap_wedge(&g);
    let id = SimplicialMap::identity(y.space().clone());
    for notion in [Notion::Categorical, Notion::Pi1, Notion::Homology] {
        let v = g_equivalence(&y, &y, &id, notion, &f2(), &caps).unwrap();
        assert_eq!(v.aggregate, Answer::Yes);
        assert!(v.rows.iter().all(|(_, r)| r.answer == Answer::Yes));
    }
    let p = GSimplicialSet::trivial(g.clone(), pt());
    let to_point = models::collapse_to_point(y.space(), &pt()).unwrap();
    let v = g_equivalence(&y, &p, &to_point, Notion::Homology, &f2(), &caps).unwrap();
    assert_eq!(v.rows[0].1.answer, Answer::No);
    assert_eq!(v.rows[1].1.answer, Answer::Yes);
    assert_eq!(v.aggregate, Answer::No);
    // Free wedge C₂/e ⊗ S¹ folded onto the orbit wedge C₂/C₂ ⊗ S¹.
    let s1 = GSimplicialSet::trivial(g.clone(), arc(models::s1()));
    let fold =
        SimplicialMap::from_names(y.space().clone(), s1.space().clone(), &[("a", "", "a"), ("b", "", "a")]).unwrap();
    let v = g_equivalence(&y, &s1, &fold, Notion::Homology, &Field::rational(), &caps).unwrap();
    assert_eq!(v.rows[1].1.answer, Answer::No);
    assert!(v.rows[1].1.evidence[0].contains("H_1 dimensions 0 vs 1"));
    assert_eq!(v.aggregate, Answer::No);
    let not_equivariant = SimplicialMap::from_names(
        y.space().clone(),
        s1.space().clone(),
        &[("a", "", "a"), ("b", "s0", "*")],
    )
    .unwrap();
    assert!(g_equivalence(&y, &s1, &not_equivariant, Notion::Homology, &f2(), &caps).is_err());
}

/// At the trivial subgroup the G-oracle is the plain oracle on the underlying map.
#[test]
fn trivial_subgroup_matches_plain_oracle() {
    let g = c2();
    let caps = Caps::default();
    let y = swap_wedge(&g);
    let maps = [
        (GSimplicialSet::trivial(g.clone(), pt()), models::collapse_to_point(y.space(), &pt()).unwrap()),
        (
            GSimplicialSet::trivial(g.clone(), arc(models::s1())),
            SimplicialMap::from_names(y.space().clone(), arc(models::s1()), &[("a", "", "a"), ("b", "", "a")]).unwrap(),
        ),
        (y.clone(), SimplicialMap::identity(y.space().clone())),
    ];
    for (tgt, f) in maps {
        let f = SimplicialMap::new(y.space().clone(), tgt.space().clone(), f.images().to_vec()).unwrap();
        for notion in [Notion::Categorical, Notion::Pi1, Notion::Homology] {
            for field in [Field::rational(), f2()] {
                let table = g_equivalence(&y, &tgt, &f, notion, &field, &caps).unwrap();
                let e = subgroups(&g).unwrap().into_iter().position(|h| h.order() == 1).unwrap();
                let plain = oracle(notion, &f, &field, &caps).unwrap();
                assert_eq!(table.rows[e].1.answer, plain.answer);
                let fe = fixed_points(&y, &subgroups(&g).unwrap()[e]);
                let ft = fixed_points(&tgt, &subgroups(&g).unwrap()[e]);
                assert_eq!(restrict_to_fixed(&f, &fe, &ft).unwrap().images(), f.images());
            }
        }
    }
}
