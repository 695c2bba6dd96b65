use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use equicobar::dgcobar::normalized_chains_of;
use equicobar::galois::{galois_fixed_coalgebra, FieldExtension, SemilinearGSet};
use equicobar::pi1::edge_path_presentation;
use equicobar::{chains_equivariant, cobar, grouplikes_with, models, todd_coxeter, Field, GroupLikeMethod};
use equicobar_bench::{c2, s2_with_bound, torus_wedge};

fn homology(c: &mut Criterion) {
    let f2 = Field::parse("F2").unwrap();
    let mut g = c.benchmark_group("normalized_chains_homology");
    for k in [1, 2, 4] {
        let x = torus_wedge(k);
        g.bench_with_input(BenchmarkId::from_parameter(k), &x, |b, x| {
            b.iter(|| normalized_chains_of(x, &f2).unwrap().complex().homology_dims())
        });
    }
    g.finish();
}

fn cobar_s2(c: &mut Criterion) {
    let x = s2_with_bound(6);
    let mut g = c.benchmark_group("cobar_s2");
    for field in ["F2", "Q"] {
        let f = Field::parse(field).unwrap();
        let dg = normalized_chains_of(&x, &f).unwrap();
        g.bench_function(field, |b| b.iter(|| cobar(&dg, 5, 5).unwrap().homology(4).unwrap().dim));
    }
    g.finish();
}

fn coset_enumeration(c: &mut Criterion) {
    let p = edge_path_presentation(&models::rp2()).unwrap();
    c.bench_function("todd_coxeter_rp2", |b| b.iter(|| todd_coxeter(&p, 1000).unwrap().order));
}

fn grouplike_search(c: &mut Criterion) {
    let f2 = Field::parse("F2").unwrap();
    let chains = equicobar::chains(&Arc::new(models::t2()), &f2).unwrap();
    let top = chains.degree(2).clone();
    c.bench_function("grouplikes_bruteforce_t2_deg2", |b| {
        b.iter(|| grouplikes_with(&top, GroupLikeMethod::BruteForce).unwrap().elements.len())
    });
}

fn equivariant_chains(c: &mut Criterion) {
    let f3 = Field::parse("F3").unwrap();
    let y = models::swap_wedge(&c2()).unwrap();
    c.bench_function("chains_equivariant_swap_wedge", |b| b.iter(|| chains_equivariant(&y, &f3).unwrap().coalgebra().dims()));
}

fn galois_forms(c: &mut Criterion) {
    let e = FieldExtension::new(2, 1, 2).unwrap();
    let mut g = c.benchmark_group("galois_fixed_coalgebra");
    for pairs in [1, 3, 6] {
        let s = SemilinearGSet::from_orbit_sizes(&vec![2; pairs], 2).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(2 * pairs), &s, |b, s| {
            b.iter(|| galois_fixed_coalgebra(s, &e).unwrap().coalgebra.dim())
        });
    }
    g.finish();
}

criterion_group!(benches, homology, cobar_s2, coset_enumeration, grouplike_search, equivariant_chains, galois_forms);
criterion_main!(benches);
