//! Benchmark inputs shared by the criterion harness.

use std::sync::Arc;

use equicobar::{models, FiniteGroup, SimplicialSet};

/// Wedge of `k` tori.
pub fn torus_wedge(k: usize) -> Arc<SimplicialSet> {
    let copies: Vec<Arc<SimplicialSet>> = (0..k.max(1)).map(|_| Arc::new(models::t2())).collect();
    equicobar::wedge(&copies).expect("wedge of reduced spaces").space
}

pub fn s2_with_bound(bound: usize) -> Arc<SimplicialSet> {
    Arc::new(models::s2().with_dimension_bound(bound).expect("bound above dimension"))
}

pub fn c2() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2))
}
