//! Exact computations with equivariant simplicial sets and simplicial coalgebras.

pub mod acceptance;
pub mod coalgebra;
pub mod dgcobar;
pub mod error;
pub mod equivariant;
pub mod field;
pub mod galois;
pub mod group;
pub mod h0;
pub mod io;
pub mod linalg;
pub mod models;
pub mod oracles;
pub mod pi1;
pub mod poly;
pub mod scoalg;
pub mod simplicial;
pub mod smith;

pub use error::{Error, Result};
pub use field::{Elem, Embedding, Field, FieldElem, FieldKind, FieldOp, FieldSpec};
pub use linalg::{Matrix, Rref, Subspace, Vector};
pub use poly::{poly_factor, poly_roots, Factorization, Poly};
pub use smith::{smith_normal_form, SmithForm};
pub use simplicial::{
    find_isomorphism, isomorphic, pushout, wedge, DegeneracyWord, NdRef, Pushout, Simplex, SimplexRef, SimplicialMap,
    SimplicialSet, Wedge,
};
pub use group::{subgroups, FiniteGroup, GSet, Subgroup};
pub use equivariant::{
    cell_diagram, check_cellularity, elmendorf_unit_check, fixed_points, phi, tensor_set, theta, Cell,
    CellularityEntry, GSimplicialSet, OrbitCategory, OrbitDiagram,
};
pub use coalgebra::{grouplikes, grouplikes_with, Coalgebra, GroupLikeMethod, GroupLikes};
pub use scoalg::{chains, chains_equivariant, points, GSimplicialCoalgebra, Points, SimplicialCoalgebra};
pub use dgcobar::{cobar, normalized_chains_of, ChainComplex, DgCoalgebra, FreeDgAlgebraTruncated};
pub use h0::{H0Presentation, RewriteSystem};
pub use pi1::{certify, todd_coxeter, universal_cover, CosetTable, CoverData, Finiteness, GroupPresentation};
pub use oracles::{g_equivalence, oracle, Answer, Caps, GVerdict, Notion, Verdict};
pub use galois::{FieldExtension, SemilinearGSet};
