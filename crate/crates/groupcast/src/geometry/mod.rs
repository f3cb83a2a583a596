//! Exact rational linear algebra on H-polytopes: Fourier-Motzkin projection,
//! redundancy removal backed by exact LP, containment tests, and vertex
//! enumeration. Every operation is deterministic; rerunning a pipeline on the
//! same input yields bit-identical output.

mod fme;
mod ineq;
mod lp;
mod reduce;
mod vertices;

pub use fme::fme_eliminate;
pub use ineq::{HPolytope, LinearInequality};
pub use lp::{solve_lp, LpOutcome};
pub use reduce::{contains, equal_point_sets, is_redundant, minimize, Containment};
pub use vertices::{enumerate_vertices, MAX_VERTEX_DIM};
