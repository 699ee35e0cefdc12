//! Quadratic B-spline Galerkin discretization on a square.

mod assembly;
mod bspline;
mod projection;
mod quadrature;
mod space;

pub use assembly::{
    apply_dirichlet_rows, assemble_residual, split_fields, Drugs, JacobianAssembler, Source, StageValues, TangentScaling,
};
#[allow(unused_imports)]
pub(crate) use assembly::accumulate_residual;
pub use bspline::KnotVector;
pub use projection::{l2_project, load_vector, MassSolver};
pub use quadrature::{GaussRule, QuadratureRule};
pub use space::{BasisValues, SplineSpace2D, DEGREE, LOCAL, QUAD, QUAD_1D};
