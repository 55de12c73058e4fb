//! Executable numerics for Cauchy-type functional equations: the Goldie equation and
//! inequality, the Beurling (Golab-Schinzel) equation and its generalizations.
//!
//! The crate provides closed-form solution families, residual evaluation over real grids
//! and truncated dense subgroups, Beck sequences, parameter extraction, and
//! theorem-level property checks.

pub mod additive;
pub mod beck;
pub mod domain;
pub mod error;
pub mod extract;
pub mod family;
pub mod func;
pub mod kernel;
pub mod residuals;
pub mod sampled;
pub mod verify;

pub use additive::{make_pathological_additive, ExactAdditiveOnZSqrt2};
pub use beck::{beck_closed_form, beck_iterate, delta_gap_bound, jump_index, BeckSequence};
pub use domain::{domain_points, DenseSubgroupSpec, DomainPoint, DomainSpec, QuadSurd};
pub use error::{Error, Result};
pub use extract::{
    classify, extract_kappa, fit_exponential_rho, quadrature_h, riemann_gamma, slope_at_zero,
    ClassificationResult,
};
pub use family::{eval_family, SolutionFamily};
pub use func::Evaluable;
pub use kernel::{eval_hrho, AffineSolution, ExpAuxiliary, RhoKernel};
pub use residuals::{equation_residual, EquationKind, ResidualOptions, ResidualReport};
pub use sampled::SampledFunction;
pub use verify::{TheoremReport, TheoremStatus};
