//! Sparse regularization paths by Linearized Bregman iteration.
//!
//! The crate fits linear, logistic, multinomial, Gaussian graphical, Ising and
//! Potts models along a path of increasingly dense estimates, indexed by time
//! `t`. All solvers are generic over the scalar type; the `*64` aliases below
//! fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bregman;
pub mod error;
pub mod glm;
pub mod graphical;
pub mod groups;
pub mod iss;
pub mod linalg;
pub mod scalar;
pub mod simulate;

pub use bregman::{
    default_alpha, first_entry_time, interpolate_path, resolve_tlist, run_lb, shrinkage,
    BregmanState, EntryPoint, LinearizedBregman, LossModel, PathConfig, SolutionPath, StepSize,
};
pub use error::{Error, Result};
pub use groups::GroupIndex;
pub use iss::{iss_path, IssOptions, IssPath};
pub use scalar::Scalar;

/// Model families with a path solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Gaussian,
    Binomial,
    Multinomial,
    Ggm,
    Ising,
    Potts,
}

pub type PathConfig64 = PathConfig<f64>;
pub type SolutionPath64 = SolutionPath<f64>;
pub type BregmanState64 = BregmanState<f64>;
pub type IssPath64 = iss::IssPath<f64>;
pub type RegressionData64 = glm::RegressionData<f64>;
pub type SolutionPath32 = SolutionPath<f32>;
pub type PathConfig32 = PathConfig<f32>;
