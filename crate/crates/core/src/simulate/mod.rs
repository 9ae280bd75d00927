//! Synthetic data: Ising Gibbs sampling, sparse linear designs and
//! support-recovery scoring.

mod gibbs;
mod linear;
mod recovery;

pub use gibbs::{gibbs_sample, gibbs_sample_ising, grid_edges, GridIsingSpec, IsingGraph};
pub use linear::{gen_linear_data, LinearInstance};
pub use recovery::{support_recovery_curve, RecoveryCurve};
