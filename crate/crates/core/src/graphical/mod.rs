//! Composite conditional likelihoods for graphical models.
//!
//! Each loss sums, over the nodes, the conditional likelihood of one variable
//! given the rest. Symmetric interactions are stored once (upper triangle,
//! see [`PairIndex`]) and their gradients collect both conditional terms.

mod ggm;
mod ising;
mod pairs;
mod potts;

pub use ggm::{check_symmetric, ggm_init, ggm_loss_grad, GgmModel, PrecisionParams};
pub use ising::{
    ising_intercept_init, ising_loss_grad, recode_path, Coding, IsingModel, IsingParams,
};
pub use pairs::PairIndex;
pub use potts::{
    potts_groups, potts_intercept_init, potts_loss_grad, PottsLayout, PottsModel, PottsParams,
};
