//! The Linearized Bregman path engine.
//!
//! Given a loss `L(θ₀, θ)` and a partition of `θ` into groups, the iteration
//!
//! ```text
//! z     ← z − α ∇_θ L(θ₀, θ)
//! θ     ← κ · Shrinkage(z)
//! θ₀    ← θ₀ − κα ∇_{θ₀} L(θ₀, θ)
//! t     ← t + α
//! ```
//!
//! traces a path from the intercept-only model to dense fits. The engine
//! starts at the first entry time and samples the path at a list of times by
//! interpolating `(z, θ₀)` between iterates.

mod config;
mod engine;
mod model;
mod path;
mod shrinkage;

pub use config::{resolve_tlist, PathConfig, StepSize};
pub use engine::{default_alpha, first_entry_time, run_lb, EntryPoint, LinearizedBregman};
pub use model::{gradient_of, LossModel};
pub use path::{interpolate_path, BregmanState, SolutionPath};
pub use shrinkage::{group_norms, shrinkage};
