use ndarray::{ArrayView1, ArrayView2};

use crate::bregman::{run_lb, PathConfig};
use crate::error::{Error, Result};
use crate::glm::LinearModel;
use crate::groups::GroupIndex;
use crate::iss::{iss_path, IssOptions};
use crate::linalg::gram_spectral_norm;
use crate::scalar::Scalar;

/// Distances between LB paths and the ISS path for a sequence of damping
/// factors.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    pub kappas: Vec<T>,
    pub alphas: Vec<T>,
    /// `max_{t ∈ tlist} ‖θ_LB(t) − θ_ISS(t)‖∞` per κ.
    pub distances: Vec<T>,
    /// Distances never increase by more than `slack` from one κ to the next.
    pub monotone: bool,
}

/// Runs LB without intercept at each κ with `α = 1/(κ‖S_n‖)` and compares it
/// with the ISS path on `tlist`.
pub fn lb_iss_convergence_check<T: Scalar>(
    x: ArrayView2<T>,
    y: ArrayView1<T>,
    kappas: &[T],
    tlist: &[T],
    slack: T,
) -> Result<ConvergenceReport<T>> {
    if kappas.is_empty() {
        return Err(Error::InvalidArgument("no damping factors given".into()));
    }
    let iss = iss_path(x, y, &IssOptions::default())?;
    let model = LinearModel::new(x.to_owned(), y.to_owned(), false)?;
    let groups = GroupIndex::singletons(x.ncols());
    let sn = gram_spectral_norm(x, false);
    let mut alphas = Vec::with_capacity(kappas.len());
    let mut distances = Vec::with_capacity(kappas.len());
    for &kappa in kappas {
        let alpha = T::one() / (kappa * sn);
        let config = PathConfig::new(kappa)
            .with_alpha(alpha)
            .with_tlist(tlist.to_vec());
        let lb = run_lb(&model, &groups, &config)?;
        let mut d = T::zero();
        for (t, th) in lb.times.iter().zip(lb.theta.iter()) {
            let diff = th - &iss.theta_at(*t);
            d = diff.iter().fold(d, |m, v| m.max(v.abs()));
        }
        alphas.push(alpha);
        distances.push(d);
    }
    let monotone = distances.windows(2).all(|w| w[1] <= w[0] + slack);
    Ok(ConvergenceReport {
        kappas: kappas.to_vec(),
        alphas,
        distances,
        monotone,
    })
}
