use ndarray::Array1;

use crate::bregman::shrinkage::shrink_into;
use crate::error::{Error, Result};
use crate::groups::GroupIndex;
use crate::scalar::Scalar;

/// One iterate of the Linearized Bregman recursion.
///
/// `theta == kappa * Shrinkage(z)` holds for every state produced by the engine.
#[derive(Debug, Clone, PartialEq)]
pub struct BregmanState<T> {
    pub k: usize,
    pub t: T,
    pub z: Array1<T>,
    pub theta: Array1<T>,
    pub theta0: Array1<T>,
}

/// Snapshots of a regularization path at the requested times.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPath<T> {
    pub times: Vec<T>,
    pub theta0: Vec<Array1<T>>,
    pub theta: Vec<Array1<T>>,
    /// Loss at each snapshot; empty when the path was built without a model.
    pub loss: Vec<T>,
    /// First entry time: the iteration starts here.
    pub t0: T,
    pub kappa: T,
    pub alpha: T,
    /// Number of iterations performed.
    pub iterations: usize,
    /// Per group, the time of the first iterate at which it is nonzero.
    pub entry_times: Vec<Option<T>>,
    pub final_state: BregmanState<T>,
}

impl<T: Scalar> SolutionPath<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Groups ordered by entry time; groups that never entered are omitted.
    pub fn entry_order(&self) -> Vec<usize> {
        let mut entered: Vec<(usize, T)> = self
            .entry_times
            .iter()
            .enumerate()
            .filter_map(|(g, t)| t.map(|t| (g, t)))
            .collect();
        entered.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
        entered.into_iter().map(|(g, _)| g).collect()
    }

    /// `‖θ(t)‖₁` at each snapshot.
    pub fn l1_norms(&self) -> Vec<T> {
        self.theta
            .iter()
            .map(|th| th.iter().map(|v| v.abs()).sum())
            .collect()
    }

    /// Indices of nonzero penalized coefficients at snapshot `i`.
    pub fn support(&self, i: usize) -> Vec<usize> {
        self.theta[i]
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != T::zero())
            .map(|(j, _)| j)
            .collect()
    }
}

/// Value of the path at time `t` between two consecutive iterates: linear in
/// `(z, θ₀)`, then shrunk. Grid hits return the stored iterate.
pub(crate) fn blend<T: Scalar>(
    prev: &BregmanState<T>,
    next: &BregmanState<T>,
    t: T,
    kappa: T,
    groups: &GroupIndex,
) -> (Array1<T>, Array1<T>) {
    if t == next.t {
        return (next.theta0.clone(), next.theta.clone());
    }
    if t == prev.t {
        return (prev.theta0.clone(), prev.theta.clone());
    }
    let w = (t - prev.t) / (next.t - prev.t);
    let v = T::one() - w;
    let z = &prev.z * v + &next.z * w;
    let theta0 = &prev.theta0 * v + &next.theta0 * w;
    let mut theta = Array1::zeros(z.len());
    shrink_into(z.view(), groups, kappa, theta.view_mut());
    (theta0, theta)
}

pub(crate) fn first_nonzero_times<T: Scalar>(
    iterates: &[BregmanState<T>],
    groups: &GroupIndex,
) -> Vec<Option<T>> {
    groups
        .iter()
        .map(|m| {
            iterates
                .iter()
                .find(|s| m.iter().any(|&j| s.theta[j] != T::zero()))
                .map(|s| s.t)
        })
        .collect()
}

/// Evaluates a stored sequence of iterates at the times in `tlist`.
///
/// Every time must lie within `[iterates[0].t, iterates.last().t]`.
pub fn interpolate_path<T: Scalar>(
    iterates: &[BregmanState<T>],
    tlist: &[T],
    kappa: T,
    groups: &GroupIndex,
) -> Result<SolutionPath<T>> {
    let (first, last) = match (iterates.first(), iterates.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::InvalidArgument("no iterates to interpolate".into())),
    };
    let mut times = Vec::with_capacity(tlist.len());
    let mut theta0 = Vec::with_capacity(tlist.len());
    let mut theta = Vec::with_capacity(tlist.len());
    for &t in tlist {
        if !(t >= first.t && t <= last.t) {
            return Err(Error::OutOfRange {
                t: t.as_f64(),
                lo: first.t.as_f64(),
                hi: last.t.as_f64(),
            });
        }
        // first iterate with time >= t
        let hi = iterates.partition_point(|s| s.t < t);
        let lo = hi.saturating_sub(1);
        let (th0, th) = blend(&iterates[lo], &iterates[hi], t, kappa, groups);
        times.push(t);
        theta0.push(th0);
        theta.push(th);
    }
    let alpha = if iterates.len() > 1 {
        iterates[1].t - iterates[0].t
    } else {
        T::zero()
    };
    Ok(SolutionPath {
        times,
        theta0,
        theta,
        loss: Vec::new(),
        t0: first.t,
        kappa,
        alpha,
        iterations: iterates.len() - 1,
        entry_times: first_nonzero_times(iterates, groups),
        final_state: last.clone(),
    })
}
