use std::collections::HashSet;

use crate::bregman::SolutionPath;
use crate::error::{Error, Result};
use crate::graphical::PairIndex;
use crate::scalar::Scalar;

/// True- and false-positive edge rates along a path.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryCurve<T> {
    pub times: Vec<T>,
    pub tp_rate: Vec<f64>,
    pub fp_rate: Vec<f64>,
    pub true_edges: Vec<(usize, usize)>,
}

impl<T: Scalar> RecoveryCurve<T> {
    fn exact(&self, i: usize) -> bool {
        self.tp_rate[i] == 1.0 && self.fp_rate[i] == 0.0
    }

    /// Longest run of consecutive path points with TP rate 1 and FP rate 0,
    /// as `(first time, last time)`. A run of a single point gives `t₁ = t₂`.
    pub fn exact_recovery_interval(&self) -> Option<(T, T)> {
        let mut best: Option<(usize, usize)> = None;
        let mut i = 0;
        while i < self.times.len() {
            if !self.exact(i) {
                i += 1;
                continue;
            }
            let start = i;
            while i + 1 < self.times.len() && self.exact(i + 1) {
                i += 1;
            }
            if best.is_none_or(|(a, b)| i - start > b - a) {
                best = Some((start, i));
            }
            i += 1;
        }
        best.map(|(a, b)| (self.times[a], self.times[b]))
    }
}

/// Scores the estimated edge sets of a path whose penalized coefficients are
/// the upper-triangle interactions of a `p`-node graph.
pub fn support_recovery_curve<T: Scalar>(
    path: &SolutionPath<T>,
    p: usize,
    true_edges: &[(usize, usize)],
) -> Result<RecoveryCurve<T>> {
    let pairs = PairIndex::new(p);
    let mut truth = HashSet::new();
    for &(a, b) in true_edges {
        if a == b || a >= p || b >= p {
            return Err(Error::InvalidArgument(format!("invalid edge ({a}, {b}) for {p} nodes")));
        }
        truth.insert(pairs.index(a, b));
    }
    let n_true = truth.len();
    let n_false = pairs.len() - n_true;
    let mut tp_rate = Vec::with_capacity(path.len());
    let mut fp_rate = Vec::with_capacity(path.len());
    for th in &path.theta {
        if th.len() != pairs.len() {
            return Err(Error::DimensionMismatch {
                what: "interaction vector",
                expected: pairs.len(),
                found: th.len(),
            });
        }
        let mut tp = 0usize;
        let mut fp = 0usize;
        for (i, v) in th.iter().enumerate() {
            if *v != T::zero() {
                if truth.contains(&i) {
                    tp += 1;
                } else {
                    fp += 1;
                }
            }
        }
        tp_rate.push(if n_true == 0 { 1.0 } else { tp as f64 / n_true as f64 });
        fp_rate.push(if n_false == 0 { 0.0 } else { fp as f64 / n_false as f64 });
    }
    Ok(RecoveryCurve {
        times: path.times.clone(),
        tp_rate,
        fp_rate,
        true_edges: true_edges.to_vec(),
    })
}
