//! Sign-constrained least squares in Gram form (Lawson–Hanson).

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::linalg::{cholesky, cholesky_solve};
use crate::scalar::Scalar;

/// Failure of the passive-set factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Singular {
    pub passive: usize,
}

/// Minimizes `½ wᵀGw − cᵀw` subject to `w ≥ 0`, starting from the feasible
/// point `w`. Returns the solution; the gradient of the objective is
/// nonnegative within `tol` on the zero set.
pub(crate) fn nnls_gram<T: Scalar>(
    g: ArrayView2<T>,
    c: ArrayView1<T>,
    mut w: Array1<T>,
    tol: T,
) -> Result<Array1<T>, Singular> {
    let m = c.len();
    let mut passive: Vec<bool> = w.iter().map(|&v| v > T::zero()).collect();
    w.iter_mut().for_each(|v| *v = v.max(T::zero()));
    let max_outer = 3 * m + 20;
    let mut first = true;
    for _ in 0..max_outer {
        if !first {
            let grad = &c - &g.dot(&w);
            let mut best = None;
            let mut best_val = tol;
            for j in 0..m {
                if !passive[j] && grad[j] > best_val {
                    best_val = grad[j];
                    best = Some(j);
                }
            }
            match best {
                Some(j) => passive[j] = true,
                None => return Ok(w),
            }
        }
        first = false;
        // inner loop: keep the passive solution feasible
        loop {
            let idx: Vec<usize> = (0..m).filter(|&j| passive[j]).collect();
            if idx.is_empty() {
                break;
            }
            let u = solve_sub(g, c, &idx)?;
            if u.iter().all(|&v| v > T::zero()) {
                w.fill(T::zero());
                for (a, &j) in idx.iter().enumerate() {
                    w[j] = u[a];
                }
                break;
            }
            let mut step = T::infinity();
            let mut blocking = idx[0];
            for (a, &j) in idx.iter().enumerate() {
                if u[a] <= T::zero() {
                    let s = w[j] / (w[j] - u[a]);
                    if s < step {
                        step = s;
                        blocking = j;
                    }
                }
            }
            for (a, &j) in idx.iter().enumerate() {
                let wj = w[j];
                w[j] = wj + step * (u[a] - wj);
                if j == blocking || w[j] <= T::zero() {
                    w[j] = T::zero();
                    passive[j] = false;
                }
            }
        }
    }
    Ok(w)
}

fn solve_sub<T: Scalar>(g: ArrayView2<T>, c: ArrayView1<T>, idx: &[usize]) -> Result<Array1<T>, Singular> {
    let k = idx.len();
    let sub = Array2::from_shape_fn((k, k), |(a, b)| g[[idx[a], idx[b]]]);
    let rhs = Array1::from_shape_fn(k, |a| c[idx[a]]);
    let l = cholesky(sub.view(), T::lit(1e-12)).ok_or(Singular { passive: k })?;
    Ok(cholesky_solve(l.view(), rhs.view()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn unconstrained_interior_solution() {
        let g: Array2<f64> = array![[2.0, 0.5], [0.5, 1.0]];
        let c = array![1.0, 1.0];
        let w = nnls_gram(g.view(), c.view(), Array1::zeros(2), 1e-12).unwrap();
        let r = &c - &g.dot(&w);
        assert!(r.iter().all(|v| v.abs() < 1e-12));
        assert!(w.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn active_constraint() {
        let g = array![[1.0, 0.0], [0.0, 1.0]];
        let c = array![2.0, -1.0];
        let w = nnls_gram(g.view(), c.view(), array![0.0, 3.0], 1e-12).unwrap();
        assert_eq!(w, array![2.0, 0.0]);
    }
}
