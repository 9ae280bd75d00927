//! Small dense kernels: Gram norms, Cholesky solves, covariance.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::scalar::Scalar;

const POWER_MAX_ITER: usize = 20_000;

/// Deterministic start vector with no structured zeros.
fn start_vector<T: Scalar>(dim: usize) -> Array1<T> {
    let v = Array1::from_shape_fn(dim, |i| T::lit(1.0 + ((i * 7919) % 13) as f64 / 13.0));
    let nrm = v.dot(&v).sqrt();
    v / nrm
}

/// Largest eigenvalue of a symmetric positive semidefinite operator given by
/// its action `apply(v, out)`, estimated by power iteration with a Rayleigh
/// quotient stopping rule.
pub fn power_iteration<T, F>(dim: usize, mut apply: F) -> T
where
    T: Scalar,
    F: FnMut(ArrayView1<T>) -> Array1<T>,
{
    if dim == 0 {
        return T::zero();
    }
    let tol = T::lit(1e-14);
    let mut v = start_vector::<T>(dim);
    let mut lambda = T::zero();
    for _ in 0..POWER_MAX_ITER {
        let w = apply(v.view());
        let next = v.dot(&w);
        let nrm = w.dot(&w).sqrt();
        if nrm == T::zero() {
            return T::zero();
        }
        v = w / nrm;
        if (next - lambda).abs() <= tol * next.abs() {
            return next;
        }
        lambda = next;
    }
    lambda
}

/// Spectral norm of a symmetric PSD matrix.
pub fn sym_spectral_norm<T: Scalar>(s: ArrayView2<T>) -> T {
    power_iteration(s.nrows(), |v| s.dot(&v))
}

/// Spectral norm of `(1/n) X̃ᵀX̃` where `X̃` is `X` with an optional leading
/// column of ones, computed without forming the Gram matrix.
pub fn gram_spectral_norm<T: Scalar>(x: ArrayView2<T>, with_ones: bool) -> T {
    let n = T::count(x.nrows().max(1));
    let p = x.ncols();
    let off = usize::from(with_ones);
    power_iteration(p + off, |v| {
        let mut xv = x.dot(&v.slice(ndarray::s![off..]));
        if with_ones {
            xv.mapv_inplace(|e| e + v[0]);
        }
        let mut out = Array1::zeros(p + off);
        if with_ones {
            out[0] = xv.sum() / n;
        }
        out.slice_mut(ndarray::s![off..])
            .assign(&(x.t().dot(&xv) / n));
        out
    })
}

/// Lower Cholesky factor of a symmetric positive definite matrix, or `None`
/// when a pivot falls below `rel_tol` times the largest diagonal entry.
pub fn cholesky<T: Scalar>(a: ArrayView2<T>, rel_tol: T) -> Option<Array2<T>> {
    let n = a.nrows();
    let scale = a.diag().iter().fold(T::zero(), |m, &d| m.max(d.abs()));
    let floor = rel_tol * scale.max(T::min_positive_value());
    let mut l = Array2::<T>::zeros((n, n));
    for j in 0..n {
        let mut d = a[[j, j]];
        for k in 0..j {
            d -= l[[j, k]] * l[[j, k]];
        }
        if !(d > floor) {
            return None;
        }
        let djj = d.sqrt();
        l[[j, j]] = djj;
        for i in (j + 1)..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]];
            }
            l[[i, j]] = s / djj;
        }
    }
    Some(l)
}

/// Solves `L Lᵀ x = b` given the lower factor.
pub fn cholesky_solve<T: Scalar>(l: ArrayView2<T>, b: ArrayView1<T>) -> Array1<T> {
    let n = l.nrows();
    let mut y = b.to_owned();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s -= l[[i, k]] * y[k];
        }
        y[i] = s / l[[i, i]];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[[k, i]] * y[k];
        }
        y[i] = s / l[[i, i]];
    }
    y
}

/// Column means.
pub fn column_means<T: Scalar>(x: ArrayView2<T>) -> Array1<T> {
    let n = T::count(x.nrows().max(1));
    x.sum_axis(Axis(0)) / n
}

/// `(1/n) X_cᵀ X_c` for column-centered `X_c`.
pub fn covariance<T: Scalar>(x: ArrayView2<T>) -> Array2<T> {
    let n = T::count(x.nrows().max(1));
    let mu = column_means(x);
    let xc = &x - &mu.insert_axis(Axis(0));
    xc.t().dot(&xc) / n
}

pub fn max_abs<T: Scalar>(v: ArrayView1<T>) -> T {
    v.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}
