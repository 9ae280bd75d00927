#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Array2<f64> {
    Array2::from_shape_simple_fn((n, p), || rng.sample(StandardNormal))
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Array1<f64> {
    Array1::from_shape_simple_fn(n, || rng.sample(StandardNormal))
}

pub fn binary_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Array2<f64> {
    loop {
        let x = Array2::from_shape_simple_fn((n, p), || if rng.random::<bool>() { 1.0 } else { 0.0 });
        let ok = x.columns().into_iter().all(|c| {
            let s = c.sum();
            s > 0.0 && s < n as f64
        });
        if ok {
            return x;
        }
    }
}

/// Central-difference gradient of `f` at `x`.
pub fn fd_gradient(f: impl Fn(&Array1<f64>) -> f64, x: &Array1<f64>, h: f64) -> Array1<f64> {
    let mut g = Array1::zeros(x.len());
    let mut xp = x.clone();
    for i in 0..x.len() {
        let orig = xp[i];
        let step = h * orig.abs().max(1.0);
        xp[i] = orig + step;
        let fp = f(&xp);
        xp[i] = orig - step;
        let fm = f(&xp);
        xp[i] = orig;
        g[i] = (fp - fm) / (2.0 * step);
    }
    g
}

/// `‖a − b‖∞ / max(‖b‖∞, 1)`.
pub fn rel_err(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    let d = a.iter().zip(b.iter()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let s = b.iter().fold(1.0f64, |m, y| m.max(y.abs()));
    d / s
}

pub fn to_na(x: ArrayView2<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(x.nrows(), x.ncols(), |i, j| x[[i, j]])
}

/// Least squares via the normal equations.
pub fn least_squares(x: ArrayView2<f64>, y: ArrayView1<f64>) -> Array1<f64> {
    let xm = to_na(x);
    let yv = DVector::from_iterator(y.len(), y.iter().copied());
    let g = xm.transpose() * &xm;
    let b = xm.transpose() * yv;
    let sol = g.cholesky().expect("full column rank").solve(&b);
    Array1::from_iter(sol.iter().copied())
}

/// Coordinate-descent LASSO for `(1/2n)‖y − Xθ‖² + λ‖θ‖₁`, no intercept.
pub fn lasso_cd(x: ArrayView2<f64>, y: ArrayView1<f64>, lambda: f64, warm: Option<&Array1<f64>>) -> Array1<f64> {
    let (n, p) = x.dim();
    let nf = n as f64;
    let col_sq: Vec<f64> = (0..p).map(|j| x.column(j).dot(&x.column(j)) / nf).collect();
    let mut theta = warm.cloned().unwrap_or_else(|| Array1::zeros(p));
    let mut r = &y - &x.dot(&theta);
    for _ in 0..100_000 {
        let mut delta = 0.0f64;
        for j in 0..p {
            let xj = x.column(j);
            let rho = xj.dot(&r) / nf + col_sq[j] * theta[j];
            let new = soft(rho, lambda) / col_sq[j];
            let d = new - theta[j];
            if d != 0.0 {
                r.scaled_add(-d, &xj);
                theta[j] = new;
                delta = delta.max(d.abs());
            }
        }
        if delta < 1e-15 {
            break;
        }
    }
    theta
}

pub fn soft(v: f64, l: f64) -> f64 {
    if v > l {
        v - l
    } else if v < -l {
        v + l
    } else {
        0.0
    }
}

pub mod losses;
pub mod prox;
