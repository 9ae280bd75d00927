//! Proximal oracle for the group norm by Newton's method.

use ndarray::{Array1, Array2};

/// `argmin_u ½‖u − z‖² + ‖u‖₂` by damped Newton iteration on the smooth
/// objective away from the origin; the origin is optimal iff `‖z‖ ≤ 1`.
pub fn group_prox_newton(z: &[f64]) -> Vec<f64> {
    let m = z.len();
    let z = Array1::from(z.to_vec());
    let obj = |u: &Array1<f64>| {
        let d = u - &z;
        0.5 * d.dot(&d) + u.dot(u).sqrt()
    };
    if z.dot(&z).sqrt() <= 1.0 {
        return vec![0.0; m];
    }
    let mut u = z.clone();
    for _ in 0..100 {
        let r = u.dot(&u).sqrt();
        let grad = &u - &z + &(&u / r);
        if grad.iter().all(|g| g.abs() < 1e-15) {
            break;
        }
        let mut h = Array2::<f64>::eye(m) * (1.0 + 1.0 / r);
        for a in 0..m {
            for b in 0..m {
                h[[a, b]] -= u[a] * u[b] / (r * r * r);
            }
        }
        let step = solve(h, grad);
        let f0 = obj(&u);
        let mut s = 1.0;
        loop {
            let cand = &u - &(&step * s);
            if obj(&cand) <= f0 || s < 1e-12 {
                u = cand;
                break;
            }
            s *= 0.5;
        }
    }
    u.to_vec()
}

fn solve(mut a: Array2<f64>, mut b: Array1<f64>) -> Array1<f64> {
    let n = b.len();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[[i, k]].abs().total_cmp(&a[[j, k]].abs())).unwrap();
        for c in 0..n {
            a.swap([k, c], [piv, c]);
        }
        b.swap(k, piv);
        for i in (k + 1)..n {
            let f = a[[i, k]] / a[[k, k]];
            for c in k..n {
                a[[i, c]] -= f * a[[k, c]];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = Array1::zeros(n);
    for k in (0..n).rev() {
        let s: f64 = ((k + 1)..n).map(|c| a[[k, c]] * x[c]).sum();
        x[k] = (b[k] - s) / a[[k, k]];
    }
    x
}
