use ndarray::{Array1, Array2};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A sparse linear regression instance with known coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearInstance<T> {
    pub x: Array2<T>,
    pub y: Array1<T>,
    pub theta: Array1<T>,
}

/// Standard Gaussian design, `sparsity` coefficients of ±1 on a random
/// support, and Gaussian noise with variance `sparsity / snr` (the signal
/// variance over the design distribution). `snr = ∞` gives `y = Xθ*`.
pub fn gen_linear_data<T: Scalar>(
    n: usize,
    p: usize,
    sparsity: usize,
    snr: f64,
    seed: u64,
) -> Result<LinearInstance<T>> {
    if sparsity > p {
        return Err(Error::InvalidArgument(format!(
            "sparsity {sparsity} exceeds the number of features {p}"
        )));
    }
    if !(snr > 0.0) {
        return Err(Error::InvalidArgument(format!("snr must be positive, got {snr}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Array2::from_shape_simple_fn((n, p), || T::lit(rng.sample::<f64, _>(StandardNormal)));
    let mut theta = Array1::zeros(p);
    let mut support = sample(&mut rng, p, sparsity).into_vec();
    support.sort_unstable();
    for j in support {
        theta[j] = if rng.random::<bool>() { T::one() } else { -T::one() };
    }
    let sigma = (sparsity as f64 / snr).sqrt();
    let mut y = x.dot(&theta);
    if sigma > 0.0 {
        for v in y.iter_mut() {
            *v += T::lit(sigma * rng.sample::<f64, _>(StandardNormal));
        }
    }
    Ok(LinearInstance { x, y, theta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_is_exact_and_sparse() {
        let inst: LinearInstance<f64> = gen_linear_data(20, 8, 3, f64::INFINITY, 5).unwrap();
        assert_eq!(inst.y, inst.x.dot(&inst.theta));
        assert_eq!(inst.theta.iter().filter(|v| **v != 0.0).count(), 3);
        assert!(inst.theta.iter().all(|v| [0.0, 1.0, -1.0].contains(v)));
    }

    #[test]
    fn seed_determines_output() {
        let a: LinearInstance<f64> = gen_linear_data(10, 4, 2, 3.0, 9).unwrap();
        let b: LinearInstance<f64> = gen_linear_data(10, 4, 2, 3.0, 9).unwrap();
        assert_eq!(a, b);
        assert!(gen_linear_data::<f64>(10, 4, 5, 3.0, 9).is_err());
    }
}
