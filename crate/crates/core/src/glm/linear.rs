use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut1};

use crate::bregman::LossModel;
use crate::error::{check_len, Result};
use crate::linalg::gram_spectral_norm;
use crate::scalar::Scalar;

/// Squared-error loss `L = (1/2n) Σ (yᵢ − θ₀ − xᵢᵀθ)²`.
#[derive(Debug, Clone)]
pub struct LinearModel<T> {
    x: Array2<T>,
    y: Array1<T>,
    intercept: bool,
    curvature: T,
}

impl<T: Scalar> LinearModel<T> {
    pub fn new(x: Array2<T>, y: Array1<T>, intercept: bool) -> Result<Self> {
        check_len("response length", x.nrows(), y.len())?;
        let curvature = gram_spectral_norm(x.view(), intercept);
        Ok(LinearModel {
            x,
            y,
            intercept,
            curvature,
        })
    }

    pub fn x(&self) -> ArrayView2<'_, T> {
        self.x.view()
    }

    pub fn y(&self) -> ArrayView1<'_, T> {
        self.y.view()
    }

    pub fn intercept(&self) -> bool {
        self.intercept
    }

    fn residual(&self, theta0: T, theta: ArrayView1<T>) -> Array1<T> {
        let fit = self.x.dot(&theta);
        &self.y - &fit.mapv(|f| f + theta0)
    }
}

/// Loss and gradients of the squared-error loss at `(θ₀, θ)`.
pub fn linear_loss_grad<T: Scalar>(
    x: ArrayView2<T>,
    y: ArrayView1<T>,
    theta0: T,
    theta: ArrayView1<T>,
) -> Result<(T, T, Array1<T>)> {
    check_len("response length", x.nrows(), y.len())?;
    check_len("coefficient length", x.ncols(), theta.len())?;
    let n = T::count(x.nrows());
    let r = &y - &x.dot(&theta).mapv(|f| f + theta0);
    let loss = r.dot(&r) / (T::lit(2.0) * n);
    let g0 = -r.sum() / n;
    let g = x.t().dot(&r).mapv(|v| -v / n);
    Ok((loss, g0, g))
}

impl<T: Scalar> LossModel<T> for LinearModel<T> {
    fn dim_unpenalized(&self) -> usize {
        usize::from(self.intercept)
    }

    fn dim_penalized(&self) -> usize {
        self.x.ncols()
    }

    fn loss(&self, theta0: ArrayView1<T>, theta: ArrayView1<T>) -> T {
        let b = theta0.first().copied().unwrap_or_else(T::zero);
        let r = self.residual(b, theta);
        r.dot(&r) / (T::lit(2.0) * T::count(self.x.nrows()))
    }

    fn gradient(
        &self,
        theta0: ArrayView1<T>,
        theta: ArrayView1<T>,
        mut g0: ArrayViewMut1<T>,
        mut g: ArrayViewMut1<T>,
    ) {
        let n = T::count(self.x.nrows());
        let b = theta0.first().copied().unwrap_or_else(T::zero);
        let r = self.residual(b, theta);
        if self.intercept {
            g0[0] = -r.sum() / n;
        }
        g.assign(&self.x.t().dot(&r));
        g.mapv_inplace(|v| -v / n);
    }

    fn init_unpenalized(&self) -> Result<Array1<T>> {
        if self.intercept {
            Ok(Array1::from_elem(1, self.y.mean().unwrap_or_else(T::zero)))
        } else {
            Ok(Array1::zeros(0))
        }
    }

    fn curvature_bound(&self) -> T {
        self.curvature
    }
}
