use ndarray::{Array1, ArrayView1, ArrayViewMut1};

use crate::error::Result;
use crate::scalar::Scalar;

/// A smooth loss `L(θ₀, θ)` over unpenalized parameters `θ₀` and penalized
/// parameters `θ`, as consumed by the path engine.
pub trait LossModel<T: Scalar> {
    /// Length of `θ₀` (may be zero).
    fn dim_unpenalized(&self) -> usize;

    /// Length of `θ`.
    fn dim_penalized(&self) -> usize;

    fn loss(&self, theta0: ArrayView1<T>, theta: ArrayView1<T>) -> T;

    /// Writes `∇_{θ₀}L` and `∇_θL` into the provided buffers.
    fn gradient(
        &self,
        theta0: ArrayView1<T>,
        theta: ArrayView1<T>,
        g0: ArrayViewMut1<T>,
        g: ArrayViewMut1<T>,
    );

    /// `argmin_{θ₀} L(θ₀, 0)`.
    fn init_unpenalized(&self) -> Result<Array1<T>>;

    /// Upper bound on the gradient Lipschitz constant over the joint
    /// parameter vector, used to pick a stable default step size.
    fn curvature_bound(&self) -> T;

    /// Rejects unpenalized values outside the loss domain. Most losses are
    /// defined everywhere.
    fn check_unpenalized(&self, _theta0: ArrayView1<T>) -> std::result::Result<(), String> {
        Ok(())
    }
}

impl<T: Scalar, M: LossModel<T> + ?Sized> LossModel<T> for &M {
    fn dim_unpenalized(&self) -> usize {
        (**self).dim_unpenalized()
    }
    fn dim_penalized(&self) -> usize {
        (**self).dim_penalized()
    }
    fn loss(&self, theta0: ArrayView1<T>, theta: ArrayView1<T>) -> T {
        (**self).loss(theta0, theta)
    }
    fn gradient(
        &self,
        theta0: ArrayView1<T>,
        theta: ArrayView1<T>,
        g0: ArrayViewMut1<T>,
        g: ArrayViewMut1<T>,
    ) {
        (**self).gradient(theta0, theta, g0, g)
    }
    fn init_unpenalized(&self) -> Result<Array1<T>> {
        (**self).init_unpenalized()
    }
    fn curvature_bound(&self) -> T {
        (**self).curvature_bound()
    }
    fn check_unpenalized(&self, theta0: ArrayView1<T>) -> std::result::Result<(), String> {
        (**self).check_unpenalized(theta0)
    }
}

/// Allocating convenience wrapper around [`LossModel::gradient`].
pub fn gradient_of<T: Scalar, M: LossModel<T> + ?Sized>(
    model: &M,
    theta0: ArrayView1<T>,
    theta: ArrayView1<T>,
) -> (Array1<T>, Array1<T>) {
    let mut g0 = Array1::zeros(model.dim_unpenalized());
    let mut g = Array1::zeros(model.dim_penalized());
    model.gradient(theta0, theta, g0.view_mut(), g.view_mut());
    (g0, g)
}
