use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut1};

use crate::bregman::LossModel;
use crate::error::{check_len, Error, Result};
use crate::linalg::gram_spectral_norm;
use crate::scalar::Scalar;

/// Logistic loss `L = (1/n) Σ log(1 + exp(−yᵢ(θ₀ + xᵢᵀθ)))` with `yᵢ ∈ {±1}`.
#[derive(Debug, Clone)]
pub struct BinomialModel<T> {
    x: Array2<T>,
    y: Array1<T>,
    intercept: bool,
    curvature: T,
}

fn check_labels<T: Scalar>(y: ArrayView1<T>) -> Result<()> {
    match y.iter().position(|v| v.abs() != T::one()) {
        Some(i) => Err(Error::InvalidArgument(format!(
            "binomial label {} at row {i} must be -1 or +1",
            y[i]
        ))),
        None => Ok(()),
    }
}

impl<T: Scalar> BinomialModel<T> {
    pub fn new(x: Array2<T>, y: Array1<T>, intercept: bool) -> Result<Self> {
        check_len("response length", x.nrows(), y.len())?;
        check_labels(y.view())?;
        // logistic curvature is at most 1/4
        let curvature = gram_spectral_norm(x.view(), intercept) / T::lit(4.0);
        Ok(BinomialModel {
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

    /// Margins `yᵢ(θ₀ + xᵢᵀθ)`.
    fn margins(&self, theta0: T, theta: ArrayView1<T>) -> Array1<T> {
        let mut m = self.x.dot(&theta);
        for (mi, &yi) in m.iter_mut().zip(self.y.iter()) {
            *mi = yi * (*mi + theta0);
        }
        m
    }
}

/// `log(n₊ / n₋)`: the intercept-only maximum likelihood estimate.
pub fn binomial_intercept<T: Scalar>(y: ArrayView1<T>) -> Result<T> {
    let pos = y.iter().filter(|&&v| v > T::zero()).count();
    let neg = y.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::DegenerateResponse(
            "binomial response has a single class; the intercept-only fit diverges".into(),
        ));
    }
    Ok((T::count(pos) / T::count(neg)).ln())
}

/// Loss and gradients of the logistic loss at `(θ₀, θ)`.
pub fn binomial_loss_grad<T: Scalar>(
    x: ArrayView2<T>,
    y: ArrayView1<T>,
    theta0: T,
    theta: ArrayView1<T>,
) -> Result<(T, T, Array1<T>)> {
    check_len("response length", x.nrows(), y.len())?;
    check_len("coefficient length", x.ncols(), theta.len())?;
    check_labels(y)?;
    let n = T::count(x.nrows());
    let eta = x.dot(&theta);
    let mut loss = T::zero();
    // wᵢ = −yᵢ / (1 + exp(yᵢ ηᵢ)) = −yᵢ σ(−mᵢ)
    let mut w = Array1::zeros(y.len());
    for i in 0..y.len() {
        let m = y[i] * (eta[i] + theta0);
        loss += (-m).softplus();
        w[i] = -y[i] * (-m).sigmoid();
    }
    let g0 = w.sum() / n;
    let g = x.t().dot(&w) / n;
    Ok((loss / n, g0, g))
}

impl<T: Scalar> LossModel<T> for BinomialModel<T> {
    fn dim_unpenalized(&self) -> usize {
        usize::from(self.intercept)
    }

    fn dim_penalized(&self) -> usize {
        self.x.ncols()
    }

    fn loss(&self, theta0: ArrayView1<T>, theta: ArrayView1<T>) -> T {
        let b = theta0.first().copied().unwrap_or_else(T::zero);
        let m = self.margins(b, theta);
        m.iter().map(|&mi| (-mi).softplus()).sum::<T>() / T::count(self.x.nrows())
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
        let mut w = self.margins(b, theta);
        for (wi, &yi) in w.iter_mut().zip(self.y.iter()) {
            *wi = -yi * (-*wi).sigmoid();
        }
        if self.intercept {
            g0[0] = w.sum() / n;
        }
        g.assign(&(self.x.t().dot(&w) / n));
    }

    fn init_unpenalized(&self) -> Result<Array1<T>> {
        if self.intercept {
            Ok(Array1::from_elem(1, binomial_intercept(self.y.view())?))
        } else {
            Ok(Array1::zeros(0))
        }
    }

    fn curvature_bound(&self) -> T {
        self.curvature
    }
}
