use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut1, Axis};

use crate::bregman::LossModel;
use crate::error::{check_len, Error, Result};
use crate::groups::GroupIndex;
use crate::linalg::gram_spectral_norm;
use crate::scalar::Scalar;

/// Penalty structure of the multinomial coefficient matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SparsityMode {
    /// ℓ₁ on every `θ_{kj}`.
    Entry,
    /// One group per feature spanning all classes.
    Column,
    /// One group per feature group spanning all classes.
    Block(GroupIndex),
}

/// Multinomial coefficients in matrix form.
///
/// The penalized vector used by the engine is feature-major: entry
/// `j * K + k` is `theta[[k, j]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultinomialCoefs<T> {
    pub theta0: Array1<T>,
    /// `K × p`.
    pub theta: Array2<T>,
}

impl<T: Scalar> MultinomialCoefs<T> {
    pub fn zeros(n_classes: usize, p: usize) -> Self {
        MultinomialCoefs {
            theta0: Array1::zeros(n_classes),
            theta: Array2::zeros((n_classes, p)),
        }
    }

    pub fn from_flat(theta0: ArrayView1<T>, flat: ArrayView1<T>, n_classes: usize) -> Result<Self> {
        check_len("multinomial intercepts", n_classes, theta0.len())?;
        if n_classes == 0 || !flat.len().is_multiple_of(n_classes) {
            return Err(Error::InvalidArgument(
                "flat coefficient length is not a multiple of the class count".into(),
            ));
        }
        let p = flat.len() / n_classes;
        let theta = Array2::from_shape_fn((n_classes, p), |(k, j)| flat[j * n_classes + k]);
        Ok(MultinomialCoefs {
            theta0: theta0.to_owned(),
            theta,
        })
    }

    pub fn to_flat(&self) -> Array1<T> {
        // feature-major is the row-major layout of θᵀ
        self.theta.t().iter().copied().collect()
    }
}

/// Partition of the flattened multinomial coefficients.
pub fn build_multinomial_groups(p: usize, n_classes: usize, mode: &SparsityMode) -> Result<GroupIndex> {
    match mode {
        SparsityMode::Entry => Ok(GroupIndex::singletons(p * n_classes)),
        SparsityMode::Column => {
            let labels: Vec<usize> = (0..p * n_classes).map(|i| i / n_classes).collect();
            Ok(GroupIndex::from_labels(&labels))
        }
        SparsityMode::Block(features) => {
            check_len("feature groups", p, features.len())?;
            let labels: Vec<usize> = (0..p * n_classes)
                .map(|i| features.group_of(i / n_classes))
                .collect();
            Ok(GroupIndex::from_labels(&labels))
        }
    }
}

/// Multinomial logistic loss
/// `L = (1/n) Σ [log Σ_k exp(θ_{k0} + xᵢᵀθ_k) − θ_{yᵢ0} − xᵢᵀθ_{yᵢ}]`.
#[derive(Debug, Clone)]
pub struct MultinomialModel<T> {
    x: Array2<T>,
    labels: Vec<usize>,
    n_classes: usize,
    intercept: bool,
    curvature: T,
}

impl<T: Scalar> MultinomialModel<T> {
    pub fn new(x: Array2<T>, labels: Vec<usize>, n_classes: usize, intercept: bool) -> Result<Self> {
        check_len("response length", x.nrows(), labels.len())?;
        check_classes(&labels, n_classes)?;
        // softmax Hessian is bounded by 1/2
        let curvature = gram_spectral_norm(x.view(), intercept) / T::lit(2.0);
        Ok(MultinomialModel {
            x,
            labels,
            n_classes,
            intercept,
            curvature,
        })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn x(&self) -> ArrayView2<'_, T> {
        self.x.view()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    fn scores(&self, theta0: ArrayView1<T>, flat: ArrayView1<T>) -> Array2<T> {
        let k = self.n_classes;
        let p = self.x.ncols();
        let coef = flat.into_shape_with_order((p, k)).expect("feature-major layout");
        let mut eta = self.x.dot(&coef);
        if !theta0.is_empty() {
            eta += &theta0.insert_axis(Axis(0));
        }
        eta
    }
}

fn check_classes(labels: &[usize], n_classes: usize) -> Result<()> {
    if n_classes < 2 {
        return Err(Error::InvalidArgument("multinomial needs at least two classes".into()));
    }
    let mut counts = vec![0usize; n_classes];
    for (i, &l) in labels.iter().enumerate() {
        if l >= n_classes {
            return Err(Error::InvalidArgument(format!(
                "class label {l} at row {i} is out of range"
            )));
        }
        counts[l] += 1;
    }
    if let Some(k) = counts.iter().position(|&c| c == 0) {
        return Err(Error::InvalidArgument(format!("class {k} has no observations")));
    }
    Ok(())
}

/// `θ_{k0} = log(n_k / n)`.
pub fn multinomial_intercept<T: Scalar>(labels: &[usize], n_classes: usize) -> Result<Array1<T>> {
    let mut counts = vec![0usize; n_classes];
    for &l in labels {
        if l < n_classes {
            counts[l] += 1;
        }
    }
    if let Some(k) = counts.iter().position(|&c| c == 0) {
        return Err(Error::DegenerateResponse(format!(
            "class {k} is empty; the intercept-only fit diverges"
        )));
    }
    let n = T::count(labels.len());
    Ok(counts.iter().map(|&c| (T::count(c) / n).ln()).collect())
}

/// Per-row softmax residuals `P − Y` and the mean loss.
fn softmax_residuals<T: Scalar>(eta: &mut Array2<T>, labels: &[usize]) -> T {
    let mut loss = T::zero();
    for (mut row, &y) in eta.axis_iter_mut(Axis(0)).zip(labels) {
        let m = row.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
        let score_y = row[y];
        let mut total = T::zero();
        for v in row.iter_mut() {
            *v = (*v - m).exp();
            total += *v;
        }
        loss += m + total.ln() - score_y;
        row.mapv_inplace(|v| v / total);
        row[y] -= T::one();
    }
    loss / T::count(labels.len().max(1))
}

/// Loss and gradients of the multinomial loss at `coefs`. The gradient is
/// returned in the same `K × p` layout as `coefs.theta`.
pub fn multinomial_loss_grad<T: Scalar>(
    x: ArrayView2<T>,
    labels: &[usize],
    coefs: &MultinomialCoefs<T>,
) -> Result<(T, Array1<T>, Array2<T>)> {
    let k = coefs.theta.nrows();
    check_len("response length", x.nrows(), labels.len())?;
    check_len("coefficient columns", x.ncols(), coefs.theta.ncols())?;
    check_len("multinomial intercepts", k, coefs.theta0.len())?;
    check_classes(labels, k)?;
    let n = T::count(x.nrows());
    let mut eta = x.dot(&coefs.theta.t()) + coefs.theta0.view().insert_axis(Axis(0));
    let loss = softmax_residuals(&mut eta, labels);
    let g0 = eta.sum_axis(Axis(0)) / n;
    let g = eta.t().dot(&x) / n;
    Ok((loss, g0, g))
}

impl<T: Scalar> LossModel<T> for MultinomialModel<T> {
    fn dim_unpenalized(&self) -> usize {
        if self.intercept {
            self.n_classes
        } else {
            0
        }
    }

    fn dim_penalized(&self) -> usize {
        self.x.ncols() * self.n_classes
    }

    fn loss(&self, theta0: ArrayView1<T>, theta: ArrayView1<T>) -> T {
        let mut eta = self.scores(theta0, theta);
        softmax_residuals(&mut eta, &self.labels)
    }

    fn gradient(
        &self,
        theta0: ArrayView1<T>,
        theta: ArrayView1<T>,
        mut g0: ArrayViewMut1<T>,
        mut g: ArrayViewMut1<T>,
    ) {
        let n = T::count(self.x.nrows());
        let mut eta = self.scores(theta0, theta);
        softmax_residuals(&mut eta, &self.labels);
        if self.intercept {
            g0.assign(&(eta.sum_axis(Axis(0)) / n));
        }
        // p × K, row-major equals feature-major flat order
        let grad = self.x.t().dot(&eta) / n;
        for (dst, &src) in g.iter_mut().zip(grad.iter()) {
            *dst = src;
        }
    }

    fn init_unpenalized(&self) -> Result<Array1<T>> {
        if self.intercept {
            multinomial_intercept(&self.labels, self.n_classes)
        } else {
            Ok(Array1::zeros(0))
        }
    }

    fn curvature_bound(&self) -> T {
        self.curvature
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn uniform_softmax_at_zero() {
        let x = array![[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, -1.0]];
        let labels = vec![0, 1, 2, 2];
        let coefs = MultinomialCoefs::zeros(3, 2);
        let (l, g0, _) = multinomial_loss_grad(x.view(), &labels, &coefs).unwrap();
        assert!((l - 3f64.ln()).abs() < 1e-14);
        let freq = [0.25, 0.25, 0.5];
        for k in 0..3 {
            assert!((g0[k] - (1.0 / 3.0 - freq[k])).abs() < 1e-15);
        }
    }

    #[test]
    fn flat_layout_round_trip() {
        let theta = array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]];
        let coefs = MultinomialCoefs {
            theta0: array![0.0, 0.0, 0.0],
            theta,
        };
        let flat = coefs.to_flat();
        assert_eq!(flat, array![1.0, 3.0, 5.0, 2.0, 4.0, 6.0]);
        let back = MultinomialCoefs::from_flat(coefs.theta0.view(), flat.view(), 3).unwrap();
        assert_eq!(back, coefs);
    }

    #[test]
    fn group_builders() {
        let col = build_multinomial_groups(2, 3, &SparsityMode::Column).unwrap();
        assert_eq!(col.labels(), &[0, 0, 0, 1, 1, 1]);
        let entry = build_multinomial_groups(2, 3, &SparsityMode::Entry).unwrap();
        assert!(entry.is_entrywise());
        assert_eq!(entry.len(), 6);
        let block =
            build_multinomial_groups(2, 3, &SparsityMode::Block(GroupIndex::from_labels(&[1, 1])))
                .unwrap();
        assert_eq!(block.n_groups(), 1);
        assert_eq!(block.members(0).len(), 6);
        let bad = build_multinomial_groups(3, 3, &SparsityMode::Block(GroupIndex::singletons(2)));
        assert!(bad.is_err());
    }

    #[test]
    fn empty_class_is_rejected() {
        let x = array![[1.0], [2.0]];
        assert!(MultinomialModel::new(x, vec![0, 0], 2, true).is_err());
        assert!(matches!(
            multinomial_intercept::<f64>(&[0, 0, 2], 3),
            Err(Error::DegenerateResponse(_))
        ));
    }

    #[test]
    fn log_frequency_intercepts() {
        let th0: Array1<f64> = multinomial_intercept(&[0, 1, 1, 1], 2).unwrap();
        assert!((th0[0] - 0.25f64.ln()).abs() < 1e-15);
        assert!((th0[1] - 0.75f64.ln()).abs() < 1e-15);
    }
}
