use std::collections::BTreeMap;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::error::{check_len, Error, Result};
use crate::linalg::column_means;
use crate::scalar::Scalar;

/// Response of a regression problem.
#[derive(Debug, Clone, PartialEq)]
pub enum Response<T> {
    Gaussian(Array1<T>),
    /// Labels in `{−1, +1}`.
    Binomial(Array1<T>),
    /// Class indices in `0..n_classes`; every class occurs at least once.
    Multinomial { labels: Vec<usize>, n_classes: usize },
}

impl<T: Scalar> Response<T> {
    pub fn len(&self) -> usize {
        match self {
            Response::Gaussian(y) | Response::Binomial(y) => y.len(),
            Response::Multinomial { labels, .. } => labels.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Binary labels given as `{0, 1}` or `{−1, +1}`, stored as `{−1, +1}`.
    pub fn binomial_from(values: ArrayView1<T>) -> Result<Self> {
        let zero = T::zero();
        let one = T::one();
        let has_zero = values.iter().any(|&v| v == zero);
        let has_neg = values.iter().any(|&v| v == -one);
        if has_zero && has_neg {
            return Err(Error::InvalidArgument(
                "binary labels mix the {0,1} and {-1,1} codings".into(),
            ));
        }
        let mut y = Array1::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            y[i] = if v == one {
                one
            } else if v == zero || v == -one {
                -one
            } else {
                return Err(Error::InvalidArgument(format!(
                    "binary label {v} at row {i} is not in {{0,1}} or {{-1,1}}"
                )));
            };
        }
        Ok(Response::Binomial(y))
    }

    /// Class labels of any ordered type, mapped to `0..K` in sorted order.
    /// Returns the response and the sorted distinct labels.
    pub fn multinomial_from<L: Ord + Clone>(values: &[L]) -> (Self, Vec<L>) {
        let mut classes: BTreeMap<L, usize> = BTreeMap::new();
        for v in values {
            classes.entry(v.clone()).or_insert(0);
        }
        for (i, slot) in classes.values_mut().enumerate() {
            *slot = i;
        }
        let labels = values.iter().map(|v| classes[v]).collect();
        let names: Vec<L> = classes.into_keys().collect();
        (
            Response::Multinomial {
                labels,
                n_classes: names.len(),
            },
            names,
        )
    }
}

/// Design matrix plus response.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionData<T> {
    pub x: Array2<T>,
    pub y: Response<T>,
}

impl<T: Scalar> RegressionData<T> {
    pub fn new(x: Array2<T>, y: Response<T>) -> Result<Self> {
        check_len("response length", x.nrows(), y.len())?;
        if x.nrows() == 0 {
            return Err(Error::InvalidArgument("no observations".into()));
        }
        if let Response::Binomial(labels) = &y {
            if let Some(i) = labels.iter().position(|v| v.abs() != T::one()) {
                return Err(Error::InvalidArgument(format!(
                    "binomial label at row {i} must be -1 or +1"
                )));
            }
        }
        if let Response::Multinomial { labels, n_classes } = &y {
            if let Some(i) = labels.iter().position(|&l| l >= *n_classes) {
                return Err(Error::InvalidArgument(format!(
                    "class label at row {i} exceeds the number of classes"
                )));
            }
        }
        Ok(RegressionData { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }
}

/// Column centering and scaling applied before fitting.
///
/// Columns are centered when an intercept is fitted and scaled to unit
/// `(1/n)`-norm. Coefficients fitted on the transformed design map back with
/// [`ColumnScaling::restore_coefficients`].
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnScaling<T> {
    pub means: Array1<T>,
    pub scales: Array1<T>,
}

impl<T: Scalar> ColumnScaling<T> {
    pub fn fit(x: ArrayView2<T>, center: bool) -> Result<Self> {
        let n = T::count(x.nrows().max(1));
        let means = if center {
            column_means(x)
        } else {
            Array1::zeros(x.ncols())
        };
        let mut scales = Array1::zeros(x.ncols());
        for (j, col) in x.axis_iter(Axis(1)).enumerate() {
            let ss: T = col.iter().map(|&v| (v - means[j]) * (v - means[j])).sum();
            let s = (ss / n).sqrt();
            if !(s > T::zero()) {
                return Err(Error::DegenerateVariable {
                    column: j,
                    reason: "zero spread after centering; cannot normalize".into(),
                });
            }
            scales[j] = s;
        }
        Ok(ColumnScaling { means, scales })
    }

    pub fn apply(&self, x: ArrayView2<T>) -> Array2<T> {
        (&x - &self.means.view().insert_axis(Axis(0))) / self.scales.view().insert_axis(Axis(0))
    }

    /// Inverse of [`apply`](Self::apply).
    pub fn restore(&self, xn: ArrayView2<T>) -> Array2<T> {
        &(&xn * &self.scales.view().insert_axis(Axis(0))) + &self.means.view().insert_axis(Axis(0))
    }

    /// Maps `(θ₀, θ)` fitted on the scaled design to the original columns.
    ///
    /// `theta` is feature-major with `per_feature` consecutive entries per
    /// column and `theta0` holds one intercept per entry within a feature
    /// (one for scalar models, `K` for multinomial).
    pub fn restore_coefficients(
        &self,
        theta0: ArrayView1<T>,
        theta: ArrayView1<T>,
        per_feature: usize,
    ) -> (Array1<T>, Array1<T>) {
        let mut th = theta.to_owned();
        let mut th0 = theta0.to_owned();
        for j in 0..self.scales.len() {
            for c in 0..per_feature {
                let idx = j * per_feature + c;
                th[idx] = theta[idx] / self.scales[j];
                if !th0.is_empty() {
                    th0[c] -= self.means[j] * th[idx];
                }
            }
        }
        (th0, th)
    }
}
