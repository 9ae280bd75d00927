//! Linear, binomial and multinomial regression losses.

mod binomial;
mod data;
mod linear;
mod multinomial;

pub use binomial::{binomial_intercept, binomial_loss_grad, BinomialModel};
pub use data::{ColumnScaling, RegressionData, Response};
pub use linear::{linear_loss_grad, LinearModel};
pub use multinomial::{
    build_multinomial_groups, multinomial_intercept, multinomial_loss_grad, MultinomialCoefs,
    MultinomialModel, SparsityMode,
};

use ndarray::{Array1, ArrayView1, ArrayViewMut1};

use crate::bregman::{run_lb, LossModel, PathConfig, SolutionPath};
use crate::error::{check_len, Result};
use crate::groups::GroupIndex;
use crate::scalar::Scalar;

/// `argmin_{θ₀} L(θ₀, 0)` for the family implied by the response.
pub fn intercept_init<T: Scalar>(data: &RegressionData<T>) -> Result<Array1<T>> {
    match &data.y {
        Response::Gaussian(y) => Ok(Array1::from_elem(1, y.mean().unwrap_or_else(T::zero))),
        Response::Binomial(y) => Ok(Array1::from_elem(1, binomial_intercept(y.view())?)),
        Response::Multinomial { labels, n_classes } => multinomial_intercept(labels, *n_classes),
    }
}

/// One of the regression losses.
#[derive(Debug, Clone)]
pub enum GlmModel<T> {
    Linear(LinearModel<T>),
    Binomial(BinomialModel<T>),
    Multinomial(MultinomialModel<T>),
}

impl<T: Scalar> GlmModel<T> {
    fn inner(&self) -> &dyn LossModel<T> {
        match self {
            GlmModel::Linear(m) => m,
            GlmModel::Binomial(m) => m,
            GlmModel::Multinomial(m) => m,
        }
    }
}

impl<T: Scalar> LossModel<T> for GlmModel<T> {
    fn dim_unpenalized(&self) -> usize {
        self.inner().dim_unpenalized()
    }
    fn dim_penalized(&self) -> usize {
        self.inner().dim_penalized()
    }
    fn loss(&self, theta0: ArrayView1<T>, theta: ArrayView1<T>) -> T {
        self.inner().loss(theta0, theta)
    }
    fn gradient(
        &self,
        theta0: ArrayView1<T>,
        theta: ArrayView1<T>,
        g0: ArrayViewMut1<T>,
        g: ArrayViewMut1<T>,
    ) {
        self.inner().gradient(theta0, theta, g0, g)
    }
    fn init_unpenalized(&self) -> Result<Array1<T>> {
        self.inner().init_unpenalized()
    }
    fn curvature_bound(&self) -> T {
        self.inner().curvature_bound()
    }
}

/// A regression problem ready for path fitting: model, grouping and the
/// column scaling needed to report coefficients on the original scale.
#[derive(Debug, Clone)]
pub struct GlmProblem<T> {
    pub model: GlmModel<T>,
    pub groups: GroupIndex,
    pub scaling: Option<ColumnScaling<T>>,
    /// Penalized coefficients per feature (1, or `K` for multinomial).
    pub per_feature: usize,
}

impl<T: Scalar> GlmProblem<T> {
    /// `mode` selects the penalty: `Entry` and `Column` coincide for the
    /// scalar-response families, `Block` supplies feature groups.
    pub fn new(
        data: RegressionData<T>,
        intercept: bool,
        normalize: bool,
        mode: &SparsityMode,
    ) -> Result<Self> {
        let p = data.p();
        let scaling = if normalize {
            Some(ColumnScaling::fit(data.x.view(), intercept)?)
        } else {
            None
        };
        let x = match &scaling {
            Some(s) => s.apply(data.x.view()),
            None => data.x,
        };
        let (model, per_feature) = match data.y {
            Response::Gaussian(y) => (GlmModel::Linear(LinearModel::new(x, y, intercept)?), 1),
            Response::Binomial(y) => (GlmModel::Binomial(BinomialModel::new(x, y, intercept)?), 1),
            Response::Multinomial { labels, n_classes } => (
                GlmModel::Multinomial(MultinomialModel::new(x, labels, n_classes, intercept)?),
                n_classes,
            ),
        };
        let groups = match (per_feature, mode) {
            (_, SparsityMode::Block(g)) => {
                check_len("group index", p, g.len())?;
                build_multinomial_groups(p, per_feature, mode)?
            }
            (1, _) => GroupIndex::singletons(p),
            (k, m) => build_multinomial_groups(p, k, m)?,
        };
        Ok(GlmProblem {
            model,
            groups,
            scaling,
            per_feature,
        })
    }

    /// Runs the path and maps coefficients back to the original columns.
    pub fn fit(&self, config: &PathConfig<T>) -> Result<SolutionPath<T>> {
        let mut path = run_lb(&self.model, &self.groups, config)?;
        if let Some(s) = &self.scaling {
            for (th0, th) in path.theta0.iter_mut().zip(path.theta.iter_mut()) {
                let (a, b) = s.restore_coefficients(th0.view(), th.view(), self.per_feature);
                *th0 = a;
                *th = b;
            }
        }
        Ok(path)
    }
}
