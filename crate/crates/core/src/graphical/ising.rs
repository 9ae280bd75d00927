use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut1, Axis, Zip};

use crate::bregman::{LossModel, SolutionPath};
use crate::error::{check_len, Error, Result};
use crate::graphical::pairs::PairIndex;
use crate::linalg::gram_spectral_norm;
use crate::scalar::Scalar;

/// Value coding of binary observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coding {
    /// `x ∈ {0, 1}`, `P(x) ∝ exp(xᵀθ₀ + ½ xᵀθx)`.
    ZeroOne,
    /// `x ∈ {−1, 1}`, `P(x) ∝ exp(½ xᵀh + ¼ xᵀJx)`.
    PlusMinusOne,
}

impl Coding {
    fn values<T: Scalar>(self) -> (T, T) {
        match self {
            Coding::ZeroOne => (T::zero(), T::one()),
            Coding::PlusMinusOne => (-T::one(), T::one()),
        }
    }
}

/// Ising parameters: intercepts (`θ₀` or `h`) and the upper triangle of the
/// symmetric, zero-diagonal interaction matrix (`θ` or `J`).
#[derive(Debug, Clone, PartialEq)]
pub struct IsingParams<T> {
    pub theta0: Array1<T>,
    pub interactions: Array1<T>,
    pub coding: Coding,
}

impl<T: Scalar> IsingParams<T> {
    pub fn zeros(p: usize, coding: Coding) -> Self {
        IsingParams {
            theta0: Array1::zeros(p),
            interactions: Array1::zeros(PairIndex::new(p).len()),
            coding,
        }
    }

    pub fn p(&self) -> usize {
        self.theta0.len()
    }

    pub fn interaction_matrix(&self) -> Array2<T> {
        symmetric_from_pairs(self.p(), self.interactions.view())
    }

    /// Converts between codings: `J = θ/2`, `h = θ₀ + J·1` and back.
    pub fn recode(&self, target: Coding) -> Self {
        if target == self.coding {
            return self.clone();
        }
        let p = self.p();
        let two = T::lit(2.0);
        let interactions = match target {
            Coding::PlusMinusOne => self.interactions.mapv(|v| v / two),
            Coding::ZeroOne => self.interactions.mapv(|v| v * two),
        };
        // Row sums of J, the ±1 interaction matrix.
        let j_rows = match target {
            Coding::PlusMinusOne => symmetric_from_pairs(p, interactions.view()).sum_axis(Axis(1)),
            Coding::ZeroOne => self.interaction_matrix().sum_axis(Axis(1)),
        };
        let theta0 = match target {
            Coding::PlusMinusOne => &self.theta0 + &j_rows,
            Coding::ZeroOne => &self.theta0 - &j_rows,
        };
        IsingParams {
            theta0,
            interactions,
            coding: target,
        }
    }

    /// `P(x_v = 1 | x_{−v})` for an observation `x` in this coding.
    pub fn conditional_prob(&self, v: usize, x: ArrayView1<T>) -> T {
        let pairs = PairIndex::new(self.p());
        let mut eta = self.theta0[v];
        for k in 0..self.p() {
            if k != v {
                eta += self.interactions[pairs.index(v, k)] * x[k];
            }
        }
        eta.sigmoid()
    }
}

pub(crate) fn symmetric_from_pairs<T: Scalar>(p: usize, vals: ArrayView1<T>) -> Array2<T> {
    let mut m = Array2::zeros((p, p));
    for (i, (j, k)) in PairIndex::new(p).iter().enumerate() {
        m[[j, k]] = vals[i];
        m[[k, j]] = vals[i];
    }
    m
}

fn check_coding<T: Scalar>(x: ArrayView2<T>, coding: Coding) -> Result<()> {
    let (lo, hi) = coding.values::<T>();
    for ((i, j), &v) in x.indexed_iter() {
        if v != lo && v != hi {
            return Err(Error::InvalidArgument(format!(
                "value {v} for observation {i}, variable {j} is outside the {coding:?} coding"
            )));
        }
    }
    Ok(())
}

/// Nodewise logistic losses summed over nodes, with gradients in the
/// parameterization of `coding`.
///
/// Node `v` regresses the response `y_v` (`x_v`, or `(x_v + 1)/2` for ±1 data)
/// on the other columns. Returns the loss, the intercept gradient and the
/// full symmetric `p × p` interaction gradient.
fn nodewise<T: Scalar>(
    x: ArrayView2<T>,
    coding: Coding,
    theta0: ArrayView1<T>,
    inter: &Array2<T>,
) -> (T, Array1<T>, Array2<T>) {
    let n = T::count(x.nrows().max(1));
    let half = T::lit(0.5);
    let mut eta = x.dot(inter);
    if !theta0.is_empty() {
        eta += &theta0.insert_axis(Axis(0));
    }
    let mut loss = T::zero();
    // eta becomes the residual σ(η) − y
    Zip::from(&mut eta).and(&x).for_each(|e, &xv| {
        let y = match coding {
            Coding::ZeroOne => xv,
            Coding::PlusMinusOne => (xv + T::one()) * half,
        };
        loss += e.softplus() - y * *e;
        *e = e.sigmoid() - y;
    });
    let g0 = eta.sum_axis(Axis(0)) / n;
    let a = eta.t().dot(&x) / n;
    let mut g = &a + &a.t();
    g.diag_mut().fill(T::zero());
    (loss / n, g0, g)
}

/// Composite conditional likelihood of the Ising model and its gradient in
/// the coding declared by `params`.
pub fn ising_loss_grad<T: Scalar>(
    x: ArrayView2<T>,
    params: &IsingParams<T>,
) -> Result<(T, Array1<T>, Array1<T>)> {
    let p = params.p();
    check_len("number of columns", p, x.ncols())?;
    check_len("interaction length", PairIndex::new(p).len(), params.interactions.len())?;
    check_coding(x, params.coding)?;
    let inter = params.interaction_matrix();
    let (loss, g0, gfull) = nodewise(x, params.coding, params.theta0.view(), &inter);
    let g = PairIndex::new(p).iter().map(|(j, k)| gfull[[j, k]]).collect();
    Ok((loss, g0, g))
}

/// `θ_{v0} = log(x̄_v / (1 − x̄_v))` for `{0,1}` data.
pub fn ising_intercept_init<T: Scalar>(x01: ArrayView2<T>) -> Result<Array1<T>> {
    let n = T::count(x01.nrows().max(1));
    let mut out = Array1::zeros(x01.ncols());
    for (v, col) in x01.axis_iter(Axis(1)).enumerate() {
        let m = col.sum() / n;
        if !(m > T::zero() && m < T::one()) {
            return Err(Error::DegenerateVariable {
                column: v,
                reason: "constant binary column".into(),
            });
        }
        out[v] = (m / (T::one() - m)).ln();
    }
    Ok(out)
}

/// Ising composite likelihood as a path-engine loss.
///
/// Observations are stored in `{0,1}` coding regardless of the input coding,
/// so the path is always fitted in the `(θ₀, θ)` parameterization; use
/// [`recode_path`] to report it as `(h, J)`.
#[derive(Debug, Clone)]
pub struct IsingModel<T> {
    x: Array2<T>,
    xt: Array2<T>,
    intercept: bool,
    curvature: T,
    pairs: PairIndex,
}

impl<T: Scalar> IsingModel<T> {
    /// Validates `x` against `coding`. Without `intercept` the `{0,1}`
    /// intercepts are held at zero, which is a nonzero field in ±1 terms.
    pub fn new(x: ArrayView2<T>, coding: Coding, intercept: bool) -> Result<Self> {
        check_coding(x, coding)?;
        let x01 = match coding {
            Coding::ZeroOne => x.to_owned(),
            Coding::PlusMinusOne => x.mapv(|v| (v + T::one()) * T::lit(0.5)),
        };
        ising_intercept_init(x01.view())?;
        let p = x01.ncols();
        // each interaction enters two logistic nodes with curvature ≤ ¼‖S̃‖
        let curvature = gram_spectral_norm(x01.view(), intercept) / T::lit(2.0);
        Ok(IsingModel {
            xt: x01.t().as_standard_layout().into_owned(),
            x: x01,
            intercept,
            curvature,
            pairs: PairIndex::new(p),
        })
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// Observations in `{0,1}` coding.
    pub fn data(&self) -> ArrayView2<'_, T> {
        self.x.view()
    }

    pub fn pairs(&self) -> PairIndex {
        self.pairs
    }

    /// Linear predictors, one row per node: `η_v = θ_{v0} + Σ_k θ_{vk} x_k`.
    fn predictors(&self, theta0: ArrayView1<T>, theta: ArrayView1<T>) -> Array2<T> {
        let p = self.p();
        let n = self.x.nrows();
        let nnz = theta.iter().filter(|v| **v != T::zero()).count();
        let mut eta = if nnz * 8 < p * p {
            let mut eta = Array2::zeros((p, n));
            for (i, (j, k)) in self.pairs.iter().enumerate() {
                let w = theta[i];
                if w == T::zero() {
                    continue;
                }
                eta.row_mut(j).scaled_add(w, &self.xt.row(k));
                eta.row_mut(k).scaled_add(w, &self.xt.row(j));
            }
            eta
        } else {
            symmetric_from_pairs(p, theta).dot(&self.xt)
        };
        if !theta0.is_empty() {
            eta += &theta0.insert_axis(Axis(1));
        }
        eta
    }
}

impl<T: Scalar> LossModel<T> for IsingModel<T> {
    fn dim_unpenalized(&self) -> usize {
        if self.intercept {
            self.p()
        } else {
            0
        }
    }

    fn dim_penalized(&self) -> usize {
        self.pairs.len()
    }

    fn loss(&self, theta0: ArrayView1<T>, theta: ArrayView1<T>) -> T {
        let eta = self.predictors(theta0, theta);
        let mut loss = T::zero();
        Zip::from(&eta).and(&self.xt).for_each(|&e, &x| {
            loss += e.softplus() - x * e;
        });
        loss / T::count(self.x.nrows())
    }

    fn gradient(
        &self,
        theta0: ArrayView1<T>,
        theta: ArrayView1<T>,
        mut g0: ArrayViewMut1<T>,
        mut g: ArrayViewMut1<T>,
    ) {
        let n = T::count(self.x.nrows());
        let mut r = self.predictors(theta0, theta);
        Zip::from(&mut r).and(&self.xt).for_each(|e, &x| {
            *e = e.sigmoid() - x;
        });
        if self.intercept {
            g0.assign(&(r.sum_axis(Axis(1)) / n));
        }
        // a[v, k] = (1/n) Σ_i r_{iv} x_{ik}
        let a = r.dot(&self.x);
        for (i, (j, k)) in self.pairs.iter().enumerate() {
            g[i] = (a[[j, k]] + a[[k, j]]) / n;
        }
    }

    fn init_unpenalized(&self) -> Result<Array1<T>> {
        if self.intercept {
            ising_intercept_init(self.x.view())
        } else {
            Ok(Array1::zeros(0))
        }
    }

    fn curvature_bound(&self) -> T {
        self.curvature
    }
}

/// Re-expresses a path fitted in `{0,1}` parameters in `target` coding.
/// Intercepts absent from the path are taken as zero.
pub fn recode_path<T: Scalar>(path: &SolutionPath<T>, p: usize, target: Coding) -> SolutionPath<T> {
    let mut out = path.clone();
    if target == Coding::ZeroOne {
        return out;
    }
    for (th0, th) in out.theta0.iter_mut().zip(out.theta.iter_mut()) {
        let params = IsingParams {
            theta0: if th0.is_empty() { Array1::zeros(p) } else { th0.clone() },
            interactions: th.clone(),
            coding: Coding::ZeroOne,
        }
        .recode(target);
        *th0 = params.theta0;
        *th = params.interactions;
    }
    out
}
