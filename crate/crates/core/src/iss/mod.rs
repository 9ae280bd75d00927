//! Inverse Scale Space path for the `ℓ₁`-penalized linear model.
//!
//! The dynamics `dρ/dt = (1/n) Xᵀ(y − Xθ)`, `ρ ∈ ∂‖θ‖₁`, `ρ(0) = 0` have a
//! piecewise-constant solution `θ(t)`. On each segment `θ` is the
//! least-squares fit restricted to the coordinates with `|ρ_j| = 1`, with
//! signs fixed by `ρ`; the interior coordinates of `ρ` move linearly until
//! the next one reaches the unit sphere.

mod convergence;
mod nnls;

pub use convergence::{lb_iss_convergence_check, ConvergenceReport};

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::error::{check_len, Error, Result};
use crate::glm::ColumnScaling;
use crate::linalg::{cholesky, max_abs};
use crate::scalar::Scalar;
use nnls::nnls_gram;

/// Options for [`iss_path`].
#[derive(Debug, Clone, PartialEq)]
pub struct IssOptions<T> {
    /// Fit an unpenalized intercept (by centering `X` and `y`).
    pub intercept: bool,
    /// Scale columns to unit `(1/n)`-norm before fitting. The path time is
    /// that of the scaled problem; coefficients are reported on the original
    /// scale.
    pub normalize: bool,
    /// Stop after the last knot before `t_max`.
    pub t_max: Option<T>,
    /// Maximum number of knots; `None` means `10·p`.
    pub max_knots: Option<usize>,
}

impl<T> Default for IssOptions<T> {
    fn default() -> Self {
        IssOptions {
            intercept: false,
            normalize: false,
            t_max: None,
            max_knots: None,
        }
    }
}

/// One constant piece of the path, valid from `start` to the next segment's
/// start.
#[derive(Debug, Clone, PartialEq)]
pub struct IssSegment<T> {
    pub start: T,
    /// Coefficients on the original column scale.
    pub theta: Array1<T>,
    pub intercept: T,
    /// `±1` on coordinates with `|ρ_j| = 1`, `0` elsewhere.
    pub signs: Vec<i8>,
    /// `ρ(start)` in the fitted (centered, scaled) problem.
    pub rho_start: Array1<T>,
    /// `dρ/dt` on the segment.
    pub rho_slope: Array1<T>,
}

/// Piecewise-constant ISS path. The first segment is the null model on
/// `[0, t₁)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IssPath<T> {
    pub segments: Vec<IssSegment<T>>,
    /// True when the last segment is stationary (`ρ` no longer moves on the
    /// inactive coordinates), so it extends to infinity.
    pub converged: bool,
}

impl<T: Scalar> IssPath<T> {
    /// Knot times `t₁ < t₂ < …`.
    pub fn knots(&self) -> Vec<T> {
        self.segments.iter().skip(1).map(|s| s.start).collect()
    }

    fn segment_at(&self, t: T) -> &IssSegment<T> {
        let i = self.segments.partition_point(|s| s.start <= t);
        &self.segments[i.saturating_sub(1)]
    }

    /// `θ(t)`, right-continuous at knots.
    pub fn theta_at(&self, t: T) -> Array1<T> {
        self.segment_at(t).theta.clone()
    }

    pub fn intercept_at(&self, t: T) -> T {
        self.segment_at(t).intercept
    }

    pub fn rho_at(&self, t: T) -> Array1<T> {
        let s = self.segment_at(t);
        &s.rho_start + &(&s.rho_slope * (t - s.start))
    }

    /// `(1/t) ∫₀ᵗ θ(s) ds`.
    pub fn time_average(&self, t: T) -> Array1<T> {
        let p = self.segments[0].theta.len();
        let mut acc = Array1::zeros(p);
        if !(t > T::zero()) {
            return acc;
        }
        for (i, s) in self.segments.iter().enumerate() {
            if s.start >= t {
                break;
            }
            let end = self.segments.get(i + 1).map_or(t, |n| n.start.min(t));
            acc.scaled_add(end - s.start, &s.theta);
        }
        acc / t
    }
}

/// Computes the ISS path of the least-squares loss `‖y − θ₀ − Xθ‖²/(2n)`.
pub fn iss_path<T: Scalar>(x: ArrayView2<T>, y: ArrayView1<T>, options: &IssOptions<T>) -> Result<IssPath<T>> {
    let (n, p) = x.dim();
    check_len("response length", n, y.len())?;
    if n == 0 || p == 0 {
        return Err(Error::InvalidArgument("empty design".into()));
    }
    if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite value in design or response".into()));
    }
    if let Some(tm) = options.t_max {
        if !(tm > T::zero()) {
            return Err(Error::InvalidArgument(format!("t_max must be positive, got {tm}")));
        }
    }
    let nf = T::count(n);
    let scaling = if options.normalize {
        ColumnScaling::fit(x, options.intercept)?
    } else if options.intercept {
        ColumnScaling {
            means: crate::linalg::column_means(x),
            scales: Array1::ones(p),
        }
    } else {
        ColumnScaling {
            means: Array1::zeros(p),
            scales: Array1::ones(p),
        }
    };
    let xs = scaling.apply(x);
    let ybar = if options.intercept { y.sum() / nf } else { T::zero() };
    let yc = y.mapv(|v| v - ybar);
    let gram: Array2<T> = xs.t().dot(&xs) / nf;
    let c: Array1<T> = xs.t().dot(&yc) / nf;
    let cmax = max_abs(c.view());
    let cap = options.max_knots.unwrap_or(10 * p);
    let stat_tol = T::lit(1e-11) * cmax;
    let hit_tol = T::lit(1e-12);
    let nnls_tol = T::lit(1e-13) * cmax;

    let restore = |theta: &Array1<T>| -> (Array1<T>, T) {
        let th = theta / &scaling.scales;
        let b0 = ybar - scaling.means.dot(&th);
        (th, b0)
    };

    let mut rho = Array1::<T>::zeros(p);
    let mut theta = Array1::<T>::zeros(p);
    // ±1 on boundary coordinates, 0 for interior
    let mut sign = vec![0i8; p];
    let mut t = T::zero();
    let mut segments = Vec::new();
    let mut converged = false;

    loop {
        let v = &c - &gram.dot(&theta);
        let (th_orig, b0) = restore(&theta);
        let mut slope = Array1::zeros(p);
        for j in 0..p {
            if sign[j] == 0 {
                slope[j] = v[j];
            }
        }
        segments.push(IssSegment {
            start: t,
            theta: th_orig,
            intercept: b0,
            signs: sign.clone(),
            rho_start: rho.clone(),
            rho_slope: slope.clone(),
        });
        if max_abs(slope.view()) <= stat_tol {
            converged = true;
            break;
        }
        // next hitting time over interior coordinates
        let mut dt = T::infinity();
        let mut hits = vec![T::infinity(); p];
        for j in 0..p {
            if sign[j] != 0 || slope[j].abs() <= stat_tol {
                continue;
            }
            let target = if slope[j] > T::zero() { T::one() } else { -T::one() };
            let h = ((target - rho[j]) / slope[j]).max(T::zero());
            hits[j] = h;
            dt = dt.min(h);
        }
        if !dt.is_finite() {
            converged = true;
            break;
        }
        let t_next = t + dt;
        if let Some(tm) = options.t_max {
            if t_next > tm {
                break;
            }
        }
        if segments.len() > cap {
            return Err(Error::KnotCapExceeded {
                cap,
                t: t_next.as_f64(),
            });
        }
        for j in 0..p {
            if sign[j] == 0 {
                rho[j] += dt * slope[j];
            }
        }
        let window = hit_tol * t_next.max(T::one());
        for j in 0..p {
            if hits[j] <= dt + window {
                let s = if slope[j] > T::zero() { 1 } else { -1 };
                sign[j] = s;
                rho[j] = T::lit(f64::from(s));
            }
        }
        t = t_next;

        // sign-constrained refit on the boundary
        let bset: Vec<usize> = (0..p).filter(|&j| sign[j] != 0).collect();
        let signs: Vec<T> = bset.iter().map(|&j| T::lit(f64::from(sign[j]))).collect();
        let sg = |a: usize| signs[a];
        let k = bset.len();
        let gb = Array2::from_shape_fn((k, k), |(a, b)| sg(a) * sg(b) * gram[[bset[a], bset[b]]]);
        let cb = Array1::from_shape_fn(k, |a| sg(a) * c[bset[a]]);
        if cholesky(gb.view(), T::lit(1e-12)).is_none() {
            return Err(Error::RankDeficient {
                t: t.as_f64(),
                active: k,
            });
        }
        let w0 = Array1::from_shape_fn(k, |a| (sg(a) * theta[bset[a]]).max(T::zero()));
        let w = nnls_gram(gb.view(), cb.view(), w0, nnls_tol).map_err(|e| Error::RankDeficient {
            t: t.as_f64(),
            active: e.passive,
        })?;
        theta.fill(T::zero());
        for a in 0..k {
            theta[bset[a]] = sg(a) * w[a];
        }
        // zero coordinates whose dual moves inward leave the boundary
        let v = &c - &gram.dot(&theta);
        for (a, &j) in bset.iter().enumerate() {
            if w[a] == T::zero() && sg(a) * v[j] < -stat_tol {
                sign[j] = 0;
            }
        }
    }

    Ok(IssPath { segments, converged })
}

/// Residual correlation `(1/n) X̃ᵀ(ỹ − X̃θ̃)` in the fitted coordinates of
/// `iss_path`, for checking optimality conditions.
pub fn fitted_correlation<T: Scalar>(
    x: ArrayView2<T>,
    y: ArrayView1<T>,
    theta: ArrayView1<T>,
    intercept: T,
) -> Array1<T> {
    let nf = T::count(x.nrows().max(1));
    let r = &y - &x.dot(&theta) - intercept;
    x.t().dot(&r) / nf
}

/// Columns of `X` centered (when `center`) and scaled as `iss_path` fits them.
pub fn fitted_design<T: Scalar>(x: ArrayView2<T>, center: bool, normalize: bool) -> Result<Array2<T>> {
    if normalize {
        Ok(ColumnScaling::fit(x, center)?.apply(x))
    } else if center {
        let mu = crate::linalg::column_means(x);
        Ok(&x - &mu.insert_axis(Axis(0)))
    } else {
        Ok(x.to_owned())
    }
}
