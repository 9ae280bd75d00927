use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut1};

use crate::bregman::LossModel;
use crate::error::{check_len, Error, Result};
use crate::graphical::pairs::PairIndex;
use crate::linalg::{covariance, sym_spectral_norm};
use crate::scalar::Scalar;

/// Symmetric precision matrix stored as its diagonal plus the upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionParams<T> {
    pub diag: Array1<T>,
    /// `Θ_jk` for `j < k` in [`PairIndex`] order.
    pub offdiag: Array1<T>,
}

impl<T: Scalar> PrecisionParams<T> {
    pub fn p(&self) -> usize {
        self.diag.len()
    }

    pub fn to_matrix(&self) -> Array2<T> {
        let p = self.p();
        let pairs = PairIndex::new(p);
        let mut m = Array2::from_diag(&self.diag);
        for (i, (j, k)) in pairs.iter().enumerate() {
            m[[j, k]] = self.offdiag[i];
            m[[k, j]] = self.offdiag[i];
        }
        m
    }
}

/// Checks that `s` is square and symmetric within `tol`.
pub fn check_symmetric<T: Scalar>(s: ArrayView2<T>, tol: T) -> Result<()> {
    if s.nrows() != s.ncols() {
        return Err(Error::InvalidArgument("covariance matrix is not square".into()));
    }
    for j in 0..s.nrows() {
        for k in (j + 1)..s.ncols() {
            if (s[[j, k]] - s[[k, j]]).abs() > tol {
                return Err(Error::InvalidArgument(format!(
                    "covariance matrix is not symmetric at ({j}, {k})"
                )));
            }
        }
    }
    Ok(())
}

/// Composite conditional Gaussian likelihood
/// `L(Θ) = Σ_j [Θ_{·j}ᵀ S Θ_{·j} / (2Θ_jj) − ½ log Θ_jj]`
/// and its gradient with respect to the diagonal and the stored off-diagonal
/// entries (both appearances of each symmetric entry summed).
pub fn ggm_loss_grad<T: Scalar>(
    s: ArrayView2<T>,
    params: &PrecisionParams<T>,
) -> Result<(T, Array1<T>, Array1<T>)> {
    let p = params.p();
    check_len("covariance dimension", p, s.nrows())?;
    check_len("off-diagonal length", PairIndex::new(p).len(), params.offdiag.len())?;
    if let Some(j) = params.diag.iter().position(|&d| !(d > T::zero())) {
        return Err(Error::InvalidArgument(format!(
            "precision diagonal entry {j} must be positive"
        )));
    }
    let theta = params.to_matrix();
    let mut g_diag = Array1::zeros(p);
    let mut g_off = Array1::zeros(params.offdiag.len());
    let loss = ggm_eval(s, &theta, Some((g_diag.view_mut(), g_off.view_mut())));
    Ok((loss, g_diag, g_off))
}

fn ggm_eval<T: Scalar>(
    s: ArrayView2<T>,
    theta: &Array2<T>,
    grads: Option<(ArrayViewMut1<T>, ArrayViewMut1<T>)>,
) -> T {
    let p = theta.nrows();
    let half = T::lit(0.5);
    // (SΘ)_{kj} = S_{k·} Θ_{·j}
    let st = s.dot(theta);
    let quad: Vec<T> = (0..p)
        .map(|j| (0..p).map(|i| theta[[i, j]] * st[[i, j]]).sum())
        .collect();
    let loss = (0..p)
        .map(|j| quad[j] / (T::lit(2.0) * theta[[j, j]]) - half * theta[[j, j]].ln())
        .sum();
    if let Some((mut g_diag, mut g_off)) = grads {
        for j in 0..p {
            let d = theta[[j, j]];
            g_diag[j] = st[[j, j]] / d - quad[j] / (T::lit(2.0) * d * d) - half / d;
        }
        for (i, (j, k)) in PairIndex::new(p).iter().enumerate() {
            g_off[i] = st[[k, j]] / theta[[j, j]] + st[[j, k]] / theta[[k, k]];
        }
    }
    loss
}

/// Null-model precision: zero off-diagonal, `Θ_jj = 1 / S_jj`.
pub fn ggm_init<T: Scalar>(s: ArrayView2<T>) -> Result<PrecisionParams<T>> {
    let p = s.nrows();
    let mut diag = Array1::zeros(p);
    for j in 0..p {
        if !(s[[j, j]] > T::zero()) {
            return Err(Error::DegenerateVariable {
                column: j,
                reason: "zero variance".into(),
            });
        }
        diag[j] = T::one() / s[[j, j]];
    }
    Ok(PrecisionParams {
        diag,
        offdiag: Array1::zeros(PairIndex::new(p).len()),
    })
}

/// Gaussian graphical model loss over a fixed covariance matrix.
///
/// The diagonal of Θ is unpenalized; the upper triangle is penalized.
#[derive(Debug, Clone)]
pub struct GgmModel<T> {
    s: Array2<T>,
    curvature: T,
}

impl<T: Scalar> GgmModel<T> {
    /// Covariance with `1/n` normalization after centering each column.
    pub fn from_data(x: ArrayView2<T>) -> Result<Self> {
        Self::from_covariance(covariance(x))
    }

    pub fn from_covariance(s: Array2<T>) -> Result<Self> {
        check_symmetric(s.view(), T::lit(1e-8))?;
        ggm_init(s.view())?;
        let smax = s.diag().iter().fold(T::zero(), |m, &v| m.max(v));
        let norm = sym_spectral_norm(s.view());
        // Node j's off-diagonal Hessian is S_{-j,-j} / Θ_jj with Θ_jj = 1/S_jj at the
        // null model; each entry sits in two nodes.
        let off = T::lit(2.0) * smax * norm;
        let diag = smax * smax / T::lit(2.0);
        Ok(GgmModel {
            s,
            curvature: off.max(diag),
        })
    }

    pub fn covariance(&self) -> ArrayView2<'_, T> {
        self.s.view()
    }

    pub fn p(&self) -> usize {
        self.s.nrows()
    }

    fn matrix(&self, diag: ArrayView1<T>, off: ArrayView1<T>) -> Array2<T> {
        let p = self.p();
        let mut m = Array2::from_diag(&diag);
        for (i, (j, k)) in PairIndex::new(p).iter().enumerate() {
            m[[j, k]] = off[i];
            m[[k, j]] = off[i];
        }
        m
    }
}

impl<T: Scalar> LossModel<T> for GgmModel<T> {
    fn dim_unpenalized(&self) -> usize {
        self.p()
    }

    fn dim_penalized(&self) -> usize {
        PairIndex::new(self.p()).len()
    }

    fn loss(&self, theta0: ArrayView1<T>, theta: ArrayView1<T>) -> T {
        if theta0.iter().any(|&d| !(d > T::zero())) {
            return T::nan();
        }
        ggm_eval(self.s.view(), &self.matrix(theta0, theta), None)
    }

    fn gradient(
        &self,
        theta0: ArrayView1<T>,
        theta: ArrayView1<T>,
        g0: ArrayViewMut1<T>,
        g: ArrayViewMut1<T>,
    ) {
        ggm_eval(self.s.view(), &self.matrix(theta0, theta), Some((g0, g)));
    }

    fn init_unpenalized(&self) -> Result<Array1<T>> {
        Ok(ggm_init(self.s.view())?.diag)
    }

    fn curvature_bound(&self) -> T {
        self.curvature
    }

    fn check_unpenalized(&self, theta0: ArrayView1<T>) -> std::result::Result<(), String> {
        match theta0.iter().position(|&d| !(d > T::zero())) {
            Some(j) => Err(format!("precision diagonal entry {j} became nonpositive")),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn identity_closed_form() {
        let s = Array2::<f64>::eye(2);
        let params = PrecisionParams {
            diag: array![1.0, 1.0],
            offdiag: array![0.0],
        };
        let (l, gd, go) = ggm_loss_grad(s.view(), &params).unwrap();
        assert!((l - 1.0).abs() < 1e-15);
        assert!(gd.iter().all(|v| v.abs() < 1e-15));
        assert_eq!(go[0], 0.0);
    }

    #[test]
    fn diagonal_covariance_is_stationary_offdiag() {
        let s: Array2<f64> = Array2::from_diag(&array![2.0, 0.5, 4.0]);
        let init = ggm_init(s.view()).unwrap();
        let (_, gd, go) = ggm_loss_grad(s.view(), &init).unwrap();
        assert!(go.iter().all(|v| v.abs() < 1e-15));
        assert!(gd.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn init_inverts_variances() {
        let s = array![[4.0, 1.0], [1.0, 1.0]];
        let init = ggm_init(s.view()).unwrap();
        assert_eq!(init.diag, array![0.25, 1.0]);
        assert_eq!(init.offdiag, array![0.0]);
        let eye = Array2::<f64>::eye(3);
        assert_eq!(ggm_init(eye.view()).unwrap().diag, array![1.0, 1.0, 1.0]);
    }

    #[test]
    fn zero_variance_rejected() {
        let s = array![[1.0, 0.0], [0.0, 0.0]];
        assert!(matches!(
            ggm_init(s.view()),
            Err(Error::DegenerateVariable { column: 1, .. })
        ));
    }

    #[test]
    fn nonpositive_diagonal_rejected() {
        let s = Array2::<f64>::eye(2);
        let params = PrecisionParams {
            diag: array![1.0, -0.1],
            offdiag: array![0.0],
        };
        assert!(ggm_loss_grad(s.view(), &params).is_err());
        let m = GgmModel::from_covariance(s).unwrap();
        assert!(m.check_unpenalized(array![1.0, 0.0].view()).is_err());
    }

    #[test]
    fn asymmetric_covariance_rejected() {
        let s = array![[1.0, 0.5], [0.4, 1.0]];
        assert!(GgmModel::from_covariance(s).is_err());
    }
}
