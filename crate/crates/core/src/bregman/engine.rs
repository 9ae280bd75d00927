use ndarray::{Array1, Zip};

use crate::bregman::config::{resolve_tlist, PathConfig, StepSize};
use crate::bregman::model::{gradient_of, LossModel};
use crate::bregman::path::{blend, BregmanState, SolutionPath};
use crate::bregman::shrinkage::{group_norms, shrink_into};
use crate::error::{check_len, Error, Result};
use crate::groups::GroupIndex;
use crate::scalar::Scalar;

/// Where the iteration starts: the first time any group becomes active.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryPoint<T> {
    pub t0: T,
    /// Dual variable at `t0`; its largest group norm is one.
    pub z0: Array1<T>,
    /// `argmin_{θ₀} L(θ₀, 0)`.
    pub theta0: Array1<T>,
    /// `∇_θ L(θ₀, 0)`, constant for `t ≤ t0`.
    pub null_gradient: Array1<T>,
}

/// Computes the first entry time of the path.
///
/// Before any group enters, the penalized gradient at the intercept-only
/// minimizer is constant, so `z(t) = −t·g` and the first group reaches the
/// unit sphere at `t0 = 1 / max_g ‖g_g‖₂`.
pub fn first_entry_time<T, M>(model: &M, groups: &GroupIndex) -> Result<EntryPoint<T>>
where
    T: Scalar,
    M: LossModel<T> + ?Sized,
{
    check_len("group index", model.dim_penalized(), groups.len())?;
    let theta0 = model.init_unpenalized()?;
    check_len("intercept initializer", model.dim_unpenalized(), theta0.len())?;
    let zero = Array1::zeros(model.dim_penalized());
    let (_, g) = gradient_of(model, theta0.view(), zero.view());
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalDivergence {
            iteration: 0,
            t: 0.0,
            quantity: "null-model gradient",
        });
    }
    let gmax = group_norms(g.view(), groups)
        .into_iter()
        .fold(T::zero(), T::max);
    if gmax == T::zero() {
        return Err(Error::DegenerateProblem(
            "zero gradient at the null model; no variable ever enters".into(),
        ));
    }
    let t0 = T::one() / gmax;
    let mut z0 = g.mapv(|v| -t0 * v);
    clamp_to_unit_ball(&mut z0, groups);
    Ok(EntryPoint {
        t0,
        z0,
        theta0,
        null_gradient: g,
    })
}

/// Pulls any group whose rounded norm exceeds one back onto the unit ball so
/// that the estimate at `t0` is exactly zero.
fn clamp_to_unit_ball<T: Scalar>(z: &mut Array1<T>, groups: &GroupIndex) {
    let one = T::one();
    for members in groups.iter() {
        let mut norm = members.iter().map(|&j| z[j] * z[j]).sum::<T>().sqrt();
        let mut shrink = one / norm;
        while norm > one {
            for &j in members {
                z[j] *= shrink;
            }
            norm = members.iter().map(|&j| z[j] * z[j]).sum::<T>().sqrt();
            shrink = one - T::epsilon();
        }
    }
}

/// Default step size `α = 1 / (κ · L̂)`, half the stability limit `ακL̂ ≤ 2`.
pub fn default_alpha<T, M>(model: &M, kappa: T) -> T
where
    T: Scalar,
    M: LossModel<T> + ?Sized,
{
    T::one() / (kappa * model.curvature_bound())
}

/// Stepwise Linearized Bregman iteration started at the first entry time.
#[derive(Debug)]
pub struct LinearizedBregman<'a, T: Scalar, M: ?Sized> {
    model: &'a M,
    groups: &'a GroupIndex,
    kappa: T,
    alpha: T,
    t0: T,
    state: BregmanState<T>,
    g0: Array1<T>,
    g: Array1<T>,
    entry_times: Vec<Option<T>>,
}

impl<'a, T, M> LinearizedBregman<'a, T, M>
where
    T: Scalar,
    M: LossModel<T> + ?Sized,
{
    pub fn new(model: &'a M, groups: &'a GroupIndex, kappa: T, alpha: T) -> Result<Self> {
        let entry = first_entry_time(model, groups)?;
        Ok(Self::from_entry(model, groups, kappa, alpha, entry))
    }

    pub fn from_entry(
        model: &'a M,
        groups: &'a GroupIndex,
        kappa: T,
        alpha: T,
        entry: EntryPoint<T>,
    ) -> Self {
        let mut theta = Array1::zeros(entry.z0.len());
        shrink_into(entry.z0.view(), groups, kappa, theta.view_mut());
        let state = BregmanState {
            k: 0,
            t: entry.t0,
            z: entry.z0,
            theta,
            theta0: entry.theta0,
        };
        let mut lb = LinearizedBregman {
            model,
            groups,
            kappa,
            alpha,
            t0: entry.t0,
            g0: Array1::zeros(model.dim_unpenalized()),
            g: Array1::zeros(model.dim_penalized()),
            entry_times: vec![None; groups.n_groups()],
            state,
        };
        lb.record_entries();
        lb
    }

    pub fn state(&self) -> &BregmanState<T> {
        &self.state
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn entry_times(&self) -> &[Option<T>] {
        &self.entry_times
    }

    /// Time of iterate `k`.
    pub fn time_of(&self, k: usize) -> T {
        self.t0 + T::count(k) * self.alpha
    }

    /// One iteration: dual step, shrinkage, unpenalized step, clock.
    pub fn step(&mut self) -> Result<()> {
        let s = &mut self.state;
        self.model.gradient(
            s.theta0.view(),
            s.theta.view(),
            self.g0.view_mut(),
            self.g.view_mut(),
        );
        let t = s.t.as_f64();
        if self.g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalDivergence {
                iteration: s.k,
                t,
                quantity: "penalized gradient",
            });
        }
        if self.g0.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalDivergence {
                iteration: s.k,
                t,
                quantity: "unpenalized gradient",
            });
        }
        let alpha = self.alpha;
        Zip::from(&mut s.z).and(&self.g).for_each(|z, &g| *z -= alpha * g);
        shrink_into(s.z.view(), self.groups, self.kappa, s.theta.view_mut());
        let step0 = self.kappa * alpha;
        Zip::from(&mut s.theta0)
            .and(&self.g0)
            .for_each(|th, &g| *th -= step0 * g);
        s.k += 1;
        s.t = self.t0 + T::count(s.k) * alpha;
        if let Err(reason) = self.model.check_unpenalized(s.theta0.view()) {
            return Err(Error::Domain {
                iteration: s.k,
                t: s.t.as_f64(),
                reason,
            });
        }
        self.record_entries();
        Ok(())
    }

    fn record_entries(&mut self) {
        let s = &self.state;
        for (gi, members) in self.groups.iter().enumerate() {
            if self.entry_times[gi].is_none() && members.iter().any(|&j| s.theta[j] != T::zero())
            {
                self.entry_times[gi] = Some(s.t);
            }
        }
    }
}

/// Runs the Linearized Bregman iteration and samples the path at the
/// resolved output times.
///
/// The iteration runs from the first entry time until the first iterate with
/// `t ≥ max(tlist)`. Output times before the first entry time lie on the
/// exact null segment `θ = 0`, `z = −t·g`.
pub fn run_lb<T, M>(model: &M, groups: &GroupIndex, config: &PathConfig<T>) -> Result<SolutionPath<T>>
where
    T: Scalar,
    M: LossModel<T> + ?Sized,
{
    config.validate()?;
    let entry = first_entry_time(model, groups)?;
    let alpha = match config.alpha {
        StepSize::Fixed(a) => a,
        StepSize::Auto => default_alpha(model, config.kappa),
    };
    if !(alpha > T::zero() && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "resolved step size {alpha} is not positive and finite"
        )));
    }
    let tlist = resolve_tlist(entry.t0, config);
    let null_theta0 = entry.theta0.clone();
    let null_theta = Array1::<T>::zeros(model.dim_penalized());

    let mut lb = LinearizedBregman::from_entry(model, groups, config.kappa, alpha, entry);
    let mut prev = lb.state().clone();

    let mut times = Vec::with_capacity(tlist.len());
    let mut theta0_path = Vec::with_capacity(tlist.len());
    let mut theta_path = Vec::with_capacity(tlist.len());
    let mut loss = Vec::with_capacity(tlist.len());
    let mut next = 0;

    while next < tlist.len() && tlist[next] < lb.t0() {
        times.push(tlist[next]);
        theta0_path.push(null_theta0.clone());
        theta_path.push(null_theta.clone());
        loss.push(model.loss(null_theta0.view(), null_theta.view()));
        next += 1;
    }

    loop {
        let cur = lb.state();
        while next < tlist.len() && tlist[next] <= cur.t {
            let t = tlist[next];
            let (th0, th) = blend(&prev, cur, t, config.kappa, groups);
            let l = model.loss(th0.view(), th.view());
            if !l.is_finite() {
                return Err(Error::NumericalDivergence {
                    iteration: cur.k,
                    t: t.as_f64(),
                    quantity: "loss",
                });
            }
            times.push(t);
            theta0_path.push(th0);
            theta_path.push(th);
            loss.push(l);
            next += 1;
        }
        if next == tlist.len() {
            break;
        }
        prev.clone_from(cur);
        lb.step()?;
    }

    Ok(SolutionPath {
        times,
        theta0: theta0_path,
        theta: theta_path,
        loss,
        t0: lb.t0(),
        kappa: config.kappa,
        alpha,
        iterations: lb.state().k,
        entry_times: lb.entry_times().to_vec(),
        final_state: lb.state().clone(),
    })
}
