use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Step size of the dual update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize<T> {
    /// `α = 1 / (κ · L̂)` from the model's curvature bound.
    Auto,
    Fixed(T),
}

/// Everything the iteration needs besides the loss and the grouping.
#[derive(Debug, Clone, PartialEq)]
pub struct PathConfig<T> {
    /// Damping factor κ linking the dual variable to the estimate.
    pub kappa: T,
    pub alpha: StepSize<T>,
    /// Output times. When absent a geometric grid of `nt` points from the
    /// first entry time `t₀` to `t₀ · trate` is used.
    pub tlist: Option<Vec<T>>,
    pub nt: usize,
    pub trate: T,
}

impl<T: Scalar> PathConfig<T> {
    pub fn new(kappa: T) -> Self {
        PathConfig {
            kappa,
            alpha: StepSize::Auto,
            tlist: None,
            nt: 100,
            trate: T::lit(100.0),
        }
    }

    pub fn with_alpha(mut self, alpha: T) -> Self {
        self.alpha = StepSize::Fixed(alpha);
        self
    }

    pub fn with_tlist(mut self, tlist: Vec<T>) -> Self {
        self.tlist = Some(tlist);
        self
    }

    pub fn with_grid(mut self, nt: usize, trate: T) -> Self {
        self.nt = nt;
        self.trate = trate;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if !(self.kappa > T::zero() && self.kappa.is_finite()) {
            return bad("kappa must be positive and finite");
        }
        if let StepSize::Fixed(a) = self.alpha {
            if !(a > T::zero() && a.is_finite()) {
                return bad("alpha must be positive and finite");
            }
        }
        if self.nt == 0 {
            return bad("nt must be at least 1");
        }
        if !(self.trate > T::one() && self.trate.is_finite()) {
            return bad("trate must be finite and greater than 1");
        }
        if let Some(tl) = &self.tlist {
            if tl.is_empty() {
                return bad("tlist must not be empty");
            }
            if tl.iter().any(|t| !(*t > T::zero() && t.is_finite())) {
                return bad("tlist entries must be positive and finite");
            }
            if tl.windows(2).any(|w| !(w[0] < w[1])) {
                return bad("tlist must be strictly increasing");
            }
        }
        Ok(())
    }
}

/// Output times for a path that starts at `t0`.
pub fn resolve_tlist<T: Scalar>(t0: T, config: &PathConfig<T>) -> Vec<T> {
    if let Some(tl) = &config.tlist {
        return tl.clone();
    }
    let nt = config.nt;
    if nt == 1 {
        return vec![t0];
    }
    let last = T::count(nt - 1);
    (0..nt)
        .map(|i| {
            if i + 1 == nt {
                t0 * config.trate
            } else {
                t0 * config.trate.powf(T::count(i) / last)
            }
        })
        .collect()
}
