//! Independent loss oracles and a finite-difference gradient suite covering
//! every loss family.

use ndarray::{concatenate, s, Array1, Array2, Axis};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sparsepath::bregman::gradient_of;
use sparsepath::glm::{BinomialModel, LinearModel, MultinomialModel};
use sparsepath::graphical::{Coding, GgmModel, IsingModel, PairIndex, PottsModel};
use sparsepath::linalg::covariance;
use sparsepath::LossModel;

use super::{binary_matrix, fd_gradient, gaussian_matrix, gaussian_vector, rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Linear,
    Binomial,
    Multinomial,
    Ggm,
    Ising,
    Potts,
}

pub const FAMILIES: [Family; 6] = [
    Family::Linear,
    Family::Binomial,
    Family::Multinomial,
    Family::Ggm,
    Family::Ising,
    Family::Potts,
];

pub type Oracle = Box<dyn Fn(&Array1<f64>, &Array1<f64>) -> f64>;

/// A model, a parameter point and an independently written loss.
pub struct Instance {
    pub model: Box<dyn LossModel<f64>>,
    pub theta0: Array1<f64>,
    pub theta: Array1<f64>,
    pub oracle: Oracle,
}

pub fn softplus(v: f64) -> f64 {
    if v > 0.0 {
        v + (-v).exp().ln_1p()
    } else {
        v.exp().ln_1p()
    }
}

pub fn lse(v: &[f64]) -> f64 {
    let m = v.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

pub fn split(v: &Array1<f64>, d0: usize) -> (Array1<f64>, Array1<f64>) {
    (v.slice(s![..d0]).to_owned(), v.slice(s![d0..]).to_owned())
}

pub fn categorical_matrix(r: &mut ChaCha8Rng, n: usize, levels: &[usize]) -> Array2<i64> {
    Array2::from_shape_fn((n, levels.len()), |(i, j)| {
        if i < levels[j] {
            i as i64
        } else {
            r.random_range(0..levels[j]) as i64
        }
    })
}

pub fn ggm_oracle(s: &Array2<f64>, diag: &Array1<f64>, off: &Array1<f64>) -> f64 {
    let p = diag.len();
    let pairs = PairIndex::new(p);
    let theta = |j: usize, k: usize| if j == k { diag[j] } else { off[pairs.index(j.min(k), j.max(k))] };
    let mut total = 0.0;
    for j in 0..p {
        let mut q = 0.0;
        for a in 0..p {
            for b in 0..p {
                q += theta(a, j) * s[[a, b]] * theta(b, j);
            }
        }
        total += q / (2.0 * diag[j]) - 0.5 * diag[j].ln();
    }
    total
}

/// Nodewise logistic losses on `{0,1}` data.
pub fn ising_oracle(x01: &Array2<f64>, a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    let (n, p) = x01.dim();
    let pairs = PairIndex::new(p);
    let mut total = 0.0;
    for i in 0..n {
        for v in 0..p {
            let mut eta = a.get(v).copied().unwrap_or(0.0);
            for k in 0..p {
                if k != v {
                    eta += b[pairs.index(v.min(k), v.max(k))] * x01[[i, k]];
                }
            }
            total += softplus(eta) - x01[[i, v]] * eta;
        }
    }
    total / n as f64
}

pub fn potts_oracle(model: &PottsModel<f64>, a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    let layout = model.layout();
    let codes = model.codes();
    let mut total = 0.0;
    for row in codes.rows() {
        for j in 0..layout.p() {
            let scores: Vec<f64> = (0..layout.levels(j))
                .map(|s| {
                    let mut e = if a.is_empty() { 0.0 } else { a[layout.intercept_index(j, s)] };
                    for k in 0..layout.p() {
                        if k != j {
                            e += b[layout.interaction_index(j, s, k, row[k])];
                        }
                    }
                    e
                })
                .collect();
            total += lse(&scores) - scores[row[j]];
        }
    }
    total / codes.nrows() as f64
}

/// Random instance `i` of `family`; odd `i` drop the intercept.
pub fn instance(family: Family, r: &mut ChaCha8Rng, i: usize) -> Instance {
    let intercept = i.is_multiple_of(2);
    let d0 = usize::from(intercept);
    match family {
        Family::Linear => {
            let (n, p) = (r.random_range(3..12), r.random_range(1..6));
            let x = gaussian_matrix(r, n, p);
            let y = gaussian_vector(r, n);
            let model = LinearModel::new(x.clone(), y.clone(), intercept).unwrap();
            Instance {
                model: Box::new(model),
                theta0: gaussian_vector(r, d0),
                theta: gaussian_vector(r, p),
                oracle: Box::new(move |a, b| {
                    let c = a.first().copied().unwrap_or(0.0);
                    let res = &y - &x.dot(b).mapv(|f| f + c);
                    res.dot(&res) / (2.0 * n as f64)
                }),
            }
        }
        Family::Binomial => {
            let (n, p) = (r.random_range(3..12), r.random_range(1..6));
            let x = gaussian_matrix(r, n, p);
            let mut y: Array1<f64> = (0..n).map(|_| if r.random::<bool>() { 1.0 } else { -1.0 }).collect();
            y[0] = 1.0;
            y[1] = -1.0;
            let model = BinomialModel::new(x.clone(), y.clone(), intercept).unwrap();
            Instance {
                model: Box::new(model),
                theta0: gaussian_vector(r, d0),
                theta: gaussian_vector(r, p),
                oracle: Box::new(move |a, b| {
                    let c = a.first().copied().unwrap_or(0.0);
                    let m = x.dot(b);
                    (0..n).map(|i| softplus(-y[i] * (m[i] + c))).sum::<f64>() / n as f64
                }),
            }
        }
        Family::Multinomial => {
            let (n, p, k) = (r.random_range(6..14), r.random_range(1..5), r.random_range(2..5));
            let x = gaussian_matrix(r, n, p);
            let labels: Vec<usize> = (0..n).map(|i| if i < k { i } else { r.random_range(0..k) }).collect();
            let model = MultinomialModel::new(x.clone(), labels.clone(), k, intercept).unwrap();
            Instance {
                model: Box::new(model),
                theta0: gaussian_vector(r, d0 * k),
                theta: gaussian_vector(r, p * k),
                oracle: Box::new(move |a, b| {
                    let mut total = 0.0;
                    for i in 0..n {
                        let scores: Vec<f64> = (0..k)
                            .map(|c| {
                                a.get(c).copied().unwrap_or(0.0)
                                    + (0..p).map(|j| x[[i, j]] * b[j * k + c]).sum::<f64>()
                            })
                            .collect();
                        total += lse(&scores) - scores[labels[i]];
                    }
                    total / n as f64
                }),
            }
        }
        Family::Ggm => {
            let p = r.random_range(2..6);
            let x = gaussian_matrix(r, 3 * p, p);
            let sm = covariance(x.view());
            Instance {
                model: Box::new(GgmModel::from_data(x.view()).unwrap()),
                theta0: gaussian_vector(r, p).mapv(|v| 0.5 + v.abs()),
                theta: gaussian_vector(r, PairIndex::new(p).len()) * 0.3,
                oracle: Box::new(move |a, b| ggm_oracle(&sm, a, b)),
            }
        }
        Family::Ising => {
            let p = r.random_range(2..6);
            let x = binary_matrix(r, 12, p);
            let coding = if i % 4 < 2 { Coding::ZeroOne } else { Coding::PlusMinusOne };
            let input = match coding {
                Coding::ZeroOne => x.clone(),
                Coding::PlusMinusOne => x.mapv(|v| 2.0 * v - 1.0),
            };
            Instance {
                model: Box::new(IsingModel::new(input.view(), coding, intercept).unwrap()),
                theta0: gaussian_vector(r, d0 * p),
                theta: gaussian_vector(r, PairIndex::new(p).len()),
                oracle: Box::new(move |a, b| ising_oracle(&x, a, b)),
            }
        }
        Family::Potts => {
            let p = r.random_range(2..5);
            let levels: Vec<usize> = (0..p).map(|_| r.random_range(2..5)).collect();
            let x = categorical_matrix(r, 12, &levels);
            let model = PottsModel::<f64>::new(x.view(), intercept, i.is_multiple_of(3)).unwrap();
            let (d, m) = (model.layout().n_intercepts(), model.layout().n_interactions());
            let theta0 = gaussian_vector(r, d0 * d);
            let theta = gaussian_vector(r, m);
            let oracle_model = model.clone();
            Instance {
                model: Box::new(model),
                theta0,
                theta,
                oracle: Box::new(move |a, b| potts_oracle(&oracle_model, a, b)),
            }
        }
    }
}

/// Loss discrepancy and `‖∇ − ∇_fd‖₂ / ‖∇_fd‖₂` at one instance.
pub fn gradient_error(inst: &Instance) -> (f64, f64) {
    let d0 = inst.theta0.len();
    let l = inst.model.loss(inst.theta0.view(), inst.theta.view());
    let lo = (inst.oracle)(&inst.theta0, &inst.theta);
    let loss_err = (l - lo).abs() / lo.abs().max(1.0);
    let joint = concatenate![Axis(0), inst.theta0.view(), inst.theta.view()];
    let fd = fd_gradient(
        |v| {
            let (a, b) = split(v, d0);
            (inst.oracle)(&a, &b)
        },
        &joint,
        1e-5,
    );
    let (g0, g) = gradient_of(inst.model.as_ref(), inst.theta0.view(), inst.theta.view());
    let an = concatenate![Axis(0), g0.view(), g.view()];
    let diff = &an - &fd;
    (loss_err, diff.dot(&diff).sqrt() / fd.dot(&fd).sqrt().max(1e-12))
}

/// Worst loss and gradient errors over `count` random instances.
pub fn gradient_suite(family: Family, count: usize, seed: u64) -> (f64, f64) {
    let mut r = rng(seed);
    (0..count).fold((0.0f64, 0.0f64), |(a, b), i| {
        let (l, g) = gradient_error(&instance(family, &mut r, i));
        (a.max(l), b.max(g))
    })
}
