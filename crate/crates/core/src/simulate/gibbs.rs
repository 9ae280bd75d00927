use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphical::Coding;
use crate::scalar::Scalar;

/// 10×10-style lattice Ising model with a common coupling on the
/// 4-neighbor edges.
#[derive(Debug, Clone, PartialEq)]
pub struct GridIsingSpec {
    pub rows: usize,
    pub cols: usize,
    pub coupling: f64,
    /// Per-site field `h`; empty means zero.
    pub field: Vec<f64>,
    pub n_samples: usize,
    pub burn_in: usize,
    pub thinning: usize,
    pub seed: u64,
}

impl GridIsingSpec {
    pub fn new(rows: usize, cols: usize, coupling: f64, n_samples: usize, seed: u64) -> Self {
        GridIsingSpec {
            rows,
            cols,
            coupling,
            field: Vec::new(),
            n_samples,
            burn_in: 1000,
            thinning: 10,
            seed,
        }
    }

    pub fn p(&self) -> usize {
        self.rows * self.cols
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        grid_edges(self.rows, self.cols)
    }

    pub fn graph(&self) -> Result<IsingGraph> {
        let p = self.p();
        if !self.coupling.is_finite() {
            return Err(Error::InvalidArgument("coupling must be finite".into()));
        }
        let h = if self.field.is_empty() {
            vec![0.0; p]
        } else if self.field.len() == p {
            self.field.clone()
        } else {
            return Err(Error::DimensionMismatch {
                what: "field length",
                expected: p,
                found: self.field.len(),
            });
        };
        let edges: Vec<_> = self.edges().into_iter().map(|(a, b)| (a, b, self.coupling)).collect();
        IsingGraph::new(h, &edges)
    }
}

/// Edges `(j, k)`, `j < k`, of the `rows × cols` 4-neighbor lattice with
/// row-major node ids: for each node, its right neighbor, then the one below.
pub fn grid_edges(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    edges
}

/// Sparse ±1 Ising model with `P(x_v = 1 | x_{−v}) = σ(h_v + Σ_k J_vk x_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingGraph {
    h: Vec<f64>,
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl IsingGraph {
    pub fn new(h: Vec<f64>, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let p = h.len();
        let mut neighbors = vec![Vec::new(); p];
        for &(a, b, w) in edges {
            if a == b || a >= p || b >= p {
                return Err(Error::InvalidArgument(format!("invalid edge ({a}, {b}) for {p} nodes")));
            }
            neighbors[a].push((b, w));
            neighbors[b].push((a, w));
        }
        Ok(IsingGraph { h, neighbors })
    }

    pub fn p(&self) -> usize {
        self.h.len()
    }

    /// Log-odds of `x_v = +1` given the other spins.
    pub fn log_odds(&self, v: usize, x: &[f64]) -> f64 {
        self.h[v] + self.neighbors[v].iter().map(|&(k, w)| w * x[k]).sum::<f64>()
    }
}

/// Systematic-scan Gibbs sampler. The chain starts from uniform random
/// spins, discards `burn_in` sweeps and keeps every `thinning`-th sweep.
pub fn gibbs_sample<T: Scalar>(
    graph: &IsingGraph,
    n_samples: usize,
    burn_in: usize,
    thinning: usize,
    seed: u64,
    coding: Coding,
) -> Result<Array2<T>> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be positive".into()));
    }
    if thinning == 0 {
        return Err(Error::InvalidArgument("thinning must be positive".into()));
    }
    let p = graph.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..p).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
    let sweep = |x: &mut Vec<f64>, rng: &mut ChaCha8Rng| {
        for v in 0..p {
            let prob = 1.0 / (1.0 + (-graph.log_odds(v, x)).exp());
            x[v] = if rng.random::<f64>() < prob { 1.0 } else { -1.0 };
        }
    };
    for _ in 0..burn_in {
        sweep(&mut x, &mut rng);
    }
    let mut out = Array2::zeros((n_samples, p));
    for i in 0..n_samples {
        for _ in 0..thinning {
            sweep(&mut x, &mut rng);
        }
        let row = Array1::from_iter(x.iter().map(|&s| match coding {
            Coding::PlusMinusOne => T::lit(s),
            Coding::ZeroOne => T::lit((s + 1.0) / 2.0),
        }));
        out.row_mut(i).assign(&row);
    }
    Ok(out)
}

/// Samples the lattice model described by `spec`.
pub fn gibbs_sample_ising<T: Scalar>(spec: &GridIsingSpec, coding: Coding) -> Result<Array2<T>> {
    gibbs_sample(
        &spec.graph()?,
        spec.n_samples,
        spec.burn_in,
        spec.thinning,
        spec.seed,
        coding,
    )
}
