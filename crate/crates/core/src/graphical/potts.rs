use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut1, Axis};

use crate::bregman::LossModel;
use crate::error::{check_len, Error, Result};
use crate::graphical::pairs::PairIndex;
use crate::groups::GroupIndex;
use crate::linalg::power_iteration;
use crate::scalar::Scalar;

/// Class sets of a categorical data matrix and the index layout of the Potts
/// parameters built on it.
///
/// Intercepts are stored node by node (`K_j` entries for variable `j`).
/// Interactions are stored once per unordered pair `j < k` as a row-major
/// `K_j × K_k` block `B[s][t] = θ_{js,kt}`; `θ_{kt,js}` is the transpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PottsLayout {
    classes: Vec<Vec<i64>>,
    node_offset: Vec<usize>,
    block_offset: Vec<usize>,
    pairs: PairIndex,
}

impl PottsLayout {
    /// Collects the sorted class labels of each column. A column with a single
    /// observed class is rejected.
    pub fn from_data(x: ArrayView2<i64>) -> Result<Self> {
        let mut classes = Vec::with_capacity(x.ncols());
        for (j, col) in x.axis_iter(Axis(1)).enumerate() {
            let mut c: Vec<i64> = col.to_vec();
            c.sort_unstable();
            c.dedup();
            if c.len() < 2 {
                return Err(Error::DegenerateVariable {
                    column: j,
                    reason: "categorical column with a single class".into(),
                });
            }
            classes.push(c);
        }
        Ok(Self::from_classes(classes))
    }

    pub fn from_classes(classes: Vec<Vec<i64>>) -> Self {
        let p = classes.len();
        let pairs = PairIndex::new(p);
        let mut node_offset = Vec::with_capacity(p + 1);
        let mut acc = 0;
        for c in &classes {
            node_offset.push(acc);
            acc += c.len();
        }
        node_offset.push(acc);
        let mut block_offset = Vec::with_capacity(pairs.len() + 1);
        let mut acc = 0;
        for (j, k) in pairs.iter() {
            block_offset.push(acc);
            acc += classes[j].len() * classes[k].len();
        }
        block_offset.push(acc);
        PottsLayout {
            classes,
            node_offset,
            block_offset,
            pairs,
        }
    }

    pub fn p(&self) -> usize {
        self.classes.len()
    }

    /// `K_j`.
    pub fn levels(&self, j: usize) -> usize {
        self.classes[j].len()
    }

    pub fn classes(&self, j: usize) -> &[i64] {
        &self.classes[j]
    }

    pub fn pairs(&self) -> PairIndex {
        self.pairs
    }

    /// `Σ_j K_j`.
    pub fn n_intercepts(&self) -> usize {
        self.node_offset[self.p()]
    }

    pub fn n_interactions(&self) -> usize {
        self.block_offset[self.pairs.len()]
    }

    /// Position of `θ_{j0,s}` among the intercepts.
    pub fn intercept_index(&self, j: usize, s: usize) -> usize {
        self.node_offset[j] + s
    }

    /// Position of `θ_{js,kt}` (`j != k`) among the interactions.
    pub fn interaction_index(&self, j: usize, s: usize, k: usize, t: usize) -> usize {
        let base = self.block_offset[self.pairs.index(j, k)];
        if j < k {
            base + s * self.levels(k) + t
        } else {
            base + t * self.levels(j) + s
        }
    }

    /// Range of the block for pair `{j, k}`.
    pub fn block_range(&self, j: usize, k: usize) -> std::ops::Range<usize> {
        let i = self.pairs.index(j, k);
        self.block_offset[i]..self.block_offset[i + 1]
    }

    /// Maps labels to class positions; labels outside a column's class set
    /// are rejected.
    pub fn encode(&self, x: ArrayView2<i64>) -> Result<Array2<usize>> {
        check_len("number of columns", self.p(), x.ncols())?;
        let mut out = Array2::zeros(x.raw_dim());
        for ((i, j), &v) in x.indexed_iter() {
            out[[i, j]] = self.classes[j].binary_search(&v).map_err(|_| {
                Error::InvalidArgument(format!("unseen class {v} at row {i}, column {j}"))
            })?;
        }
        Ok(out)
    }
}

/// Potts parameters over a fixed layout.
#[derive(Debug, Clone, PartialEq)]
pub struct PottsParams<T> {
    pub theta0: Array1<T>,
    pub interactions: Array1<T>,
    /// Penalize each pair block as a group rather than entrywise.
    pub group_mode: bool,
    pub layout: PottsLayout,
}

impl<T: Scalar> PottsParams<T> {
    pub fn zeros(layout: PottsLayout, group_mode: bool) -> Self {
        PottsParams {
            theta0: Array1::zeros(layout.n_intercepts()),
            interactions: Array1::zeros(layout.n_interactions()),
            group_mode,
            layout,
        }
    }

    /// `θ_{js,kt}` for `j != k`.
    pub fn coupling(&self, j: usize, s: usize, k: usize, t: usize) -> T {
        self.interactions[self.layout.interaction_index(j, s, k, t)]
    }

    /// Dense symmetric `ΣK × ΣK` interaction matrix with zero diagonal blocks.
    pub fn interaction_matrix(&self) -> Array2<T> {
        let l = &self.layout;
        let d = l.n_intercepts();
        let mut m = Array2::zeros((d, d));
        for (j, k) in l.pairs.iter() {
            for s in 0..l.levels(j) {
                for t in 0..l.levels(k) {
                    let v = self.coupling(j, s, k, t);
                    m[[l.intercept_index(j, s), l.intercept_index(k, t)]] = v;
                    m[[l.intercept_index(k, t), l.intercept_index(j, s)]] = v;
                }
            }
        }
        m
    }

    /// `P(x_j = s | x_{−j})` over the classes of `j`, for an encoded
    /// observation.
    pub fn conditional_probs(&self, j: usize, codes: ArrayView1<usize>) -> Array1<T> {
        let mut eta = Array1::zeros(self.layout.levels(j));
        node_scores(
            &self.layout,
            self.theta0.view(),
            self.interactions.view(),
            j,
            codes,
            &mut eta,
        );
        softmax_inplace(&mut eta);
        eta
    }
}

/// Group index for the Potts interactions: one group per pair block in group
/// mode, singletons otherwise.
pub fn potts_groups<T: Scalar>(params: &PottsParams<T>) -> GroupIndex {
    layout_groups(&params.layout, params.group_mode)
}

fn layout_groups(layout: &PottsLayout, group_mode: bool) -> GroupIndex {
    if !group_mode {
        return GroupIndex::singletons(layout.n_interactions());
    }
    let sizes: Vec<usize> = layout
        .pairs
        .iter()
        .map(|(j, k)| layout.levels(j) * layout.levels(k))
        .collect();
    GroupIndex::contiguous(&sizes).expect("pair blocks are nonempty")
}

fn node_scores<T: Scalar>(
    layout: &PottsLayout,
    theta0: ArrayView1<T>,
    inter: ArrayView1<T>,
    j: usize,
    codes: ArrayView1<usize>,
    eta: &mut Array1<T>,
) {
    let kj = layout.levels(j);
    if theta0.is_empty() {
        eta.fill(T::zero());
    } else {
        let o = layout.node_offset[j];
        eta.assign(&theta0.slice(ndarray::s![o..o + kj]));
    }
    for k in 0..layout.p() {
        if k == j {
            continue;
        }
        let t = codes[k];
        let base = layout.block_offset[layout.pairs.index(j, k)];
        if j < k {
            let kk = layout.levels(k);
            for s in 0..kj {
                eta[s] += inter[base + s * kk + t];
            }
        } else {
            let row = base + t * kj;
            for s in 0..kj {
                eta[s] += inter[row + s];
            }
        }
    }
}

fn softmax_inplace<T: Scalar>(eta: &mut Array1<T>) -> T {
    let m = eta.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
    eta.mapv_inplace(|e| (e - m).exp());
    let z = eta.sum();
    eta.mapv_inplace(|e| e / z);
    m + z.ln()
}

/// Loss and, when requested, gradients of the Potts composite likelihood on
/// encoded data.
fn potts_eval<T: Scalar>(
    layout: &PottsLayout,
    codes: ArrayView2<usize>,
    theta0: ArrayView1<T>,
    inter: ArrayView1<T>,
    mut grads: Option<(ArrayViewMut1<T>, ArrayViewMut1<T>)>,
) -> T {
    let n = T::count(codes.nrows().max(1));
    let per_obs = T::one() / n;
    let with_intercept = !theta0.is_empty();
    if let Some((g0, g)) = grads.as_mut() {
        g0.fill(T::zero());
        g.fill(T::zero());
    }
    let kmax = (0..layout.p()).map(|j| layout.levels(j)).max().unwrap_or(0);
    let mut buf = Array1::zeros(kmax);
    let mut loss = T::zero();
    for row in codes.axis_iter(Axis(0)) {
        for j in 0..layout.p() {
            let kj = layout.levels(j);
            let mut eta = buf.slice_mut(ndarray::s![..kj]).to_owned();
            node_scores(layout, theta0, inter, j, row, &mut eta);
            let obs = row[j];
            let lse = {
                let m = eta.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
                m + eta.iter().map(|&e| (e - m).exp()).sum::<T>().ln()
            };
            loss += lse - eta[obs];
            let Some((g0, g)) = grads.as_mut() else {
                continue;
            };
            eta.mapv_inplace(|e| (e - lse).exp());
            eta[obs] -= T::one();
            eta.mapv_inplace(|r| r * per_obs);
            if with_intercept {
                let o = layout.node_offset[j];
                for s in 0..kj {
                    g0[o + s] += eta[s];
                }
            }
            for k in 0..layout.p() {
                if k == j {
                    continue;
                }
                let t = row[k];
                let base = layout.block_offset[layout.pairs.index(j, k)];
                if j < k {
                    let kk = layout.levels(k);
                    for s in 0..kj {
                        g[base + s * kk + t] += eta[s];
                    }
                } else {
                    let r = base + t * kj;
                    for s in 0..kj {
                        g[r + s] += eta[s];
                    }
                }
            }
        }
        buf.fill(T::zero());
    }
    loss / n
}

/// Composite conditional likelihood of the Potts model and its gradient.
/// `x` holds raw class labels, which must belong to the layout's class sets.
pub fn potts_loss_grad<T: Scalar>(
    x: ArrayView2<i64>,
    params: &PottsParams<T>,
) -> Result<(T, Array1<T>, Array1<T>)> {
    let layout = &params.layout;
    check_len("intercept length", layout.n_intercepts(), params.theta0.len())?;
    check_len("interaction length", layout.n_interactions(), params.interactions.len())?;
    let codes = layout.encode(x)?;
    let mut g0 = Array1::zeros(layout.n_intercepts());
    let mut g = Array1::zeros(layout.n_interactions());
    let loss = potts_eval(
        layout,
        codes.view(),
        params.theta0.view(),
        params.interactions.view(),
        Some((g0.view_mut(), g.view_mut())),
    );
    Ok((loss, g0, g))
}

/// `θ_{j0,s} = log(n_{js}/n)`, the nodewise multinomial intercepts at zero
/// interactions.
pub fn potts_intercept_init<T: Scalar>(layout: &PottsLayout, codes: ArrayView2<usize>) -> Result<Array1<T>> {
    let n = T::count(codes.nrows().max(1));
    let mut out = Array1::zeros(layout.n_intercepts());
    for j in 0..layout.p() {
        let mut counts = vec![0usize; layout.levels(j)];
        for &c in codes.column(j) {
            counts[c] += 1;
        }
        for (s, &c) in counts.iter().enumerate() {
            if c == 0 {
                return Err(Error::DegenerateVariable {
                    column: j,
                    reason: format!("class {} never observed", layout.classes(j)[s]),
                });
            }
            out[layout.intercept_index(j, s)] = (T::count(c) / n).ln();
        }
    }
    Ok(out)
}

/// Potts composite likelihood as a path-engine loss.
#[derive(Debug, Clone)]
pub struct PottsModel<T> {
    layout: PottsLayout,
    codes: Array2<usize>,
    intercept: bool,
    group_mode: bool,
    curvature: T,
}

impl<T: Scalar> PottsModel<T> {
    pub fn new(x: ArrayView2<i64>, intercept: bool, group_mode: bool) -> Result<Self> {
        let layout = PottsLayout::from_data(x)?;
        let codes = layout.encode(x)?;
        let curvature = onehot_gram_norm::<T>(&layout, codes.view(), intercept);
        Ok(PottsModel {
            layout,
            codes,
            intercept,
            group_mode,
            curvature,
        })
    }

    pub fn layout(&self) -> &PottsLayout {
        &self.layout
    }

    pub fn codes(&self) -> ArrayView2<'_, usize> {
        self.codes.view()
    }

    pub fn groups(&self) -> GroupIndex {
        layout_groups(&self.layout, self.group_mode)
    }

    /// Wraps a penalized vector and an intercept vector as parameters.
    pub fn params(&self, theta0: ArrayView1<T>, theta: ArrayView1<T>) -> PottsParams<T> {
        PottsParams {
            theta0: if theta0.is_empty() {
                Array1::zeros(self.layout.n_intercepts())
            } else {
                theta0.to_owned()
            },
            interactions: theta.to_owned(),
            group_mode: self.group_mode,
            layout: self.layout.clone(),
        }
    }
}

/// `‖(1/n) D̃ᵀD̃‖` for the one-hot design `D` (plus a ones column), using
/// matrix-vector products computed from the class codes. Softmax curvature
/// is at most ½ and each block enters two nodes, so this bounds the Hessian.
fn onehot_gram_norm<T: Scalar>(layout: &PottsLayout, codes: ArrayView2<usize>, with_ones: bool) -> T {
    let n = T::count(codes.nrows().max(1));
    let off = usize::from(with_ones);
    let dim = layout.n_intercepts() + off;
    power_iteration(dim, |v| {
        let mut out = Array1::zeros(dim);
        for row in codes.axis_iter(Axis(0)) {
            let mut dv = if with_ones { v[0] } else { T::zero() };
            for (j, &c) in row.iter().enumerate() {
                dv += v[off + layout.intercept_index(j, c)];
            }
            if with_ones {
                out[0] += dv;
            }
            for (j, &c) in row.iter().enumerate() {
                out[off + layout.intercept_index(j, c)] += dv;
            }
        }
        out / n
    })
}

impl<T: Scalar> LossModel<T> for PottsModel<T> {
    fn dim_unpenalized(&self) -> usize {
        if self.intercept {
            self.layout.n_intercepts()
        } else {
            0
        }
    }

    fn dim_penalized(&self) -> usize {
        self.layout.n_interactions()
    }

    fn loss(&self, theta0: ArrayView1<T>, theta: ArrayView1<T>) -> T {
        potts_eval(&self.layout, self.codes.view(), theta0, theta, None)
    }

    fn gradient(
        &self,
        theta0: ArrayView1<T>,
        theta: ArrayView1<T>,
        g0: ArrayViewMut1<T>,
        g: ArrayViewMut1<T>,
    ) {
        potts_eval(&self.layout, self.codes.view(), theta0, theta, Some((g0, g)));
    }

    fn init_unpenalized(&self) -> Result<Array1<T>> {
        if self.intercept {
            potts_intercept_init(&self.layout, self.codes.view())
        } else {
            Ok(Array1::zeros(0))
        }
    }

    fn curvature_bound(&self) -> T {
        self.curvature
    }
}
