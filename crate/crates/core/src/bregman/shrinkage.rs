use ndarray::{Array1, ArrayView1, ArrayViewMut1};

use crate::error::{check_len, Result};
use crate::groups::GroupIndex;
use crate::scalar::Scalar;

/// Group soft-thresholding at level one: the proximal map of `Σ_g ‖θ_g‖₂`.
///
/// Each group is scaled by `max(0, 1 − 1/‖z_g‖₂)`; groups with norm at most one
/// map to exactly zero. Singleton groups reduce to scalar soft-thresholding.
pub fn shrinkage<T: Scalar>(z: ArrayView1<T>, groups: &GroupIndex) -> Result<Array1<T>> {
    check_len("shrinkage input", groups.len(), z.len())?;
    let mut out = Array1::zeros(z.len());
    shrink_into(z, groups, T::one(), out.view_mut());
    Ok(out)
}

/// Writes `scale · Shrinkage(z)` into `out`. Lengths are assumed checked.
pub(crate) fn shrink_into<T: Scalar>(
    z: ArrayView1<T>,
    groups: &GroupIndex,
    scale: T,
    mut out: ArrayViewMut1<T>,
) {
    let one = T::one();
    for members in groups.iter() {
        if let [j] = *members {
            let v = z[j];
            out[j] = if v > one {
                scale * (v - one)
            } else if v < -one {
                scale * (v + one)
            } else {
                T::zero()
            };
            continue;
        }
        let norm = members.iter().map(|&j| z[j] * z[j]).sum::<T>().sqrt();
        if norm > one {
            let factor = scale * (one - one / norm);
            for &j in members {
                out[j] = factor * z[j];
            }
        } else {
            for &j in members {
                out[j] = T::zero();
            }
        }
    }
}

/// Euclidean norm of each group of `v`.
pub fn group_norms<T: Scalar>(v: ArrayView1<T>, groups: &GroupIndex) -> Vec<T> {
    groups
        .iter()
        .map(|m| m.iter().map(|&j| v[j] * v[j]).sum::<T>().sqrt())
        .collect()
}
