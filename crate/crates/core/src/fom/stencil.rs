//! Sixth-order central finite differences on periodic grids.
//!
//! Weights are the classic central-difference coefficients (Fornberg 1988)
//! for the seven-point symmetric stencil.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis, Zip};

use crate::error::FomError;
use crate::fom::{Grid1D, Grid2D, GridKind};
use crate::Scalar;

/// Derivative order selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffOrder {
    First,
    Second,
}

/// d/dx weights for offsets -3..=3, to be divided by dx.
const W1: [f64; 7] = [
    -1.0 / 60.0,
    3.0 / 20.0,
    -3.0 / 4.0,
    0.0,
    3.0 / 4.0,
    -3.0 / 20.0,
    1.0 / 60.0,
];

/// d2/dx2 weights for offsets -3..=3, to be divided by dx^2.
const W2: [f64; 7] = [
    1.0 / 90.0,
    -3.0 / 20.0,
    3.0 / 2.0,
    -49.0 / 18.0,
    3.0 / 2.0,
    -3.0 / 20.0,
    1.0 / 90.0,
];

pub(crate) fn scaled_weights<S: Scalar>(order: DiffOrder, dx: S) -> [S; 7] {
    let mut w = [S::zero(); 7];
    match order {
        DiffOrder::First => {
            for (wi, &c) in w.iter_mut().zip(W1.iter()) {
                *wi = S::lit(c) / dx;
            }
        }
        DiffOrder::Second => {
            for (wi, &c) in w.iter_mut().zip(W2.iter()) {
                *wi = S::lit(c) / (dx * dx);
            }
        }
    }
    w
}

fn require_periodic<S: Scalar>(grid: &Grid1D<S>) -> Result<(), FomError> {
    if grid.kind() != GridKind::Periodic {
        return Err(FomError::BadParameter(
            "finite differences are defined on periodic grids only",
        ));
    }
    Ok(())
}

/// Applies the 7-point periodic stencil `w` along a contiguous lane.
fn apply_lane<S: Scalar>(q: &[S], w: &[S; 7], out: &mut [S]) {
    let n = q.len();
    for i in 0..3 {
        let mut acc = S::zero();
        for (k, &wk) in w.iter().enumerate() {
            acc += wk * q[(i + n + k - 3) % n];
        }
        out[i] = acc;
    }
    for i in 3..n - 3 {
        let mut acc = S::zero();
        for (k, &wk) in w.iter().enumerate() {
            acc += wk * q[i + k - 3];
        }
        out[i] = acc;
    }
    for i in n - 3..n {
        let mut acc = S::zero();
        for (k, &wk) in w.iter().enumerate() {
            acc += wk * q[(i + k - 3) % n];
        }
        out[i] = acc;
    }
}

/// Sixth-order periodic derivative of a 1D field.
pub fn fd_derivative<S: Scalar>(
    q: ArrayView1<S>,
    grid: &Grid1D<S>,
    order: DiffOrder,
) -> Result<Array1<S>, FomError> {
    require_periodic(grid)?;
    if q.len() != grid.points() {
        return Err(FomError::StateSizeMismatch {
            expected: grid.points(),
            got: q.len(),
        });
    }
    let w = scaled_weights(order, grid.dx());
    let mut out = Array1::zeros(q.len());
    let out_slice = out.as_slice_mut().expect("fresh array is contiguous");
    match q.as_slice() {
        Some(s) => apply_lane(s, &w, out_slice),
        None => {
            let copy = q.to_owned();
            apply_lane(copy.as_slice().expect("owned copy"), &w, out_slice);
        }
    }
    Ok(out)
}

/// Sixth-order periodic derivative of a 2D field along one axis.
///
/// `axis` 0 differentiates in x (the row index), axis 1 in y.
pub fn fd_derivative_2d<S: Scalar>(
    q: ArrayView2<S>,
    grid: &Grid2D<S>,
    axis: Axis,
    order: DiffOrder,
) -> Result<Array2<S>, FomError> {
    let (nx, ny) = grid.shape();
    if q.dim() != (nx, ny) {
        return Err(FomError::StateSizeMismatch {
            expected: nx * ny,
            got: q.len(),
        });
    }
    let (along, dx) = match axis {
        Axis(0) => (grid.x(), grid.x().dx()),
        Axis(1) => (grid.y(), grid.y().dx()),
        _ => return Err(FomError::BadParameter("axis must be 0 or 1")),
    };
    require_periodic(along)?;
    let w = scaled_weights(order, dx);
    let mut out = Array2::zeros((nx, ny));
    match axis {
        Axis(1) => {
            for (row, mut out_row) in q.outer_iter().zip(out.outer_iter_mut()) {
                let out_slice = out_row.as_slice_mut().expect("row of fresh array");
                match row.as_slice() {
                    Some(s) => apply_lane(s, &w, out_slice),
                    None => {
                        let copy = row.to_owned();
                        apply_lane(copy.as_slice().expect("owned copy"), &w, out_slice);
                    }
                }
            }
        }
        _ => {
            // accumulate whole shifted rows: out[i] += w[k] * q[(i+k-3) mod nx]
            for (k, &wk) in w.iter().enumerate() {
                if wk == S::zero() {
                    continue;
                }
                for i in 0..nx {
                    let j = (i + nx + k - 3) % nx;
                    Zip::from(out.row_mut(i))
                        .and(q.row(j))
                        .for_each(|o, &v| *o += wk * v);
                }
            }
        }
    }
    Ok(out)
}
