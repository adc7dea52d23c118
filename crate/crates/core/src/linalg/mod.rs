//! Dense linear-algebra kernels shared by all modules: truncated SVD,
//! singular-value soft-thresholding, least-squares solves, and the discrete
//! differential operator used by the constrained low-rank solver.
//!
//! The SVD dispatches on the short matrix side: up to [`JACOBI_MAX`] a
//! one-sided Jacobi factorization runs directly on the matrix (full
//! precision); beyond that the spectrum comes from a symmetric Jacobi
//! eigendecomposition of the Gram matrix, whose basis is then polished by
//! modified Gram-Schmidt. Iterative low-rank solvers should use
//! [`WarmSvd`] instead, which tracks a slowly changing matrix at a fraction
//! of the cost.

mod jacobi;
mod qr;
mod subspace;

pub use qr::qr_thin;
pub use subspace::WarmSvd;

use ndarray::{s, Array1, Array2, ArrayView1};

use crate::error::LinalgError;
use crate::scalar::Scalar;

/// Short-side size up to which the one-sided Jacobi SVD is used directly.
const JACOBI_MAX: usize = 64;

/// Singular values below `RANK_TOL * sigma_max` are treated as zero in
/// pseudo-inverse solves.
const RANK_TOL: f64 = 1e-10;

/// Truncated singular value decomposition `A ~ U * diag(S) * V^T`.
#[derive(Debug, Clone)]
pub struct SvdFactors<S: Scalar = f64> {
    /// Left singular vectors, one orthonormal column per retained triplet.
    pub u: Array2<S>,
    /// Singular values, nonincreasing and nonnegative.
    pub s: Array1<S>,
    /// Right singular vectors, one orthonormal column per retained triplet.
    pub v: Array2<S>,
}

impl<S: Scalar> SvdFactors<S> {
    /// Number of retained singular triplets.
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// Dense reconstruction `U * diag(S) * V^T`.
    pub fn reconstruct(&self) -> Array2<S> {
        let us = &self.u * &self.s.view().insert_axis(ndarray::Axis(0));
        us.dot(&self.v.t())
    }
}

fn check_finite<S: Scalar>(a: &Array2<S>) -> Result<(), LinalgError> {
    for ((row, col), x) in a.indexed_iter() {
        if !x.is_finite() {
            return Err(LinalgError::NonFinite { row, col });
        }
    }
    Ok(())
}

/// Full (economy) SVD with factors for the whole short side.
pub(crate) fn svd_full<S: Scalar>(
    a: &Array2<S>,
) -> Result<(Array2<S>, Array1<S>, Array2<S>), LinalgError> {
    let (m, n) = a.dim();
    if m >= n {
        if n <= JACOBI_MAX {
            jacobi::onesided_jacobi(a)
        } else {
            gram_svd(a)
        }
    } else {
        let at = a.t().to_owned();
        let (u, s, v) = if m <= JACOBI_MAX {
            jacobi::onesided_jacobi(&at)?
        } else {
            gram_svd(&at)?
        };
        Ok((v, s, u))
    }
}

/// SVD of a tall matrix via the eigendecomposition of its Gram matrix.
///
/// Loses about half the digits on singular values near `eps * sigma_max`,
/// which is acceptable for the spectra handled here (snapshot matrices);
/// the left basis is re-orthogonalized to working precision afterwards.
fn gram_svd<S: Scalar>(a: &Array2<S>) -> Result<(Array2<S>, Array1<S>, Array2<S>), LinalgError> {
    let (m, n) = a.dim();
    let mut g = a.t().dot(a);
    // Symmetrize against rounding before the eigensolve.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (g[[i, j]] + g[[j, i]]) / S::lit(2.0);
            g[[i, j]] = avg;
            g[[j, i]] = avg;
        }
    }
    let (evals, vecs) = jacobi::sym_jacobi_eigh(&g)?;
    let s = evals.mapv(|x| x.max(S::zero()).sqrt());
    let mut u = a.dot(&vecs);
    let smax = s[0];
    let tiny = smax * S::epsilon() * S::from_count(m.max(n));
    let mut deficient: Vec<usize> = Vec::new();
    for j in 0..n {
        if s[j] > tiny && s[j] > S::zero() {
            // One re-orthogonalization pass against the previously
            // polished (unit-length) columns, then normalize.
            for i in 0..j {
                if deficient.contains(&i) {
                    continue;
                }
                let mut dot = S::zero();
                for row in 0..m {
                    dot += u[[row, i]] * u[[row, j]];
                }
                for row in 0..m {
                    let d = dot * u[[row, i]];
                    u[[row, j]] -= d;
                }
            }
            let mut nrm = S::zero();
            for row in 0..m {
                let x = u[[row, j]];
                nrm += x * x;
            }
            let nrm = nrm.sqrt();
            if nrm > tiny {
                for row in 0..m {
                    u[[row, j]] = u[[row, j]] / nrm;
                }
            } else {
                deficient.push(j);
            }
        } else {
            deficient.push(j);
        }
    }
    if !deficient.is_empty() {
        complete_columns(&mut u, &deficient);
    }
    Ok((u, s, vecs))
}

/// Replaces the listed columns with unit vectors orthogonal to all other
/// columns (Gram-Schmidt against the canonical basis).
fn complete_columns<S: Scalar>(u: &mut Array2<S>, deficient: &[usize]) {
    let (m, n) = u.dim();
    for &dst in deficient {
        for i in 0..m {
            u[[i, dst]] = S::zero();
        }
    }
    for &dst in deficient {
        for cand in 0..m {
            let mut col = vec![S::zero(); m];
            col[cand] = S::one();
            for _ in 0..2 {
                for j in 0..n {
                    if j == dst {
                        continue;
                    }
                    let mut dot = S::zero();
                    for i in 0..m {
                        dot += u[[i, j]] * col[i];
                    }
                    for i in 0..m {
                        let d = dot * u[[i, j]];
                        col[i] -= d;
                    }
                }
            }
            let nrm = col.iter().fold(S::zero(), |acc, &x| acc + x * x).sqrt();
            if nrm > S::lit(0.5) {
                for i in 0..m {
                    u[[i, dst]] = col[i] / nrm;
                }
                break;
            }
        }
    }
}

/// Leading `r` singular triplets of `a`; `U * diag(S) * V^T` is the best
/// rank-`r` Frobenius approximation.
pub fn truncated_svd<S: Scalar>(a: &Array2<S>, r: usize) -> Result<SvdFactors<S>, LinalgError> {
    let (m, n) = a.dim();
    let short = m.min(n);
    if r < 1 || r > short {
        return Err(LinalgError::RankOutOfRange { rank: r, max: short });
    }
    check_finite(a)?;
    let (u, s, v) = svd_full(a)?;
    Ok(SvdFactors {
        u: u.slice(s![.., ..r]).to_owned(),
        s: s.slice(s![..r]).to_owned(),
        v: v.slice(s![.., ..r]).to_owned(),
    })
}

/// Scalar soft-threshold `sign(x) * max(|x| - tau, 0)`, the proximal
/// operator of `tau * |x|`.
pub fn soft_threshold<S: Scalar>(x: S, tau: S) -> S {
    debug_assert!(tau >= S::zero(), "soft_threshold needs tau >= 0");
    let mag = x.abs() - tau;
    if mag > S::zero() {
        x.signum() * mag
    } else {
        S::zero()
    }
}

/// Singular value thresholding `U * S_tau(Sigma) * V^T`, the proximal
/// operator of the nuclear norm: the returned matrix minimizes
/// `tau * ||X||_* + 1/2 * ||X - A||_F^2`.
pub fn svt<S: Scalar>(a: &Array2<S>, tau: S) -> Result<Array2<S>, LinalgError> {
    assert!(tau >= S::zero(), "svt needs tau >= 0");
    check_finite(a)?;
    let (u, s, v) = svd_full(a)?;
    let st = s.mapv(|x| soft_threshold(x, tau));
    let kept = st.iter().take_while(|x| **x > S::zero()).count();
    if kept == 0 {
        return Ok(Array2::zeros(a.dim()));
    }
    let uk = u.slice(s![.., ..kept]);
    let vk = v.slice(s![.., ..kept]);
    let usk = &uk * &st.slice(s![..kept]).insert_axis(ndarray::Axis(0));
    Ok(usk.dot(&vk.t()))
}

/// Discrete differential operator of size n x n: entry `(i, j)` is `+1/2`
/// for `j = i - 1` and `-1/2` for `j = i + 1`, with the literal one-sided
/// boundary rows. Acts on columns; `D^T = -D` away from the boundary.
pub fn diff_operator<S: Scalar>(n: usize) -> Result<Array2<S>, LinalgError> {
    if n < 3 {
        return Err(LinalgError::TooSmall {
            min: 3,
            rows: n,
            cols: n,
        });
    }
    let half = S::lit(0.5);
    let mut d = Array2::<S>::zeros((n, n));
    for i in 0..n {
        if i >= 1 {
            d[[i, i - 1]] = half;
        }
        if i + 1 < n {
            d[[i, i + 1]] = -half;
        }
    }
    Ok(d)
}

/// Least-squares solve `argmin ||J x - b||_2` through the SVD
/// pseudo-inverse. Singular values below `1e-10 * sigma_max` are treated
/// as zero, so rank-deficient systems return the minimum-norm solution.
pub fn solve_least_squares<S: Scalar>(
    j: &Array2<S>,
    b: ArrayView1<S>,
) -> Result<Array1<S>, LinalgError> {
    let (m, n) = j.dim();
    if m != b.len() {
        return Err(LinalgError::DimensionMismatch {
            context: "least-squares rows vs right-hand side",
            left: m,
            right: b.len(),
        });
    }
    if m < n {
        return Err(LinalgError::DimensionMismatch {
            context: "least squares expects rows >= cols",
            left: m,
            right: n,
        });
    }
    check_finite(j)?;
    let (u, s, v) = svd_full(j)?;
    let cutoff = s[0] * S::lit(RANK_TOL);
    let mut x = Array1::<S>::zeros(n);
    for k in 0..s.len() {
        if s[k] <= cutoff || s[k] == S::zero() {
            continue;
        }
        let mut coef = S::zero();
        for i in 0..m {
            coef += u[[i, k]] * b[i];
        }
        coef = coef / s[k];
        for i in 0..n {
            let d = coef * v[[i, k]];
            x[i] += d;
        }
    }
    Ok(x)
}
