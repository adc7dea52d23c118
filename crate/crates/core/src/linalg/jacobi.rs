//! Jacobi-type dense factorizations: a one-sided (Hestenes) SVD and a
//! cyclic symmetric Jacobi eigensolver.
//!
//! Both iterate plane rotations until the off-diagonal coupling reaches
//! machine-precision level; convergence is ultimately quadratic in the
//! sweep count (Golub & Van Loan ch. 8.5). They are meant for matrices
//! whose short side is at most a few hundred; larger problems go through
//! the Gram or subspace routes in the parent module.

use ndarray::{Array1, Array2};

use crate::error::LinalgError;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 60;

/// One-sided Jacobi SVD of a tall matrix (rows >= cols).
///
/// Returns `(u, s, v)` with `u` (m x n) and `v` (n x n) orthonormal and `s`
/// nonincreasing, so that `a = u * diag(s) * v^T`. Columns of the working
/// copy are rotated pairwise until mutually orthogonal (Hestenes 1958);
/// the column norms then read off the singular values.
pub(crate) fn onesided_jacobi<S: Scalar>(
    a: &Array2<S>,
) -> Result<(Array2<S>, Array1<S>, Array2<S>), LinalgError> {
    let (m, n) = a.dim();
    assert!(m >= n, "onesided_jacobi expects rows >= cols, got {m}x{n}");
    let mut w = a.clone();
    let mut v = Array2::<S>::eye(n);
    let eps = S::epsilon();

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = 0usize;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let mut app = S::zero();
                let mut aqq = S::zero();
                let mut apq = S::zero();
                for i in 0..m {
                    let xp = w[[i, p]];
                    let xq = w[[i, q]];
                    app += xp * xp;
                    aqq += xq * xq;
                    apq += xp * xq;
                }
                if apq.abs() <= eps * (app * aqq).sqrt() {
                    continue;
                }
                rotated += 1;
                let zeta = (aqq - app) / (S::lit(2.0) * apq);
                let t = if zeta >= S::zero() {
                    S::one() / (zeta + (S::one() + zeta * zeta).sqrt())
                } else {
                    -S::one() / (-zeta + (S::one() + zeta * zeta).sqrt())
                };
                let c = S::one() / (S::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let xp = w[[i, p]];
                    let xq = w[[i, q]];
                    w[[i, p]] = c * xp - s * xq;
                    w[[i, q]] = s * xp + c * xq;
                }
                for i in 0..n {
                    let xp = v[[i, p]];
                    let xq = v[[i, q]];
                    v[[i, p]] = c * xp - s * xq;
                    v[[i, q]] = s * xp + c * xq;
                }
            }
        }
        if rotated == 0 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut norms: Vec<S> = (0..n)
        .map(|j| {
            let mut acc = S::zero();
            for i in 0..m {
                let x = w[[i, j]];
                acc += x * x;
            }
            acc.sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("norms are finite"));

    let mut u = Array2::<S>::zeros((m, n));
    let mut s = Array1::<S>::zeros(n);
    let mut vo = Array2::<S>::zeros((n, n));
    let smax = norms[order[0]];
    let tiny = smax * eps * S::from_count(m.max(n));
    for (dst, &src) in order.iter().enumerate() {
        s[dst] = norms[src];
        for i in 0..n {
            vo[[i, dst]] = v[[i, src]];
        }
        if norms[src] > tiny && norms[src] > S::zero() {
            for i in 0..m {
                u[[i, dst]] = w[[i, src]] / norms[src];
            }
        }
    }
    // Columns belonging to (numerically) zero singular values carry no
    // direction; rebuild them so u keeps orthonormal columns.
    complete_orthonormal(&mut u, &mut norms, &order, tiny);
    Ok((u, s, vo))
}

/// Fills zero columns of `u` (flagged via `norms[order[j]] <= tiny`) with
/// unit vectors orthogonal to all other columns, by Gram-Schmidt against
/// the canonical basis.
fn complete_orthonormal<S: Scalar>(
    u: &mut Array2<S>,
    norms: &mut [S],
    order: &[usize],
    tiny: S,
) {
    let (m, n) = u.dim();
    for (dst, &src) in order.iter().enumerate() {
        if norms[src] > tiny && norms[src] > S::zero() {
            continue;
        }
        let mut placed = false;
        for cand in 0..m {
            let mut col = vec![S::zero(); m];
            col[cand] = S::one();
            // Two orthogonalization passes keep the result orthonormal to
            // working precision even for awkward candidates.
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
                placed = true;
                break;
            }
        }
        debug_assert!(placed, "orthonormal completion must find a direction");
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Returns `(eigenvalues, vectors)` with eigenvalues sorted nonincreasing
/// and `vectors` orthogonal, so that `a = vectors * diag(eigenvalues) *
/// vectors^T`.
pub(crate) fn sym_jacobi_eigh<S: Scalar>(
    a: &Array2<S>,
) -> Result<(Array1<S>, Array2<S>), LinalgError> {
    let (n, n2) = a.dim();
    assert_eq!(n, n2, "sym_jacobi_eigh expects a square matrix");
    let mut w = a.clone();
    let mut v = Array2::<S>::eye(n);
    let eps = S::epsilon();
    let scale = {
        let mut acc = S::zero();
        for i in 0..n {
            acc = acc.max(w[[i, i]].abs());
        }
        acc.max(S::epsilon())
    };

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = 0usize;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = w[[p, q]];
                let thresh = eps * scale + eps * (w[[p, p]].abs() * w[[q, q]].abs()).sqrt();
                if apq.abs() <= thresh {
                    continue;
                }
                rotated += 1;
                let zeta = (w[[q, q]] - w[[p, p]]) / (S::lit(2.0) * apq);
                let t = if zeta >= S::zero() {
                    S::one() / (zeta + (S::one() + zeta * zeta).sqrt())
                } else {
                    -S::one() / (-zeta + (S::one() + zeta * zeta).sqrt())
                };
                let c = S::one() / (S::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let xp = w[[p, i]];
                    let xq = w[[q, i]];
                    w[[p, i]] = c * xp - s * xq;
                    w[[q, i]] = s * xp + c * xq;
                }
                for i in 0..n {
                    let xp = w[[i, p]];
                    let xq = w[[i, q]];
                    w[[i, p]] = c * xp - s * xq;
                    w[[i, q]] = s * xp + c * xq;
                }
                for i in 0..n {
                    let xp = v[[i, p]];
                    let xq = v[[i, q]];
                    v[[i, p]] = c * xp - s * xq;
                    v[[i, q]] = s * xp + c * xq;
                }
            }
        }
        if rotated == 0 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        w[[j, j]].partial_cmp(&w[[i, i]]).expect("eigenvalues are finite")
    });
    let mut evals = Array1::<S>::zeros(n);
    let mut vecs = Array2::<S>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        evals[dst] = w[[src, src]];
        for i in 0..n {
            vecs[[i, dst]] = v[[i, src]];
        }
    }
    Ok((evals, vecs))
}
