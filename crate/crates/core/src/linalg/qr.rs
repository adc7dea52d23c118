//! Thin Householder QR factorization.
//!
//! Textbook scheme (Golub & Van Loan, Matrix Computations, Alg. 5.2.1):
//! reflectors triangularize a working copy in place, then the thin
//! orthogonal factor is recovered by applying the reflectors in reverse
//! to the first columns of the identity. Because every reflector is
//! orthogonal, the recovered factor has orthonormal columns even when
//! the input is rank deficient.

use ndarray::Array2;

use crate::scalar::Scalar;

/// Thin QR of a tall matrix (rows >= cols): returns `(q, r)` with `q`
/// carrying orthonormal columns and `r` upper triangular.
///
/// The result is sign-normalized so that `diag(r) >= 0`, which makes the
/// factorization unique for full-rank input and reproducible run-to-run.
pub fn qr_thin<S: Scalar>(a: &Array2<S>) -> (Array2<S>, Array2<S>) {
    let (m, n) = a.dim();
    assert!(m >= n, "qr_thin expects rows >= cols, got {m}x{n}");
    let mut work = a.clone();
    // Householder vectors for columns 0..n; vs[k] has length m - k.
    let mut vs: Vec<Vec<S>> = Vec::with_capacity(n);

    for k in 0..n {
        let mut norm2 = S::zero();
        for i in k..m {
            let x = work[[i, k]];
            norm2 += x * x;
        }
        let norm = norm2.sqrt();
        let x0 = work[[k, k]];
        let sign = if x0 >= S::zero() { S::one() } else { -S::one() };
        let mut v: Vec<S> = (k..m).map(|i| work[[i, k]]).collect();
        v[0] += sign * norm;
        let vnorm2 = v.iter().fold(S::zero(), |acc, &x| acc + x * x);
        if vnorm2 > S::zero() && norm > S::zero() {
            for j in k..n {
                let mut dot = S::zero();
                for i in k..m {
                    dot += v[i - k] * work[[i, j]];
                }
                let coef = (S::lit(2.0) / vnorm2) * dot;
                for i in k..m {
                    let d = coef * v[i - k];
                    work[[i, j]] -= d;
                }
            }
        } else {
            // Zero trailing column: identity reflector.
            v.iter_mut().for_each(|x| *x = S::zero());
        }
        vs.push(v);
    }

    let mut r = Array2::zeros((n, n));
    for i in 0..n {
        for j in i..n {
            r[[i, j]] = work[[i, j]];
        }
    }

    let mut q = Array2::zeros((m, n));
    for j in 0..n {
        q[[j, j]] = S::one();
    }
    for k in (0..n).rev() {
        let v = &vs[k];
        let vnorm2 = v.iter().fold(S::zero(), |acc, &x| acc + x * x);
        if vnorm2 > S::zero() {
            for j in 0..n {
                let mut dot = S::zero();
                for i in k..m {
                    dot += v[i - k] * q[[i, j]];
                }
                let coef = (S::lit(2.0) / vnorm2) * dot;
                for i in k..m {
                    let d = coef * v[i - k];
                    q[[i, j]] -= d;
                }
            }
        }
    }

    for k in 0..n {
        if r[[k, k]] < S::zero() {
            for j in k..n {
                r[[k, j]] = -r[[k, j]];
            }
            for i in 0..m {
                q[[i, k]] = -q[[i, k]];
            }
        }
    }
    (q, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr2;

    fn max_abs(a: &Array2<f64>) -> f64 {
        a.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    #[test]
    fn reconstructs_and_orthonormal() {
        let a = arr2(&[
            [1.0, 2.0, 0.5],
            [-0.3, 1.0, 2.0],
            [0.7, -1.2, 0.4],
            [2.0, 0.1, -0.6],
            [0.0, 3.0, 1.1],
        ]);
        let (q, r) = qr_thin(&a);
        let qr = q.dot(&r);
        assert!(max_abs(&(&qr - &a)) < 1e-12, "QR must reconstruct A");
        let gram = q.t().dot(&q);
        let eye = Array2::<f64>::eye(3);
        assert!(max_abs(&(&gram - &eye)) < 1e-12, "Q columns must be orthonormal");
        for k in 0..3 {
            assert!(r[[k, k]] >= 0.0, "sign normalization puts diag(R) >= 0");
        }
    }

    #[test]
    fn rank_deficient_input_still_gives_orthonormal_q() {
        // Column 2 = 2 * column 0.
        let a = arr2(&[
            [1.0, 0.0, 2.0],
            [1.0, 1.0, 2.0],
            [1.0, 2.0, 2.0],
            [1.0, 3.0, 2.0],
        ]);
        let (q, r) = qr_thin(&a);
        let gram = q.t().dot(&q);
        let eye = Array2::<f64>::eye(3);
        assert!(max_abs(&(&gram - &eye)) < 1e-12);
        assert!(max_abs(&(&q.dot(&r) - &a)) < 1e-12);
        assert!(r[[2, 2]].abs() < 1e-12, "deficient column yields zero pivot");
    }
}
