//! Warm-started subspace iteration for repeated truncated SVDs.
//!
//! Alternates range finding on A and A^T with thin QR re-orthogonalization
//! (block power iteration in the spirit of Halko, Martinsson & Tropp, SIAM
//! Rev. 2011), finishing with a Rayleigh-Ritz projection. Carrying the
//! right-singular subspace from one call to the next makes a single sweep
//! sufficient when the matrix changes slowly, which is the access pattern
//! of iterative low-rank solvers calling this once per outer iteration.

use ndarray::{s, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::LinalgError;
use crate::linalg::jacobi::onesided_jacobi;
use crate::linalg::qr::qr_thin;
use crate::linalg::SvdFactors;
use crate::scalar::Scalar;

/// Reusable subspace-iteration state. Create once per matrix sequence and
/// call [`WarmSvd::compute`] on each new matrix; shapes may change, which
/// resets the carried subspace.
#[derive(Debug, Clone)]
pub struct WarmSvd<S: Scalar> {
    basis: Option<Array2<S>>,
    seed: u64,
}

impl<S: Scalar> WarmSvd<S> {
    /// `seed` fixes the random cold-start subspace, making results
    /// reproducible run-to-run.
    pub fn new(seed: u64) -> Self {
        WarmSvd { basis: None, seed }
    }

    /// Drops the carried subspace; the next call cold-starts.
    pub fn reset(&mut self) {
        self.basis = None;
    }

    /// Rank-`r` truncated SVD of `a`.
    ///
    /// `oversample` extra directions are carried internally (clipped to the
    /// short side); `rel_tol` stops sweeping once the r-th singular-value
    /// estimate is stable to that relative change, and `max_sweeps` bounds
    /// the work. Accuracy degrades gracefully when the budget is too small;
    /// iterative callers absorb the slack in their own outer loop.
    pub fn compute(
        &mut self,
        a: &Array2<S>,
        r: usize,
        oversample: usize,
        rel_tol: S,
        max_sweeps: usize,
    ) -> Result<SvdFactors<S>, LinalgError> {
        let (m, n) = a.dim();
        let short = m.min(n);
        if r < 1 || r > short {
            return Err(LinalgError::RankOutOfRange { rank: r, max: short });
        }
        let k = short.min(r + oversample);

        let mut v = match self.basis.take() {
            Some(b) if b.dim() == (n, k) => b,
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let mut v0 = Array2::<S>::zeros((n, k));
                for x in v0.iter_mut() {
                    *x = S::lit(rng.gen::<f64>() * 2.0 - 1.0);
                }
                qr_thin(&v0).0
            }
        };

        let mut qu = Array2::<S>::zeros((m, k));
        let mut rz = Array2::<S>::zeros((k, k));
        let mut prev = S::infinity();
        for sweep in 0..max_sweeps.max(1) {
            let y = a.dot(&v);
            qu = qr_thin(&y).0;
            let z = a.t().dot(&qu);
            let (qv, rzk) = qr_thin(&z);
            v = qv;
            rz = rzk;
            // sigma(rz) = sigma(A^T qu); its r-th value stabilizes exactly
            // when the subspace has locked on.
            let (_, sb, _) = onesided_jacobi(&rz)?;
            let sr = sb[r - 1];
            if sweep > 0 && (sr - prev).abs() <= rel_tol * sr + S::min_positive_value() {
                break;
            }
            prev = sr;
        }

        // Rayleigh-Ritz: with z = qv * rz, the projected matrix
        // qu^T A qv equals rz^T, so no further large products are needed.
        let (ub, sb, vb) = onesided_jacobi(&rz.t().to_owned())?;
        let u = qu.dot(&ub.slice(s![.., ..r]));
        let v_out = v.dot(&vb.slice(s![.., ..r]));
        let s_out = sb.slice(s![..r]).to_owned();
        // Carry the full k-dimensional right subspace, rotated into
        // singular-vector order for the best warm alignment.
        self.basis = Some(v.dot(&vb));
        Ok(SvdFactors {
            u,
            s: s_out,
            v: v_out,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::truncated_svd;

    fn test_matrix(m: usize, n: usize, decay: f64) -> Array2<f64> {
        // Deterministic matrix with geometrically decaying spectrum.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let k = m.min(n);
        let mut u = Array2::<f64>::zeros((m, k));
        let mut v = Array2::<f64>::zeros((n, k));
        for x in u.iter_mut() {
            *x = rng.gen::<f64>() * 2.0 - 1.0;
        }
        for x in v.iter_mut() {
            *x = rng.gen::<f64>() * 2.0 - 1.0;
        }
        let (qu, _) = qr_thin(&u);
        let (qv, _) = qr_thin(&v);
        let mut d = Array2::<f64>::zeros((k, k));
        for i in 0..k {
            d[[i, i]] = decay.powi(i as i32);
        }
        qu.dot(&d).dot(&qv.t())
    }

    #[test]
    fn cold_start_matches_dense_svd() {
        let a = test_matrix(120, 40, 0.7);
        let mut warm = WarmSvd::new(42);
        let f = warm.compute(&a, 5, 6, 1e-12, 60).unwrap();
        let exact = truncated_svd(&a, 5).unwrap();
        for i in 0..5 {
            assert!(
                (f.s[i] - exact.s[i]).abs() < 1e-9 * exact.s[0],
                "sigma_{i}: {} vs {}",
                f.s[i],
                exact.s[i]
            );
        }
    }

    #[test]
    fn warm_restart_tracks_a_drifting_matrix() {
        let a = test_matrix(80, 30, 0.6);
        let mut warm = WarmSvd::new(1);
        warm.compute(&a, 4, 5, 1e-10, 40).unwrap();
        // Small perturbation, single sweep: warm basis must carry accuracy.
        let b = &a + &(test_matrix(80, 30, 0.3).mapv(|x| 1e-3 * x));
        let f = warm.compute(&b, 4, 5, 1e-10, 1).unwrap();
        let exact = truncated_svd(&b, 4).unwrap();
        for i in 0..4 {
            assert!(
                (f.s[i] - exact.s[i]).abs() < 1e-6 * exact.s[0],
                "sigma_{i} after warm single sweep: {} vs {}",
                f.s[i],
                exact.s[i]
            );
        }
    }
}
