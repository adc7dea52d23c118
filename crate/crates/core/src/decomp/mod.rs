//! Offline decompositions of snapshot matrices: front transport reduction
//! by iterative thresholding and by an augmented-Lagrangian scheme, the POD
//! baseline, error metrics, and the mode decay-rate study.
//!
//! The central object is a low-rank level-set field `Phi = Psi A^T` together
//! with a monotone front profile `f`, so that the data is approximated as
//! `Q ~ f(Phi)` column by column.

mod alm;
mod refine;
mod threshold;

pub use alm::{ftr_alm, AlmOptions};
pub use refine::{lm_alternate, refit_amplitudes};
pub use threshold::{ftr_threshold, ftr_threshold_from, ftr_width_ladder};

use std::fmt::Write as _;

use ndarray::{Array1, Array2};

use crate::error::DecompError;
use crate::fom::{front_decay_snapshots, Grid1D, GridKind};
use crate::linalg::svd_full;
use crate::Scalar;

/// Monotone tanh front profile `f(z) = (1 +- tanh(z / width)) / 2`.
///
/// The increasing orientation satisfies `f' >= 0` and `f(z) + f(-z) = 1`;
/// the decreasing orientation is its mirror image, used by scenarios whose
/// reference solutions are written with a falling front.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrontFunction<S: Scalar = f64> {
    name: &'static str,
    width: S,
    increasing: bool,
}

impl<S: Scalar> FrontFunction<S> {
    /// Tanh front of the given width; `increasing` picks the orientation.
    pub fn tanh_front(width: S, increasing: bool) -> Result<Self, DecompError> {
        if !(width > S::zero()) || !width.is_finite() {
            return Err(DecompError::BadParameter);
        }
        Ok(Self {
            name: if increasing {
                "tanh-rising"
            } else {
                "tanh-falling"
            },
            width,
            increasing,
        })
    }

    /// The logistic function `1 / (1 + e^-z)`, a width-2 rising tanh front.
    pub fn sigmoid() -> Self {
        Self {
            name: "sigmoid",
            width: S::lit(2.0),
            increasing: true,
        }
    }

    /// Profile name for reports.
    pub fn name(&self) -> &'static str {
        self.name
    }

    /// Front sharpness parameter.
    pub fn width(&self) -> S {
        self.width
    }

    /// Whether `f` is nondecreasing.
    pub fn is_increasing(&self) -> bool {
        self.increasing
    }

    /// Sign of the derivative: `+1` for the rising orientation, `-1` for
    /// the falling one.
    pub fn orientation(&self) -> S {
        if self.increasing {
            S::one()
        } else {
            -S::one()
        }
    }

    /// Same orientation with a different width (used by the continuation
    /// ladder, which anneals from a wide profile to the target one).
    pub fn with_width(&self, width: S) -> Result<Self, DecompError> {
        let mut out = Self::tanh_front(width, self.increasing)?;
        out.name = self.name;
        Ok(out)
    }

    /// `f(z)`.
    pub fn eval(&self, z: S) -> S {
        let t = (z / self.width).tanh();
        if self.increasing {
            S::lit(0.5) * (S::one() + t)
        } else {
            S::lit(0.5) * (S::one() - t)
        }
    }

    /// `f'(z)`; keeps the orientation sign.
    pub fn derivative(&self, z: S) -> S {
        let t = (z / self.width).tanh();
        let mag = (S::one() - t * t) / (S::lit(2.0) * self.width);
        if self.increasing {
            mag
        } else {
            -mag
        }
    }

    /// `f^-1(y)` with `y` clamped into the open unit interval, so saturated
    /// data maps to a large finite level-set value instead of infinity.
    pub fn invert_clamped(&self, y: S) -> S {
        let cap = S::one() - S::lit(1e-9);
        let mut t = S::lit(2.0) * y - S::one();
        if !self.increasing {
            t = -t;
        }
        self.width * t.max(-cap).min(cap).atanh()
    }

    /// Elementwise `f` over a matrix.
    pub fn eval_matrix(&self, phi: &Array2<S>) -> Array2<S> {
        phi.mapv(|z| self.eval(z))
    }

    /// Elementwise `f'` over a matrix.
    pub fn derivative_matrix(&self, phi: &Array2<S>) -> Array2<S> {
        phi.mapv(|z| self.derivative(z))
    }
}

/// Rank-`r` level-set field `Phi = Psi A^T` with an orthonormal spatial
/// basis `Psi` (M x r) and per-snapshot amplitude rows `A` (N x r).
#[derive(Clone, Debug)]
pub struct LowRankField<S: Scalar = f64> {
    basis: Array2<S>,
    amplitudes: Array2<S>,
}

impl<S: Scalar> LowRankField<S> {
    /// Builds a field from factors, verifying basis orthonormality.
    pub fn new(basis: Array2<S>, amplitudes: Array2<S>) -> Result<Self, DecompError> {
        let (m, r) = basis.dim();
        let (_n, ra) = amplitudes.dim();
        if r != ra || r == 0 || m == 0 {
            return Err(DecompError::ShapeMismatch {
                left_rows: m,
                left_cols: r,
                right_rows: amplitudes.nrows(),
                right_cols: ra,
            });
        }
        let gram = basis.t().dot(&basis);
        let mut dev = S::zero();
        for i in 0..r {
            for j in 0..r {
                let want = if i == j { S::one() } else { S::zero() };
                dev = dev.max((gram[[i, j]] - want).abs());
            }
        }
        let tol = S::epsilon().sqrt();
        if dev > tol {
            return Err(DecompError::NotOrthonormal { dev: dev.as_f64() });
        }
        Ok(Self { basis, amplitudes })
    }

    /// Factors a dense field into `r` energy-ordered modes via a thin SVD,
    /// so the amplitude rows are orthogonal with nonincreasing norms.
    pub fn from_field(phi: &Array2<S>, r: usize) -> Result<Self, DecompError> {
        let (m, n) = phi.dim();
        if m == 0 || n == 0 {
            return Err(DecompError::EmptyData);
        }
        let short = m.min(n);
        if r < 1 || r > short {
            return Err(DecompError::RankOutOfRange { rank: r, max: short });
        }
        let (u, s, v) = svd_full(phi)?;
        let basis = u.slice(ndarray::s![.., ..r]).to_owned();
        let mut amplitudes = v.slice(ndarray::s![.., ..r]).to_owned();
        for (k, mut col) in amplitudes.columns_mut().into_iter().enumerate() {
            col.mapv_inplace(|x| x * s[k]);
        }
        Ok(Self { basis, amplitudes })
    }

    /// Orthonormal spatial modes, one column per mode.
    pub fn basis(&self) -> &Array2<S> {
        &self.basis
    }

    /// Amplitude matrix, one row per snapshot.
    pub fn amplitudes(&self) -> &Array2<S> {
        &self.amplitudes
    }

    /// Number of modes.
    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    /// Grid size M.
    pub fn state_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Number of snapshots N.
    pub fn snapshots(&self) -> usize {
        self.amplitudes.nrows()
    }

    /// Dense field `Phi = Psi A^T` (M x N).
    pub fn field(&self) -> Array2<S> {
        self.basis.dot(&self.amplitudes.t())
    }

    /// Consumes the field, returning `(basis, amplitudes)`.
    pub fn into_factors(self) -> (Array2<S>, Array2<S>) {
        (self.basis, self.amplitudes)
    }
}

/// Iteration record of a decomposition solver.
#[derive(Clone, Debug)]
pub struct DecompositionReport<S: Scalar = f64> {
    /// Iterations actually run.
    pub iterations: usize,
    /// Relative residual `||f(Phi^k) - Q||_F / ||Q||_F` per iteration.
    pub residual_history: Vec<S>,
    /// Relative error of the returned factorization.
    pub final_error: S,
    /// Wall-clock solve time.
    pub wall_seconds: f64,
}

impl<S: Scalar> DecompositionReport<S> {
    /// Two-column CSV of the residual history.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,residual\n");
        for (k, e) in self.residual_history.iter().enumerate() {
            let _ = writeln!(out, "{},{:e}", k, e.as_f64());
        }
        out
    }
}

/// Proper orthogonal decomposition: the leading `r` left singular vectors
/// and the projected amplitudes `U^T Q` (r x N).
pub fn pod<S: Scalar>(q: &Array2<S>, r: usize) -> Result<(Array2<S>, Array2<S>), DecompError> {
    let basis = crate::linalg::truncated_svd(q, r)?.u;
    let amplitudes = basis.t().dot(q);
    Ok((basis, amplitudes))
}

/// POD reconstruction errors for every rank `1..=r_max`: entry `r - 1` is
/// `sqrt(sum_{i>r} sigma_i^2) / ||Q||_F`, the best possible rank-`r`
/// relative error.
pub fn pod_tail_errors<S: Scalar>(q: &Array2<S>, r_max: usize) -> Result<Vec<S>, DecompError> {
    let (m, n) = q.dim();
    if m == 0 || n == 0 {
        return Err(DecompError::EmptyData);
    }
    let short = m.min(n);
    if r_max < 1 || r_max > short {
        return Err(DecompError::RankOutOfRange {
            rank: r_max,
            max: short,
        });
    }
    let (_, s, _) = svd_full(q)?;
    let total = s.iter().fold(S::zero(), |acc, &x| acc + x * x);
    if total == S::zero() {
        return Err(DecompError::ZeroNorm);
    }
    let mut out = Vec::with_capacity(r_max);
    let mut tail = total;
    for k in 0..r_max {
        tail -= s[k] * s[k];
        out.push((tail.max(S::zero()) / total).sqrt());
    }
    Ok(out)
}

/// Relative Frobenius error `||Q - Qtilde||_F / ||Q||_F`.
pub fn relative_error<S: Scalar>(q: &Array2<S>, qtilde: &Array2<S>) -> Result<S, DecompError> {
    if q.dim() != qtilde.dim() {
        return Err(DecompError::ShapeMismatch {
            left_rows: q.nrows(),
            left_cols: q.ncols(),
            right_rows: qtilde.nrows(),
            right_cols: qtilde.ncols(),
        });
    }
    let mut num = S::zero();
    let mut den = S::zero();
    for (a, b) in q.iter().zip(qtilde.iter()) {
        let d = *a - *b;
        num += d * d;
        den += *a * *a;
    }
    if den == S::zero() {
        return Err(DecompError::ZeroNorm);
    }
    Ok((num / den).sqrt())
}

/// Number of shifted front snapshots in the decay-rate study.
const DECAY_SHIFTS: usize = 200;
/// Grid resolution of the decay-rate study.
const DECAY_POINTS: usize = 2000;

/// Exponential decay rate `beta` of the POD error for a family of
/// translated tanh fronts whose width is `width_ratio` times the domain:
/// `err_n ~ e^(-beta n)`, fitted by least squares on the log errors.
pub fn decay_rate_fit<S: Scalar>(width_ratio: S) -> Result<S, DecompError> {
    if !(width_ratio > S::zero()) || !width_ratio.is_finite() {
        return Err(DecompError::BadParameter);
    }
    let grid = Grid1D::new(S::zero(), S::one(), DECAY_POINTS, GridKind::Closed)
        .expect("fixed study grid is valid");
    let q = front_decay_snapshots(&grid, DECAY_SHIFTS, width_ratio)
        .expect("fixed study snapshot family is valid");
    let errs = pod_tail_errors(&q, DECAY_SHIFTS.min(DECAY_POINTS))?;
    let floor = S::lit(1e-12);
    let mut ns: Vec<S> = Vec::new();
    let mut logs: Vec<S> = Vec::new();
    for (k, &e) in errs.iter().enumerate() {
        if e <= floor {
            break;
        }
        ns.push(S::from_count(k + 1));
        logs.push(e.ln());
    }
    if ns.len() < 3 {
        return Err(DecompError::TooFewFitPoints { points: ns.len() });
    }
    // closed-form simple linear regression slope of ln(err) on n
    let count = S::from_count(ns.len());
    let mean_n = ns.iter().fold(S::zero(), |a, &b| a + b) / count;
    let mean_l = logs.iter().fold(S::zero(), |a, &b| a + b) / count;
    let mut cov = S::zero();
    let mut var = S::zero();
    for (&n, &l) in ns.iter().zip(logs.iter()) {
        cov += (n - mean_n) * (l - mean_l);
        var += (n - mean_n) * (n - mean_n);
    }
    Ok(-(cov / var))
}

/// Relative error of `f(Phi)` against the data, shared by the solvers.
pub(crate) fn front_relative_error<S: Scalar>(
    field: &LowRankField<S>,
    front: &FrontFunction<S>,
    q: &Array2<S>,
) -> S {
    let phi = field.field();
    let mut num = S::zero();
    let mut den = S::zero();
    for (z, qv) in phi.iter().zip(q.iter()) {
        let d = front.eval(*z) - *qv;
        num += d * d;
        den += *qv * *qv;
    }
    (num / den).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn front_function_partitions_unity_and_matches_its_derivative() {
        let f = FrontFunction::<f64>::tanh_front(0.4, true).unwrap();
        for z in [-3.0, -0.7, 0.0, 0.2, 5.0] {
            assert!((f.eval(z) + f.eval(-z) - 1.0).abs() < 1e-15);
            assert!(f.derivative(z) >= 0.0);
            let h = 1e-6;
            let fd = (f.eval(z + h) - f.eval(z - h)) / (2.0 * h);
            assert!((f.derivative(z) - fd).abs() < 1e-8);
            assert!((0.0..=1.0).contains(&f.eval(z)));
            // inverse round-trip away from saturation
            if f.eval(z) > 1e-9 && f.eval(z) < 1.0 - 1e-9 {
                assert!((f.invert_clamped(f.eval(z)) - z).abs() < 1e-7);
            }
        }
        let g = FrontFunction::<f64>::tanh_front(0.4, false).unwrap();
        assert!((g.eval(0.2) - f.eval(-0.2)).abs() < 1e-15);
        assert!(g.derivative(0.2) <= 0.0);
        assert_eq!(g.orientation(), -1.0);
        let s = FrontFunction::<f64>::sigmoid();
        for z in [-2.0, 0.3, 4.0] {
            assert!((s.eval(z) - 1.0 / (1.0 + (-z).exp())).abs() < 1e-15);
        }
        assert!(FrontFunction::<f64>::tanh_front(0.0, true).is_err());
    }

    #[test]
    fn low_rank_field_validates_and_reconstructs() {
        let basis = array![[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]];
        let amps = array![[2.0, 1.0], [0.5, -1.0], [0.0, 3.0], [1.0, 1.0]];
        let f = LowRankField::new(basis.clone(), amps.clone()).unwrap();
        assert_eq!(f.rank(), 2);
        assert_eq!(f.state_dim(), 3);
        assert_eq!(f.snapshots(), 4);
        let phi = f.field();
        assert_eq!(phi.dim(), (3, 4));
        assert!((phi[[0, 2]] - 0.0).abs() < 1e-15);
        assert!((phi[[1, 2]] - 3.0).abs() < 1e-15);
        let skewed = array![[1.0, 0.9], [0.0, 0.1], [0.0, 0.0]];
        assert!(matches!(
            LowRankField::new(skewed, amps),
            Err(DecompError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn from_field_orders_modes_by_energy() {
        let basis = array![[0.6, 0.8], [0.8, -0.6], [0.0, 0.0]];
        let amps = array![[0.2, 5.0], [-0.1, 4.0], [0.3, -6.0]];
        let phi = LowRankField::new(basis, amps).unwrap().field();
        let f = LowRankField::from_field(&phi, 2).unwrap();
        let a = f.amplitudes();
        let n0 = a.column(0).mapv(|x| x * x).sum().sqrt();
        let n1 = a.column(1).mapv(|x| x * x).sum().sqrt();
        assert!(n0 >= n1, "amplitude energies must be ordered");
        let back = relative_error(&phi, &f.field()).unwrap();
        assert!(back < 1e-12, "rank-2 field must round-trip, got {back:e}");
        assert!(LowRankField::from_field(&phi, 9).is_err());
    }

    #[test]
    fn relative_error_hand_values() {
        let q = array![[3.0, 0.0], [0.0, 4.0]];
        let qt = array![[0.0, 0.0], [0.0, 4.0]];
        assert!((relative_error(&q, &qt).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(relative_error(&q, &q).unwrap(), 0.0);
        let zero = Array2::<f64>::zeros((2, 2));
        assert!((relative_error(&q, &zero).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            relative_error(&zero, &q),
            Err(DecompError::ZeroNorm)
        ));
        let wide = Array2::<f64>::zeros((2, 3));
        assert!(matches!(
            relative_error(&q, &wide),
            Err(DecompError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn pod_reconstructs_low_rank_data_exactly() {
        let basis = array![[0.6, 0.8], [0.8, -0.6], [0.0, 0.0]];
        let amps = array![[1.0, 0.5], [2.0, -0.25], [0.5, 1.5]];
        let q = LowRankField::new(basis, amps).unwrap().field();
        let (u, a) = pod(&q, 2).unwrap();
        let recon = u.dot(&a);
        assert!(relative_error(&q, &recon).unwrap() < 1e-10);
        let tails = pod_tail_errors(&q, 3).unwrap();
        assert!(tails[1] < 1e-10 && tails[2] < 1e-10);
        assert!(tails[0] > 0.1, "rank-1 truncation must lose energy");
    }

    #[test]
    fn pod_tail_matches_direct_reconstruction_error() {
        // property: tail formula equals the actual truncation error
        let mut q = Array2::<f64>::zeros((40, 12));
        for i in 0..40 {
            for j in 0..12 {
                let x = i as f64 / 39.0;
                let t = j as f64 / 12.0;
                q[[i, j]] = 0.5 * (1.0 + ((x - t) / 0.2).tanh());
            }
        }
        let tails = pod_tail_errors(&q, 6).unwrap();
        for r in 1..=6 {
            let (u, a) = pod(&q, r).unwrap();
            let direct = relative_error(&q, &u.dot(&a)).unwrap();
            assert!(
                (tails[r - 1] - direct).abs() < 1e-9,
                "rank {r}: {} vs {direct}",
                tails[r - 1]
            );
        }
    }

    #[test]
    fn decay_rates_shrink_with_front_width() {
        // spot value for the widest front; the full sweep runs in the
        // acceptance suite
        let beta = decay_rate_fit(1.0f64).unwrap();
        assert!((beta - 2.90).abs() < 0.2, "beta {beta}");
        let narrower = decay_rate_fit(0.5f64).unwrap();
        assert!(narrower < beta);
        assert!(decay_rate_fit(-1.0f64).is_err());
    }

    #[test]
    fn report_csv_lists_iterations() {
        let rep = DecompositionReport {
            iterations: 3,
            residual_history: vec![0.5f64, 0.25, 0.125],
            final_error: 0.125,
            wall_seconds: 0.0,
        };
        let csv = rep.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "iteration,residual");
        assert!(lines[2].starts_with("1,"));
    }
}
