//! Adaptive Dormand-Prince 5(4) integration with dense output.
//!
//! Tableau from Dormand & Prince (1980); the fourth-order interpolant and
//! the PI step-size controller follow Hairer, Norsett & Wanner, "Solving
//! Ordinary Differential Equations I", section II.5 and appendix code
//! DOPRI5. The pair is FSAL: the last stage of an accepted step is reused
//! as the first stage of the next.

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::FomError;
use crate::Scalar;

/// Runge-Kutta matrix rows for stages 2..=7 (zero padded).
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    // row 7 equals the 5th-order solution weights (FSAL)
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// Stage abscissae for stages 2..=7.
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

/// Embedded error weights (5th-order minus 4th-order solution).
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Dense-output weights for the quartic interpolant.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Tolerances and limits for [`integrate_ode`].
#[derive(Clone, Copy, Debug)]
pub struct Dopri5Options<S: Scalar = f64> {
    pub rtol: S,
    pub atol: S,
    /// Starting step; estimated from the data when `None`.
    pub h_init: Option<S>,
    pub max_steps: usize,
}

impl<S: Scalar> Default for Dopri5Options<S> {
    fn default() -> Self {
        Self {
            rtol: S::lit(1e-6),
            atol: S::lit(1e-8),
            h_init: None,
            max_steps: 2_000_000,
        }
    }
}

/// Work counters accumulated over one integration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    /// Number of right-hand-side evaluations, including start-up.
    pub rhs_evals: usize,
}

/// Integrates `dy/dt = rhs(t, y)` over `t_span`, returning the states at
/// `save_at` (one column each, interpolated by the dense output) and the
/// step statistics.
///
/// `save_at` must be strictly increasing and contained in the span; a save
/// point equal to the start time copies the initial state.
pub fn integrate_ode<S, F>(
    mut rhs: F,
    y0: ArrayView1<S>,
    t_span: (S, S),
    save_at: &[S],
    opts: &Dopri5Options<S>,
) -> Result<(Array2<S>, IntegrationStats), FomError>
where
    S: Scalar,
    F: FnMut(S, ArrayView1<S>) -> Array1<S>,
{
    let (t0, tf) = t_span;
    if !t0.is_finite() || !tf.is_finite() || !(tf > t0) {
        return Err(FomError::BadTimeSpan {
            t0: t0.as_f64(),
            t1: tf.as_f64(),
        });
    }
    if save_at.is_empty() {
        return Err(FomError::TooFewSavePoints { min: 1, n: 0 });
    }
    let span = tf - t0;
    let slack = span * S::lit(1e-12);
    for w in save_at.windows(2) {
        if !(w[1] > w[0]) {
            return Err(FomError::BadParameter("save points must be strictly increasing"));
        }
    }
    if save_at[0] < t0 - slack || save_at[save_at.len() - 1] > tf + slack {
        return Err(FomError::BadParameter("save points must lie inside the time span"));
    }

    let n = y0.len();
    let mut stats = IntegrationStats::default();
    let mut t = t0;
    let mut y = y0.to_owned();
    let mut k: Vec<Array1<S>> = (0..7).map(|_| Array1::zeros(n)).collect();
    k[0] = rhs(t, y.view());
    stats.rhs_evals += 1;

    let mut out = Array2::<S>::zeros((n, save_at.len()));
    let mut isave = 0usize;
    while isave < save_at.len() && save_at[isave] <= t0 + slack {
        out.column_mut(isave).assign(&y);
        isave += 1;
    }

    let mut h = match opts.h_init {
        Some(h) => h.min(span),
        None => initial_step(&mut rhs, t0, &y, &k[0], opts, span, &mut stats),
    };
    let h_floor = span * S::lit(1e-14);
    let mut facold = S::lit(1e-4);

    while tf - t > slack {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(FomError::TooManySteps {
                t: t.as_f64(),
                max_steps: opts.max_steps,
            });
        }
        if h > tf - t {
            h = tf - t;
        }

        for i in 1..6 {
            let mut yi = y.clone();
            for (j, kj) in k.iter().enumerate().take(i) {
                let a = S::lit(A[i - 1][j]);
                if a != S::zero() {
                    yi.scaled_add(h * a, kj);
                }
            }
            k[i] = rhs(t + S::lit(C[i - 1]) * h, yi.view());
        }
        let mut ynew = y.clone();
        for (j, kj) in k.iter().enumerate().take(6) {
            let b = S::lit(A[5][j]);
            if b != S::zero() {
                ynew.scaled_add(h * b, kj);
            }
        }
        k[6] = rhs(t + h, ynew.view());
        stats.rhs_evals += 6;

        let mut err_acc = S::zero();
        for idx in 0..n {
            let mut e = S::zero();
            for (j, kj) in k.iter().enumerate() {
                let w = S::lit(E[j]);
                if w != S::zero() {
                    e += w * kj[idx];
                }
            }
            let sk = opts.atol + opts.rtol * y[idx].abs().max(ynew[idx].abs());
            let scaled = h * e / sk;
            err_acc += scaled * scaled;
        }
        let err = (err_acc / S::from_count(n)).sqrt();

        // PI controller: h_new = h / fac with fac clamped to [1/10, 1/0.2]
        let fac11 = if !err.is_finite() {
            S::lit(10.0)
        } else if err > S::zero() {
            err.powf(S::lit(0.2))
        } else {
            S::lit(1e-10)
        };
        let fac = (fac11 / facold.powf(S::lit(0.04)) / S::lit(0.9))
            .max(S::lit(0.1))
            .min(S::lit(5.0));
        let hnew = h / fac;

        if err.is_finite() && err <= S::one() {
            facold = err.max(S::lit(1e-4));
            if let Some(bad) = ynew.iter().position(|v| !v.is_finite()) {
                let _ = bad;
                return Err(FomError::NonFiniteState { t: (t + h).as_f64() });
            }
            if isave < save_at.len() && save_at[isave] <= t + h + slack {
                let cont = DenseSegment::build(&y, &ynew, &k, h);
                while isave < save_at.len() && save_at[isave] <= t + h + slack {
                    let s = ((save_at[isave] - t) / h).max(S::zero()).min(S::one());
                    cont.eval(s, out.column_mut(isave));
                    isave += 1;
                }
            }
            t += h;
            std::mem::swap(&mut y, &mut ynew);
            k.swap(0, 6);
            h = hnew;
            stats.accepted += 1;
        } else {
            stats.rejected += 1;
            if hnew < h_floor {
                return Err(FomError::StepUnderflow {
                    t: t.as_f64(),
                    h: hnew.as_f64(),
                });
            }
            h = hnew;
        }
    }

    // flush save points at the very end of the span
    while isave < save_at.len() {
        out.column_mut(isave).assign(&y);
        isave += 1;
    }
    Ok((out, stats))
}

/// Quartic dense-output polynomial over one accepted step.
struct DenseSegment<S: Scalar> {
    cont: [Array1<S>; 5],
}

impl<S: Scalar> DenseSegment<S> {
    fn build(y: &Array1<S>, ynew: &Array1<S>, k: &[Array1<S>], h: S) -> Self {
        let ydiff = ynew - y;
        let bspl = k[0].mapv(|v| h * v) - &ydiff;
        let cont3 = &ydiff - &k[6].mapv(|v| h * v) - &bspl;
        let mut cont4 = Array1::<S>::zeros(y.len());
        for (j, kj) in k.iter().enumerate() {
            let d = S::lit(D[j]);
            if d != S::zero() {
                cont4.scaled_add(h * d, kj);
            }
        }
        Self {
            cont: [y.clone(), ydiff, bspl, cont3, cont4],
        }
    }

    fn eval(&self, s: S, mut out: ndarray::ArrayViewMut1<S>) {
        let s1 = S::one() - s;
        let [c0, c1, c2, c3, c4] = &self.cont;
        for i in 0..c0.len() {
            out[i] = c0[i] + s * (c1[i] + s1 * (c2[i] + s * (c3[i] + s1 * c4[i])));
        }
    }
}

/// Hairer's automatic initial-step heuristic (one extra rhs evaluation).
fn initial_step<S, F>(
    rhs: &mut F,
    t0: S,
    y0: &Array1<S>,
    f0: &Array1<S>,
    opts: &Dopri5Options<S>,
    span: S,
    stats: &mut IntegrationStats,
) -> S
where
    S: Scalar,
    F: FnMut(S, ArrayView1<S>) -> Array1<S>,
{
    let n = y0.len();
    let mut d0 = S::zero();
    let mut d1 = S::zero();
    for i in 0..n {
        let sk = opts.atol + opts.rtol * y0[i].abs();
        let a = y0[i] / sk;
        let b = f0[i] / sk;
        d0 += a * a;
        d1 += b * b;
    }
    d0 = (d0 / S::from_count(n)).sqrt();
    d1 = (d1 / S::from_count(n)).sqrt();
    let h0 = if d0 < S::lit(1e-5) || d1 < S::lit(1e-5) || !d0.is_finite() || !d1.is_finite() {
        S::lit(1e-6)
    } else {
        S::lit(0.01) * d0 / d1
    }
    .min(span);

    let mut y1 = y0.clone();
    y1.scaled_add(h0, f0);
    let f1 = rhs(t0 + h0, y1.view());
    stats.rhs_evals += 1;
    let mut d2 = S::zero();
    for i in 0..n {
        let sk = opts.atol + opts.rtol * y0[i].abs();
        let df = (f1[i] - f0[i]) / sk;
        d2 += df * df;
    }
    d2 = (d2 / S::from_count(n)).sqrt() / h0;

    let dmax = d1.max(d2);
    let h1 = if dmax <= S::lit(1e-15) || !dmax.is_finite() {
        (h0 * S::lit(1e-3)).max(S::lit(1e-6))
    } else {
        (S::lit(0.01) / dmax).powf(S::lit(0.2))
    };
    h1.min(h0 * S::lit(100.0)).min(span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr1;

    #[test]
    fn exponential_decay_meets_tolerance() {
        let opts = Dopri5Options::<f64> {
            rtol: 1e-6,
            atol: 1e-10,
            ..Default::default()
        };
        let (out, stats) = integrate_ode(
            |_t, y: ArrayView1<f64>| -&y,
            arr1(&[1.0]).view(),
            (0.0, 1.0),
            &[0.5, 1.0],
            &opts,
        )
        .unwrap();
        assert!((out[[0, 1]] - (-1.0f64).exp()).abs() < 1e-5, "10x rtol bound");
        assert!((out[[0, 0]] - (-0.5f64).exp()).abs() < 1e-5);
        assert!(stats.accepted > 0);
        assert_eq!(
            stats.rhs_evals,
            2 + 6 * (stats.accepted + stats.rejected),
            "FSAL accounting: start-up plus six per attempted step"
        );
    }

    #[test]
    fn dense_output_tracks_harmonic_oscillator() {
        let save: Vec<f64> = (1..=20).map(|i| 0.37 * i as f64).collect();
        let t_end = save[save.len() - 1];
        let opts = Dopri5Options::<f64> {
            rtol: 1e-8,
            atol: 1e-10,
            ..Default::default()
        };
        let (out, _) = integrate_ode(
            |_t, y: ArrayView1<f64>| arr1(&[y[1], -y[0]]),
            arr1(&[1.0, 0.0]).view(),
            (0.0, t_end),
            &save,
            &opts,
        )
        .unwrap();
        for (j, &tj) in save.iter().enumerate() {
            assert!(
                (out[[0, j]] - tj.cos()).abs() < 1e-6,
                "t={tj}: {} vs {}",
                out[[0, j]],
                tj.cos()
            );
            assert!((out[[1, j]] + tj.sin()).abs() < 1e-6);
        }
    }

    #[test]
    fn tighter_tolerance_reduces_error() {
        let run = |rtol: f64| {
            let opts = Dopri5Options::<f64> {
                rtol,
                atol: rtol * 1e-2,
                ..Default::default()
            };
            let (out, _) = integrate_ode(
                |t: f64, y: ArrayView1<f64>| arr1(&[t.cos() * y[0]]),
                arr1(&[1.0]).view(),
                (0.0, 6.0),
                &[6.0],
                &opts,
            )
            .unwrap();
            (out[[0, 0]] - (6.0f64).sin().exp()).abs()
        };
        let coarse = run(1e-4);
        let fine = run(1e-8);
        assert!(fine < coarse, "coarse {coarse:e} vs fine {fine:e}");
        assert!(fine < 1e-6);
    }

    #[test]
    fn save_point_at_start_copies_initial_state() {
        let opts = Dopri5Options::<f64>::default();
        let (out, _) = integrate_ode(
            |_t, y: ArrayView1<f64>| -&y,
            arr1(&[2.0]).view(),
            (0.0, 1.0),
            &[0.0, 1.0],
            &opts,
        )
        .unwrap();
        assert_eq!(out[[0, 0]], 2.0);
    }

    #[test]
    fn rejects_bad_spans_and_save_points() {
        let opts = Dopri5Options::<f64>::default();
        let rhs = |_t: f64, y: ArrayView1<f64>| -&y;
        let y0 = arr1(&[1.0]);
        assert!(matches!(
            integrate_ode(rhs, y0.view(), (1.0, 0.0), &[0.5], &opts),
            Err(FomError::BadTimeSpan { .. })
        ));
        assert!(matches!(
            integrate_ode(rhs, y0.view(), (0.0, 1.0), &[], &opts),
            Err(FomError::TooFewSavePoints { .. })
        ));
        assert!(matches!(
            integrate_ode(rhs, y0.view(), (0.0, 1.0), &[0.5, 0.5], &opts),
            Err(FomError::BadParameter(_))
        ));
        assert!(matches!(
            integrate_ode(rhs, y0.view(), (0.0, 1.0), &[0.5, 1.5], &opts),
            Err(FomError::BadParameter(_))
        ));
    }

    #[test]
    fn non_finite_rhs_reports_step_underflow() {
        let opts = Dopri5Options::<f64>::default();
        let res = integrate_ode(
            |t: f64, y: ArrayView1<f64>| {
                if t < 0.5 {
                    -&y
                } else {
                    arr1(&[f64::NAN])
                }
            },
            arr1(&[1.0]).view(),
            (0.0, 1.0),
            &[1.0],
            &opts,
        );
        assert!(
            matches!(res, Err(FomError::StepUnderflow { .. })),
            "got {res:?}"
        );
    }
}
