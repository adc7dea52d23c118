//! Linear-algebra kernel verification against an independent oracle.
//!
//! The oracle computes singular values through a two-sided cyclic Jacobi
//! eigendecomposition of A^T A, written here from scratch on plain nested
//! vectors. The library itself runs a one-sided Jacobi on A (or a Gram
//! route with a different eigensolver entry point), so agreement is
//! evidence, not tautology.

use ndarray::{arr1, Array1, Array2};
use proptest::prelude::*;

use ftr_core::linalg::{diff_operator, soft_threshold, solve_least_squares, svt, truncated_svd};

/// Eigenvalues of the symmetric matrix `g` by classic two-sided cyclic
/// Jacobi (Golub & Van Loan Alg. 8.5.3), descending.
fn oracle_sym_eigvals(mut g: Vec<Vec<f64>>) -> Vec<f64> {
    let n = g.len();
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += g[p][q] * g[p][q];
            }
        }
        if off.sqrt() <= 1e-300_f64.max(1e-15 * frob(&g)) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if g[p][q].abs() <= 1e-30 * frob(&g) {
                    continue;
                }
                let theta = 0.5 * (2.0 * g[p][q]).atan2(g[p][p] - g[q][q]);
                let (s, c) = theta.sin_cos();
                for k in 0..n {
                    let gpk = g[p][k];
                    let gqk = g[q][k];
                    g[p][k] = c * gpk + s * gqk;
                    g[q][k] = -s * gpk + c * gqk;
                }
                for k in 0..n {
                    let gkp = g[k][p];
                    let gkq = g[k][q];
                    g[k][p] = c * gkp + s * gkq;
                    g[k][q] = -s * gkp + c * gkq;
                }
            }
        }
    }
    let mut evals: Vec<f64> = (0..n).map(|i| g[i][i]).collect();
    evals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    evals
}

fn frob(g: &[Vec<f64>]) -> f64 {
    g.iter()
        .flat_map(|row| row.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
}

/// Singular values of `a` via the oracle eigensolver on A^T A, descending.
fn oracle_singular_values(a: &Array2<f64>) -> Vec<f64> {
    let (m, n) = a.dim();
    let mut g = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..m {
                acc += a[[k, i]] * a[[k, j]];
            }
            g[i][j] = acc;
        }
    }
    oracle_sym_eigvals(g)
        .into_iter()
        .map(|ev| ev.max(0.0).sqrt())
        .collect()
}

/// Deterministic pseudo-random matrix (xorshift), independent of the
/// library's RNG choices.
fn xorshift_matrix(m: usize, n: usize, mut state: u64) -> Array2<f64> {
    Array2::from_shape_fn((m, n), |_| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state as f64 / u64::MAX as f64) * 2.0 - 1.0
    })
}

fn frob_arr(a: &Array2<f64>) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[test]
fn truncated_svd_matches_gram_eigen_oracle() {
    // The spec-level pinned case: random 6x4, r = 3, singular values agree
    // with the oracle to 1e-10.
    let a = xorshift_matrix(6, 4, 99);
    let f = truncated_svd(&a, 3).unwrap();
    let oracle = oracle_singular_values(&a);
    for i in 0..3 {
        assert!(
            (f.s[i] - oracle[i]).abs() < 1e-10,
            "sigma_{i}: library {} vs oracle {}",
            f.s[i],
            oracle[i]
        );
    }
}

#[test]
fn truncated_svd_tail_identity_on_small_matrices() {
    // || A - U S V^T ||_F^2 equals the discarded spectrum, for every rank,
    // on a grid of shapes up to 20x20.
    for (m, n, seed) in [(7usize, 5usize, 1u64), (12, 9, 2), (20, 20, 3), (5, 17, 4)] {
        let a = xorshift_matrix(m, n, seed);
        let tall = if m >= n { a.clone() } else { a.t().to_owned() };
        let oracle = oracle_singular_values(&tall);
        for r in 1..=m.min(n) {
            let f = truncated_svd(&a, r).unwrap();
            let err2 = {
                let d = &a - &f.reconstruct();
                d.iter().map(|x| x * x).sum::<f64>()
            };
            let tail2: f64 = oracle[r..].iter().map(|s| s * s).sum();
            let denom = oracle.iter().map(|s| s * s).sum::<f64>();
            assert!(
                (err2 - tail2).abs() <= 1e-9 * denom.max(1e-30),
                "{m}x{n} r={r}: err^2 {err2} vs tail^2 {tail2}"
            );
        }
    }
}

#[test]
fn truncated_svd_factors_are_orthonormal() {
    let a = xorshift_matrix(15, 11, 5);
    let f = truncated_svd(&a, 11).unwrap();
    let eye = Array2::<f64>::eye(11);
    let du = &f.u.t().dot(&f.u) - &eye;
    let dv = &f.v.t().dot(&f.v) - &eye;
    assert!(frob_arr(&du) < 1e-10, "U^T U = I within 1e-10");
    assert!(frob_arr(&dv) < 1e-10, "V^T V = I within 1e-10");
    for i in 1..11 {
        assert!(f.s[i] <= f.s[i - 1] + 1e-14, "singular values nonincreasing");
        assert!(f.s[i] >= 0.0);
    }
}

#[test]
fn svt_shrinks_every_singular_value() {
    let a = xorshift_matrix(9, 6, 6);
    let tau = 0.25;
    let out = svt(&a, tau).unwrap();
    let s_in = oracle_singular_values(&a);
    let s_out = oracle_singular_values(&out);
    for i in 0..6 {
        let expect = (s_in[i] - tau).max(0.0);
        assert!(
            (s_out[i] - expect).abs() < 1e-10,
            "sigma_{i}: shrunk {} vs expected {}",
            s_out[i],
            expect
        );
    }
}

#[test]
fn svt_is_a_local_minimizer_of_the_nuclear_norm_objective() {
    // Objective tau*||X||_* + 1/2 ||X - A||_F^2 evaluated at svt(A, tau)
    // must not exceed the objective at 100 random nearby points.
    let a = xorshift_matrix(5, 5, 7);
    let tau = 0.7;
    let x0 = svt(&a, tau).unwrap();
    let objective = |x: &Array2<f64>| {
        let nuclear: f64 = oracle_singular_values(x).iter().sum();
        let dist2: f64 = (x - &a).iter().map(|d| d * d).sum();
        tau * nuclear + 0.5 * dist2
    };
    let base = objective(&x0);
    let mut state = 8u64;
    for trial in 0..100 {
        let mut e = Array2::from_shape_fn((5, 5), |_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state as f64 / u64::MAX as f64) * 2.0 - 1.0
        });
        let nrm = frob_arr(&e);
        e.mapv_inplace(|x| x * (1e-3 / nrm));
        let perturbed = objective(&(&x0 + &e));
        assert!(
            base <= perturbed + 1e-12,
            "trial {trial}: objective rose from {base} to {perturbed}"
        );
    }
}

#[test]
fn diff_operator_is_skew_away_from_boundary() {
    let d = diff_operator::<f64>(12).unwrap();
    let skew = &d + &d.t();
    for i in 1..11 {
        for j in 1..11 {
            assert!(
                skew[[i, j]].abs() < 1e-15,
                "interior block must satisfy D^T = -D"
            );
        }
    }
    let c = Array1::<f64>::from_elem(12, 3.7);
    let dc = d.dot(&c);
    for i in 1..11 {
        assert!(dc[i].abs() < 1e-15, "constants are annihilated inside");
    }
}

#[test]
fn least_squares_satisfies_normal_equations() {
    let j = xorshift_matrix(8, 3, 11);
    let b = arr1(&[1.0, -0.5, 2.0, 0.25, -1.5, 0.75, 3.0, -2.25]);
    let x = solve_least_squares(&j, b.view()).unwrap();
    let residual = j.t().dot(&(&j.dot(&x) - &b));
    for i in 0..3 {
        assert!(
            residual[i].abs() < 1e-9,
            "J^T (J x - b) component {i} = {}",
            residual[i]
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn soft_threshold_is_odd(x in -1e6f64..1e6, tau in 0.0f64..1e3) {
        let lhs = soft_threshold(-x, tau);
        let rhs = -soft_threshold(x, tau);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + x.abs()));
    }

    #[test]
    fn soft_threshold_never_exceeds_magnitude(x in -1e6f64..1e6, tau in 0.0f64..1e3) {
        let y = soft_threshold(x, tau);
        prop_assert!(y.abs() <= x.abs());
        prop_assert!(y * x >= 0.0, "never flips sign");
    }

    #[test]
    fn truncated_svd_reconstruction_never_beats_the_spectrum(
        seed in 1u64..10_000,
        m in 2usize..10,
        n in 2usize..10,
        r_frac in 0.0f64..1.0,
    ) {
        let a = xorshift_matrix(m, n, seed);
        let k = m.min(n);
        let r = 1 + ((k - 1) as f64 * r_frac) as usize;
        let f = truncated_svd(&a, r).unwrap();
        let err2 = (&a - &f.reconstruct()).iter().map(|x| x * x).sum::<f64>();
        let tall = if m >= n { a.clone() } else { a.t().to_owned() };
        let oracle = oracle_singular_values(&tall);
        let tail2: f64 = oracle[r..].iter().map(|s| s * s).sum();
        let total: f64 = oracle.iter().map(|s| s * s).sum();
        prop_assert!((err2 - tail2).abs() <= 1e-9 * total.max(1e-30));
    }

    #[test]
    fn least_squares_minimum_norm_under_column_duplication(
        seed in 1u64..10_000,
        m in 4usize..12,
    ) {
        // J with a duplicated column is rank deficient; the returned
        // solution must still satisfy the normal equations and be the
        // smallest such vector.
        let base = xorshift_matrix(m, 2, seed);
        let mut j = Array2::<f64>::zeros((m, 3));
        for i in 0..m {
            j[[i, 0]] = base[[i, 0]];
            j[[i, 1]] = base[[i, 1]];
            j[[i, 2]] = base[[i, 0]];
        }
        let b = Array1::from_shape_fn(m, |i| base[[i, 0]] - 0.5 * base[[i, 1]]);
        let x = solve_least_squares(&j, b.view()).unwrap();
        let residual = j.t().dot(&(&j.dot(&x) - &b));
        for i in 0..3 {
            prop_assert!(residual[i].abs() < 1e-9);
        }
        prop_assert!((x[0] - x[2]).abs() < 1e-9, "duplicated columns share weight");
    }
}
