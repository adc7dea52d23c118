//! PDE right-hand sides, closed-form reference solutions, and synthetic
//! snapshot generators.
//!
//! Two-dimensional states are flattened x-major: the value at node `(i, j)`
//! sits at flat index `i * ny + j`, matching [`Grid2D::shape`].

use ndarray::{Array1, Array2, ArrayView1, Axis, Zip};

use super::dopri5::{integrate_ode, Dopri5Options};
use super::stencil::{fd_derivative, fd_derivative_2d, scaled_weights, DiffOrder};
use super::{Grid1D, Grid2D, GridKind, Trajectory};
use crate::error::FomError;
use crate::Scalar;

/// Radius of the rotating disk, as a fraction of the unit box.
pub const DISK_RADIUS: f64 = 0.22;
/// Front half-width of the rotating-disk profile.
pub const DISK_FRONT_WIDTH: f64 = 0.0125;
/// Radius of the circle the disk center travels on.
pub const DISK_PATH_RADIUS: f64 = 0.25;

/// Gaussian bump amplitudes of the merging-fronts level-set field.
pub const TOPO_AMPLITUDES: [f64; 3] = [1.0, 1.4, 1.2];
/// Gaussian decay rates of the bumps (1/length^2).
pub const TOPO_DECAY_RATES: [f64; 3] = [0.1, 0.3, 0.5];
/// Bump centers in the [0, 10]^2 box.
pub const TOPO_CENTERS: [[f64; 2]; 3] = [[7.5, 3.5], [2.5, 5.0], [5.0, 7.6]];
/// Contour level at t = 0; the level decreases linearly with time, growing
/// the enclosed regions until they merge.
pub const TOPO_LEVEL0: f64 = 0.95;
/// Front half-width of the merging-fronts profile.
pub const TOPO_FRONT_WIDTH: f64 = 0.1;
/// Final time of the merging-fronts sweep.
pub const TOPO_T_END: f64 = 0.4;

/// Center of the initial reactant-free disk of the 2D reaction system.
pub const ARD_SEED_CENTER: [f64; 2] = [0.4, 0.5];
/// Radius of the initial reactant-free disk.
pub const ARD_SEED_RADIUS: f64 = 0.2;

/// Decreasing tanh front of the 1D reaction-diffusion scenario.
pub fn rd_profile<S: Scalar>(z: S) -> S {
    S::lit(0.5) * (S::one() - z.tanh())
}

/// Decreasing tanh front of the 1D advection scenario (width 0.4).
pub fn advection_profile<S: Scalar>(z: S) -> S {
    S::lit(0.5) * (S::one() - (S::lit(2.5) * z).tanh())
}

/// Logistic front of the 2D advection-reaction-diffusion scenario.
pub fn ard_profile<S: Scalar>(z: S) -> S {
    S::lit(0.5) * (S::one() + (S::lit(0.5) * z).tanh())
}

/// Pair of fronts moving outward from the origin at speed 2/delta,
/// evaluated pointwise.
pub fn analytic_rd_solution<S: Scalar>(x: S, t: S, delta: S) -> S {
    rd_profile((x.abs() - S::lit(2.0) * t / delta - S::lit(2.0)) / delta)
}

/// Two-front advection state transported by the accumulated displacement
/// `shift` of the characteristics.
pub fn analytic_advection_solution<S: Scalar>(x: S, shift: S) -> S {
    advection_profile((x - shift).abs() - S::lit(2.0))
}

/// Time-dependent transport speed of the 1D advection problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Velocity<S: Scalar = f64> {
    /// u(t) = c.
    Constant(S),
    /// u(t) = amplitude * sin(2 pi t / period).
    Sinusoid { amplitude: S, period: S },
}

impl<S: Scalar> Velocity<S> {
    /// Speed at time `t`.
    pub fn at(&self, t: S) -> S {
        match *self {
            Velocity::Constant(c) => c,
            Velocity::Sinusoid { amplitude, period } => {
                amplitude * (S::lit(std::f64::consts::TAU) * t / period).sin()
            }
        }
    }

    /// Displacement of the characteristics, the integral of u over [0, t].
    pub fn displacement(&self, t: S) -> S {
        match *self {
            Velocity::Constant(c) => c * t,
            Velocity::Sinusoid { amplitude, period } => {
                let w = S::lit(std::f64::consts::TAU) / period;
                amplitude / w * (S::one() - (w * t).cos())
            }
        }
    }
}

/// Decaying Gaussian vortex pair, written as a scalar stream function
/// whose curl gives the velocity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VortexPairSpec<S: Scalar = f64> {
    /// Peak stream-function amplitude.
    pub omega0: S,
    /// Core radius of each Gaussian lobe.
    pub r0: S,
    /// Time constant of the Gaussian amplitude decay.
    pub tau_decay: S,
    /// Drift speed of the pair toward negative x.
    pub c: S,
    /// Lobe-center x coordinate at t = 0.
    pub x_start: S,
    /// y coordinate of the first lobe center.
    pub y1: S,
    /// y coordinate of the second lobe center.
    pub y2: S,
}

impl<S: Scalar> VortexPairSpec<S> {
    /// Desk-scale defaults for the unit box: a marginally overlapping pair
    /// drifting left across the reactant seed, peak speed near 1.2.
    pub fn desk() -> Self {
        Self {
            omega0: S::lit(0.04),
            r0: S::lit(0.05),
            tau_decay: S::lit(9.0),
            c: S::lit(0.2),
            x_start: S::lit(0.6),
            y1: S::lit(0.49),
            y2: S::lit(0.51),
        }
    }

    /// Checks the positivity requirements on the shape parameters.
    pub fn validate(&self) -> Result<(), FomError> {
        if !(self.omega0 > S::zero()) || !self.omega0.is_finite() {
            return Err(FomError::BadParameter("vortex amplitude must be positive"));
        }
        if !(self.r0 > S::zero()) || !self.r0.is_finite() {
            return Err(FomError::BadParameter("vortex core radius must be positive"));
        }
        if !(self.tau_decay > S::zero()) || !self.tau_decay.is_finite() {
            return Err(FomError::BadParameter("vortex decay time must be positive"));
        }
        Ok(())
    }

    /// Stream-function value at one point.
    pub fn stream_at(&self, x: S, y: S, t: S) -> S {
        let amp = self.omega0 * (-(t / self.tau_decay).powi(2)).exp();
        let cx = self.x_start - self.c * t;
        let inv = S::one() / (self.r0 * self.r0);
        let dx2 = (x - cx) * (x - cx);
        let r1 = dx2 + (y - self.y1) * (y - self.y1);
        let r2 = dx2 + (y - self.y2) * (y - self.y2);
        amp * ((-(r1 * inv)).exp() + (-(r2 * inv)).exp())
    }
}

/// Samples the vortex-pair stream function on the grid.
///
/// Uses the separable structure of the Gaussians (one exp per axis node
/// instead of one per grid point); values match [`VortexPairSpec::stream_at`]
/// to roundoff.
pub fn vorticity_field<S: Scalar>(spec: &VortexPairSpec<S>, grid: &Grid2D<S>, t: S) -> Array2<S> {
    let amp = spec.omega0 * (-(t / spec.tau_decay).powi(2)).exp();
    let cx = spec.x_start - spec.c * t;
    let inv = S::one() / (spec.r0 * spec.r0);
    let gx = grid
        .x()
        .coords()
        .mapv(|x| (-((x - cx) * (x - cx) * inv)).exp());
    let gy = grid.y().coords().mapv(|y| {
        (-((y - spec.y1) * (y - spec.y1) * inv)).exp()
            + (-((y - spec.y2) * (y - spec.y2) * inv)).exp()
    });
    let (nx, ny) = grid.shape();
    let mut w = Array2::zeros((nx, ny));
    for i in 0..nx {
        let a = amp * gx[i];
        for j in 0..ny {
            w[[i, j]] = a * gy[j];
        }
    }
    w
}

/// Velocity field (u_x, u_y) = (dw/dy, -dw/dx) of the vortex-pair stream
/// function; divergence-free by construction.
pub fn vortex_velocity<S: Scalar>(
    spec: &VortexPairSpec<S>,
    grid: &Grid2D<S>,
    t: S,
) -> Result<(Array2<S>, Array2<S>), FomError> {
    spec.validate()?;
    let w = vorticity_field(spec, grid, t);
    let ux = fd_derivative_2d(w.view(), grid, Axis(1), DiffOrder::First)?;
    let mut uy = fd_derivative_2d(w.view(), grid, Axis(0), DiffOrder::First)?;
    uy.mapv_inplace(|v| -v);
    Ok((ux, uy))
}

/// A full-order model: a periodic grid plus one of the supported
/// right-hand sides.
#[derive(Clone, Debug)]
pub enum FomProblem<S: Scalar = f64> {
    /// dq/dt = -u(t) dq/dx.
    Advection1d {
        grid: Grid1D<S>,
        velocity: Velocity<S>,
    },
    /// dq/dt = d2q/dx2 - (8/delta^2) q^2 (q - 1).
    ReactionDiffusion1d { grid: Grid1D<S>, delta: S },
    /// dq/dt = -u . grad q + kappa lap q - gamma q^alpha (q - 1), with u
    /// the curl of the vortex-pair stream function.
    Ard2d {
        grid: Grid2D<S>,
        kappa: S,
        gamma: S,
        /// Reaction exponent (2 in all shipped scenarios).
        alpha: u32,
        vortex: VortexPairSpec<S>,
    },
}

impl<S: Scalar> FomProblem<S> {
    /// Number of unknowns in the state vector.
    pub fn dim(&self) -> usize {
        match self {
            FomProblem::Advection1d { grid, .. } => grid.points(),
            FomProblem::ReactionDiffusion1d { grid, .. } => grid.points(),
            FomProblem::Ard2d { grid, .. } => grid.len(),
        }
    }

    /// Scenario parameter the problem is configured at: the velocity
    /// magnitude, the front width, or the reaction rate.
    pub fn parameter(&self) -> S {
        match self {
            FomProblem::Advection1d { velocity, .. } => match *velocity {
                Velocity::Constant(c) => c,
                Velocity::Sinusoid { amplitude, .. } => amplitude,
            },
            FomProblem::ReactionDiffusion1d { delta, .. } => *delta,
            FomProblem::Ard2d { gamma, .. } => *gamma,
        }
    }

    /// Checks grid periodicity and parameter ranges.
    pub fn validate(&self) -> Result<(), FomError> {
        match self {
            FomProblem::Advection1d { grid, .. } => {
                if grid.kind() != GridKind::Periodic {
                    return Err(FomError::BadParameter("advection needs a periodic grid"));
                }
            }
            FomProblem::ReactionDiffusion1d { grid, delta } => {
                if grid.kind() != GridKind::Periodic {
                    return Err(FomError::BadParameter(
                        "reaction-diffusion needs a periodic grid",
                    ));
                }
                if !(*delta > S::zero()) || !delta.is_finite() {
                    return Err(FomError::BadParameter("front width delta must be positive"));
                }
            }
            FomProblem::Ard2d {
                grid,
                kappa,
                gamma,
                vortex,
                ..
            } => {
                if grid.x().kind() != GridKind::Periodic || grid.y().kind() != GridKind::Periodic {
                    return Err(FomError::BadParameter("2D reaction needs a periodic box"));
                }
                if !(*kappa >= S::zero()) || !kappa.is_finite() {
                    return Err(FomError::BadParameter("diffusivity must be nonnegative"));
                }
                if !(*gamma >= S::zero()) || !gamma.is_finite() {
                    return Err(FomError::BadParameter("reaction rate must be nonnegative"));
                }
                vortex.validate()?;
            }
        }
        Ok(())
    }

    /// Full right-hand side dq/dt at time `t`.
    pub fn rhs(&self, t: S, q: ArrayView1<S>) -> Result<Array1<S>, FomError> {
        if q.len() != self.dim() {
            return Err(FomError::StateSizeMismatch {
                expected: self.dim(),
                got: q.len(),
            });
        }
        match self {
            FomProblem::Advection1d { grid, velocity } => {
                let mut dq = fd_derivative(q, grid, DiffOrder::First)?;
                let u = velocity.at(t);
                dq.mapv_inplace(|v| -(u * v));
                Ok(dq)
            }
            FomProblem::ReactionDiffusion1d { grid, delta } => {
                let mut out = fd_derivative(q, grid, DiffOrder::Second)?;
                let c = S::lit(8.0) / (*delta * *delta);
                Zip::from(&mut out)
                    .and(&q)
                    .for_each(|o, &v| *o -= c * v * v * (v - S::one()));
                Ok(out)
            }
            FomProblem::Ard2d {
                grid,
                kappa,
                gamma,
                alpha,
                vortex,
            } => {
                let (nx, ny) = grid.shape();
                let qf = q.to_shape((nx, ny)).map_err(|_| FomError::StateSizeMismatch {
                    expected: nx * ny,
                    got: q.len(),
                })?;
                let qv = qf.view();
                let (ux, uy) = vortex_velocity(vortex, grid, t)?;
                let gx = fd_derivative_2d(qv, grid, Axis(0), DiffOrder::First)?;
                let gy = fd_derivative_2d(qv, grid, Axis(1), DiffOrder::First)?;
                let lxx = fd_derivative_2d(qv, grid, Axis(0), DiffOrder::Second)?;
                let lyy = fd_derivative_2d(qv, grid, Axis(1), DiffOrder::Second)?;
                let (k, g, a) = (*kappa, *gamma, *alpha as i32);
                let mut out = Array1::zeros(nx * ny);
                {
                    let o = out.as_slice_mut().expect("freshly allocated");
                    let mut p = 0;
                    for i in 0..nx {
                        for j in 0..ny {
                            let adv = ux[[i, j]] * gx[[i, j]] + uy[[i, j]] * gy[[i, j]];
                            let lap = lxx[[i, j]] + lyy[[i, j]];
                            let v = qv[[i, j]];
                            o[p] = -adv + k * lap - g * v.powi(a) * (v - S::one());
                            p += 1;
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// Flat indices the sampled right-hand side reads: the union of the
    /// stencil footprints of `points`, sorted and deduplicated.
    pub fn stencil_halo(&self, points: &[usize]) -> Vec<usize> {
        let mut halo: Vec<usize> = match self {
            FomProblem::Advection1d { grid, .. } | FomProblem::ReactionDiffusion1d { grid, .. } => {
                let m = grid.points();
                points
                    .iter()
                    .flat_map(|&p| (0..7usize).map(move |k| (p + m + k - 3) % m))
                    .collect()
            }
            FomProblem::Ard2d { grid, .. } => {
                let (nx, ny) = grid.shape();
                let mut v = Vec::with_capacity(points.len() * 13);
                for &p in points {
                    let (i, j) = (p / ny, p % ny);
                    for k in 0..7usize {
                        v.push(((i + nx + k - 3) % nx) * ny + j);
                        v.push(i * ny + (j + ny + k - 3) % ny);
                    }
                }
                v
            }
        };
        halo.sort_unstable();
        halo.dedup();
        halo
    }

    /// Right-hand-side entries at `points` only. `q` is a full-length
    /// state whose values must be valid on [`Self::stencil_halo`] of
    /// `points`; all other entries are ignored.
    pub fn rhs_at(&self, t: S, q: ArrayView1<S>, points: &[usize]) -> Result<Array1<S>, FomError> {
        let m = self.dim();
        if q.len() != m {
            return Err(FomError::StateSizeMismatch {
                expected: m,
                got: q.len(),
            });
        }
        if points.iter().any(|&p| p >= m) {
            return Err(FomError::BadParameter("sample index outside the grid"));
        }
        let mut out = Array1::zeros(points.len());
        match self {
            FomProblem::Advection1d { grid, velocity } => {
                let w1 = scaled_weights(DiffOrder::First, grid.dx());
                let n = grid.points();
                let u = velocity.at(t);
                for (o, &p) in out.iter_mut().zip(points) {
                    let mut d = S::zero();
                    for (k, &wk) in w1.iter().enumerate() {
                        d += wk * q[(p + n + k - 3) % n];
                    }
                    *o = -(u * d);
                }
            }
            FomProblem::ReactionDiffusion1d { grid, delta } => {
                let w2 = scaled_weights(DiffOrder::Second, grid.dx());
                let n = grid.points();
                let c = S::lit(8.0) / (*delta * *delta);
                for (o, &p) in out.iter_mut().zip(points) {
                    let mut d = S::zero();
                    for (k, &wk) in w2.iter().enumerate() {
                        d += wk * q[(p + n + k - 3) % n];
                    }
                    let v = q[p];
                    *o = d - c * v * v * (v - S::one());
                }
            }
            FomProblem::Ard2d {
                grid,
                kappa,
                gamma,
                alpha,
                vortex,
            } => {
                let (nx, ny) = grid.shape();
                let w1x = scaled_weights(DiffOrder::First, grid.x().dx());
                let w1y = scaled_weights(DiffOrder::First, grid.y().dx());
                let w2x = scaled_weights(DiffOrder::Second, grid.x().dx());
                let w2y = scaled_weights(DiffOrder::Second, grid.y().dx());
                let xs = grid.x().coords();
                let ys = grid.y().coords();
                let (kap, g, a) = (*kappa, *gamma, *alpha as i32);
                for (o, &p) in out.iter_mut().zip(points) {
                    let (i, j) = (p / ny, p % ny);
                    let mut gx = S::zero();
                    let mut gy = S::zero();
                    let mut lap = S::zero();
                    let mut ux = S::zero();
                    let mut uy = S::zero();
                    for k in 0..7usize {
                        let iw = (i + nx + k - 3) % nx;
                        let jw = (j + ny + k - 3) % ny;
                        let qx = q[iw * ny + j];
                        let qy = q[i * ny + jw];
                        gx += w1x[k] * qx;
                        gy += w1y[k] * qy;
                        lap += w2x[k] * qx + w2y[k] * qy;
                        ux += w1y[k] * vortex.stream_at(xs[i], ys[jw], t);
                        uy -= w1x[k] * vortex.stream_at(xs[iw], ys[j], t);
                    }
                    let v = q[p];
                    *o = -(ux * gx + uy * gy) + kap * lap - g * v.powi(a) * (v - S::one());
                }
            }
        }
        Ok(out)
    }
}

/// Integrates the problem from `q0` over `t_span` and records the state at
/// `n_save` equispaced instants (endpoints included).
pub fn integrate<S: Scalar>(
    problem: &FomProblem<S>,
    q0: ArrayView1<S>,
    t_span: (S, S),
    n_save: usize,
    opts: &Dopri5Options<S>,
) -> Result<Trajectory<S>, FomError> {
    problem.validate()?;
    if q0.len() != problem.dim() {
        return Err(FomError::StateSizeMismatch {
            expected: problem.dim(),
            got: q0.len(),
        });
    }
    if n_save < 2 {
        return Err(FomError::TooFewSavePoints {
            min: 2,
            n: n_save,
        });
    }
    let times = Array1::linspace(t_span.0, t_span.1, n_save);
    let save: Vec<S> = times.to_vec();
    let (states, _stats) = integrate_ode(
        |t, y| {
            problem
                .rhs(t, y)
                .expect("validated problem evaluates on conforming states")
        },
        q0,
        t_span,
        &save,
        opts,
    )?;
    Trajectory::new(times, states, problem.parameter())
}

/// Signed-distance-like level set of the rotating disk at time `t`: negative
/// inside the disk, zero on its boundary.
pub fn moving_disk_level_set<S: Scalar>(grid: &Grid2D<S>, t: S) -> Array1<S> {
    let r = S::lit(DISK_RADIUS);
    let tau = S::lit(std::f64::consts::TAU);
    let x0 = S::lit(0.5) + S::lit(DISK_PATH_RADIUS) * (tau * t).cos();
    let y0 = S::lit(0.5) + S::lit(DISK_PATH_RADIUS) * (tau * t).sin();
    let xs = grid.x().coords();
    let ys = grid.y().coords();
    let ny = ys.len();
    let mut phi = Array1::zeros(grid.len());
    for (i, &x) in xs.iter().enumerate() {
        let dx2 = (x - x0) * (x - x0);
        for (j, &y) in ys.iter().enumerate() {
            let d2 = dx2 + (y - y0) * (y - y0);
            phi[i * ny + j] = (d2 - r * r) / (S::lit(2.0) * r);
        }
    }
    phi
}

/// Snapshots of a sharp disk moving on a circle: q = f(phi) with an
/// increasing tanh front, sampled at t = 1/n_t, 2/n_t, ..., 1.
pub fn moving_disk_snapshots<S: Scalar>(
    grid: &Grid2D<S>,
    n_t: usize,
) -> Result<Trajectory<S>, FomError> {
    if n_t < 2 {
        return Err(FomError::TooFewSavePoints { min: 2, n: n_t });
    }
    let lam = S::lit(DISK_FRONT_WIDTH);
    let times =
        Array1::from_iter((1..=n_t).map(|j| S::from_count(j) / S::from_count(n_t)));
    let mut states = Array2::zeros((grid.len(), n_t));
    for (j, &t) in times.iter().enumerate() {
        let phi = moving_disk_level_set(grid, t);
        states
            .column_mut(j)
            .assign(&phi.mapv(|v| S::lit(0.5) * ((v / lam).tanh() + S::one())));
    }
    Trajectory::new(times, states, S::zero())
}

/// Level set of the merging-fronts scenario: a fixed three-bump Gaussian
/// field compared against a contour level that decreases linearly in time.
pub fn topo_merge_level_set<S: Scalar>(grid: &Grid2D<S>, t: S) -> Array1<S> {
    let xs = grid.x().coords();
    let ys = grid.y().coords();
    let ny = ys.len();
    let level = S::lit(TOPO_LEVEL0) - t;
    let mut phi = Array1::zeros(grid.len());
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let mut g = S::zero();
            for b in 0..3 {
                let dx = x - S::lit(TOPO_CENTERS[b][0]);
                let dy = y - S::lit(TOPO_CENTERS[b][1]);
                g += S::lit(TOPO_AMPLITUDES[b])
                    * (-(S::lit(TOPO_DECAY_RATES[b]) * (dx * dx + dy * dy))).exp();
            }
            phi[i * ny + j] = level - g;
        }
    }
    phi
}

/// Snapshots of three front contours growing and merging into one:
/// q = f(phi) with a decreasing tanh front, t in [0, 0.4].
pub fn topo_merge_snapshots<S: Scalar>(
    grid: &Grid2D<S>,
    n_t: usize,
) -> Result<Trajectory<S>, FomError> {
    if n_t < 2 {
        return Err(FomError::TooFewSavePoints { min: 2, n: n_t });
    }
    let lam = S::lit(TOPO_FRONT_WIDTH);
    let times = Array1::linspace(S::zero(), S::lit(TOPO_T_END), n_t);
    let mut states = Array2::zeros((grid.len(), n_t));
    for (j, &t) in times.iter().enumerate() {
        let phi = topo_merge_level_set(grid, t);
        states
            .column_mut(j)
            .assign(&phi.mapv(|v| S::lit(0.5) * (S::one() - (v / lam).tanh())));
    }
    Trajectory::new(times, states, S::zero())
}

/// Snapshot family of a single increasing tanh front translated across the
/// domain: column j holds the front centered at start + extent * j / n_shifts.
/// The width is `width_ratio` times the domain extent.
pub fn front_decay_snapshots<S: Scalar>(
    grid: &Grid1D<S>,
    n_shifts: usize,
    width_ratio: S,
) -> Result<Array2<S>, FomError> {
    if n_shifts == 0 {
        return Err(FomError::TooFewSavePoints { min: 1, n: 0 });
    }
    if !(width_ratio > S::zero()) {
        return Err(FomError::BadParameter("front width ratio must be positive"));
    }
    let xs = grid.coords();
    let w = width_ratio * grid.extent();
    let mut q = Array2::zeros((xs.len(), n_shifts));
    for j in 0..n_shifts {
        let s = grid.start() + grid.extent() * S::from_count(j) / S::from_count(n_shifts);
        for (i, &x) in xs.iter().enumerate() {
            q[[i, j]] = S::lit(0.5) * (S::one() + ((x - s) / w).tanh());
        }
    }
    Ok(q)
}

/// Smoothed indicator of the complement of the seed disk: approximately 0
/// inside the disk, 1 outside, blended over one grid cell.
pub fn ard_initial_condition<S: Scalar>(grid: &Grid2D<S>) -> Array1<S> {
    let cx = S::lit(ARD_SEED_CENTER[0]);
    let cy = S::lit(ARD_SEED_CENTER[1]);
    let rad = S::lit(ARD_SEED_RADIUS);
    let dx = grid.x().dx();
    let xs = grid.x().coords();
    let ys = grid.y().coords();
    let ny = ys.len();
    let mut q = Array1::zeros(grid.len());
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let r = ((x - cx) * (x - cx) + (y - cy) * (y - cy)).sqrt();
            q[i * ny + j] = ard_profile((r - rad) / dx);
        }
    }
    q
}
