//! Full-order models: periodic sixth-order finite differences, adaptive
//! Runge-Kutta 5(4) time integration, the three benchmark PDE systems, and
//! the synthetic snapshot generators.

pub mod dopri5;
pub mod problems;
pub mod stencil;

pub use dopri5::{integrate_ode, Dopri5Options, IntegrationStats};
pub use problems::{
    advection_profile, analytic_advection_solution, analytic_rd_solution, ard_initial_condition,
    ard_profile, front_decay_snapshots, integrate, moving_disk_level_set, moving_disk_snapshots,
    rd_profile, topo_merge_level_set, topo_merge_snapshots, vortex_velocity, vorticity_field,
    FomProblem, Velocity, VortexPairSpec,
};
pub use stencil::{fd_derivative, fd_derivative_2d, DiffOrder};

use ndarray::{Array1, Array2};

use crate::error::FomError;
use crate::Scalar;

/// Minimum points per axis so the 7-point stencils never self-overlap.
pub const MIN_GRID_POINTS: usize = 7;

/// How the sample points of a [`Grid1D`] cover its interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    /// `n` points `a + i dx` with `dx = (b - a)/n`; index `n` wraps to `0`.
    Periodic,
    /// `n` points including both endpoints, `dx = (b - a)/(n - 1)`.
    Closed,
}

/// Uniform one-dimensional grid on `[a, b]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D<S: Scalar = f64> {
    start: S,
    end: S,
    points: usize,
    kind: GridKind,
}

impl<S: Scalar> Grid1D<S> {
    pub fn new(start: S, end: S, points: usize, kind: GridKind) -> Result<Self, FomError> {
        if points < MIN_GRID_POINTS {
            return Err(FomError::GridTooSmall {
                min: MIN_GRID_POINTS,
                n: points,
            });
        }
        if !(end > start) {
            return Err(FomError::BadParameter("grid interval must have end > start"));
        }
        Ok(Self {
            start,
            end,
            points,
            kind,
        })
    }

    pub fn start(&self) -> S {
        self.start
    }

    pub fn end(&self) -> S {
        self.end
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Physical length of the interval.
    pub fn extent(&self) -> S {
        self.end - self.start
    }

    /// Grid spacing; periodic grids exclude the duplicate endpoint.
    pub fn dx(&self) -> S {
        match self.kind {
            GridKind::Periodic => self.extent() / S::from_count(self.points),
            GridKind::Closed => self.extent() / S::from_count(self.points - 1),
        }
    }

    /// Sample coordinates `a + i dx` for `i = 0..points`.
    pub fn coords(&self) -> Array1<S> {
        let dx = self.dx();
        Array1::from_shape_fn(self.points, |i| self.start + S::from_count(i) * dx)
    }
}

/// Tensor-product grid for two-dimensional fields.
///
/// Fields are stored flattened with the x index outermost: entry `(i, j)`
/// of the `nx x ny` field sits at flat index `i * ny + j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid2D<S: Scalar = f64> {
    x: Grid1D<S>,
    y: Grid1D<S>,
}

impl<S: Scalar> Grid2D<S> {
    pub fn new(x: Grid1D<S>, y: Grid1D<S>) -> Self {
        Self { x, y }
    }

    /// Square grid with identical axes.
    pub fn square(start: S, end: S, points: usize, kind: GridKind) -> Result<Self, FomError> {
        let axis = Grid1D::new(start, end, points, kind)?;
        Ok(Self { x: axis, y: axis })
    }

    pub fn x(&self) -> &Grid1D<S> {
        &self.x
    }

    pub fn y(&self) -> &Grid1D<S> {
        &self.y
    }

    /// Total number of grid points `nx * ny`.
    pub fn len(&self) -> usize {
        self.x.points() * self.y.points()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.x.points(), self.y.points())
    }
}

/// Time series of states: column `j` of `states` is the state at `times[j]`.
#[derive(Clone, Debug)]
pub struct Trajectory<S: Scalar = f64> {
    pub times: Array1<S>,
    pub states: Array2<S>,
    /// Scenario parameter the trajectory was generated at (0 if unused).
    pub parameter: S,
}

impl<S: Scalar> Trajectory<S> {
    pub fn new(times: Array1<S>, states: Array2<S>, parameter: S) -> Result<Self, FomError> {
        if times.len() != states.ncols() {
            return Err(FomError::StateSizeMismatch {
                expected: times.len(),
                got: states.ncols(),
            });
        }
        for w in times.as_slice().expect("times contiguous").windows(2) {
            if !(w[1] > w[0]) {
                return Err(FomError::BadParameter("times must be strictly increasing"));
            }
        }
        Ok(Self {
            times,
            states,
            parameter,
        })
    }

    /// Spatial dimension (rows of the snapshot matrix).
    pub fn dim(&self) -> usize {
        self.states.nrows()
    }

    /// Number of stored snapshots.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}
