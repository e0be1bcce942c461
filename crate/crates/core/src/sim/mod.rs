//! Finite-difference solver for the boundary-controlled KdV equation on
//! `(0, L)` with `y(0) = y(L) = 0` and `∂ₓy(L) = u(t)`, plus the experiments
//! built on it.

mod banded;
mod experiments;
mod export;
mod scheme;

pub use banded::{BandMatrix, BandedLu};
pub use experiments::{
    coercivity_probe, dissipation_check, m_invariance_check, manufactured_error, qm_time_domain,
    qm_time_experiment, rotation_check, trapping_experiment, Coercivity, DissipationReport,
    MInvariance, QmTime, RotationReport, TrapRow, TrapTable,
};
pub use export::{read_binary, write_binary, write_csv, BinaryTrajectory};
pub use scheme::{solve, solve_linear, solve_nonlinear, Stepper};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::ArithError;
use crate::basym::BasymError;
use crate::modes::ModeError;
use crate::Real;

pub const MIN_NODES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("singular step matrix")]
    Singular,
    #[error("data sup norm {sup} exceeds the small-data bound 1")]
    SmallData { sup: f64 },
    #[error("blow-up at t = {t}: sup norm {sup} exceeds {limit}")]
    BlowUp { t: f64, sup: f64, limit: f64 },
    #[error("solution has not decayed: final/max L2 ratio {ratio}, tail estimate {tail}")]
    TailTooLarge { ratio: f64, tail: f64 },
    #[error(transparent)]
    Mode(#[from] ModeError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Basym(#[from] BasymError),
}

/// Uniform nodes `x_i = i·h`, `h = L/(N−1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid1D<T> {
    #[serde(rename = "L")]
    pub length: T,
    #[serde(rename = "N")]
    pub n: usize,
    pub h: T,
}

impl<T: Real> Grid1D<T> {
    pub fn new(length: T, n: usize) -> Result<Self, SimError> {
        if n < MIN_NODES {
            return Err(SimError::InvalidGrid(format!("N = {n} is below {MIN_NODES}")));
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(SimError::InvalidGrid(format!("length {length} must be positive")));
        }
        Ok(Self { length, n, h: length / T::of_u64(n as u64 - 1) })
    }

    pub fn x(&self, i: usize) -> T {
        if i + 1 == self.n {
            self.length
        } else {
            self.h * T::of_u64(i as u64)
        }
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Trapezoid weights.
    pub fn weight(&self, i: usize) -> T {
        if i == 0 || i + 1 == self.n {
            self.h * T::lit(0.5)
        } else {
            self.h
        }
    }

    pub fn dot(&self, a: &[T], b: &[T]) -> T {
        let mut s = T::zero();
        for i in 0..self.n {
            s += self.weight(i) * a[i] * b[i];
        }
        s
    }

    pub fn l2(&self, y: &[T]) -> T {
        self.dot(y, y).sqrt()
    }

    pub fn sample<F: Fn(T) -> T>(&self, f: F) -> Vec<T> {
        (0..self.n).map(|i| f(self.x(i))).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    Linear,
    Nonlinear,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig<T> {
    pub dt: T,
    #[serde(rename = "T_end")]
    pub t_end: T,
    pub theta: T,
    pub scheme: Scheme,
    pub record_every: usize,
}

impl<T: Real> Default for SimConfig<T> {
    fn default() -> Self {
        Self { dt: T::lit(5e-3), t_end: T::one(), theta: T::lit(0.5), scheme: Scheme::Linear, record_every: 1 }
    }
}

impl<T: Real> SimConfig<T> {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(SimError::InvalidConfig(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_end >= self.dt) || !self.t_end.is_finite() {
            return Err(SimError::InvalidConfig(format!("T_end = {} is below dt", self.t_end)));
        }
        if !(self.theta >= T::lit(0.5) && self.theta <= T::one()) {
            return Err(SimError::InvalidConfig(format!("theta = {} outside [1/2, 1]", self.theta)));
        }
        if self.record_every == 0 {
            return Err(SimError::InvalidConfig("record_every must be at least 1".into()));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round().to_usize().unwrap_or(0)
    }

    pub fn with_scheme(&self, scheme: Scheme) -> Self {
        Self { scheme, ..self.clone() }
    }

    pub fn with_t_end(&self, t_end: T) -> Self {
        Self { t_end, ..self.clone() }
    }
}

/// Recorded snapshots. `states[k]` holds all `N` nodal values at `times[k]`
/// and `control[k] = u(times[k])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub grid: Grid1D<T>,
    pub dt: T,
    pub times: Vec<T>,
    pub states: Vec<Vec<T>>,
    pub control: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn l2_norms(&self) -> Vec<T> {
        self.states.iter().map(|y| self.grid.l2(y)).collect()
    }

    /// One-sided second-order `∂ₓy(L)` of snapshot `k`.
    pub fn neumann_trace(&self, k: usize) -> T {
        let y = &self.states[k];
        let n = self.grid.n;
        (T::lit(3.0) * y[n - 1] - T::lit(4.0) * y[n - 2] + y[n - 3]) / (T::lit(2.0) * self.grid.h)
    }

    /// One-sided second-order `∂ₓy(0)` of snapshot `k`.
    pub fn flux_at_zero(&self, k: usize) -> T {
        scheme::flux_at_zero(&self.states[k], self.grid.h)
    }

    pub fn sup(&self) -> T {
        self.states.iter().flatten().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}
