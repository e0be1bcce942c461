//! Critical lengths of the KdV equation with Neumann boundary control at the
//! right end: arithmetic of the lengths, eigenmodes, the quadratic kernel and
//! its asymptotics, and a finite-difference solver for the obstruction
//! experiments.

// negated float comparisons double as NaN rejection; index loops follow the stencils
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod arith;
pub mod basym;
mod expsum;
pub mod fit;
pub mod modes;
pub mod quad;
pub mod roots;
mod scalar;
pub mod signal;
pub mod sim;
pub mod validate;

pub use expsum::{ExpSum, ExpTerm, Scaled};
pub use scalar::Real;
pub use signal::ControlSignal;

pub type Eisenstein = arith::EisensteinInt<i64>;
pub type ModeSpec64 = modes::ModeSpec<f64>;
pub type TrappingDirection64 = modes::TrappingDirection<f64>;
pub type RootTriple64 = roots::RootTriple<f64>;
pub type SpectralFns64 = roots::SpectralFns<f64>;
pub type Transfer64 = roots::Transfer<f64>;
pub type ControlSignal64 = ControlSignal<f64>;
pub type Grid64 = sim::Grid1D<f64>;
pub type SimConfig64 = sim::SimConfig<f64>;
pub type Trajectory64 = sim::Trajectory<f64>;
pub type ModeSpec32 = modes::ModeSpec<f32>;
pub type RootTriple32 = roots::RootTriple<f32>;
