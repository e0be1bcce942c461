//! High-frequency behaviour of the quadratic kernel `B(τ, x)` and the
//! frequency-side evaluation of `Q_M`.

mod asym;
mod fourier;
mod kernel;

pub use asym::{cancellation_check, cancellation_residuals, coef_table, z_terms, CancellationReport, CoefTable, ZTerms};
pub use fourier::{qm_frequency, sobolev_norm, QmFrequency, QmFrequencyOptions};
pub use kernel::{b_at, b_scan, integral_b, integral_b_with, BKernel, BScanRow, IntegralB};

use thiserror::Error;

use crate::roots::RootsError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BasymError {
    #[error(transparent)]
    Roots(#[from] RootsError),
    #[error("quadrature of B did not converge at tau = {tau} with {panels} panels")]
    NonConvergence { tau: f64, panels: usize },
    #[error("frequency grid too coarse: {0}")]
    Resolution(String),
    #[error("x = {x} lies outside [0, {length}]")]
    OutOfDomain { x: f64, length: f64 },
}
