//! Eigenvalues and closed-form eigenfunctions of `φ''' + φ' + iλφ = 0` on a
//! critical interval, and the trapping direction Ψ built from them.

mod trapping;

pub use trapping::{eta_roots, eta_ratio_exact, phi_from_eta, trapping_direction, TrappingDirection};

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, ArithError, PairClass};
use crate::scalar::{im, re};
use crate::Real;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModeError {
    #[error("({k}, {l}) is not a pair of positive integers")]
    InvalidPair { k: u64, l: u64 },
    #[error("no Type 2 eigenfunction for ({k}, {l}): 2k + l is not a multiple of 3")]
    NoType2 { k: u64, l: u64 },
    #[error("diagonal pair ({k}, {l}) makes an η-root vanish")]
    Degenerate { k: u64, l: u64 },
    #[error("({k}, {l}) is in class {class:?}, a trapping direction needs S2")]
    NotS2 { k: u64, l: u64, class: PairClass },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeKind {
    Type1,
    Type2,
    EtaCombination,
}

/// `φ(x) = Σ c_j e^{η_j x}` on `[0, L]`, solving `φ''' + φ' + iλφ = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec<T> {
    pub kind: ModeKind,
    #[serde(rename = "L")]
    pub length: T,
    pub exponents: [Complex<T>; 3],
    pub coefficients: [Complex<T>; 3],
    pub lambda: T,
}

impl<T: Real> ModeSpec<T> {
    pub fn eval(&self, x: T) -> Complex<T> {
        self.derivative(0, x)
    }

    pub fn derivative(&self, order: u32, x: T) -> Complex<T> {
        let mut s = Complex::new(T::zero(), T::zero());
        for (c, e) in self.coefficients.iter().zip(&self.exponents) {
            s += c * e.powu(order) * (e * x).exp();
        }
        s
    }

    /// `φ''' + φ' + iλφ` at `x`.
    pub fn ode_residual(&self, x: T) -> Complex<T> {
        self.derivative(3, x) + self.derivative(1, x) + im(self.lambda) * self.eval(x)
    }

    /// The derivative as a mode of the same equation.
    pub fn differentiate(&self) -> Self {
        let mut d = self.clone();
        for (c, e) in d.coefficients.iter_mut().zip(&self.exponents) {
            *c *= e;
        }
        d
    }

    /// Uniform grid of `n ≥ 2` points on `[0, L]`.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = T> + '_ {
        let h = self.length / T::of_u64((n.max(2) - 1) as u64);
        (0..n.max(2)).map(move |i| h * T::of_u64(i as u64))
    }

    pub fn sup_norm(&self, n: usize) -> T {
        self.grid(n).map(|x| self.eval(x).norm()).fold(T::zero(), T::max)
    }

    /// Largest ODE residual on an `n`-point grid.
    pub fn max_residual(&self, n: usize) -> T {
        self.grid(n).map(|x| self.ode_residual(x).norm()).fold(T::zero(), T::max)
    }

    /// `(x, Re φ, Im φ)` rows.
    pub fn sample(&self, n: usize) -> Vec<(T, T, T)> {
        self.grid(n)
            .map(|x| {
                let v = self.eval(x);
                (x, v.re, v.im)
            })
            .collect()
    }

    /// `[φ(0), φ(L), φ'(0), φ'(L)]`.
    pub fn boundary_traces(&self) -> [Complex<T>; 4] {
        [
            self.eval(T::zero()),
            self.eval(self.length),
            self.derivative(1, T::zero()),
            self.derivative(1, self.length),
        ]
    }
}

fn check_pair(k: u64, l: u64) -> Result<(), ModeError> {
    if k == 0 || l == 0 {
        return Err(ModeError::InvalidPair { k, l });
    }
    Ok(())
}

pub(crate) fn pair_norm<T: Real>(k: u64, l: u64) -> T {
    T::of_u64(k * k + k * l + l * l)
}

/// `L = 2π √((k² + kl + l²)/3)`.
pub fn pair_length<T: Real>(k: u64, l: u64) -> T {
    T::lit(2.0) * T::PI() * (pair_norm::<T>(k, l) / T::lit(3.0)).sqrt()
}

/// `(2k+l)(k−l)(2l+k) / (3√3 (k²+kl+l²)^{3/2})`.
pub fn eigenvalue<T: Real>(k: u64, l: u64) -> T {
    let (kf, lf) = (T::of_u64(k), T::of_u64(l));
    let two = T::lit(2.0);
    let s = pair_norm::<T>(k, l);
    (two * kf + lf) * (kf - lf) * (two * lf + kf) / (T::lit(3.0) * T::lit(3.0).sqrt() * s * s.sqrt())
}

fn type1_rates<T: Real>(k: u64, l: u64) -> [T; 3] {
    let (kf, lf) = (T::of_u64(k), T::of_u64(l));
    let two = T::lit(2.0);
    let d = (T::lit(3.0) * pair_norm::<T>(k, l)).sqrt();
    [(two * kf + lf) / d, -(kf + two * lf) / d, (lf - kf) / d]
}

pub fn type1_mode<T: Real>(k: u64, l: u64) -> Result<ModeSpec<T>, ModeError> {
    check_pair(k, l)?;
    let (kf, lf) = (T::of_u64(k), T::of_u64(l));
    Ok(ModeSpec {
        kind: ModeKind::Type1,
        length: pair_length(k, l),
        exponents: type1_rates::<T>(k, l).map(im),
        coefficients: [-T::one(), -kf / lf, (kf + lf) / lf].map(re),
        lambda: eigenvalue(k, l),
    })
}

/// `e^{i(2k+l)x/√(3s)} − e^{−i(k+2l)x/√(3s)}`, which exists when `3 | 2k + l`.
pub fn type2_mode<T: Real>(k: u64, l: u64) -> Result<ModeSpec<T>, ModeError> {
    check_pair(k, l)?;
    if !(2 * k + l).is_multiple_of(3) {
        return Err(ModeError::NoType2 { k, l });
    }
    Ok(ModeSpec {
        kind: ModeKind::Type2,
        length: pair_length(k, l),
        exponents: type1_rates::<T>(k, l).map(im),
        coefficients: [T::one(), -T::one(), T::zero()].map(re),
        lambda: eigenvalue(k, l),
    })
}

/// `i√3 (k+l)/√(k²+kl+l²)`, the Neumann trace of the Type 2 mode at both ends.
pub fn type2_trace<T: Real>(k: u64, l: u64) -> Complex<T> {
    im(T::lit(3.0).sqrt() * T::of_u64(k + l) / pair_norm::<T>(k, l).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeModeReport<T> {
    pub pair: (u64, u64),
    /// `[φ'(0), φ'(L)]` of the Type 1 mode.
    pub values: [Complex<T>; 2],
    /// `[φ''(0), φ''(L)]`.
    pub second: [Complex<T>; 2],
    /// `3k(k+l)/(k²+kl+l²)`.
    pub expected_second: T,
    pub max_error: T,
}

/// Checks that the derivative of the Type 1 mode satisfies the Type 2 boundary conditions.
pub fn derivative_mode_check<T: Real>(k: u64, l: u64) -> Result<DerivativeModeReport<T>, ModeError> {
    check_pair(k, l)?;
    if !(2 * k + l).is_multiple_of(3) {
        return Err(ModeError::NoType2 { k, l });
    }
    let d = type1_mode::<T>(k, l)?.differentiate();
    let len = d.length;
    let values = [d.eval(T::zero()), d.eval(len)];
    let second = [d.derivative(1, T::zero()), d.derivative(1, len)];
    let expected = T::of_u64(3 * k * (k + l)) / pair_norm::<T>(k, l);
    let max_error = values
        .iter()
        .map(|v| v.norm())
        .chain(second.iter().map(|v| (v - re(expected)).norm()))
        .fold(T::zero(), T::max);
    Ok(DerivativeModeReport { pair: (k, l), values, second, expected_second: expected, max_error })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Part {
    Re,
    Im,
}

/// A real basis function `Re φ_m` or `Im φ_m` of the unreachable subspace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisFn<T> {
    pub pair: (u64, u64),
    pub part: Part,
    pub mode: ModeSpec<T>,
}

impl<T: Real> BasisFn<T> {
    pub fn eval(&self, x: T) -> T {
        self.derivative(0, x)
    }

    pub fn derivative(&self, order: u32, x: T) -> T {
        let v = self.mode.derivative(order, x);
        match self.part {
            Part::Re => v.re,
            Part::Im => v.im,
        }
    }
}

/// Real and imaginary parts of the Type 1 modes of every pair of `n`; empty
/// when `n` is not critical.
pub fn unreachable_basis<T: Real>(n: u64) -> Result<Vec<BasisFn<T>>, ArithError> {
    let mut out = Vec::new();
    for p in arith::enumerate_pairs(n)? {
        let mode = type1_mode::<T>(p.k, p.l).expect("enumerated pairs are positive");
        let sup = mode.sup_norm(1001);
        let im_sup = mode.grid(1001).map(|x| mode.eval(x).im.abs()).fold(T::zero(), T::max);
        out.push(BasisFn { pair: (p.k, p.l), part: Part::Re, mode: mode.clone() });
        if im_sup > T::lit(1e-12) * sup.max(T::one()) {
            out.push(BasisFn { pair: (p.k, p.l), part: Part::Im, mode });
        }
    }
    Ok(out)
}
