use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::Real;

/// `coef · exp(base + rate·x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpTerm<T> {
    pub coef: Complex<T>,
    pub base: Complex<T>,
    pub rate: Complex<T>,
}

/// A finite exponential sum. Keeping the exponent of each term in one piece
/// avoids overflow when individual factors are huge but their product is not.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpSum<T> {
    pub terms: Vec<ExpTerm<T>>,
}

impl<T: Real> ExpSum<T> {
    pub fn new() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn push(&mut self, coef: Complex<T>, base: Complex<T>, rate: Complex<T>) {
        self.terms.push(ExpTerm { coef, base, rate });
    }

    pub fn eval(&self, x: T) -> Complex<T> {
        self.derivative(0, x)
    }

    pub fn derivative(&self, order: u32, x: T) -> Complex<T> {
        self.terms.iter().fold(Complex::new(T::zero(), T::zero()), |acc, t| {
            acc + t.coef * t.rate.powu(order) * (t.base + t.rate * x).exp()
        })
    }
}

/// A complex number stored as `mantissa · e^{log_scale}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaled<T> {
    pub mantissa: Complex<T>,
    pub log_scale: T,
}

impl<T: Real> Scaled<T> {
    /// Sums `coef · e^{exponent}` after factoring out the largest real part.
    /// The second value is the sum of term magnitudes on the same scale, a
    /// yardstick for cancellation.
    pub fn sum(terms: &[(Complex<T>, Complex<T>)]) -> (Self, T) {
        let shift = terms
            .iter()
            .filter(|(c, _)| c.norm() > T::zero())
            .map(|(_, e)| e.re)
            .fold(T::neg_infinity(), T::max);
        let shift = if shift.is_finite() { shift } else { T::zero() };
        let mut m = Complex::new(T::zero(), T::zero());
        let mut mag = T::zero();
        for &(c, e) in terms {
            let v = c * (e - shift).exp();
            mag += v.norm();
            m += v;
        }
        (Self { mantissa: m, log_scale: shift }, mag)
    }

    pub fn value(&self) -> Complex<T> {
        self.mantissa * self.log_scale.exp()
    }

    pub fn div(&self, d: Complex<T>) -> Self {
        Self { mantissa: self.mantissa / d, log_scale: self.log_scale }
    }

    /// `self / other` as a plain number.
    pub fn ratio(&self, other: &Self) -> Complex<T> {
        self.mantissa / other.mantissa * (self.log_scale - other.log_scale).exp()
    }
}
