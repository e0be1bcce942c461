use serde::{Deserialize, Serialize};

use crate::Real;

/// A real control sampled at `t_n = n·dt`, zero outside the sampled window and
/// linear between samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlSignal<T> {
    pub dt: T,
    pub values: Vec<T>,
}

impl<T: Real> ControlSignal<T> {
    pub fn new(dt: T, values: Vec<T>) -> Self {
        Self { dt, values }
    }

    pub fn zero(dt: T, len: usize) -> Self {
        Self { dt, values: vec![T::zero(); len] }
    }

    /// Samples `f` on `[0, t_end]`.
    pub fn from_fn<F: Fn(T) -> T>(dt: T, t_end: T, f: F) -> Self {
        let n = (t_end / dt).round().to_usize().unwrap_or(0) + 1;
        Self { dt, values: (0..n).map(|i| f(dt * T::of_u64(i as u64))).collect() }
    }

    /// `a · exp(−1/(1 − s²))` with `s = (t − c)/w`, supported on `[c − w, c + w]`.
    pub fn bump(dt: T, center: T, half_width: T, amplitude: T) -> Self {
        Self::from_fn(dt, center + half_width, |t| bump_fn(t, center, half_width, amplitude))
    }

    pub fn duration(&self) -> T {
        self.dt * T::of_u64(self.values.len().saturating_sub(1) as u64)
    }

    pub fn eval(&self, t: T) -> T {
        if self.values.is_empty() || t < T::zero() {
            return T::zero();
        }
        let s = t / self.dt;
        let i = s.floor().to_usize().unwrap_or(usize::MAX);
        if i + 1 >= self.values.len() {
            return if i + 1 == self.values.len() && s == s.floor() { self.values[i] } else { T::zero() };
        }
        let f = s - T::of_u64(i as u64);
        self.values[i] * (T::one() - f) + self.values[i + 1] * f
    }

    pub fn scaled(&self, a: T) -> Self {
        Self { dt: self.dt, values: self.values.iter().map(|v| *v * a).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == T::zero())
    }
}

pub fn bump_fn<T: Real>(t: T, center: T, half_width: T, amplitude: T) -> T {
    let s = (t - center) / half_width;
    if s.abs() >= T::one() {
        T::zero()
    } else {
        amplitude * (-T::one() / (T::one() - s * s)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates() {
        let u = ControlSignal::new(0.5, vec![0.0, 1.0, 3.0]);
        assert_eq!(u.eval(0.25), 0.5);
        assert_eq!(u.eval(0.75), 2.0);
        assert_eq!(u.eval(1.0), 3.0);
        assert_eq!(u.eval(1.01), 0.0);
        assert_eq!(u.eval(-0.1), 0.0);
        assert_eq!(u.duration(), 1.0);
    }

    #[test]
    fn bump_support() {
        let u = ControlSignal::bump(0.01, 1.0, 1.0, 1.0);
        assert_eq!(u.values[0], 0.0);
        assert!((u.eval(1.0) - (-1f64).exp()).abs() < 1e-15);
        assert!(*u.values.last().unwrap() < 1e-12);
    }
}
