use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::BasymError;
use crate::modes::{ModeSpec, TrappingDirection};
use crate::quad::GaussLegendre;
use crate::roots::{solve_cubic, solve_cubic_shifted, RootsError, Transfer};
use crate::Real;

/// `B(τ, x) = F(τ, x) · F̃(τ, x) · φ'(x)`, where `F` is the transfer profile
/// from the roots `λ_j(τ)` and `F̃` the one from `λ̃_j(τ; p)`.
#[derive(Clone, Debug)]
pub struct BKernel<T> {
    pub tau: T,
    pub length: T,
    pub f: Transfer<T>,
    pub f_tilde: Transfer<T>,
    pub dphi: ModeSpec<T>,
}

impl<T: Real> BKernel<T> {
    pub fn new(tau: T, td: &TrappingDirection<T>) -> Result<Self, RootsError> {
        Self::with_parts(tau, td.p, td.length, td.phi.differentiate())
    }

    /// Same construction with an explicit shift and weight function.
    pub fn with_parts(tau: T, p: T, length: T, dphi: ModeSpec<T>) -> Result<Self, RootsError> {
        let t = Complex::new(tau, T::zero());
        let f = Transfer::from_roots(&solve_cubic(t)?, length)?;
        let f_tilde = Transfer::from_roots(&solve_cubic_shifted(t, p)?, length)?;
        Ok(Self { tau, length, f, f_tilde, dphi })
    }

    pub fn eval(&self, x: T) -> Complex<T> {
        self.f.eval(x) * self.f_tilde.eval(x) * self.dphi.eval(x)
    }
}

pub fn b_at<T: Real>(tau: T, x: T, td: &TrappingDirection<T>) -> Result<Complex<T>, BasymError> {
    if x < T::zero() || x > td.length {
        return Err(BasymError::OutOfDomain { x: x.as_f64(), length: td.length.as_f64() });
    }
    Ok(BKernel::new(tau, td)?.eval(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralB<T> {
    pub value: Complex<T>,
    /// Largest `|B|` seen at the quadrature nodes.
    pub max_abs: T,
    /// `∫|B|`, used as the round-off yardstick.
    pub abs_integral: T,
    pub panels: usize,
}

const MAX_PANELS: usize = 1 << 14;

/// Composite 64-point Gauss–Legendre on `[0, L]`, doubling panels until two
/// successive values agree to `1e-12 · max|B|`.
pub fn integral_b_with<T: Real>(k: &BKernel<T>, rule: &GaussLegendre<T>) -> Result<IntegralB<T>, BasymError> {
    let run = |panels: usize| {
        let h = k.length / T::of_u64(panels as u64);
        let half = h / T::lit(2.0);
        let mut s = Complex::new(T::zero(), T::zero());
        let mut mx = T::zero();
        let mut sa = T::zero();
        for p in 0..panels {
            let mid = h * (T::of_u64(p as u64) + T::lit(0.5));
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let v = k.eval(mid + half * *x);
                let a = v.norm();
                mx = mx.max(a);
                sa += a * *w;
                s += v * *w;
            }
        }
        (s * half, mx, sa * half)
    };
    let mut panels = 2;
    let (mut prev, _, _) = run(1);
    loop {
        let (v, mx, sa) = run(panels);
        let tol = (T::lit(1e-12) * mx).max(T::lit(64.0) * T::epsilon() * sa);
        if (v - prev).norm() <= tol {
            return Ok(IntegralB { value: v, max_abs: mx, abs_integral: sa, panels });
        }
        if panels >= MAX_PANELS {
            return Err(BasymError::NonConvergence { tau: k.tau.as_f64(), panels });
        }
        prev = v;
        panels *= 2;
    }
}

pub fn integral_b<T: Real>(tau: T, td: &TrappingDirection<T>) -> Result<IntegralB<T>, BasymError> {
    integral_b_with(&BKernel::new(tau, td)?, &GaussLegendre::new(64))
}

/// `∫B` with the removable singularities at the poles of `F` or `F̃` replaced by
/// the average over `τ ± δ`, `δ = 1e-4 (1 + |τ|)`. The flag reports the replacement.
pub(crate) fn integral_b_regularized<T: Real>(
    tau: T,
    td: &TrappingDirection<T>,
    rule: &GaussLegendre<T>,
) -> Result<(Complex<T>, bool), BasymError> {
    match BKernel::new(tau, td) {
        Ok(k) => Ok((integral_b_with(&k, rule)?.value, false)),
        Err(RootsError::Pole { .. }) => {
            let d = T::lit(1e-4) * (T::one() + tau.abs());
            let a = integral_b_with(&BKernel::new(tau + d, td)?, rule)?.value;
            let b = integral_b_with(&BKernel::new(tau - d, td)?, rule)?.value;
            Ok(((a + b) * T::lit(0.5), true))
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BScanRow<T> {
    pub tau: T,
    pub integral_b: Complex<T>,
    /// `E/τ²`
    pub leading: Complex<T>,
    /// `∫B − E/τ²`
    pub residual: Complex<T>,
    /// `τ²∫B − E`
    pub scaled_residual: Complex<T>,
    pub flagged: bool,
}

/// `∫B` at each τ, in parallel.
pub fn b_scan<T: Real>(taus: &[T], td: &TrappingDirection<T>) -> Result<Vec<BScanRow<T>>, BasymError> {
    let rule = GaussLegendre::new(64);
    taus.par_iter()
        .map(|&tau| {
            let (ib, flagged) = integral_b_regularized(tau, td, &rule)?;
            let t2 = tau * tau;
            let leading = td.e / t2;
            Ok(BScanRow {
                tau,
                integral_b: ib,
                leading,
                residual: ib - leading,
                scaled_residual: ib * t2 - td.e,
                flagged,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::trapping_direction;

    fn td() -> TrappingDirection<f64> {
        trapping_direction(4, 1).unwrap()
    }

    /// Exact integral of the 6·6·3 exponential terms of B.
    fn closed_form(k: &BKernel<f64>) -> Complex<f64> {
        let mut s = Complex::new(0.0, 0.0);
        let len = k.length;
        for a in &k.f.profile.terms {
            for b in &k.f_tilde.profile.terms {
                for (c, e) in k.dphi.coefficients.iter().zip(&k.dphi.exponents) {
                    let coef = a.coef * b.coef * c;
                    let base = a.base + b.base;
                    let rate = a.rate + b.rate + e;
                    let v = if rate.norm() < 1e-12 {
                        base.exp() * len
                    } else {
                        ((base + rate * len).exp() - base.exp()) / rate
                    };
                    s += coef * v;
                }
            }
        }
        s
    }

    #[test]
    fn vanishes_at_left_end() {
        for tau in [0.7, 30.0, 1e4] {
            assert!(b_at(tau, 0.0, &td()).unwrap().norm() < 1e-14);
        }
        assert!(b_at(1.0, -0.1, &td()).is_err());
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let t = td();
        for tau in [-300.0, -5.0, 0.05, 1.7, 40.0, 1e3, 1e5] {
            let k = BKernel::new(tau, &t).unwrap();
            let q = integral_b_with(&k, &GaussLegendre::new(64)).unwrap();
            let c = closed_form(&k);
            assert!((q.value - c).norm() <= 1e-10 * q.abs_integral, "tau={tau}: {} vs {}", q.value, c);
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let t = td();
        let dphi = t.phi.differentiate();
        let mut dphi_c = dphi.clone();
        dphi_c.coefficients = dphi.coefficients.map(|c| c.conj());
        dphi_c.exponents = dphi.exponents.map(|c| c.conj());
        for tau in [2.0, 17.5, 900.0] {
            let neg = BKernel::new(-tau, &t).unwrap();
            let pos = BKernel::with_parts(tau, -t.p, t.length, dphi_c.clone()).unwrap();
            for i in 0..=20 {
                let x = t.length * i as f64 / 20.0;
                let a = neg.eval(x);
                let b = pos.eval(x).conj();
                assert!((a - b).norm() < 1e-11 * (1.0 + a.norm()), "tau {tau} x {x}");
            }
            let ia = integral_b_with(&neg, &GaussLegendre::new(64)).unwrap().value;
            let ib = integral_b_with(&pos, &GaussLegendre::new(64)).unwrap().value.conj();
            assert!((ia - ib).norm() < 1e-10 * ia.norm().max(1e-300));
        }
    }

    #[test]
    fn pointwise_size() {
        // pointwise |B| decays like τ^{-2/3}; only the integral gains τ^{-2}
        let t = td();
        let sup = |tau: f64| {
            let k = BKernel::new(tau, &t).unwrap();
            (0..=100).map(|i| k.eval(t.length * i as f64 / 100.0).norm()).fold(0.0, f64::max)
        };
        let (a, b) = (sup(1e4), sup(1e6));
        let slope = (b / a).ln() / 100f64.ln();
        assert!((slope + 2.0 / 3.0).abs() < 0.1, "{slope}");
        assert!(a * 1e4f64.powf(2.0 / 3.0) < 5.0);
    }

    #[test]
    fn approaches_e() {
        let t = td();
        let rows = b_scan(&[1e4, 1e5], &t).unwrap();
        for r in &rows {
            assert!(((r.integral_b * r.tau * r.tau) / t.e - 1.0).norm() < 0.02);
            assert_eq!(r.residual, r.integral_b - t.e / (r.tau * r.tau));
        }
    }

    #[test]
    fn pole_is_regularized() {
        let t = td();
        let rows = b_scan(&[t.p, 0.0, 2.0 * t.p], &t).unwrap();
        assert!(rows.iter().all(|r| r.flagged));
        assert!(rows.iter().all(|r| r.integral_b.norm().is_finite()));
        let near = b_scan(&[t.p + 1e-2, t.p - 1e-2], &t).unwrap();
        let mid = (near[0].integral_b + near[1].integral_b) * 0.5;
        assert!((mid - rows[0].integral_b).norm() < 1e-2 * mid.norm());
    }
}
