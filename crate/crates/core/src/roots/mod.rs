//! Roots of `λ³ + λ + iτ = 0`, their large-τ behaviour, and the boundary
//! determinant built from them.

mod spectral;

pub use spectral::{refine_h_zero, spectral_fns, spectral_fns_with_roots, transfer, SpectralFns, Transfer};

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{cbrt_principal, im};
use crate::Real;

/// Largest `|τ|` the cubic solver accepts.
pub const MAX_TAU: f64 = 1e9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootsError {
    #[error("|tau| = {0} exceeds the supported bound {MAX_TAU}")]
    TauOutOfRange(f64),
    #[error("root index {0} is not in 1..=3")]
    BadIndex(usize),
    #[error("boundary determinant Q vanishes at tau = {re} + {im}i")]
    Pole { re: f64, im: f64 },
    #[error("Newton iteration for a zero of H did not converge")]
    NoConvergence,
}

/// The three roots, ordered by real part with ties broken by imaginary part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootTriple<T> {
    pub tau: Complex<T>,
    pub roots: [Complex<T>; 3],
}

impl<T: Real> RootTriple<T> {
    /// Largest of `|λ³ + λ + iτ|` over the three roots.
    pub fn residual(&self) -> T {
        let c = im(T::one()) * self.tau;
        self.roots
            .iter()
            .map(|&l| (l * l * l + l + c).norm())
            .fold(T::zero(), T::max)
    }

    /// Residuals of the three Vieta relations.
    pub fn vieta(&self) -> [T; 3] {
        let [a, b, c] = self.roots;
        let one = Complex::new(T::one(), T::zero());
        [
            (a + b + c).norm(),
            (a * b + a * c + b * c - one).norm(),
            (a * b * c + im(T::one()) * self.tau).norm(),
        ]
    }
}

fn check_tau<T: Real>(tau: Complex<T>) -> Result<(), RootsError> {
    let r = tau.norm().as_f64();
    if !r.is_finite() || r > MAX_TAU {
        return Err(RootsError::TauOutOfRange(r));
    }
    Ok(())
}

/// Roots of `λ³ + λ + iτ = 0` by Cardano's formula with one Newton step each.
pub fn solve_cubic<T: Real>(tau: Complex<T>) -> Result<RootTriple<T>, RootsError> {
    check_tau(tau)?;
    Ok(RootTriple { tau, roots: cubic_roots(im(T::one()) * tau) })
}

/// Roots of `λ̃³ + λ̃ − i(τ̄ − p) = 0`.
pub fn solve_cubic_shifted<T: Real>(tau: Complex<T>, p: T) -> Result<RootTriple<T>, RootsError> {
    let shifted = Complex::new(p, T::zero()) - tau.conj();
    check_tau(shifted)?;
    Ok(RootTriple { tau: shifted, roots: cubic_roots(im(T::one()) * shifted) })
}

/// Roots of `λ³ + λ + c = 0`, sorted.
fn cubic_roots<T: Real>(c: Complex<T>) -> [Complex<T>; 3] {
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let half_c = c / two;
    let disc = (half_c * half_c + T::one() / T::lit(27.0)).sqrt();
    let w1 = -half_c + disc;
    let w2 = -half_c - disc;
    let w = if w1.norm() >= w2.norm() { w1 } else { w2 };
    let u = cbrt_principal(w);
    let rot = Complex::from_polar(T::one(), two * T::PI() / three);

    let mut roots = [u, u * rot, u * rot * rot].map(|uk| {
        let lam = uk - Complex::new(T::one(), T::zero()) / (uk * three);
        newton(lam, c)
    });
    order_roots(&mut roots);
    roots
}

fn newton<T: Real>(lam: Complex<T>, c: Complex<T>) -> Complex<T> {
    let f = lam * lam * lam + lam + c;
    let df = lam * lam * T::lit(3.0) + T::one();
    if df.norm() <= T::epsilon() * (T::one() + lam.norm_sqr()) {
        return lam;
    }
    lam - f / df
}

/// Ascending real part; real parts within `1e-10 (1 + max|λ|)` count as equal
/// and are then ordered by imaginary part.
pub fn order_roots<T: Real>(r: &mut [Complex<T>; 3]) {
    r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal));
    let scale = r.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let tol = T::lit(1e-10) * (T::one() + scale);
    for _ in 0..2 {
        for i in 0..2 {
            if (r[i + 1].re - r[i].re).abs() <= tol && r[i].im > r[i + 1].im {
                r.swap(i, i + 1);
            }
        }
    }
}

/// `μ_j = e^{−iπ/6 − 2ijπ/3}`.
pub fn mu<T: Real>(j: usize) -> Result<Complex<T>, RootsError> {
    if !(1..=3).contains(&j) {
        return Err(RootsError::BadIndex(j));
    }
    let jj = T::of_u64(j as u64);
    let arg = -T::PI() / T::lit(6.0) - T::lit(2.0) * jj * T::PI() / T::lit(3.0);
    Ok(Complex::from_polar(T::one(), arg))
}

/// `μ̃_j = e^{iπ/6 + 2ijπ/3}`.
pub fn mu_tilde<T: Real>(j: usize) -> Result<Complex<T>, RootsError> {
    mu::<T>(j).map(|z| z.conj())
}

/// Two-term large-τ approximation `μ_j τ^{1/3} − τ^{−1/3}/(3μ_j)` of the j-th root.
pub fn asymptotic_root<T: Real>(j: usize, tau: Complex<T>) -> Result<Complex<T>, RootsError> {
    let m = mu::<T>(j)?;
    let t = cbrt_principal(tau);
    Ok(m * t - Complex::new(T::one(), T::zero()) / (t * m * T::lit(3.0)))
}


#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn tau_zero() {
        let r = solve_cubic(c(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(r.roots[0].im, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.roots[1].norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.roots[2].im, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn tau_thousand() {
        let r = solve_cubic(c(1e3, 0.0)).unwrap();
        let l3 = r.roots[2];
        assert_abs_diff_eq!(l3.re, 8.6313, epsilon = 1e-4);
        assert_abs_diff_eq!(l3.im, -5.0167, epsilon = 1e-4);
        let a = asymptotic_root(3, c(1e3, 0.0)).unwrap();
        assert!((a - l3).norm() < 1e-2);
        let a2 = asymptotic_root(2, c(1e3, 0.0)).unwrap();
        assert_abs_diff_eq!(a2.im, 10.0 + 1.0 / 30.0, epsilon = 1e-12);
        assert!((a2 - r.roots[1]).norm() < 1e-5);
    }

    #[test]
    fn large_tau() {
        let r = solve_cubic(c(1e8, 0.0)).unwrap();
        assert!(r.vieta().iter().all(|&v| v < 1e-4));
        assert!(solve_cubic(c(2e9, 0.0)).is_err());
        let r = solve_cubic(c(1e9, 0.0)).unwrap();
        for j in 1..=3 {
            let a = asymptotic_root(j, c(1e9, 0.0)).unwrap();
            assert!((a - r.roots[j - 1]).norm() / a.norm() < 1e-6);
        }
    }

    #[test]
    fn asymptotic_error_within_bound() {
        for tau in [1e3, 1e4, 1e5, 1e6] {
            let r = solve_cubic(c(tau, 0.0)).unwrap();
            for j in 1..=3 {
                let a = asymptotic_root(j, c(tau, 0.0)).unwrap();
                assert!((a - r.roots[j - 1]).norm() <= tau.powf(-2.0 / 3.0));
            }
        }
    }

    #[test]
    fn shifted() {
        let p = 0.3240;
        let r = solve_cubic_shifted(c(p, 0.0), p).unwrap();
        assert_abs_diff_eq!(r.roots[0].im, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.roots[2].im, 1.0, epsilon = 1e-14);

        let a = solve_cubic(c(1e3, 0.0)).unwrap();
        let b = solve_cubic_shifted(c(1e3 + p, 0.0), p).unwrap();
        let mut conj = a.roots.map(|z| z.conj());
        order_roots(&mut conj);
        for j in 0..3 {
            assert!((conj[j] - b.roots[j]).norm() < 1e-10);
        }
    }

    #[test]
    fn mu_values() {
        let m2: Complex<f64> = mu(2).unwrap();
        assert_abs_diff_eq!(m2.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m2.im, 1.0, epsilon = 1e-15);
        let s = mu::<f64>(3).unwrap() + mu_tilde::<f64>(3).unwrap();
        assert_abs_diff_eq!(s.re, 3f64.sqrt(), epsilon = 1e-15);
        for j in 1..=3 {
            let m3 = mu::<f64>(j).unwrap().powu(3);
            assert!((m3 - c(0.0, -1.0)).norm() < 1e-14);
        }
        assert_eq!(mu::<f64>(0), Err(RootsError::BadIndex(0)));
        assert!(mu_tilde::<f64>(4).is_err());
    }

    #[test]
    fn real_tau_small_gives_imaginary_roots() {
        for tau in [0.0, 0.1, -0.2, 0.38] {
            let r = solve_cubic(c(tau, 0.0)).unwrap();
            for z in r.roots {
                assert!(z.re.abs() < 1e-12);
            }
            assert!(r.roots[0].im <= r.roots[1].im && r.roots[1].im <= r.roots[2].im);
        }
    }

    #[test]
    fn paths_are_continuous() {
        let mut prev = solve_cubic(c(1.0, 0.0)).unwrap().roots;
        let mut tau = 1.0;
        while tau < 100.0 {
            tau += 0.01;
            let cur = solve_cubic(c(tau, 0.0)).unwrap().roots;
            for j in 0..3 {
                assert!((cur[j] - prev[j]).norm() < 0.1, "jump at tau={tau}, j={j}");
            }
            prev = cur;
        }
    }

    #[test]
    fn f32_works() {
        let r = solve_cubic(Complex::new(10.0f32, 0.0)).unwrap();
        assert!(r.residual() < 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn residual_and_vieta(lg in -3.0f64..8.0, arg in 0.0f64..std::f64::consts::TAU) {
            let tau = Complex::from_polar(10f64.powf(lg), arg);
            let r = solve_cubic(tau).unwrap();
            let scale = 1.0 + tau.norm();
            prop_assert!(r.residual() < 1e-12 * scale, "residual {}", r.residual());
            for v in r.vieta() {
                prop_assert!(v < 1e-11 * scale);
            }
            prop_assert!(r.roots[0].re <= r.roots[1].re + 1e-9 * scale);
            prop_assert!(r.roots[1].re <= r.roots[2].re + 1e-9 * scale);
        }
    }
}
