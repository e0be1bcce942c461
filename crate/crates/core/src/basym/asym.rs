use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::BasymError;
use crate::modes::TrappingDirection;
use crate::roots::{mu, mu_tilde, solve_cubic, solve_cubic_shifted};
use crate::scalar::{im, re};
use crate::Real;

/// Coefficients of the τ-expansions of `Z₁` and `Z₂`, evaluated from the
/// `μ_j`, `μ̃_j` sums.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefTable<T> {
    pub c11: Complex<T>,
    pub c12: Complex<T>,
    pub c13: Complex<T>,
    pub c14: Complex<T>,
    pub c21: Complex<T>,
    pub c22: Complex<T>,
    pub c23: Complex<T>,
    pub c24: Complex<T>,
}

pub fn coef_table<T: Real>() -> CoefTable<T> {
    let m = |j| mu::<T>(j).expect("index in range");
    let mt = |j| mu_tilde::<T>(j).expect("index in range");
    let one = re(T::one());
    let third = T::lit(2.0) / T::lit(3.0);
    let inv = |z: Complex<T>, k: i32| one / z.powi(k);
    let c13_term = |a: Complex<T>, b: Complex<T>| re(third) / (a * b * (a + b).powi(2));
    let (m1, m2, m3) = (m(1), m(2), m(3));
    let (t1, t2, t3) = (mt(1), mt(2), mt(3));
    CoefTable {
        c11: -inv(m3 + t3, 2) + inv(m3 + t2, 2) + inv(m2 + t3, 2),
        c12: inv(m3 + t3, 3) - inv(m3 + t2, 3) - inv(m2 + t3, 3),
        c13: -c13_term(m3, t3) + c13_term(m3, t2) + c13_term(m2, t3),
        c14: -inv(m3 + t3, 4) + inv(m3 + t2, 4) + inv(m2 + t3, 4),
        c21: inv(m1 + t1, 2) - inv(m1 + t2, 2) - inv(m2 + t1, 2),
        c22: -inv(m1 + t1, 3) + inv(m1 + t2, 3) + inv(m2 + t1, 3),
        c23: c13_term(m1, t1) - c13_term(m1, t2) - c13_term(m2, t1),
        c24: inv(m1 + t1, 4) - inv(m1 + t2, 4) - inv(m2 + t1, 4),
    }
}

impl<T: Real> CoefTable<T> {
    pub fn entries(&self) -> [(&'static str, Complex<T>); 8] {
        [
            ("C11", self.c11),
            ("C12", self.c12),
            ("C13", self.c13),
            ("C14", self.c14),
            ("C21", self.c21),
            ("C22", self.c22),
            ("C23", self.c23),
            ("C24", self.c24),
        ]
    }

    /// The closed values −2/3, 1/√3, 2/9, −2/9 (same for both rows).
    pub fn expected() -> [T; 4] {
        [
            -T::lit(2.0) / T::lit(3.0),
            T::one() / T::lit(3.0).sqrt(),
            T::lit(2.0) / T::lit(9.0),
            -T::lit(2.0) / T::lit(9.0),
        ]
    }

    /// Entries that differ from their closed value by more than `tol`.
    pub fn mismatches(&self, tol: T) -> Vec<(&'static str, Complex<T>, T)> {
        let exp = Self::expected();
        self.entries()
            .into_iter()
            .enumerate()
            .filter_map(|(i, (name, v))| {
                let want = exp[i % 4];
                ((v - re(want)).norm() > tol).then_some((name, v, want))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CancellationReport<T> {
    /// `Σ η_{j+2}³ (η_{j+1} − η_j)`
    pub cubic_sum: Complex<T>,
    /// `Σ (η_{j+1} − η_j) η_{j+2}²`
    pub quadratic_sum: Complex<T>,
    /// `ip · Σ (η_{j+1} − η_j)/η_{j+2}`
    pub ip_ratio: Complex<T>,
    pub cubic_residual: T,
    pub quadratic_residual: T,
}

/// The two cancellation sums for an arbitrary triple.
pub fn cancellation_residuals<T: Real>(eta: &[Complex<T>; 3], p: T) -> CancellationReport<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let d = |j: usize| eta[(j + 1) % 3] - eta[j];
    let e2 = |j: usize| eta[(j + 2) % 3];
    let cubic = (0..3).fold(zero, |s, j| s + e2(j).powu(3) * d(j));
    let quad = (0..3).fold(zero, |s, j| s + d(j) * e2(j) * e2(j));
    let ratio = (0..3).fold(zero, |s, j| s + d(j) / e2(j));
    let ipr = im(p) * ratio;
    CancellationReport {
        cubic_sum: cubic,
        quadratic_sum: quad,
        ip_ratio: ipr,
        cubic_residual: cubic.norm(),
        quadratic_residual: (quad - ipr).norm(),
    }
}

pub fn cancellation_check<T: Real>(td: &TrappingDirection<T>) -> CancellationReport<T> {
    cancellation_residuals(&td.eta, td.p)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZTerms<T> {
    pub tau: T,
    pub z1: Complex<T>,
    pub z2: Complex<T>,
    pub z3: Complex<T>,
    /// `(1/9) p² L Σ(η_{j+1} − η_j)/η_{j+2} · τ^{−4/3}`
    pub z3_leading: Complex<T>,
}

/// The three grouped sums whose large-τ behaviour gives `∫B ≈ E/τ²`.
pub fn z_terms<T: Real>(tau: T, td: &TrappingDirection<T>) -> Result<ZTerms<T>, BasymError> {
    let t = Complex::new(tau, T::zero());
    let l = solve_cubic(t)?.roots;
    let lt = solve_cubic_shifted(t, td.p)?.roots;
    let eta = td.eta;
    let one = re(T::one());
    let zero = Complex::new(T::zero(), T::zero());
    let w = |j: usize| eta[(j + 2) % 3] * (eta[(j + 1) % 3] - eta[j]);
    let e2 = |j: usize| eta[(j + 2) % 3];

    let z1 = (0..3).fold(zero, |s, j| {
        s + w(j)
            * (one / (l[2] + lt[2] + e2(j)) - one / (l[2] + lt[1] + e2(j)) - one / (l[1] + lt[2] + e2(j)))
    });
    let z2 = (0..3).fold(zero, |s, j| {
        s + w(j)
            * (-one / (l[0] + lt[0] + e2(j)) + one / (l[0] + lt[1] + e2(j)) + one / (l[1] + lt[0] + e2(j)))
    });
    let s2 = l[1] + lt[1];
    let z3 = (((s2 * td.length).exp()) - one) * (0..3).fold(zero, |s, j| s + w(j) / (s2 + e2(j)));
    let z3_leading = td.sum_eta_ratio * (td.p * td.p * td.length / T::lit(9.0)) * tau.powf(-T::lit(4.0) / T::lit(3.0));
    Ok(ZTerms { tau, z1, z2, z3, z3_leading })
}
