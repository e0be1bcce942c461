use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{solve_cubic, RootTriple, RootsError};
use crate::expsum::{ExpSum, Scaled};
use crate::Real;

/// Relative size of `|Q|` below which τ is treated as a pole of the transfer function.
pub const POLE_TOL: f64 = 1e-10;
/// `|Ξ|` below which the roots are considered to collide. Near a double root
/// the computed roots are only good to about √ε, so Ξ rarely gets smaller.
pub const COLLISION_TOL: f64 = 1e-6;

/// Boundary determinant `Q`, the Neumann numerator `P`, the Vandermonde factor
/// `Ξ` and the entire functions `G = P/Ξ`, `H = Q/Ξ`. `Q`, `P`, `G`, `H` are kept
/// scaled since they grow like `e^{cτ^{1/3}L}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralFns<T> {
    pub tau: Complex<T>,
    pub q: Scaled<T>,
    pub p: Scaled<T>,
    pub xi: Complex<T>,
    pub g: Scaled<T>,
    pub h: Scaled<T>,
    /// Set when the roots nearly collide and the values come from averaging
    /// over two nearby τ.
    pub near_collision: bool,
}

impl<T: Real> SpectralFns<T> {
    pub fn q(&self) -> Complex<T> {
        self.q.value()
    }
    pub fn p(&self) -> Complex<T> {
        self.p.value()
    }
    pub fn g(&self) -> Complex<T> {
        self.g.value()
    }
    pub fn h(&self) -> Complex<T> {
        self.h.value()
    }
}

fn q_terms<T: Real>(l: &[Complex<T>; 3], len: T) -> Vec<(Complex<T>, Complex<T>)> {
    (0..3)
        .map(|j| (l[(j + 1) % 3] - l[j], (l[j] + l[(j + 1) % 3]) * len))
        .collect()
}

fn p_terms<T: Real>(l: &[Complex<T>; 3], len: T) -> Vec<(Complex<T>, Complex<T>)> {
    let mut t = Vec::with_capacity(6);
    for j in 0..3 {
        t.push((l[j], l[(j + 2) % 3] * len));
        t.push((-l[j], l[(j + 1) % 3] * len));
    }
    t
}

fn xi<T: Real>(l: &[Complex<T>; 3]) -> Complex<T> {
    -(l[1] - l[0]) * (l[2] - l[1]) * (l[0] - l[2])
}

/// Spectral functions from a given labelling of the roots.
pub fn spectral_fns_with_roots<T: Real>(tau: Complex<T>, roots: &[Complex<T>; 3], len: T) -> SpectralFns<T> {
    let (q, _) = Scaled::sum(&q_terms(roots, len));
    let (p, _) = Scaled::sum(&p_terms(roots, len));
    let x = xi(roots);
    SpectralFns { tau, q, p, xi: x, g: p.div(x), h: q.div(x), near_collision: false }
}

pub fn spectral_fns<T: Real>(tau: Complex<T>, len: T) -> Result<SpectralFns<T>, RootsError> {
    let r = solve_cubic(tau)?;
    let s = spectral_fns_with_roots(tau, &r.roots, len);
    if s.xi.norm() >= T::lit(COLLISION_TOL) {
        return Ok(s);
    }
    // G and H are entire, so the symmetric average is accurate to O(δ²)
    let d = Complex::new(T::lit(1e-6) * (T::one() + tau.norm()), T::zero());
    let a = spectral_fns_with_roots(tau + d, &solve_cubic(tau + d)?.roots, len);
    let b = spectral_fns_with_roots(tau - d, &solve_cubic(tau - d)?.roots, len);
    let half = T::lit(0.5);
    let avg = |x: Scaled<T>, y: Scaled<T>| {
        let s = x.log_scale.max(y.log_scale);
        Scaled {
            mantissa: (x.mantissa * (x.log_scale - s).exp() + y.mantissa * (y.log_scale - s).exp()) * half,
            log_scale: s,
        }
    };
    Ok(SpectralFns {
        tau,
        q: s.q,
        p: s.p,
        xi: s.xi,
        g: avg(a.g, b.g),
        h: avg(a.h, b.h),
        near_collision: true,
    })
}

/// Newton iteration in the complex τ-plane for a zero of `H`, started at `tau0`.
pub fn refine_h_zero<T: Real>(tau0: Complex<T>, len: T, tol: T, max_iter: usize) -> Result<Complex<T>, RootsError> {
    let mut tau = tau0;
    let h = T::lit(1e-6);
    for _ in 0..max_iter {
        let f = spectral_fns(tau, len)?.h();
        let dp = spectral_fns(tau + h, len)?.h();
        let dm = spectral_fns(tau - h, len)?.h();
        let df = (dp - dm) / (h + h);
        if df.norm() == T::zero() {
            return Err(RootsError::NoConvergence);
        }
        let step = f / df;
        tau -= step;
        if step.norm() < tol {
            return Ok(tau);
        }
    }
    Err(RootsError::NoConvergence)
}

/// The frequency-domain response `ŷ(τ, x) = û F(τ, x)` of the linear system to a
/// boundary control, with `F(τ, 0) = F(τ, L) = 0` and `∂ₓF(τ, L) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transfer<T> {
    pub tau: Complex<T>,
    pub length: T,
    pub roots: [Complex<T>; 3],
    pub profile: ExpSum<T>,
}

impl<T: Real> Transfer<T> {
    pub fn new(tau: Complex<T>, len: T) -> Result<Self, RootsError> {
        Self::from_roots(&solve_cubic(tau)?, len)
    }

    /// Builds `F` from any root triple (the shifted roots included).
    pub fn from_roots(r: &RootTriple<T>, len: T) -> Result<Self, RootsError> {
        let l = &r.roots;
        let (q, mag) = Scaled::sum(&q_terms(l, len));
        if !(q.mantissa.norm() > T::lit(POLE_TOL) * mag) {
            return Err(RootsError::Pole { re: r.tau.re.as_f64(), im: r.tau.im.as_f64() });
        }
        let inv = Complex::new(T::one(), T::zero()) / q.mantissa;
        let shift = Complex::new(q.log_scale, T::zero());
        let mut profile = ExpSum::new();
        for m in 0..3 {
            profile.push(inv, l[(m + 2) % 3] * len - shift, l[m]);
            profile.push(-inv, l[(m + 1) % 3] * len - shift, l[m]);
        }
        Ok(Self { tau: r.tau, length: len, roots: *l, profile })
    }

    pub fn eval(&self, x: T) -> Complex<T> {
        self.profile.eval(x)
    }

    pub fn derivative(&self, order: u32, x: T) -> Complex<T> {
        self.profile.derivative(order, x)
    }

    /// `∂ₓF(τ, 0) = P/Q`.
    pub fn neumann_at_zero(&self) -> Complex<T> {
        self.derivative(1, T::zero())
    }
}

/// `ŷ(τ, x)` for the control transform `u_hat`.
pub fn transfer<T: Real>(tau: Complex<T>, x: T, u_hat: Complex<T>, len: T) -> Result<Complex<T>, RootsError> {
    Ok(Transfer::new(tau, len)?.eval(x) * u_hat)
}
