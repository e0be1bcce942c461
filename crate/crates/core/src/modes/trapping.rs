use num_complex::Complex;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{check_pair, eigenvalue, pair_length, ModeError, ModeKind, ModeSpec};
use crate::arith::PairClass;
use crate::scalar::im;
use crate::Real;

fn eta_multipliers(k: u64, l: u64) -> [i64; 3] {
    let (k, l) = (k as i64, l as i64);
    [-(2 * k + l), k - l, k + 2 * l]
}

/// `η₁ = −2πi(2k+l)/(3L)`, `η₂ = η₁ + 2πik/L`, `η₃ = η₂ + 2πil/L`. They solve
/// `η³ + η − ip = 0` with `p = λ(k, l)`.
pub fn eta_roots<T: Real>(k: u64, l: u64) -> Result<[Complex<T>; 3], ModeError> {
    check_pair(k, l)?;
    let len = pair_length::<T>(k, l);
    let unit = T::lit(2.0) * T::PI() / (T::lit(3.0) * len);
    Ok(eta_multipliers(k, l).map(|m| im(unit * T::lit(m as f64))))
}

/// `Σ (η_{j+1} − η_j)/η_{j+2}` as an exact rational.
pub fn eta_ratio_exact(k: u64, l: u64) -> Result<Ratio<i64>, ModeError> {
    check_pair(k, l)?;
    if k == l {
        return Err(ModeError::Degenerate { k, l });
    }
    let m = eta_multipliers(k, l);
    Ok((0..3)
        .map(|j| Ratio::new(m[(j + 1) % 3] - m[j], m[(j + 2) % 3]))
        .sum())
}

/// `φ(x) = Σ_j (η_{j+1} − η_j) e^{η_{j+2} x}`.
pub fn phi_from_eta<T: Real>(k: u64, l: u64) -> Result<ModeSpec<T>, ModeError> {
    let eta = eta_roots::<T>(k, l)?;
    if k == l {
        return Err(ModeError::Degenerate { k, l });
    }
    let coefficients = [0usize, 1, 2].map(|j| eta[(j + 2) % 3] - eta[(j + 1) % 3]);
    Ok(ModeSpec {
        kind: ModeKind::EtaCombination,
        length: pair_length(k, l),
        exponents: eta,
        coefficients,
        lambda: -eigenvalue::<T>(k, l),
    })
}

/// The direction `Ψ(t,x) = Re E · Re(φ e^{−ipt}) + Im E · Im(φ e^{−ipt})` in which
/// the quadratic part of the control-to-state map is confined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrappingDirection<T> {
    pub pair: (u64, u64),
    #[serde(rename = "L")]
    pub length: T,
    pub p: T,
    pub eta: [Complex<T>; 3],
    pub phi: ModeSpec<T>,
    /// From the η-ratio sum.
    #[serde(rename = "E")]
    pub e: Complex<T>,
    /// `−8π³ p kl(k+l) / (9L²)`.
    pub e_closed: T,
    pub sum_eta_ratio: Complex<T>,
    /// Numerator and denominator of the exact ratio sum.
    pub sum_eta_ratio_exact: [i64; 2],
}

pub fn trapping_direction<T: Real>(k: u64, l: u64) -> Result<TrappingDirection<T>, ModeError> {
    check_pair(k, l)?;
    let class = PairClass::of(k, l);
    if class != PairClass::S2 {
        return Err(ModeError::NotS2 { k, l, class });
    }
    let eta = eta_roots::<T>(k, l)?;
    let phi = phi_from_eta::<T>(k, l)?;
    let len = pair_length::<T>(k, l);
    let p = eigenvalue::<T>(k, l);

    let ratio = (0..3).fold(Complex::new(T::zero(), T::zero()), |s, j| {
        s + (eta[(j + 1) % 3] - eta[j]) / eta[(j + 2) % 3]
    });
    let e = ratio * (p * p * len / T::lit(9.0));
    let klk = T::of_u64(k * l * (k + l));
    let e_closed = -T::lit(8.0) * T::PI().powi(3) * p * klk / (T::lit(9.0) * len * len);
    let exact = eta_ratio_exact(k, l)?;

    Ok(TrappingDirection {
        pair: (k, l),
        length: len,
        p,
        eta,
        phi,
        e,
        e_closed,
        sum_eta_ratio: ratio,
        sum_eta_ratio_exact: [*exact.numer(), *exact.denom()],
    })
}

impl<T: Real> TrappingDirection<T> {
    pub fn period(&self) -> T {
        T::lit(2.0) * T::PI() / self.p.abs()
    }

    pub fn ratio_exact(&self) -> Ratio<i64> {
        Ratio::new(self.sum_eta_ratio_exact[0], self.sum_eta_ratio_exact[1])
    }

    fn carrier(&self, t: T) -> Complex<T> {
        self.e.conj() * Complex::from_polar(T::one(), -self.p * t)
    }

    pub fn psi(&self, t: T, x: T) -> T {
        self.psi_dx(0, t, x)
    }

    /// `∂ₓⁿ Ψ(t, x)`.
    pub fn psi_dx(&self, order: u32, t: T, x: T) -> T {
        (self.carrier(t) * self.phi.derivative(order, x)).re
    }

    pub fn psi_dt(&self, t: T, x: T) -> T {
        (self.carrier(t) * im(-self.p) * self.phi.eval(x)).re
    }

    /// `∂ₜΨ + ∂ₓ³Ψ + ∂ₓΨ`.
    pub fn pde_residual(&self, t: T, x: T) -> T {
        self.psi_dt(t, x) + self.psi_dx(3, t, x) + self.psi_dx(1, t, x)
    }

    /// `‖Ψ(t, ·)‖_{L²}` by the trapezoid rule on `n` intervals.
    pub fn l2_norm(&self, t: T, n: usize) -> T {
        let h = self.length / T::of_u64(n as u64);
        let mut s = T::zero();
        for i in 0..=n {
            let v = self.psi(t, h * T::of_u64(i as u64));
            let w = if i == 0 || i == n { T::lit(0.5) } else { T::one() };
            s += w * v * v;
        }
        (s * h).sqrt()
    }
}
