use num_complex::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::kernel::integral_b_regularized;
use super::BasymError;
use crate::modes::TrappingDirection;
use crate::quad::GaussLegendre;
use crate::signal::ControlSignal;
use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QmFrequencyOptions<T> {
    /// Frequency step is `|p| / oversample`, so `τ − p` lands on the grid.
    pub oversample: usize,
    /// Grid points whose weight `|û(τ)||û(τ−p)|/(1+τ²)` falls below this
    /// fraction of the largest weight are skipped.
    pub cutoff: T,
}

impl<T: Real> Default for QmFrequencyOptions<T> {
    fn default() -> Self {
        Self { oversample: 64, cutoff: T::lit(1e-14) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QmFrequency<T> {
    pub value: Complex<T>,
    pub dtau: T,
    pub tau_points: usize,
    /// Grid points that hit a removable singularity of `∫B`.
    pub flagged: usize,
}

/// Unitary transform `û(2πk/(N h)) = h/√(2π) Σ u(nh) e^{−2πikn/N}`.
fn transform<T: Real>(samples: Vec<T>, h: T) -> Vec<Complex<T>> {
    let mut buf: Vec<Complex<T>> = samples.into_iter().map(|v| Complex::new(v, T::zero())).collect();
    let fft = FftPlanner::new().plan_fft_forward(buf.len());
    fft.process(&mut buf);
    let scale = h / (T::lit(2.0) * T::PI()).sqrt();
    buf.iter_mut().for_each(|z| *z *= scale);
    buf
}

/// `Q_M = ∫ û(τ) conj(û(τ − p)) ∫₀ᴸ B(τ, x) dx dτ` by the trapezoid rule on a
/// grid commensurate with `p`.
pub fn qm_frequency<T: Real>(
    u: &ControlSignal<T>,
    td: &TrappingDirection<T>,
    opts: &QmFrequencyOptions<T>,
) -> Result<QmFrequency<T>, BasymError> {
    if opts.oversample < 16 {
        return Err(BasymError::Resolution(format!(
            "oversample {} leaves fewer than 16 grid steps across p",
            opts.oversample
        )));
    }
    let zero = Complex::new(T::zero(), T::zero());
    if u.is_zero() {
        return Ok(QmFrequency { value: zero, dtau: T::zero(), tau_points: 0, flagged: 0 });
    }
    let two_pi = T::lit(2.0) * T::PI();
    let ap = td.p.abs();
    let mut m = opts.oversample;
    while two_pi * T::of_u64(m as u64) / ap < T::lit(2.0) * u.duration() {
        m *= 2;
    }
    let dtau = ap / T::of_u64(m as u64);
    let window = two_pi / dtau;
    let mut n = (window / u.dt).ceil().to_usize().unwrap_or(0).max(2 * m + 2);
    n += n % 2;
    let h = window / T::of_u64(n as u64);
    let uh = transform((0..n).map(|i| u.eval(h * T::of_u64(i as u64))).collect(), h);

    let half = (n / 2) as i64;
    let shift = if td.p > T::zero() { m as i64 } else { -(m as i64) };
    let at = |k: i64| uh[k.rem_euclid(n as i64) as usize];
    let lo = -half + 1 + shift.max(0);
    let hi = half - 1 + shift.min(0);
    let weight = |k: i64| {
        let tau = dtau * T::lit(k as f64);
        at(k).norm() * at(k - shift).norm() / (T::one() + tau * tau)
    };
    let wmax = (lo..=hi).map(weight).fold(T::zero(), T::max);
    let keep: Vec<i64> = (lo..=hi).filter(|&k| weight(k) > opts.cutoff * wmax).collect();
    let (kmin, kmax) = match (keep.first(), keep.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Ok(QmFrequency { value: zero, dtau, tau_points: 0, flagged: 0 }),
    };
    if kmin == lo || kmax == hi {
        return Err(BasymError::Resolution("control spectrum not resolved by the sampling step".into()));
    }

    let rule = GaussLegendre::new(64);
    let parts: Vec<(Complex<T>, bool)> = (kmin..=kmax)
        .into_par_iter()
        .map(|k| {
            let tau = dtau * T::lit(k as f64);
            let (ib, flag) = integral_b_regularized(tau, td, &rule)?;
            Ok((at(k) * at(k - shift).conj() * ib, flag))
        })
        .collect::<Result<_, BasymError>>()?;
    let value = parts.iter().fold(zero, |s, (v, _)| s + v) * dtau;
    Ok(QmFrequency {
        value,
        dtau,
        tau_points: parts.len(),
        flagged: parts.iter().filter(|(_, f)| *f).count(),
    })
}

/// `(∫|û(τ)|² (1+τ²)^s dτ)^{1/2}` for `s ≤ 0`, with `u` extended by zero.
pub fn sobolev_norm<T: Real>(u: &ControlSignal<T>, s: T) -> Result<T, BasymError> {
    if s > T::zero() {
        return Err(BasymError::Resolution(format!("order s = {s} must be non-positive")));
    }
    if u.is_zero() {
        return Ok(T::zero());
    }
    let n = (16 * u.values.len()).next_power_of_two();
    let mut samples = u.values.clone();
    samples.resize(n, T::zero());
    let uh = transform(samples, u.dt);
    let dtau = T::lit(2.0) * T::PI() / (T::of_u64(n as u64) * u.dt);
    let mut acc = T::zero();
    for (i, z) in uh.iter().enumerate() {
        let k = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
        let tau = dtau * T::lit(k);
        acc += z.norm_sqr() * (T::one() + tau * tau).powf(s);
    }
    Ok((acc * dtau).sqrt())
}
