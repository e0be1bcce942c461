use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scheme::{flux_at_zero, Stepper};
use super::{Grid1D, Scheme, SimConfig, SimError, Trajectory};
use crate::basym::sobolev_norm;
use crate::fit::loglog_slope;
use crate::modes::{type1_mode, unreachable_basis, Part, TrappingDirection};
use crate::{ControlSignal, Real};

/// Nodal samples of `φ` and `φ'` for fast evaluation of `Ψ` on a grid.
struct PsiGrid<T> {
    conj_e: Complex<T>,
    p: T,
    phi: Vec<Complex<T>>,
    dphi: Vec<Complex<T>>,
}

impl<T: Real> PsiGrid<T> {
    fn new(td: &TrappingDirection<T>, grid: &Grid1D<T>) -> Self {
        let xs = grid.nodes();
        Self {
            conj_e: td.e.conj(),
            p: td.p,
            phi: xs.iter().map(|&x| td.phi.eval(x)).collect(),
            dphi: xs.iter().map(|&x| td.phi.derivative(1, x)).collect(),
        }
    }

    fn carrier(&self, t: T) -> Complex<T> {
        self.conj_e * Complex::from_polar(T::one(), -self.p * t)
    }

    fn psi(&self, t: T) -> Vec<T> {
        let c = self.carrier(t);
        self.phi.iter().map(|f| (c * f).re).collect()
    }

    fn psi_x(&self, t: T) -> Vec<T> {
        let c = self.carrier(t);
        self.dphi.iter().map(|f| (c * f).re).collect()
    }
}

fn check_grid<T: Real>(grid: &Grid1D<T>, length: T) -> Result<(), SimError> {
    if (grid.length - length).abs() > T::lit(1e-12) * length {
        return Err(SimError::InvalidGrid(format!("grid length {} differs from L = {}", grid.length, length)));
    }
    Ok(())
}

fn diff_norm<T: Real>(grid: &Grid1D<T>, a: &[T], b: &[T], scale: T) -> T {
    let mut s = T::zero();
    for i in 0..grid.n {
        let d = a[i] - scale * b[i];
        s += grid.weight(i) * d * d;
    }
    s.sqrt()
}

/// `max_t ‖y(t) − Ψ(t)‖/‖Ψ(t)‖` for the linear run from `Ψ(0, ·)`.
pub fn manufactured_error<T: Real>(td: &TrappingDirection<T>, n: usize, dt: T, t_end: T) -> Result<T, SimError> {
    let grid = Grid1D::new(td.length, n)?;
    let pg = PsiGrid::new(td, &grid);
    let cfg = SimConfig { dt, t_end, ..SimConfig::default() };
    let u = ControlSignal::zero(dt, 0);
    let mut st = Stepper::new(&grid, &pg.psi(T::zero()), &u, &cfg)?;
    let mut worst = T::zero();
    for _ in 0..cfg.steps() {
        st.advance()?;
        let psi = pg.psi(st.time());
        worst = worst.max(diff_norm(&grid, st.state(), &psi, T::one()) / grid.l2(&psi));
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissipationReport<T> {
    /// `max |ΔE/dt + ½⟨(∂ₓy(0))²⟩|` over steps with `E = ½‖y‖²`.
    pub max_residual: T,
    pub max_rate: T,
    pub relative: T,
}

/// Energy balance of the uncontrolled linear flow.
pub fn dissipation_check<T: Real>(grid: &Grid1D<T>, y0: &[T], cfg: &SimConfig<T>) -> Result<DissipationReport<T>, SimError> {
    let u = ControlSignal::zero(cfg.dt, 0);
    let mut st = Stepper::new(grid, y0, &u, &cfg.with_scheme(Scheme::Linear))?;
    let half = T::lit(0.5);
    let mut e0 = half * grid.dot(st.state(), st.state());
    let mut f0 = flux_at_zero(st.state(), grid.h).powi(2);
    let (mut res, mut rate) = (T::zero(), T::zero());
    for _ in 0..cfg.steps() {
        st.advance()?;
        let e1 = half * grid.dot(st.state(), st.state());
        let f1 = flux_at_zero(st.state(), grid.h).powi(2);
        let de = (e1 - e0) / cfg.dt;
        res = res.max((de + half * half * (f0 + f1)).abs());
        rate = rate.max(de.abs());
        e0 = e1;
        f0 = f1;
    }
    let relative = if rate > T::zero() { res / rate } else { T::zero() };
    Ok(DissipationReport { max_residual: res, max_rate: rate, relative })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapRow<T> {
    pub eps: T,
    /// `max_t ‖y(t) − εΨ(t)‖ / ε²`
    pub r: T,
    /// `max_t ‖y(t) − ε y_lin(t)‖` against the discrete linear run.
    pub gap: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapTable<T> {
    pub pair: (u64, u64),
    #[serde(rename = "T")]
    pub t_end: T,
    pub rows: Vec<TrapRow<T>>,
    /// `r(ε_{j+1}) / r(ε_j)`
    pub ratios: Vec<T>,
    pub gap_slope: Option<T>,
    pub passed: bool,
}

/// Runs the scheme in `cfg` from `εΨ(0, ·)` with `u = 0` for each ε.
pub fn trapping_experiment<T: Real>(
    td: &TrappingDirection<T>,
    eps_list: &[T],
    t_end: T,
    grid: &Grid1D<T>,
    cfg: &SimConfig<T>,
) -> Result<TrapTable<T>, SimError> {
    check_grid(grid, td.length)?;
    if eps_list.is_empty() {
        return Err(SimError::InvalidData("empty ε list".into()));
    }
    if let Some(e) = eps_list.iter().find(|e| !(**e > T::zero()) || !e.is_finite()) {
        return Err(SimError::InvalidData(format!("ε = {e} must be positive")));
    }
    if !(t_end > T::zero()) {
        return Err(SimError::InvalidConfig(format!("T = {t_end} must be positive")));
    }
    let cfg = cfg.with_t_end(t_end);
    cfg.validate()?;
    let pg = PsiGrid::new(td, grid);
    let psi0 = pg.psi(T::zero());
    let u = ControlSignal::zero(cfg.dt, 0);
    let rows: Result<Vec<_>, SimError> = eps_list
        .par_iter()
        .map(|&eps| {
            let y0: Vec<T> = psi0.iter().map(|v| eps * *v).collect();
            let mut st = Stepper::new(grid, &y0, &u, &cfg)?;
            let mut lin = Stepper::new(grid, &psi0, &u, &cfg.with_scheme(Scheme::Linear))?;
            let (mut r, mut gap) = (T::zero(), T::zero());
            for _ in 0..cfg.steps() {
                st.advance()?;
                lin.advance()?;
                let psi = pg.psi(st.time());
                r = r.max(diff_norm(grid, st.state(), &psi, eps));
                gap = gap.max(diff_norm(grid, st.state(), lin.state(), eps));
            }
            Ok(TrapRow { eps, r: r / (eps * eps), gap })
        })
        .collect();
    let rows = rows?;
    let ratios: Vec<T> = rows.windows(2).map(|w| w[1].r / w[0].r).collect();
    let gap_slope = if rows.len() >= 2 && rows.iter().all(|r| r.gap > T::zero()) {
        let xs: Vec<T> = rows.iter().map(|r| r.eps).collect();
        let ys: Vec<T> = rows.iter().map(|r| r.gap).collect();
        Some(loglog_slope(&xs, &ys))
    } else {
        None
    };
    let passed = ratios.iter().all(|q| *q >= T::lit(0.5) && *q <= T::lit(2.0));
    Ok(TrapTable { pair: td.pair, t_end, rows, ratios, gap_slope, passed })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QmTime<T> {
    pub value: Complex<T>,
    /// Bound on the neglected `∫_{T_end}^∞` part.
    pub tail: T,
    pub t_end: T,
    /// `‖y(T_end)‖ / max_t ‖y(t)‖`
    pub decay_ratio: T,
    pub steps: usize,
}

const DECAY_RATIO: f64 = 1e-3;
const TAIL_FRACTION: f64 = 5e-3;

/// `sup|φ'| ∫_t^∞ ‖y‖²` under exponential decay fitted between two instants.
fn tail_bound<T: Real>(sup_dphi: T, e_then: T, t_then: T, e_now: T, t_now: T) -> T {
    if e_now == T::zero() {
        return T::zero();
    }
    let rate = (e_then / e_now).ln() / (t_now - t_then);
    if rate > T::zero() {
        sup_dphi * e_now / rate
    } else {
        T::infinity()
    }
}

/// Running `∫∫ y² e^{−ipt} φ'(x)`: trapezoid in `t`, nodal trapezoid in `x`.
struct QmAccumulator<T> {
    wdphi: Vec<Complex<T>>,
    p: T,
    sum: Complex<T>,
    last: Option<(T, Complex<T>)>,
}

impl<T: Real> QmAccumulator<T> {
    fn new(td: &TrappingDirection<T>, grid: &Grid1D<T>) -> Self {
        let wdphi = (0..grid.n).map(|i| td.phi.derivative(1, grid.x(i)) * grid.weight(i)).collect();
        Self { wdphi, p: td.p, sum: Complex::new(T::zero(), T::zero()), last: None }
    }

    fn push(&mut self, t: T, y: &[T]) {
        let mut s = Complex::new(T::zero(), T::zero());
        for (w, v) in self.wdphi.iter().zip(y) {
            s += w * (*v * *v);
        }
        let g = s * Complex::from_polar(T::one(), -self.p * t);
        if let Some((t0, g0)) = self.last {
            self.sum += (g0 + g) * ((t - t0) * T::lit(0.5));
        }
        self.last = Some((t, g));
    }
}

fn sup_dphi<T: Real>(td: &TrappingDirection<T>) -> T {
    td.phi.differentiate().sup_norm(4001)
}

/// `Q_M` from a stored trajectory.
pub fn qm_time_domain<T: Real>(traj: &Trajectory<T>, td: &TrappingDirection<T>) -> Result<QmTime<T>, SimError> {
    check_grid(&traj.grid, td.length)?;
    if traj.is_empty() {
        return Err(SimError::InvalidData("empty trajectory".into()));
    }
    let norms = traj.l2_norms();
    let max = norms.iter().fold(T::zero(), |m, v| m.max(*v));
    let last = traj.len() - 1;
    let t_end = traj.times[last];
    if max == T::zero() {
        let zero = Complex::new(T::zero(), T::zero());
        return Ok(QmTime { value: zero, tail: T::zero(), t_end, decay_ratio: T::zero(), steps: last });
    }
    let mut acc = QmAccumulator::new(td, &traj.grid);
    for (t, y) in traj.times.iter().zip(&traj.states) {
        acc.push(*t, y);
    }
    let decay_ratio = norms[last] / max;
    // fit the decay over the last quarter of the run
    let k = traj.times.partition_point(|t| *t < t_end - (t_end - traj.times[0]) * T::lit(0.25)).min(last.saturating_sub(1));
    let tail = if last > 0 {
        tail_bound(sup_dphi(td), norms[k].powi(2), traj.times[k], norms[last].powi(2), t_end)
    } else {
        T::infinity()
    };
    if !(decay_ratio < T::lit(DECAY_RATIO)) {
        return Err(SimError::TailTooLarge { ratio: decay_ratio.as_f64(), tail: tail.as_f64() });
    }
    Ok(QmTime { value: acc.sum, tail, t_end, decay_ratio, steps: last })
}

/// Linear run from rest, integrated on the fly until the state has decayed
/// and the tail bound is below 0.5% of the accumulated value. `cfg.t_end` is
/// the horizon cap.
pub fn qm_time_experiment<T: Real>(
    u: &ControlSignal<T>,
    td: &TrappingDirection<T>,
    grid: &Grid1D<T>,
    cfg: &SimConfig<T>,
) -> Result<QmTime<T>, SimError> {
    check_grid(grid, td.length)?;
    let cfg = cfg.with_scheme(Scheme::Linear);
    let mut st = Stepper::new(grid, &vec![T::zero(); grid.n], u, &cfg)?;
    let mut acc = QmAccumulator::new(td, grid);
    acc.push(T::zero(), st.state());
    let sd = sup_dphi(td);
    let window = T::lit(20.0);
    let every = ((window / T::lit(4.0)) / cfg.dt).round().to_usize().unwrap_or(1).max(1);
    let mut marks: Vec<(T, T)> = Vec::new();
    let mut max = T::zero();
    let mut tail = T::infinity();
    let mut ratio = T::one();
    for step in 1..=cfg.steps() {
        st.advance()?;
        let t = st.time();
        acc.push(t, st.state());
        let e = st.grid().dot(st.state(), st.state());
        max = max.max(e.sqrt());
        if step % every != 0 || t <= u.duration() {
            continue;
        }
        marks.push((t, e));
        if max == T::zero() {
            let zero = Complex::new(T::zero(), T::zero());
            return Ok(QmTime { value: zero, tail: T::zero(), t_end: t, decay_ratio: T::zero(), steps: step });
        }
        if marks.len() > 4 {
            let (t0, e0) = marks[marks.len() - 5];
            tail = tail_bound(sd, e0, t0, e, t);
            ratio = e.sqrt() / max;
            if ratio < T::lit(DECAY_RATIO) && tail < T::lit(TAIL_FRACTION) * acc.sum.norm() {
                return Ok(QmTime { value: acc.sum, tail, t_end: t, decay_ratio: ratio, steps: step });
            }
        }
    }
    Err(SimError::TailTooLarge { ratio: ratio.as_f64(), tail: tail.as_f64() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MInvariance<T> {
    pub n: u64,
    pub basis: Vec<((u64, u64), Part)>,
    /// `max_t |⟨y(t), m⟩|` per basis function, each `m` scaled to unit norm.
    pub max_abs: Vec<T>,
    pub max: T,
}

/// Linear run from rest; projections of the state on the unreachable subspace,
/// sampled every `record_every` steps.
pub fn m_invariance_check<T: Real>(
    u: &ControlSignal<T>,
    td: &TrappingDirection<T>,
    grid: &Grid1D<T>,
    cfg: &SimConfig<T>,
) -> Result<MInvariance<T>, SimError> {
    check_grid(grid, td.length)?;
    let (k, l) = td.pair;
    let n = k * k + k * l + l * l;
    let basis = unreachable_basis::<T>(n)?;
    let samples: Vec<Vec<T>> = basis
        .iter()
        .map(|b| {
            let s = grid.sample(|x| b.eval(x));
            let norm = grid.l2(&s);
            s.into_iter().map(|v| v / norm).collect()
        })
        .collect();
    let mut st = Stepper::new(grid, &vec![T::zero(); grid.n], u, &cfg.with_scheme(Scheme::Linear))?;
    let mut max_abs = vec![T::zero(); basis.len()];
    for step in 1..=cfg.steps() {
        st.advance()?;
        if step % cfg.record_every == 0 {
            for (m, s) in max_abs.iter_mut().zip(&samples) {
                *m = m.max(grid.dot(st.state(), s).abs());
            }
        }
    }
    let max = max_abs.iter().fold(T::zero(), |a, b| a.max(*b));
    Ok(MInvariance { n, basis: basis.iter().map(|b| (b.pair, b.part)).collect(), max_abs, max })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationReport<T> {
    pub pair: (u64, u64),
    pub rate: T,
    pub period: T,
    /// Largest phase error over one period, as a fraction of a full turn.
    pub max_phase_error: T,
}

/// From `Re φ` with `u = 0` the coordinates on `(Re φ, Im φ)` turn as
/// `(cos λt, −sin λt)`.
pub fn rotation_check<T: Real>(k: u64, l: u64, n_nodes: usize, cfg: &SimConfig<T>) -> Result<RotationReport<T>, SimError> {
    let mode = type1_mode::<T>(k, l)?;
    let rate = mode.lambda;
    if rate == T::zero() {
        return Err(SimError::InvalidData(format!("({k}, {l}) has a stationary mode")));
    }
    let grid = Grid1D::new(mode.length, n_nodes)?;
    let f1 = grid.sample(|x| mode.eval(x).re);
    let f2 = grid.sample(|x| mode.eval(x).im);
    let (g11, g12, g22) = (grid.dot(&f1, &f1), grid.dot(&f1, &f2), grid.dot(&f2, &f2));
    let det = g11 * g22 - g12 * g12;
    let two_pi = T::lit(2.0) * T::PI();
    let period = two_pi / rate.abs();
    let cfg = cfg.with_scheme(Scheme::Linear).with_t_end(period);
    let u = ControlSignal::zero(cfg.dt, 0);
    let mut st = Stepper::new(&grid, &f1, &u, &cfg)?;
    let (mut prev, mut turns) = (T::zero(), T::zero());
    let mut worst = T::zero();
    for _ in 0..cfg.steps() {
        st.advance()?;
        let (b1, b2) = (grid.dot(st.state(), &f1), grid.dot(st.state(), &f2));
        let a = (g22 * b1 - g12 * b2) / det;
        let b = (g11 * b2 - g12 * b1) / det;
        let raw = (-b).atan2(a);
        // unwrap against the previous sample
        let mut ang = raw + turns * two_pi;
        while ang - prev > T::PI() {
            ang -= two_pi;
            turns -= T::one();
        }
        while prev - ang > T::PI() {
            ang += two_pi;
            turns += T::one();
        }
        prev = ang;
        worst = worst.max((ang - rate * st.time()).abs() / two_pi);
    }
    Ok(RotationReport { pair: (k, l), rate, period, max_phase_error: worst })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coercivity<T> {
    /// `∫₀ᵀ∫₀ᴸ y² ∂ₓΨ`
    pub numerator: T,
    /// `‖u‖²_{H^{-1}}`
    pub h_minus1_sq: T,
    pub rho: T,
}

pub fn coercivity_probe<T: Real>(
    u: &ControlSignal<T>,
    td: &TrappingDirection<T>,
    grid: &Grid1D<T>,
    cfg: &SimConfig<T>,
) -> Result<Coercivity<T>, SimError> {
    check_grid(grid, td.length)?;
    if u.is_zero() {
        return Err(SimError::InvalidData("u = 0 leaves the ratio undefined".into()));
    }
    let pg = PsiGrid::new(td, grid);
    let mut st = Stepper::new(grid, &vec![T::zero(); grid.n], u, &cfg.with_scheme(Scheme::Linear))?;
    let density = |st: &Stepper<T>| {
        let px = pg.psi_x(st.time());
        let y = st.state();
        (0..grid.n).fold(T::zero(), |s, i| s + grid.weight(i) * y[i] * y[i] * px[i])
    };
    let mut g0 = density(&st);
    let mut num = T::zero();
    for _ in 0..cfg.steps() {
        st.advance()?;
        let g1 = density(&st);
        num += (g0 + g1) * cfg.dt * T::lit(0.5);
        g0 = g1;
    }
    let h = sobolev_norm(u, -T::one())?.powi(2);
    Ok(Coercivity { numerator: num, h_minus1_sq: h, rho: num / h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basym::{qm_frequency, QmFrequencyOptions};
    use crate::modes::trapping_direction;

    fn td() -> TrappingDirection<f64> {
        trapping_direction(4, 1).unwrap()
    }

    #[test]
    fn manufactured_solution_converges_at_second_order() {
        let td = td();
        let errs: Vec<f64> = [(128, 0.02), (256, 0.01), (512, 0.005)]
            .iter()
            .map(|&(n, dt)| manufactured_error(&td, n, dt, 1.0).unwrap())
            .collect();
        let order = (errs[0] / errs[2]).log2() / 2.0;
        assert!(order >= 1.8, "{errs:?} order {order}");
        assert!(errs[1] / errs[2] > 3.0 && errs[1] / errs[2] < 5.0, "{errs:?}");
    }

    #[test]
    fn energy_identity_holds_to_discretisation_error() {
        let td = td();
        let rel: Vec<f64> = [256, 512]
            .iter()
            .map(|&n| {
                let g = Grid1D::new(td.length, n).unwrap();
                let y0 = g.sample(|x| {
                    let s = (std::f64::consts::PI * x / g.length).sin();
                    0.1 * s * s * (2.0 * std::f64::consts::PI * x / g.length).sin()
                });
                let cfg = SimConfig { dt: 2.56 / n as f64, t_end: 2.0, ..Default::default() };
                dissipation_check(&g, &y0, &cfg).unwrap().relative
            })
            .collect();
        assert!(rel[1] < 0.05, "{rel:?}");
        assert!(rel[0] / rel[1] > 2.0, "{rel:?}");
    }

    #[test]
    fn trapping_ratios_stay_bounded() {
        let td = td();
        let g = Grid1D::new(td.length, 512).unwrap();
        let cfg = SimConfig { dt: 2.5e-3, scheme: Scheme::Nonlinear, ..Default::default() };
        let tab = trapping_experiment(&td, &[1e-3, 2e-3, 4e-3], 0.5, &g, &cfg).unwrap();
        assert!(tab.passed, "{tab:?}");
        let slope = tab.gap_slope.unwrap();
        assert!((slope - 2.0).abs() < 0.15, "{slope}");
        assert!(trapping_experiment(&td, &[0.0], 0.5, &g, &cfg).is_err());

        let lin = trapping_experiment(&td, &[1e-3], 0.5, &g, &cfg.with_scheme(Scheme::Linear)).unwrap();
        assert!(lin.rows[0].r * 1e-3 < 0.01 * tab.rows[0].r, "{lin:?}");
        assert!(lin.rows[0].gap < 1e-12);
    }

    #[test]
    fn zero_control_gives_zero_everywhere() {
        let td = td();
        let g = Grid1D::new(td.length, 128).unwrap();
        let u = ControlSignal::zero(0.01, 200);
        let cfg = SimConfig { dt: 0.01, t_end: 5.0, ..Default::default() };
        assert_eq!(m_invariance_check(&u, &td, &g, &cfg).unwrap().max, 0.0);
        let q = qm_time_experiment(&u, &td, &g, &cfg).unwrap();
        assert_eq!(q.value, Complex::new(0.0, 0.0));
        let tr = super::super::solve_linear(&g, &vec![0.0; 128], &u, &cfg).unwrap();
        assert_eq!(qm_time_domain(&tr, &td).unwrap().value, Complex::new(0.0, 0.0));
        assert!(coercivity_probe(&u, &td, &g, &cfg).is_err());
    }

    #[test]
    fn m_projections_shrink_under_refinement() {
        let td = td();
        let u = ControlSignal::bump(1e-3, 1.0, 1.0, 1.0);
        let maxes: Vec<f64> = [(128, 4e-3), (256, 2e-3), (512, 1e-3)]
            .iter()
            .map(|&(n, dt)| {
                let g = Grid1D::new(td.length, n).unwrap();
                let cfg = SimConfig { dt, t_end: 4.0, ..Default::default() };
                m_invariance_check(&u, &td, &g, &cfg).unwrap().max
            })
            .collect();
        assert!(maxes[0] / maxes[1] >= 3.0 && maxes[1] / maxes[2] >= 3.0, "{maxes:?}");
    }

    #[test]
    fn mode_rotates_at_its_eigenvalue() {
        for (k, l) in [(4, 1), (2, 1)] {
            let cfg = SimConfig { dt: 5e-3, ..Default::default() };
            let rep = rotation_check::<f64>(k, l, 512, &cfg).unwrap();
            assert!(rep.max_phase_error < 0.01, "{rep:?}");
        }
        assert!(rotation_check::<f64>(1, 1, 128, &SimConfig::default()).is_err());
    }

    #[test]
    fn qm_time_matches_frequency_side() {
        let td = td();
        let u = ControlSignal::bump(1e-3, 1.0, 1.0, 1.0);
        let g = Grid1D::new(td.length, 512).unwrap();
        let cfg = SimConfig { dt: 5e-3, t_end: 3000.0, ..Default::default() };
        let q = qm_time_experiment(&u, &td, &g, &cfg).unwrap();
        let f = qm_frequency(&u, &td, &QmFrequencyOptions::default()).unwrap();
        let gap = (q.value - f.value).norm() / f.value.norm();
        assert!(gap < 0.05, "{:?} vs {:?}: {gap}", q, f.value);

        let q2 = qm_time_experiment(&u.scaled(2.0), &td, &g, &cfg).unwrap();
        assert!((q2.value / q.value - 4.0).norm() < 1e-6, "{:?}", q2.value / q.value);
    }

    #[test]
    fn coercivity_ratio_is_scale_free() {
        let td = td();
        let u = ControlSignal::bump(1e-3, 1.0, 1.0, 1.0);
        let g = Grid1D::new(td.length, 256).unwrap();
        let cfg = SimConfig { dt: 5e-3, t_end: 10.0, ..Default::default() };
        let a = coercivity_probe(&u, &td, &g, &cfg).unwrap();
        let b = coercivity_probe(&u.scaled(2.0), &td, &g, &cfg).unwrap();
        assert!(a.rho.is_finite() && a.h_minus1_sq > 0.0);
        assert!(((a.rho - b.rho) / a.rho).abs() < 1e-8);
    }
}
