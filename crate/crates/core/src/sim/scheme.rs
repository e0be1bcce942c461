use super::banded::{BandMatrix, BandedLu};
use super::{Grid1D, Scheme, SimConfig, SimError, Trajectory};
use crate::{ControlSignal, Real};

/// `−(D₃ + D₁)` on the interior nodes `1..N−1` and the weight of `u` in the
/// last row. `D₃` is centred away from the ends. Node 1 uses a one-sided
/// five-point closure; node `N−2` folds the Neumann value in through
/// `h³y''' ≈ −y_{N−4}/3 + 3y_{N−2} − 8y_{N−1}/3 + 2h·y'(L)`, which is what the
/// ghost node `y_N` reduces to once its truncation error is matched.
pub(crate) fn operator<T: Real>(grid: &Grid1D<T>) -> (BandMatrix<T>, T) {
    let n = grid.n;
    let m = n - 2;
    let h = grid.h;
    let two = T::lit(2.0);
    let c3 = T::one() / (two * h * h * h);
    let c1 = T::one() / (two * h);
    let mut a = BandMatrix::zeros(m, 2, 3);
    // node j -> column j − 1; boundary nodes carry zero
    let mut put = |row: usize, node: usize, v: T| {
        if node >= 1 && node <= n - 2 {
            a.add(row, node - 1, -v);
        }
    };
    for i in 1..=n - 2 {
        let r = i - 1;
        if i == 1 {
            for (j, w) in [10.0, -12.0, 6.0, -1.0].iter().enumerate() {
                put(r, 1 + j, c3 * T::lit(*w));
            }
        } else if i == n - 2 {
            let h3 = h * h * h;
            put(r, n - 4, -T::one() / (T::lit(3.0) * h3));
            put(r, n - 2, T::lit(3.0) / h3);
        } else {
            put(r, i + 2, c3);
            put(r, i + 1, -two * c3);
            put(r, i - 1, two * c3);
            put(r, i - 2, -c3);
        }
        put(r, i + 1, c1);
        put(r, i - 1, -c1);
    }
    (a, -two / (h * h))
}

/// `−½∂ₓ(y²)` at interior nodes, centred.
fn nonlinear_term<T: Real>(y: &[T], h: T, out: &mut [T]) {
    let c = T::one() / (T::lit(4.0) * h);
    for i in 1..y.len() - 1 {
        out[i - 1] = -(y[i + 1] * y[i + 1] - y[i - 1] * y[i - 1]) * c;
    }
}

pub(crate) fn flux_at_zero<T: Real>(y: &[T], h: T) -> T {
    (T::lit(4.0) * y[1] - y[2] - T::lit(3.0) * y[0]) / (T::lit(2.0) * h)
}

fn sup<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// Advances one θ-step at a time. The state always holds all `N` nodes with
/// the Dirichlet values pinned to zero.
#[derive(Clone, Debug)]
pub struct Stepper<'a, T> {
    grid: Grid1D<T>,
    cfg: SimConfig<T>,
    u: &'a ControlSignal<T>,
    a: BandMatrix<T>,
    lu: BandedLu<T>,
    b_ctl: T,
    y: Vec<T>,
    nl_prev: Option<Vec<T>>,
    nl: Vec<T>,
    rhs: Vec<T>,
    step: usize,
    limit: T,
}

impl<'a, T: Real> Stepper<'a, T> {
    pub fn new(grid: &Grid1D<T>, y0: &[T], u: &'a ControlSignal<T>, cfg: &SimConfig<T>) -> Result<Self, SimError> {
        cfg.validate()?;
        if y0.len() != grid.n {
            return Err(SimError::InvalidData(format!("y0 has {} values for {} nodes", y0.len(), grid.n)));
        }
        if y0.iter().any(|v| !v.is_finite()) || u.values.iter().any(|v| !v.is_finite()) {
            return Err(SimError::InvalidData("non-finite data".into()));
        }
        if !(u.dt > T::zero()) && !u.values.is_empty() {
            return Err(SimError::InvalidData("control step must be positive".into()));
        }
        let scale = sup(y0).max(sup(&u.values));
        if cfg.scheme == Scheme::Nonlinear && scale > T::one() {
            return Err(SimError::SmallData { sup: scale.as_f64() });
        }
        let (a, b_ctl) = operator(grid);
        let m = grid.n - 2;
        let mut lhs = BandMatrix::zeros(m, 2, 3);
        let k = cfg.theta * cfg.dt;
        for i in 0..m {
            for j in a.row_range(i) {
                let d = if i == j { T::one() } else { T::zero() };
                lhs.set(i, j, d - k * a.get(i, j));
            }
        }
        let lu = BandedLu::factor(&lhs).ok_or(SimError::Singular)?;
        let mut y = y0.to_vec();
        y[0] = T::zero();
        y[grid.n - 1] = T::zero();
        Ok(Self {
            grid: grid.clone(),
            cfg: cfg.clone(),
            u,
            a,
            lu,
            b_ctl,
            y,
            nl_prev: None,
            nl: vec![T::zero(); m],
            rhs: vec![T::zero(); m],
            step: 0,
            limit: T::lit(10.0) * scale,
        })
    }

    pub fn grid(&self) -> &Grid1D<T> {
        &self.grid
    }

    pub fn steps_taken(&self) -> usize {
        self.step
    }

    pub fn time(&self) -> T {
        self.cfg.dt * T::of_u64(self.step as u64)
    }

    pub fn state(&self) -> &[T] {
        &self.y
    }

    pub fn control(&self) -> T {
        self.u.eval(self.time())
    }

    pub fn advance(&mut self) -> Result<(), SimError> {
        let dt = self.cfg.dt;
        let th = self.cfg.theta;
        let m = self.grid.n - 2;
        let u0 = self.u.eval(self.time());
        let u1 = self.u.eval(dt * T::of_u64(self.step as u64 + 1));
        let interior = &self.y[1..m + 1];
        self.a.matvec(interior, &mut self.rhs);
        let ex = (T::one() - th) * dt;
        for i in 0..m {
            self.rhs[i] = interior[i] + ex * self.rhs[i];
        }
        self.rhs[m - 1] += dt * self.b_ctl * (th * u1 + (T::one() - th) * u0);
        if self.cfg.scheme == Scheme::Nonlinear {
            nonlinear_term(&self.y, self.grid.h, &mut self.nl);
            match &self.nl_prev {
                None => {
                    for i in 0..m {
                        self.rhs[i] += dt * self.nl[i];
                    }
                }
                Some(prev) => {
                    let (a, b) = (T::lit(1.5) * dt, T::lit(0.5) * dt);
                    for i in 0..m {
                        self.rhs[i] += a * self.nl[i] - b * prev[i];
                    }
                }
            }
            let cur = std::mem::take(&mut self.nl);
            self.nl = self.nl_prev.take().unwrap_or_else(|| vec![T::zero(); m]);
            self.nl_prev = Some(cur);
        }
        self.lu.solve(&mut self.rhs);
        self.y[1..m + 1].copy_from_slice(&self.rhs);
        self.step += 1;
        if self.cfg.scheme == Scheme::Nonlinear {
            let s = sup(&self.y);
            if !(s <= self.limit) {
                return Err(SimError::BlowUp { t: self.time().as_f64(), sup: s.as_f64(), limit: self.limit.as_f64() });
            }
        } else if self.y.iter().any(|v| !v.is_finite()) {
            return Err(SimError::InvalidData(format!("non-finite state at t = {}", self.time())));
        }
        Ok(())
    }
}

/// Runs the scheme named in `cfg`.
pub fn solve<T: Real>(
    grid: &Grid1D<T>,
    y0: &[T],
    u: &ControlSignal<T>,
    cfg: &SimConfig<T>,
) -> Result<Trajectory<T>, SimError> {
    let mut st = Stepper::new(grid, y0, u, cfg)?;
    let steps = cfg.steps();
    let mut traj = Trajectory {
        grid: grid.clone(),
        dt: cfg.dt,
        times: Vec::new(),
        states: Vec::new(),
        control: Vec::new(),
    };
    let mut record = |st: &Stepper<T>| {
        traj.times.push(st.time());
        traj.states.push(st.state().to_vec());
        traj.control.push(st.control());
    };
    record(&st);
    for k in 1..=steps {
        st.advance()?;
        if k % cfg.record_every == 0 || k == steps {
            record(&st);
        }
    }
    Ok(traj)
}

pub fn solve_linear<T: Real>(
    grid: &Grid1D<T>,
    y0: &[T],
    u: &ControlSignal<T>,
    cfg: &SimConfig<T>,
) -> Result<Trajectory<T>, SimError> {
    solve(grid, y0, u, &cfg.with_scheme(Scheme::Linear))
}

pub fn solve_nonlinear<T: Real>(
    grid: &Grid1D<T>,
    y0: &[T],
    u: &ControlSignal<T>,
    cfg: &SimConfig<T>,
) -> Result<Trajectory<T>, SimError> {
    solve(grid, y0, u, &cfg.with_scheme(Scheme::Nonlinear))
}
