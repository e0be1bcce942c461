use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use critkdv::arith::{classify_index, enumerate_pairs, index_of_length, index_of_length_default, ArithError, LengthClass};
use critkdv::basym::{b_scan, qm_frequency, QmFrequencyOptions};
use critkdv::fit::{loglog_slope, logspace};
use critkdv::modes::{trapping_direction, type1_mode, type2_mode, ModeError};
use critkdv::roots::{asymptotic_root, solve_cubic, solve_cubic_shifted, RootsError};
use critkdv::sim::{
    m_invariance_check, qm_time_experiment, rotation_check, solve_nonlinear, trapping_experiment, write_binary,
    write_csv, Grid1D, Scheme, SimConfig, SimError,
};
use critkdv::validate::{self as val, Level, ValidateOptions};
use critkdv::ControlSignal;
use num_complex::Complex;
use serde::Serialize;
use serde_json::json;

use crate::manifest::Outputs;

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_NOT_CRITICAL: u8 = 3;
pub const EXIT_NOT_S2: u8 = 4;
pub const EXIT_SMALL_DATA: u8 = 5;

/// An error that already knows its exit status.
#[derive(Debug)]
pub struct Coded(pub u8, pub String);

impl std::fmt::Display for Coded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Coded {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Coded(EXIT_INVALID, msg.into()).into()
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(Coded(c, _)) = cause.downcast_ref::<Coded>() {
            return *c;
        }
        if let Some(m) = cause.downcast_ref::<ModeError>() {
            return match m {
                ModeError::NotS2 { .. } | ModeError::Degenerate { .. } => EXIT_NOT_S2,
                _ => EXIT_INVALID,
            };
        }
        if let Some(s) = cause.downcast_ref::<SimError>() {
            return match s {
                SimError::SmallData { .. } => EXIT_SMALL_DATA,
                SimError::Mode(ModeError::NotS2 { .. }) => EXIT_NOT_S2,
                SimError::InvalidGrid(_) | SimError::InvalidConfig(_) | SimError::InvalidData(_) => EXIT_INVALID,
                _ => EXIT_FAIL,
            };
        }
        if cause.downcast_ref::<ArithError>().is_some() {
            return EXIT_INVALID;
        }
        if let Some(RootsError::TauOutOfRange(_) | RootsError::BadIndex(_)) = cause.downcast_ref::<RootsError>() {
            return EXIT_INVALID;
        }
    }
    EXIT_FAIL
}

/// 17 significant digits.
fn f(x: f64) -> String {
    format!("{x:.16e}")
}

/// The serialized name of a unit enum variant.
fn name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn emit_json<T: Serialize>(out: &mut Outputs, name: &str, v: &T) -> Result<()> {
    let s = to_json(v)?;
    out.write(name, &s)?;
    print!("{s}");
    Ok(())
}

fn pair(k: u64, l: u64) -> Result<(u64, u64)> {
    if k == 0 || l == 0 {
        return Err(invalid(format!("({k}, {l}) is not a pair of positive integers")));
    }
    Ok((k, l))
}

#[derive(Args, Debug, Serialize)]
pub struct ClassifyArgs {
    /// Index n = k² + kl + l².
    pub n: Option<u64>,
    /// Classify a length instead of an index.
    #[arg(long, conflicts_with = "n")]
    pub length: Option<f64>,
    /// Tolerance on 3(L/2π)² − n.
    #[arg(long, requires = "length")]
    pub tol: Option<f64>,
    /// Write the table of all critical n ≤ NMAX to classify_table.csv.
    #[arg(long, value_name = "NMAX", conflicts_with_all = ["n", "length"])]
    pub table: Option<u64>,
}

pub fn classify(a: &ClassifyArgs, out: &mut Outputs) -> Result<u8> {
    if let Some(nmax) = a.table {
        if nmax == 0 {
            return Err(invalid("--table needs NMAX >= 1"));
        }
        let mut csv = String::from("n,L,new_class,old_class,Z,N,dim_M,pairs\n");
        let mut rows = 0;
        for n in 1..=nmax {
            let c = classify_index(n)?;
            if c.new_class == LengthClass::NotCritical {
                continue;
            }
            let pairs: Vec<String> = c.pairs.iter().map(|p| format!("({};{}):{:?}", p.k, p.l, p.class)).collect();
            writeln!(
                csv,
                "{n},{},{},{},{},{},{},{}",
                f(c.length),
                name(&c.new_class),
                name(&c.old_class),
                c.z,
                c.n_ordered,
                c.dim_m,
                pairs.join(" ")
            )?;
            rows += 1;
        }
        out.write("classify_table.csv", &csv)?;
        println!("{rows} critical indices up to {nmax}");
        return Ok(0);
    }
    let n = match (a.n, a.length) {
        (Some(n), _) => n,
        (None, Some(len)) => {
            if !(len > 0.0) || !len.is_finite() {
                return Err(invalid(format!("length {len} must be positive")));
            }
            let found = match a.tol {
                Some(t) if t < 0.0 || !t.is_finite() => return Err(invalid(format!("bad tolerance {t}"))),
                Some(t) => index_of_length(len, t),
                None => index_of_length_default(len),
            };
            match found {
                Some(n) => n,
                None => {
                    let msg = format!("L = {len} is not 2π√(n/3) for any integer n within tolerance");
                    emit_json(out, "classify.json", &json!({ "length": len, "new_class": "not_critical" }))?;
                    return Err(Coded(EXIT_NOT_CRITICAL, msg).into());
                }
            }
        }
        (None, None) => return Err(invalid("give n, --length or --table")),
    };
    let c = classify_index(n)?;
    emit_json(out, "classify.json", &c)?;
    if c.new_class == LengthClass::NotCritical {
        return Ok(EXIT_NOT_CRITICAL);
    }
    Ok(0)
}

#[derive(Args, Debug, Serialize)]
pub struct PairsArgs {
    pub n: u64,
}

pub fn pairs(a: &PairsArgs, out: &mut Outputs) -> Result<u8> {
    let p = enumerate_pairs(a.n)?;
    emit_json(out, "pairs.json", &p)?;
    Ok(0)
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Type1,
    Type2,
    Trapping,
}

#[derive(Args, Debug, Serialize)]
pub struct EigenmodeArgs {
    pub k: u64,
    pub l: u64,
    #[arg(long, value_enum, default_value = "type1")]
    pub kind: Kind,
    /// Samples on [0, L].
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
}

pub fn eigenmode(a: &EigenmodeArgs, out: &mut Outputs) -> Result<u8> {
    let (k, l) = pair(a.k, a.l)?;
    if a.points < 2 {
        return Err(invalid("--points must be at least 2"));
    }
    let mode = match a.kind {
        Kind::Type1 => type1_mode::<f64>(k, l)?,
        Kind::Type2 => type2_mode::<f64>(k, l)?,
        Kind::Trapping => trapping_direction::<f64>(k, l)?.phi,
    };
    let mut csv = String::from("x,re,im,re_dx,im_dx\n");
    for x in mode.grid(a.points) {
        let (v, d) = (mode.eval(x), mode.derivative(1, x));
        writeln!(csv, "{},{},{},{},{}", f(x), f(v.re), f(v.im), f(d.re), f(d.im))?;
    }
    out.write("eigenmode.csv", &csv)?;
    emit_json(out, "eigenmode.json", &mode)?;
    Ok(0)
}

#[derive(Args, Debug, Serialize)]
pub struct RootsArgs {
    #[arg(allow_negative_numbers = true)]
    pub tau: f64,
    /// Imaginary part of τ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub im: f64,
    /// Solve λ³ + λ + i(conj τ − p) = 0 instead.
    #[arg(long, allow_negative_numbers = true)]
    pub shift: Option<f64>,
}

pub fn roots(a: &RootsArgs, out: &mut Outputs) -> Result<u8> {
    let tau = Complex::new(a.tau, a.im);
    if !tau.re.is_finite() || !tau.im.is_finite() {
        return Err(invalid("τ must be finite"));
    }
    let r = match a.shift {
        Some(p) => solve_cubic_shifted(tau, p)?,
        None => solve_cubic(tau)?,
    };
    let asym: Option<Vec<Complex<f64>>> = if a.shift.is_none() && tau.norm() > 0.0 {
        Some((1..=3).map(|j| asymptotic_root(j, tau)).collect::<Result<_, _>>()?)
    } else {
        None
    };
    let rec = json!({
        "tau": r.tau,
        "roots": r.roots,
        "residual": r.residual(),
        "vieta": r.vieta(),
        "asymptotic": asym,
    });
    emit_json(out, "roots.json", &rec)?;
    Ok(0)
}

#[derive(Args, Debug, Serialize)]
pub struct BscanArgs {
    pub k: u64,
    pub l: u64,
    #[arg(long, default_value_t = 1e3)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 1e6)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 40)]
    pub points: usize,
}

pub fn bscan(a: &BscanArgs, out: &mut Outputs) -> Result<u8> {
    let (k, l) = pair(a.k, a.l)?;
    if !(a.tau_min > 0.0 && a.tau_max > a.tau_min && a.tau_max.is_finite()) || a.points < 2 {
        return Err(invalid("need 0 < tau-min < tau-max and at least 2 points"));
    }
    let td = trapping_direction::<f64>(k, l)?;
    let taus = logspace(a.tau_min, a.tau_max, a.points);
    let rows = b_scan(&taus, &td)?;
    let mut csv = String::from("tau,re_integral_b,im_integral_b,re_scaled_residual,im_scaled_residual,flagged\n");
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            f(r.tau),
            f(r.integral_b.re),
            f(r.integral_b.im),
            f(r.scaled_residual.re),
            f(r.scaled_residual.im),
            u8::from(r.flagged)
        )?;
    }
    out.write("bscan.csv", &csv)?;
    let res: Vec<f64> = rows.iter().map(|r| r.scaled_residual.norm()).collect();
    let slope = loglog_slope(&taus, &res);
    let top: Vec<f64> = rows.iter().filter(|r| r.tau >= a.tau_max / 10.0).map(|r| (r.integral_b * r.tau * r.tau).re).collect();
    let e_est = top.iter().sum::<f64>() / top.len() as f64;
    let rec = json!({
        "pair": [k, l],
        "slope": slope,
        "E_est": e_est,
        "E": td.e.re,
        "relative_gap": (e_est - td.e.re).abs() / td.e.re.abs(),
        "flagged": rows.iter().filter(|r| r.flagged).count(),
    });
    emit_json(out, "bscan.json", &rec)?;
    Ok(0)
}

#[derive(Args, Debug, Serialize)]
pub struct BumpArgs {
    /// Bump centre.
    #[arg(long, default_value_t = 1.0)]
    pub center: f64,
    #[arg(long, default_value_t = 1.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub amplitude: f64,
    /// Sampling step of the control.
    #[arg(long, default_value_t = 1e-3)]
    pub control_dt: f64,
}

impl BumpArgs {
    fn signal(&self) -> Result<ControlSignal<f64>> {
        if !(self.half_width > 0.0 && self.center >= self.half_width && self.control_dt > 0.0) {
            return Err(invalid("bump needs half-width > 0, center >= half-width and control-dt > 0"));
        }
        Ok(ControlSignal::bump(self.control_dt, self.center, self.half_width, self.amplitude))
    }
}

#[derive(Args, Debug, Serialize)]
pub struct QmArgs {
    pub k: u64,
    pub l: u64,
    #[command(flatten)]
    pub bump: BumpArgs,
    #[arg(long, default_value_t = 512)]
    pub nodes: usize,
    #[arg(long, default_value_t = 5e-3)]
    pub dt: f64,
    /// Largest horizon for the time-side run.
    #[arg(long, default_value_t = 3000.0)]
    pub horizon: f64,
    /// Frequency grid steps per p.
    #[arg(long, default_value_t = 64)]
    pub oversample: usize,
}

pub fn qm(a: &QmArgs, out: &mut Outputs) -> Result<u8> {
    let (k, l) = pair(a.k, a.l)?;
    let td = trapping_direction::<f64>(k, l)?;
    let u = a.bump.signal()?;
    let opts = QmFrequencyOptions { oversample: a.oversample, ..Default::default() };
    let fq = qm_frequency(&u, &td, &opts)?;
    let g = Grid1D::new(td.length, a.nodes)?;
    let cfg = SimConfig { dt: a.dt, t_end: a.horizon, ..Default::default() };
    let tq = qm_time_experiment(&u, &td, &g, &cfg)?;
    let gap = (tq.value - fq.value).norm() / fq.value.norm();
    let rec = json!({
        "frequency_value": fq.value,
        "time_value": tq.value,
        "relative_gap": gap,
        "time_tail": tq.tail,
        "time_horizon": tq.t_end,
        "frequency_points": fq.tau_points,
        "frequency_flagged": fq.flagged,
    });
    emit_json(out, "qm.json", &rec)?;
    Ok(0)
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrajFormat {
    Csv,
    Bin,
}

#[derive(Args, Debug, Serialize)]
pub struct TrapArgs {
    #[arg(default_value_t = 4)]
    pub k: u64,
    #[arg(default_value_t = 1)]
    pub l: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [1e-3, 2e-3, 4e-3])]
    pub eps: Vec<f64>,
    /// Horizon T.
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long, default_value_t = 512)]
    pub nodes: usize,
    #[arg(long, default_value_t = 2.5e-3)]
    pub dt: f64,
    /// Run the linear scheme instead.
    #[arg(long)]
    pub linear: bool,
    /// Save the nonlinear run for the largest ε.
    #[arg(long, value_enum)]
    pub trajectory: Option<TrajFormat>,
    #[arg(long, default_value_t = 1)]
    pub record_every: usize,
}

pub fn trap(a: &TrapArgs, out: &mut Outputs) -> Result<u8> {
    let (k, l) = pair(a.k, a.l)?;
    let td = trapping_direction::<f64>(k, l)?;
    let g = Grid1D::new(td.length, a.nodes)?;
    let scheme = if a.linear { Scheme::Linear } else { Scheme::Nonlinear };
    let cfg = SimConfig { dt: a.dt, t_end: a.t, scheme, record_every: a.record_every.max(1), ..Default::default() };
    let table = trapping_experiment(&td, &a.eps, a.t, &g, &cfg)?;
    emit_json(out, "trap.json", &table)?;
    if let Some(fmt) = a.trajectory {
        let eps = a.eps.iter().cloned().fold(0.0, f64::max);
        let y0 = g.sample(|x| eps * td.psi(0.0, x));
        let u = ControlSignal::zero(a.dt, 0);
        let tr = solve_nonlinear(&g, &y0, &u, &cfg).context("trajectory run")?;
        let mut buf = Vec::new();
        match fmt {
            TrajFormat::Csv => {
                write_csv(&tr, &mut buf)?;
                out.write_bytes("trap_trajectory.csv", &buf)?;
            }
            TrajFormat::Bin => {
                write_binary(&tr, &mut buf)?;
                out.write_bytes("trap_trajectory.bin", &buf)?;
            }
        }
    }
    Ok(if table.passed { 0 } else { EXIT_FAIL })
}

#[derive(Args, Debug, Serialize)]
pub struct MinvArgs {
    #[arg(default_value_t = 4)]
    pub k: u64,
    #[arg(default_value_t = 1)]
    pub l: u64,
    #[command(flatten)]
    pub bump: BumpArgs,
    #[arg(long, default_value_t = 1024)]
    pub nodes: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    #[arg(long, default_value_t = 4.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 10)]
    pub record_every: usize,
}

pub fn minv(a: &MinvArgs, out: &mut Outputs) -> Result<u8> {
    let (k, l) = pair(a.k, a.l)?;
    let td = trapping_direction::<f64>(k, l)?;
    let u = a.bump.signal()?;
    let g = Grid1D::new(td.length, a.nodes)?;
    let cfg = SimConfig { dt: a.dt, t_end: a.t_end, record_every: a.record_every.max(1), ..Default::default() };
    let m = m_invariance_check(&u, &td, &g, &cfg)?;
    let rot_cfg = SimConfig { dt: 5e-3, ..Default::default() };
    let rot = rotation_check::<f64>(k, l, a.nodes.min(512), &rot_cfg)?;
    emit_json(out, "minv.json", &json!({ "projections": m, "rotation": rot }))?;
    Ok(0)
}

#[derive(Args, Debug, Serialize)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value = "fast")]
    pub level: LevelArg,
    /// Perturb C11 before checking it (negative control).
    #[arg(long, hide = true)]
    pub mutate_c11: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelArg {
    Fast,
    Full,
}

pub fn validate(a: &ValidateArgs, seed: u64, out: &mut Outputs) -> Result<u8> {
    let level = match a.level {
        LevelArg::Fast => Level::Fast,
        LevelArg::Full => Level::Full,
    };
    let report = val::run(&ValidateOptions { level, seed, corrupt_c11: a.mutate_c11 });
    print!("{}", report.matrix());
    out.write("validate.json", &to_json(&report)?)?;
    if !report.passed {
        bail!(Coded(EXIT_FAIL, "some criteria failed".into()));
    }
    Ok(0)
}
