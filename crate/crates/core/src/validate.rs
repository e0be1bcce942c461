//! Pass/fail matrix over the acceptance criteria, for the `validate` command.

use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{classify_index, count_solutions, enumerate_pairs, LegacyClass, LengthClass, PairClass};
use crate::basym::{b_scan, cancellation_check, coef_table, qm_frequency, z_terms, QmFrequencyOptions};
use crate::fit::{loglog_slope, logspace};
use crate::modes::{derivative_mode_check, trapping_direction, type1_mode, type2_mode, type2_trace, TrappingDirection};
use crate::roots::{asymptotic_root, solve_cubic};
use crate::sim::{
    dissipation_check, m_invariance_check, manufactured_error, qm_time_experiment, trapping_experiment, Grid1D,
    Scheme, SimConfig,
};
use crate::ControlSignal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fast,
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateOptions {
    pub level: Level,
    pub seed: u64,
    /// Perturbs C11 before the coefficient check, as a negative control.
    pub corrupt_c11: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self { level: Level::Fast, seed: 0, corrupt_c11: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    /// `None` when the criterion is not run at this level.
    pub passed: Option<bool>,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub level: Level,
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

impl ValidationReport {
    /// One line per criterion.
    pub fn matrix(&self) -> String {
        let mut out = String::new();
        for c in &self.criteria {
            let tag = match c.passed {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "SKIP",
            };
            let detail: Vec<String> = c
                .checks
                .iter()
                .map(|k| format!("{}{}: {}", if k.passed { "" } else { "!" }, k.name, k.detail))
                .collect();
            out.push_str(&format!("{:>2} {tag} {:<28} {:>7.2}s  {}\n", c.id, c.name, c.seconds, detail.join("; ")));
        }
        out
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.into(), passed, detail }
}

fn fail(name: &str, e: impl std::fmt::Display) -> Check {
    check(name, false, format!("error: {e}"))
}

fn s2_pairs(nmax: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut k = 1;
    while k * k < nmax {
        for l in 1..k {
            if k * k + k * l + l * l <= nmax && PairClass::of(k, l) == PairClass::S2 {
                out.push((k, l));
            }
        }
        k += 1;
    }
    out
}

pub fn counting(nmax: u64) -> Vec<Check> {
    let mut brute = vec![0u64; nmax as usize + 1];
    let mut k = 1;
    while k * k < nmax {
        let mut l = 1;
        while k * k + k * l + l * l <= nmax {
            brute[(k * k + k * l + l * l) as usize] += 1;
            l += 1;
        }
        k += 1;
    }
    let mut bad = Vec::new();
    for n in 1..=nmax {
        match count_solutions(n) {
            Ok(c) if c.n == brute[n as usize] => {}
            Ok(c) => bad.push(format!("n={n}: {} vs {}", c.n, brute[n as usize])),
            Err(e) => bad.push(format!("n={n}: {e}")),
        }
    }
    vec![check(
        "N(n) = brute force",
        bad.is_empty(),
        if bad.is_empty() { format!("n <= {nmax}") } else { bad.into_iter().take(3).collect::<Vec<_>>().join(", ") },
    )]
}

pub fn classification() -> Vec<Check> {
    let cases = [
        (3, LengthClass::N1, None, 1),
        (7, LengthClass::N2, None, 2),
        (21, LengthClass::N3, None, 2),
        (147, LengthClass::N3, Some(LegacyClass::N4), 3),
    ];
    cases
        .iter()
        .map(|&(n, class, old, dim)| match classify_index(n) {
            Ok(c) => check(
                &format!("n={n}"),
                c.new_class == class && c.dim_m == dim && old.is_none_or(|o| c.old_class == o),
                format!("{:?}/{:?} dim {}", c.new_class, c.old_class, c.dim_m),
            ),
            Err(e) => fail(&format!("n={n}"), e),
        })
        .collect()
}

pub fn eigenmodes(nmax: u64) -> Vec<Check> {
    let (mut res, mut trace, mut count) = (0f64, 0f64, 0);
    let mut errors = Vec::new();
    for n in 1..=nmax {
        let Ok(pairs) = enumerate_pairs(n) else { continue };
        for p in pairs {
            for (k, l) in [(p.k, p.l), (p.l, p.k)] {
                let m = match type1_mode::<f64>(k, l) {
                    Ok(m) => m,
                    Err(e) => {
                        errors.push(e.to_string());
                        continue;
                    }
                };
                let sup = m.sup_norm(1001);
                res = res.max(m.max_residual(1001) / sup);
                trace = trace.max(m.boundary_traces().iter().map(|t| t.norm()).fold(0.0, f64::max) / sup);
                count += 1;
                if (2 * k + l) % 3 == 0 {
                    if let Ok(m2) = type2_mode::<f64>(k, l) {
                        let sup2 = m2.sup_norm(1001);
                        res = res.max(m2.max_residual(1001) / sup2);
                        let want = type2_trace::<f64>(k, l);
                        let [a, b, c, d] = m2.boundary_traces();
                        let e = [a.norm(), b.norm(), (c - want).norm(), (d - want).norm()];
                        trace = trace.max(e.iter().fold(0.0, |x: f64, y| x.max(*y)));
                        count += 1;
                    }
                    match derivative_mode_check::<f64>(k, l) {
                        Ok(r) => trace = trace.max(r.max_error / r.expected_second.max(1.0)),
                        Err(e) => errors.push(e.to_string()),
                    }
                }
            }
        }
    }
    vec![
        check("ODE residual", res < 1e-10 && errors.is_empty(), format!("max rel {res:.2e} over {count} modes")),
        check("boundary traces", trace < 1e-12 && errors.is_empty(), format!("max {trace:.2e}")),
    ]
}

pub fn e_triangle(nmax: u64) -> Vec<Check> {
    let mut worst = 0f64;
    let mut errs = 0;
    for (k, l) in s2_pairs(nmax) {
        match trapping_direction::<f64>(k, l) {
            Ok(td) => worst = worst.max((td.e - Complex::new(td.e_closed, 0.0)).norm() / td.e_closed.abs()),
            Err(_) => errs += 1,
        }
    }
    let mut out = vec![check("sum vs closed form", worst < 1e-12 && errs == 0, format!("max rel {worst:.2e}"))];
    match trapping_direction::<f64>(4, 1) {
        Ok(td) => {
            let want = -40.0 * std::f64::consts::PI * td.p / 63.0;
            let ok = (td.e.re - want).abs() < 1e-12 && (td.e.re + 0.64623).abs() < 5e-5;
            out.push(check("(4,1) E", ok, format!("{:.8}", td.e.re)));
        }
        Err(e) => out.push(fail("(4,1) E", e)),
    }
    out
}

pub fn root_asymptotics(seed: u64, samples: usize) -> Vec<Check> {
    let taus = logspace(1e3, 1e7, 9);
    let mut out = Vec::new();
    let mut slopes = Vec::new();
    for j in 1..=3 {
        let errs: Result<Vec<f64>, _> = taus
            .iter()
            .map(|&t| {
                let r = solve_cubic(Complex::new(t, 0.0))?;
                Ok::<f64, crate::roots::RootsError>((r.roots[j - 1] - asymptotic_root(j, Complex::new(t, 0.0))?).norm())
            })
            .collect();
        match errs {
            Ok(e) => slopes.push(loglog_slope(&taus, &e)),
            Err(e) => out.push(fail(&format!("root {j}"), e)),
        }
    }
    let ok = slopes.len() == 3 && slopes.iter().all(|s| (s + 2.0 / 3.0).abs() <= 0.05);
    out.push(check(
        "residual slope -2/3",
        ok,
        slopes.iter().map(|s| format!("{s:.3}")).collect::<Vec<_>>().join(" ").to_string(),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0f64;
    for _ in 0..samples {
        let mag = 10f64.powf(rng.gen_range(-3.0..8.0));
        let t = if rng.gen::<bool>() { mag } else { -mag };
        match solve_cubic(Complex::new(t, 0.0)) {
            Ok(r) => worst = worst.max(r.vieta().iter().fold(0.0, |a: f64, b| a.max(*b)) / (1.0 + t.abs())),
            Err(_) => worst = f64::INFINITY,
        }
    }
    out.push(check("Vieta", worst < 1e-11, format!("max {worst:.2e}/(1+|tau|) over {samples}")));
    out
}

pub fn coefficients(corrupt_c11: bool) -> Vec<Check> {
    let mut c = coef_table::<f64>();
    if corrupt_c11 {
        c.c11 += 1e-3;
    }
    let bad = c.mismatches(1e-14);
    let detail = if bad.is_empty() {
        "all 8 match".to_string()
    } else {
        bad.iter().map(|(n, v, w)| format!("{n}={:.6} want {:.6}", v.re, w)).collect::<Vec<_>>().join(" ")
    };
    vec![check("C11..C24", bad.is_empty(), detail)]
}

pub fn central_expansion(points: usize) -> Vec<Check> {
    let td = match trapping_direction::<f64>(4, 1) {
        Ok(t) => t,
        Err(e) => return vec![fail("setup", e)],
    };
    let mut out = Vec::new();
    let taus = logspace(1e3, 1e6, points);
    match b_scan(&taus, &td) {
        Ok(rows) => {
            let last = rows.last().expect("non-empty scan");
            let ratio = (last.integral_b * last.tau * last.tau / td.e).re;
            out.push(check("E at 1e6", (ratio - 1.0).abs() < 0.02, format!("ratio {ratio:.5}")));
            let r: Vec<f64> = rows.iter().map(|r| r.scaled_residual.norm()).collect();
            let s = loglog_slope(&taus, &r);
            out.push(check("residual slope -1/3", (s + 1.0 / 3.0).abs() <= 0.1, format!("{s:.3}")));
        }
        Err(e) => out.push(fail("scan", e)),
    }
    let zt: Result<Vec<_>, _> = taus.iter().map(|&t| z_terms(t, &td)).collect();
    match zt {
        Ok(z) => {
            let z12: Vec<f64> = z.iter().map(|z| (z.z1 + z.z2).norm()).collect();
            let z3: Vec<f64> = z.iter().map(|z| z.z3.norm()).collect();
            let s12 = loglog_slope(&taus, &z12);
            let s3 = loglog_slope(&taus, &z3);
            out.push(check("Z1+Z2 slope -5/3", (s12 + 5.0 / 3.0).abs() <= 0.1, format!("{s12:.3}")));
            out.push(check("Z3 slope -4/3", (s3 + 4.0 / 3.0).abs() <= 0.05, format!("{s3:.3}")));
        }
        Err(e) => out.push(fail("Z terms", e)),
    }
    out
}

pub fn cancellations(nmax: u64) -> Vec<Check> {
    let mut worst = 0f64;
    let mut count = 0;
    for (k, l) in s2_pairs(nmax) {
        match trapping_direction::<f64>(k, l) {
            Ok(td) => {
                let r = cancellation_check(&td);
                worst = worst.max(r.cubic_residual).max(r.quadratic_residual);
                count += 1;
            }
            Err(_) => worst = f64::INFINITY,
        }
    }
    vec![check("eta sums", worst < 1e-12, format!("max {worst:.2e} over {count} pairs"))]
}

fn td41() -> Result<TrappingDirection<f64>, crate::modes::ModeError> {
    trapping_direction::<f64>(4, 1)
}

pub fn solver(full: bool) -> Vec<Check> {
    let td = match td41() {
        Ok(t) => t,
        Err(e) => return vec![fail("setup", e)],
    };
    let mut out = Vec::new();
    let mut levels = vec![(128, 0.02), (256, 0.01), (512, 0.005)];
    if full {
        levels.push((1024, 0.0025));
    }
    let errs: Result<Vec<f64>, _> = levels.iter().map(|&(n, dt)| manufactured_error(&td, n, dt, 1.0)).collect();
    match errs {
        Ok(e) => {
            let hs: Vec<f64> = levels.iter().map(|l| 1.0 / l.0 as f64).collect();
            let order = loglog_slope(&hs, &e);
            out.push(check("order >= 1.8", order >= 1.8, format!("{order:.3}")));
        }
        Err(e) => out.push(fail("order >= 1.8", e)),
    }
    let rels: Result<Vec<f64>, _> = [256usize, 512]
        .iter()
        .map(|&n| {
            let g = Grid1D::new(td.length, n)?;
            let y0 = g.sample(|x| {
                let s = (std::f64::consts::PI * x / g.length).sin();
                0.1 * s * s * (2.0 * std::f64::consts::PI * x / g.length).sin()
            });
            let cfg = SimConfig { dt: 2.56 / n as f64, t_end: 2.0, ..Default::default() };
            dissipation_check(&g, &y0, &cfg).map(|r| r.relative)
        })
        .collect();
    match rels {
        Ok(r) => out.push(check(
            "dissipation identity",
            r[1] < 0.05 && r[1] < r[0],
            format!("relative {:.2e} -> {:.2e}", r[0], r[1]),
        )),
        Err(e) => out.push(fail("dissipation identity", e)),
    }
    let u = ControlSignal::bump(1e-3, 1.0, 1.0, 1.0);
    let mut mlev = vec![(128, 4e-3), (256, 2e-3), (512, 1e-3)];
    if full {
        mlev.push((1024, 5e-4));
    }
    let maxes: Result<Vec<f64>, _> = mlev
        .iter()
        .map(|&(n, dt)| {
            let g = Grid1D::new(td.length, n)?;
            let cfg = SimConfig { dt, t_end: 4.0, ..Default::default() };
            m_invariance_check(&u, &td, &g, &cfg).map(|m| m.max)
        })
        .collect();
    match maxes {
        Ok(m) => {
            let ratios: Vec<f64> = m.windows(2).map(|w| w[0] / w[1]).collect();
            out.push(check(
                "M projections shrink >= 3x",
                ratios.iter().all(|r| *r >= 3.0),
                ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(" ").to_string(),
            ));
        }
        Err(e) => out.push(fail("M projections shrink >= 3x", e)),
    }
    out
}

pub fn qm_identity() -> Vec<Check> {
    let td = match td41() {
        Ok(t) => t,
        Err(e) => return vec![fail("setup", e)],
    };
    let u = ControlSignal::bump(1e-3, 1.0, 1.0, 1.0);
    let f = match qm_frequency(&u, &td, &QmFrequencyOptions::default()) {
        Ok(f) => f,
        Err(e) => return vec![fail("frequency side", e)],
    };
    let run = Grid1D::new(td.length, 512).and_then(|g| {
        let cfg = SimConfig { dt: 5e-3, t_end: 3000.0, ..Default::default() };
        qm_time_experiment(&u, &td, &g, &cfg)
    });
    match run {
        Ok(q) => {
            let gap = (q.value - f.value).norm() / f.value.norm();
            vec![check(
                "time vs frequency",
                gap < 0.05,
                format!("{:.6}{:+.6}i vs {:.6}{:+.6}i, gap {gap:.2e}", q.value.re, q.value.im, f.value.re, f.value.im),
            )]
        }
        Err(e) => vec![fail("time side", e)],
    }
}

pub fn trapping() -> Vec<Check> {
    let td = match td41() {
        Ok(t) => t,
        Err(e) => return vec![fail("setup", e)],
    };
    let run = Grid1D::new(td.length, 512).and_then(|g| {
        let cfg = SimConfig { dt: 2.5e-3, scheme: Scheme::Nonlinear, ..Default::default() };
        trapping_experiment(&td, &[1e-3, 2e-3, 4e-3], 0.5, &g, &cfg)
    });
    match run {
        Ok(t) => {
            let rs: Vec<String> = t.rows.iter().map(|r| format!("{:.4}", r.r)).collect();
            let qs: Vec<String> = t.ratios.iter().map(|q| format!("{q:.4}")).collect();
            vec![check("r(2e)/r(e) in [0.5, 2]", t.passed, format!("r = {}, ratios {}", rs.join(" "), qs.join(" ")))]
        }
        Err(e) => vec![fail("r(2e)/r(e) in [0.5, 2]", e)],
    }
}

fn timed(id: u32, name: &str, run: bool, f: impl FnOnce() -> Vec<Check>) -> CriterionResult {
    let start = Instant::now();
    if !run {
        return CriterionResult { id, name: name.into(), passed: None, checks: Vec::new(), seconds: 0.0 };
    }
    let checks = f();
    CriterionResult {
        id,
        name: name.into(),
        passed: Some(checks.iter().all(|c| c.passed)),
        checks,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run(opts: &ValidateOptions) -> ValidationReport {
    let full = opts.level == Level::Full;
    let criteria = vec![
        timed(1, "counting formula", true, || counting(20_000)),
        timed(2, "classification", true, classification),
        timed(3, "eigenmode residuals", true, || eigenmodes(500)),
        timed(4, "E triangle", true, || e_triangle(10_000)),
        timed(5, "root asymptotics", true, || root_asymptotics(opts.seed, 10_000)),
        timed(6, "coefficient table", true, || coefficients(opts.corrupt_c11)),
        timed(7, "central expansion", true, || central_expansion(if full { 40 } else { 10 })),
        timed(8, "cancellation identities", true, || cancellations(10_000)),
        timed(9, "solver invariants", true, || solver(full)),
        timed(10, "Q_M identity", full, qm_identity),
        timed(11, "trapping", true, trapping),
    ];
    let passed = criteria.iter().all(|c| c.passed != Some(false));
    ValidationReport { level: opts.level, seed: opts.seed, criteria, passed }
}
