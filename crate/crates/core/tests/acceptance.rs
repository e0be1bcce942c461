//! One line per acceptance criterion. Exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use critkdv::arith::{classify_index, count_solutions, enumerate_pairs, LegacyClass, LengthClass};
use critkdv::basym::{b_scan, cancellation_check, coef_table, qm_frequency, z_terms, QmFrequencyOptions};
use critkdv::fit::{loglog_slope, logspace};
use critkdv::modes::{trapping_direction, type1_mode, type2_mode, type2_trace};
use critkdv::roots::{asymptotic_root, solve_cubic};
use critkdv::sim::{
    dissipation_check, m_invariance_check, manufactured_error, qm_time_experiment, trapping_experiment, Grid1D,
    Scheme, SimConfig,
};
use critkdv::ControlSignal;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const COUNT_NMAX: u64 = 20_000;
const MODE_NMAX: u64 = 500;
const MODE_RESIDUAL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-12;
const E_NMAX: u64 = 10_000;
const E_REL: f64 = 1e-12;
const E_41: f64 = -0.64623;
const ROOT_SLOPE: f64 = -2.0 / 3.0;
const ROOT_SLOPE_TOL: f64 = 0.05;
const VIETA_SAMPLES: usize = 10_000;
const VIETA_TOL: f64 = 1e-11;
const COEF_TOL: f64 = 1e-14;
const E_GAP: f64 = 0.02;
const RESIDUAL_SLOPE: f64 = -1.0 / 3.0;
const Z12_SLOPE: f64 = -5.0 / 3.0;
const Z3_SLOPE: f64 = -4.0 / 3.0;
const SLOPE_TOL: f64 = 0.1;
const Z3_SLOPE_TOL: f64 = 0.05;
const CANCEL_TOL: f64 = 1e-12;
const MIN_ORDER: f64 = 1.8;
const MIN_REFINE_RATIO: f64 = 3.0;
const QM_GAP: f64 = 0.05;
const TRAP_RATIO: (f64, f64) = (0.5, 2.0);

type Criterion = (u32, &'static str, fn() -> Line);

struct Line {
    ok: bool,
    detail: String,
}

fn line(ok: bool, detail: String) -> Line {
    Line { ok, detail }
}

fn s2_pairs(nmax: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for k in 1..=(nmax as f64).sqrt() as u64 {
        for l in 1..k {
            if k * k + k * l + l * l <= nmax && (k - l) % 3 == 0 {
                out.push((k, l));
            }
        }
    }
    out
}

fn c1() -> Line {
    let mut brute = vec![0u64; COUNT_NMAX as usize + 1];
    for k in 1..=COUNT_NMAX {
        for l in 1..=COUNT_NMAX {
            let n = k * k + k * l + l * l;
            if n > COUNT_NMAX {
                break;
            }
            brute[n as usize] += 1;
        }
    }
    let bad = (1..=COUNT_NMAX).filter(|&n| count_solutions(n).map(|c| c.n) != Ok(brute[n as usize])).count();
    line(bad == 0, format!("{bad} mismatches for n <= {COUNT_NMAX}"))
}

fn c2() -> Line {
    let want = [
        (3, LengthClass::N1, None, 1),
        (7, LengthClass::N2, None, 2),
        (21, LengthClass::N3, None, 2),
        (147, LengthClass::N3, Some(LegacyClass::N4), 3),
    ];
    let mut ok = true;
    let mut got = Vec::new();
    for (n, class, old, dim) in want {
        let c = classify_index(n).unwrap();
        ok &= c.new_class == class && c.dim_m == dim && old.is_none_or(|o| c.old_class == o);
        got.push(format!("{n}:{:?}/{:?}/{}", c.new_class, c.old_class, c.dim_m));
    }
    line(ok, got.join(" "))
}

fn c3() -> Line {
    let (mut res, mut trace, mut modes) = (0f64, 0f64, 0);
    for n in 1..=MODE_NMAX {
        for p in enumerate_pairs(n).unwrap() {
            for (k, l) in [(p.k, p.l), (p.l, p.k)] {
                let m = type1_mode::<f64>(k, l).unwrap();
                let sup = m.sup_norm(2001);
                res = res.max(m.max_residual(2001) / sup);
                for t in m.boundary_traces() {
                    trace = trace.max(t.norm() / sup);
                }
                modes += 1;
                if (2 * k + l) % 3 != 0 {
                    continue;
                }
                let m2 = type2_mode::<f64>(k, l).unwrap();
                res = res.max(m2.max_residual(2001) / m2.sup_norm(2001));
                let [a, b, c, d] = m2.boundary_traces();
                let neu = type2_trace::<f64>(k, l);
                let s = (k * k + k * l + l * l) as f64;
                let want_neu = 3f64.sqrt() * (k + l) as f64 / s.sqrt();
                trace = trace.max(a.norm()).max(b.norm()).max((c - neu).norm()).max((d - neu).norm());
                trace = trace.max((neu.im - want_neu).abs());
                // φ'' at 0 of the Type 1 mode
                let pp = m.derivative(2, 0.0);
                trace = trace.max((pp - Complex::new(3.0 * (k * (k + l)) as f64 / s, 0.0)).norm() / s.sqrt());
                modes += 1;
            }
        }
    }
    line(
        res < MODE_RESIDUAL && trace < TRACE_TOL,
        format!("{modes} modes, residual {res:.1e}, traces {trace:.1e}"),
    )
}

fn c4() -> Line {
    let mut worst = 0f64;
    let pairs = s2_pairs(E_NMAX);
    for &(k, l) in &pairs {
        let td = trapping_direction::<f64>(k, l).unwrap();
        worst = worst.max((td.e.re - td.e_closed).abs().max(td.e.im.abs()) / td.e_closed.abs());
    }
    let td = trapping_direction::<f64>(4, 1).unwrap();
    let p = 6.0 / (7.0 * 7f64.sqrt());
    let closed = -40.0 * PI * p / 63.0;
    let ok = worst < E_REL && (td.e.re - closed).abs() < E_REL && (td.e.re - E_41).abs() < 5e-5;
    line(ok, format!("{} pairs, max rel {worst:.1e}, E(4,1) = {:.6}", pairs.len(), td.e.re))
}

fn c5() -> Line {
    let taus = logspace(1e3, 1e7, 9);
    let slopes: Vec<f64> = (1..=3)
        .map(|j| {
            let errs: Vec<f64> = taus
                .iter()
                .map(|&t| {
                    let tau = Complex::new(t, 0.0);
                    (solve_cubic(tau).unwrap().roots[j - 1] - asymptotic_root(j, tau).unwrap()).norm()
                })
                .collect();
            loglog_slope(&taus, &errs)
        })
        .collect();
    let slope_ok = slopes.iter().all(|s| (s - ROOT_SLOPE).abs() <= ROOT_SLOPE_TOL);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut vieta = 0f64;
    for _ in 0..VIETA_SAMPLES {
        let t = 10f64.powf(rng.gen_range(-3.0..8.0)) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let r = solve_cubic(Complex::new(t, 0.0)).unwrap();
        vieta = vieta.max(r.vieta().iter().cloned().fold(0.0, f64::max) / (1.0 + t.abs()));
    }
    line(
        slope_ok && vieta < VIETA_TOL,
        format!("slopes {:.3} {:.3} {:.3} (want -2/3); Vieta {vieta:.1e}", slopes[0], slopes[1], slopes[2]),
    )
}

fn c6() -> Line {
    let c = coef_table::<f64>();
    let want = [-2.0 / 3.0, 1.0 / 3f64.sqrt(), 2.0 / 9.0, -2.0 / 9.0];
    let mut bad = Vec::new();
    for (i, (name, v)) in c.entries().iter().enumerate() {
        if (v - Complex::new(want[i % 4], 0.0)).norm() > COEF_TOL {
            bad.push(format!("{name}={:.6}", v.re));
        }
    }
    line(bad.is_empty(), if bad.is_empty() { "all match".into() } else { format!("off: {}", bad.join(" ")) })
}

fn c7() -> Line {
    let td = trapping_direction::<f64>(4, 1).unwrap();
    let taus = logspace(1e3, 1e6, 40);
    let rows = b_scan(&taus, &td).unwrap();
    let last = rows.last().unwrap();
    let gap = ((last.integral_b * last.tau * last.tau - td.e).norm()) / td.e.norm();
    let res: Vec<f64> = rows.iter().map(|r| r.scaled_residual.norm()).collect();
    let s_res = loglog_slope(&taus, &res);
    let z: Vec<_> = taus.iter().map(|&t| z_terms(t, &td).unwrap()).collect();
    let s12 = loglog_slope(&taus, &z.iter().map(|z| (z.z1 + z.z2).norm()).collect::<Vec<_>>());
    let s3 = loglog_slope(&taus, &z.iter().map(|z| z.z3.norm()).collect::<Vec<_>>());
    let ok = gap < E_GAP
        && (s_res - RESIDUAL_SLOPE).abs() <= SLOPE_TOL
        && (s12 - Z12_SLOPE).abs() <= SLOPE_TOL
        && (s3 - Z3_SLOPE).abs() <= Z3_SLOPE_TOL;
    line(
        ok,
        format!("E gap {gap:.1e}; residual slope {s_res:.3} (-1/3); Z1+Z2 slope {s12:.3} (-5/3); Z3 slope {s3:.3} (-4/3)"),
    )
}

fn c8() -> Line {
    let mut worst = 0f64;
    let pairs = s2_pairs(E_NMAX);
    for &(k, l) in &pairs {
        let r = cancellation_check(&trapping_direction::<f64>(k, l).unwrap());
        worst = worst.max(r.cubic_residual).max(r.quadratic_residual);
    }
    line(worst < CANCEL_TOL, format!("{} pairs, max residual {worst:.1e}", pairs.len()))
}

fn c9() -> Line {
    let td = trapping_direction::<f64>(4, 1).unwrap();
    let levels = [(128, 0.02), (256, 0.01), (512, 0.005), (1024, 0.0025)];
    let errs: Vec<f64> = levels.iter().map(|&(n, dt)| manufactured_error(&td, n, dt, 1.0).unwrap()).collect();
    let hs: Vec<f64> = levels.iter().map(|l| 1.0 / l.0 as f64).collect();
    let order = loglog_slope(&hs, &errs);

    let diss: Vec<f64> = [256usize, 512, 1024]
        .iter()
        .map(|&n| {
            let g = Grid1D::new(td.length, n).unwrap();
            let y0 = g.sample(|x| {
                let s = (PI * x / g.length).sin();
                0.1 * s * s * (2.0 * PI * x / g.length).sin()
            });
            let cfg = SimConfig { dt: 2.56 / n as f64, t_end: 2.0, ..Default::default() };
            dissipation_check(&g, &y0, &cfg).unwrap().relative
        })
        .collect();
    let diss_ok = diss.windows(2).all(|w| w[1] < w[0]) && diss[2] < 0.01;

    let u = ControlSignal::bump(1e-3, 1.0, 1.0, 1.0);
    let proj: Vec<f64> = [(128, 4e-3), (256, 2e-3), (512, 1e-3), (1024, 5e-4)]
        .iter()
        .map(|&(n, dt)| {
            let g = Grid1D::new(td.length, n).unwrap();
            let cfg = SimConfig { dt, t_end: 4.0, ..Default::default() };
            m_invariance_check(&u, &td, &g, &cfg).unwrap().max
        })
        .collect();
    let ratios: Vec<f64> = proj.windows(2).map(|w| w[0] / w[1]).collect();
    let ok = order >= MIN_ORDER && diss_ok && ratios.iter().all(|r| *r >= MIN_REFINE_RATIO);
    line(
        ok,
        format!(
            "order {order:.3}; energy residual {:.1e} -> {:.1e} -> {:.1e}; M ratios {:.2} {:.2} {:.2}",
            diss[0], diss[1], diss[2], ratios[0], ratios[1], ratios[2]
        ),
    )
}

fn c10() -> Line {
    let td = trapping_direction::<f64>(4, 1).unwrap();
    let u = ControlSignal::bump(1e-3, 1.0, 1.0, 1.0);
    let f = qm_frequency(&u, &td, &QmFrequencyOptions::default()).unwrap();
    let g = Grid1D::new(td.length, 512).unwrap();
    let q = qm_time_experiment(&u, &td, &g, &SimConfig { dt: 5e-3, t_end: 3000.0, ..Default::default() }).unwrap();
    let gap = (q.value - f.value).norm() / f.value.norm();
    line(
        gap < QM_GAP,
        format!("time {:.6}{:+.6}i, frequency {:.6}{:+.6}i, gap {gap:.1e}", q.value.re, q.value.im, f.value.re, f.value.im),
    )
}

fn c11() -> Line {
    let td = trapping_direction::<f64>(4, 1).unwrap();
    let g = Grid1D::new(td.length, 512).unwrap();
    let cfg = SimConfig { dt: 2.5e-3, scheme: Scheme::Nonlinear, ..Default::default() };
    let t = trapping_experiment(&td, &[1e-3, 2e-3, 4e-3], 0.5, &g, &cfg).unwrap();
    let ok = t.ratios.iter().all(|q| *q >= TRAP_RATIO.0 && *q <= TRAP_RATIO.1);
    let r: Vec<String> = t.rows.iter().map(|r| format!("{:.4}", r.r)).collect();
    line(ok, format!("r = {}; ratios {:.4} {:.4}", r.join(" "), t.ratios[0], t.ratios[1]))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "counting formula", c1),
        (2, "classification", c2),
        (3, "eigenmode residuals", c3),
        (4, "E triangle", c4),
        (5, "root asymptotics", c5),
        (6, "coefficient table", c6),
        (7, "central expansion", c7),
        (8, "cancellation identities", c8),
        (9, "solver convergence", c9),
        (10, "Q_M identity", c10),
        (11, "trapping", c11),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let r = f();
        failed += usize::from(!r.ok);
        println!(
            "criterion {id:>2} {} {name:<24} {:>6.2}s  {}",
            if r.ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            r.detail
        );
    }
    println!("criterion 12 N/A  coercive inequality       not reproducible at desk scale");
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
