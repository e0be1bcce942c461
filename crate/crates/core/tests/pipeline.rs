use critkdv::arith::{classify_index, LengthClass, PairClass};
use critkdv::basym::{integral_b, sobolev_norm};
use critkdv::modes::{trapping_direction, type1_mode, unreachable_basis};
use critkdv::sim::{coercivity_probe, qm_time_domain, solve_linear, solve_nonlinear, Grid1D, SimConfig, SimError};
use critkdv::{ControlSignal, Grid64, ModeSpec32, SimConfig64, TrappingDirection64};

#[test]
fn every_s2_index_yields_a_trapping_direction() {
    for n in 1..400u64 {
        let c = classify_index(n).unwrap();
        for p in &c.pairs {
            let td = trapping_direction::<f64>(p.k, p.l);
            assert_eq!(td.is_ok(), p.class == PairClass::S2, "n={n} {p:?}");
            if let Ok(td) = td {
                assert_eq!(c.new_class, LengthClass::N3);
                assert!((td.length - c.length).abs() < 1e-12 * c.length);
                assert!(td.e.re < 0.0);
            }
        }
        let basis = unreachable_basis::<f64>(n).unwrap();
        assert_eq!(basis.len() as u64, c.dim_m, "n={n}");
    }
}

#[test]
fn psi_data_leaves_the_grid_consistent() {
    let td: TrappingDirection64 = trapping_direction(4, 1).unwrap();
    let g: Grid64 = Grid1D::new(td.length, 256).unwrap();
    assert!((g.h * 255.0 - td.length).abs() < 1e-12);
    let y0 = g.sample(|x| 1e-2 * td.psi(0.0, x));
    let u = ControlSignal::zero(0.01, 0);
    let cfg: SimConfig64 = SimConfig { dt: 0.01, t_end: 0.5, record_every: 10, ..Default::default() };
    let lin = solve_linear(&g, &y0, &u, &cfg).unwrap();
    let nl = solve_nonlinear(&g, &y0, &u, &cfg).unwrap();
    assert_eq!(lin.times, nl.times);
    let gap = lin.states.iter().zip(&nl.states).map(|(a, b)| {
        a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
    });
    let worst = gap.fold(0.0, f64::max);
    // O(ε²) with ε = 1e-2
    assert!(worst > 0.0 && worst < 2e-4, "{worst}");
}

#[test]
fn stored_trajectory_must_decay_for_qm() {
    let td = trapping_direction::<f64>(4, 1).unwrap();
    // coarser grids leak an O(h²) component into the slowly decaying M modes
    let g = Grid1D::new(td.length, 256).unwrap();
    let u = ControlSignal::bump(1e-2, 1.0, 1.0, 1.0);
    let cfg = SimConfig { dt: 1e-2, t_end: 10.0, ..Default::default() };
    let tr = solve_linear(&g, &vec![0.0; 256], &u, &cfg).unwrap();
    assert!(matches!(qm_time_domain(&tr, &td), Err(SimError::TailTooLarge { .. })));
    let long = solve_linear(&g, &vec![0.0; 256], &u, &SimConfig { t_end: 700.0, record_every: 5, ..cfg }).unwrap();
    let q = qm_time_domain(&long, &td).unwrap();
    assert!(q.decay_ratio < 1e-3);
    assert!((q.value.im - 0.101).abs() < 0.01, "{:?}", q.value);
}

#[test]
fn coercivity_uses_the_negative_norm() {
    let td = trapping_direction::<f64>(4, 1).unwrap();
    let g = Grid1D::new(td.length, 128).unwrap();
    let u = ControlSignal::bump(1e-2, 1.0, 1.0, 1.0);
    let cfg = SimConfig { dt: 1e-2, t_end: 5.0, ..Default::default() };
    let c = coercivity_probe(&u, &td, &g, &cfg).unwrap();
    let h = sobolev_norm(&u, -1.0).unwrap();
    assert!((c.h_minus1_sq - h * h).abs() < 1e-15);
    assert!(c.rho.is_finite());
}

#[test]
fn single_precision_instantiation() {
    let m: ModeSpec32 = type1_mode(4, 1).unwrap();
    assert!(m.max_residual(201) < 1e-3 * m.sup_norm(201));
    let td = trapping_direction::<f32>(4, 1).unwrap();
    assert!((td.e.re + 0.64621).abs() < 1e-4);
    let ib = integral_b(1e3f32, &td);
    assert!(ib.is_ok());
}

#[test]
fn records_round_trip_through_json() {
    let td = trapping_direction::<f64>(4, 1).unwrap();
    let s = serde_json::to_string(&td).unwrap();
    let back: TrappingDirection64 = serde_json::from_str(&s).unwrap();
    assert_eq!(back, td);
    let c = classify_index(147).unwrap();
    let v: serde_json::Value = serde_json::to_value(&c).unwrap();
    assert_eq!(v["old_class"], "N_4");
    assert_eq!(v["N"], 3);
}
