mod common;

use common::{abc, grid, random_solenoidal, rel};
use vortbound::diagnostics::{grad_lp_norm, stretching_functional};
use vortbound::solver::{run_simulation, step, vorticity_rhs, FlowState, SolverConfig};
use vortbound::spectral::dealias;
use vortbound::SpectralVectorField;

fn config(nu: f64, dt: f64, t_end: f64) -> SolverConfig {
    SolverConfig { nu, dt, t_end, record_stride: 1, dealias_enabled: true }
}

#[test]
fn beltrami_rhs_is_pure_viscous_decay() {
    let w = abc(grid(16));
    let nu = 0.05;
    let rhs = vorticity_rhs(&w, nu).unwrap();
    let expected = w.scaled(-nu);
    let err = rhs.add_scaled(-1.0, &expected).unwrap().mode_norm();
    assert!(err <= 1e-10 * expected.mode_norm());
}

#[test]
fn zero_state_stays_zero() {
    let z = SpectralVectorField::zeros(grid(8));
    assert_eq!(vorticity_rhs(&z, 0.1).unwrap().max_mode(), 0.0);
    let next = step(&FlowState::new(0.0, z).unwrap(), &config(0.1, 0.01, 1.0)).unwrap();
    assert_eq!(next.t, 0.01);
    assert_eq!(next.omega.max_mode(), 0.0);
}

#[test]
fn rhs_inner_product_is_the_enstrophy_balance() {
    let w = dealias(&random_solenoidal(grid(16), 11, 3, 16));
    let nu = 0.03;
    let rhs = vorticity_rhs(&w, nu).unwrap();
    let grad = grad_lp_norm(&w, 2.0).unwrap();
    let expected = -nu * grad * grad + stretching_functional(&w);
    let scale = nu * grad * grad + stretching_functional(&w).abs();
    assert!((w.inner(&rhs) - expected).abs() <= 1e-10 * scale);
}

#[test]
fn one_beltrami_step_decays_exactly() {
    let w = abc(grid(16));
    let (nu, dt) = (0.1, 0.01);
    let next = step(&FlowState::new(0.0, w.clone()).unwrap(), &config(nu, dt, 1.0)).unwrap();
    assert!(rel(next.omega.l2_norm(), w.l2_norm() * (-nu * dt).exp()) < 1e-10);
}

/// Richardson self-convergence: the difference between runs at `h` and
/// `h/2` shrinks by 2^4 per halving for a fourth-order scheme.
#[test]
fn step_is_fourth_order() {
    let w = random_solenoidal(grid(16), 5, 2, 10);
    let w = w.scaled(2.0 / w.l2_norm().sqrt());
    let initial = FlowState::new(0.0, dealias(&w)).unwrap();
    let finals: Vec<SpectralVectorField> = [0.04, 0.02, 0.01, 0.005]
        .iter()
        .map(|&dt| {
            let cfg = SolverConfig { record_stride: 1000, ..config(0.02, dt, 0.4) };
            run_simulation(&initial, &cfg).unwrap().last().unwrap().omega.clone()
        })
        .collect();
    let diffs: Vec<f64> = finals
        .windows(2)
        .map(|p| p[0].add_scaled(-1.0, &p[1]).unwrap().mode_norm())
        .collect();
    for d in diffs.windows(2) {
        let order = (d[0] / d[1]).log2();
        assert!(order > 3.7, "order {order} from {diffs:?}");
    }
}

#[test]
fn trajectory_bookkeeping() {
    let w = abc(grid(8));
    let s0 = FlowState::new(0.0, w).unwrap();
    let single = run_simulation(&s0, &config(0.1, 0.01, 0.0)).unwrap();
    assert_eq!(single.states.len(), 1);

    let cfg = SolverConfig { record_stride: 3, ..config(0.1, 0.01, 0.1) };
    let traj = run_simulation(&s0, &cfg).unwrap();
    let times = traj.times();
    assert_eq!(times.len(), 5);
    assert!(times.windows(2).all(|p| p[1] > p[0]));
    assert_eq!(*times.last().unwrap(), 0.1);
    for st in &traj.states {
        assert!(st.omega.is_solenoidal());
        assert!(st.omega.mean_mode() <= 1e-12 * st.omega.mode_norm());
    }
    let again = run_simulation(&s0, &cfg).unwrap();
    assert_eq!(again, traj);
}

#[test]
fn invalid_configs_are_rejected() {
    let s0 = FlowState::new(0.0, abc(grid(8))).unwrap();
    assert!(run_simulation(&s0, &config(0.0, 0.01, 1.0)).is_err());
    assert!(run_simulation(&s0, &config(0.1, -0.01, 1.0)).is_err());
    let late = FlowState::new(2.0, abc(grid(8))).unwrap();
    assert!(run_simulation(&late, &config(0.1, 0.01, 1.0)).is_err());
}

#[test]
fn blow_up_keeps_the_partial_trajectory() {
    let w = random_solenoidal(grid(8), 2, 3, 8);
    let w = w.scaled(1e150 / w.max_mode());
    let s0 = FlowState::new(0.0, w).unwrap();
    let failure = run_simulation(&s0, &config(0.01, 0.1, 1.0)).unwrap_err();
    assert!(!failure.partial.states.is_empty());
    assert!(matches!(failure.error, vortbound::Error::BlowUp { .. }));
}
