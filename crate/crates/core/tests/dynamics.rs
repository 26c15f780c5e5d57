use betadyne::dynamics::{
    ensemble_average, evolve_exact, integrate_master, mc_trajectory, propagate_nhh, trajectory_seed, TimeGrid,
};
use betadyne::linalg::{trace_distance, DensityMatrix, Ket, C64};
use betadyne::model::{betadyne, nhh_beta, UnravelingSpec};
use betadyne::scenarios::{build_driven_qubit, decay_qubit, DrivenQubitParams};
use betadyne::Error;

fn driven() -> betadyne::model::LindbladModel {
    build_driven_qubit(&DrivenQubitParams { omega: 1.0, gamma_minus: 1.0 }).unwrap()
}

fn excited() -> Ket {
    Ket::basis(2, 0).unwrap()
}

#[test]
fn first_jump_times_are_exponential() {
    // Kolmogorov-Smirnov against Exp(gamma) for the decay qubit
    let gamma = 1.0;
    let model = decay_qubit(gamma).unwrap();
    let grid = TimeGrid::new(0.0, 10.0, 10_000).unwrap();
    let n = 2000;
    let mut times: Vec<f64> = (0..n)
        .filter_map(|k| {
            mc_trajectory(&model, &excited(), &grid, trajectory_seed(11, k)).unwrap().jumps.first().map(|j| j.time)
        })
        .collect();
    times.sort_by(f64::total_cmp);
    let censored = n as usize - times.len();
    assert!(censored < 5);
    let mut d: f64 = 0.0;
    for (i, t) in times.iter().enumerate() {
        let cdf = 1.0 - (-gamma * t).exp();
        d = d.max((cdf - i as f64 / n as f64).abs()).max(((i + 1) as f64 / n as f64 - cdf).abs());
    }
    // 1% critical value of the one-sample statistic
    assert!(d < 1.63 / (n as f64).sqrt(), "KS statistic {d}");
}

#[test]
fn master_integrator_is_fourth_order() {
    let model = driven();
    let rho0 = DensityMatrix::pure(&excited()).unwrap();
    let exact = evolve_exact(&model, &rho0, 2.0).unwrap();
    let err = |steps: usize| {
        let states = integrate_master(&model, &rho0, &TimeGrid::new(0.0, 2.0, steps).unwrap()).unwrap();
        states.last().unwrap().operator().max_abs_diff(exact.operator())
    };
    let (e1, e2) = (err(20), err(40));
    let order = (e1 / e2).log2();
    assert!(order >= 3.5, "observed order {order} ({e1:e}, {e2:e})");
}

#[test]
fn trajectories_are_reproducible() {
    let model = betadyne(&driven(), &UnravelingSpec::uniform(1, C64::new(0.5, 0.5))).unwrap();
    let grid = TimeGrid::new(0.0, 3.0, 600).unwrap();
    let a = mc_trajectory(&model, &excited(), &grid, 42).unwrap();
    let b = mc_trajectory(&model, &excited(), &grid, 42).unwrap();
    assert_eq!(a, b);
    let c = mc_trajectory(&model, &excited(), &grid, 43).unwrap();
    assert_ne!(a.jumps, c.jumps);
}

#[test]
fn survival_is_monotone_and_states_normalized() {
    let model = betadyne(&driven(), &UnravelingSpec::uniform(1, C64::new(0.0, 0.7))).unwrap();
    let grid = TimeGrid::new(0.0, 4.0, 2000).unwrap();
    for seed in 0..20 {
        let r = mc_trajectory(&model, &excited(), &grid, seed).unwrap();
        assert!(r.survival.windows(2).all(|w| w[1] <= w[0]));
        assert!(r.survival.iter().all(|&p| p > 0.0 && p <= 1.0));
        assert!(r.states.iter().all(|s| (s.norm_sqr() - 1.0).abs() <= 1e-10));
    }
    let stats = ensemble_average(&model, &excited(), &grid, 500, 3).unwrap();
    assert!(stats.nojump_fraction.windows(2).all(|w| w[1] <= w[0]));
    for rho in &stats.mean_state {
        let op = rho.operator();
        assert!((op.trace().re - 1.0).abs() <= 1e-10 && op.hermiticity_defect() <= 1e-10);
    }
}

/// Survival of a jump-free trajectory compared with the exact no-jump norm.
fn nojump_error(steps: usize) -> f64 {
    let model = driven();
    let spec = UnravelingSpec::uniform(1, C64::new(0.3, 0.0));
    let unraveled = betadyne(&model, &spec).unwrap();
    let grid = TimeGrid::new(0.0, 0.5, steps).unwrap();
    let exact = propagate_nhh(&nhh_beta(&model, &spec).unwrap(), &excited(), &grid).unwrap();
    let record = (0..)
        .map(|seed| mc_trajectory(&unraveled, &excited(), &grid, seed).unwrap())
        .find(|r| r.jumps.is_empty())
        .unwrap();
    let last = steps;
    let state_err =
        trace_distance(&record.states[last].projector(), &exact.conditional(last).unwrap().projector()).unwrap();
    state_err.max((record.survival[last] - exact.survival[last]).abs())
}

#[test]
fn euler_nojump_step_converges_first_order() {
    let (e1, e2) = (nojump_error(100), nojump_error(200));
    let order = (e1 / e2).log2();
    assert!((order - 1.0).abs() < 0.2, "observed order {order} ({e1:e}, {e2:e})");
}

#[test]
fn ensemble_tracks_master_equation() {
    let model = driven();
    let grid = TimeGrid::new(0.0, 2.0, 400).unwrap();
    let rho0 = DensityMatrix::pure(&excited()).unwrap();
    let n = 2000;
    let stats = ensemble_average(
        &betadyne(&model, &UnravelingSpec::uniform(1, C64::new(0.0, 0.7))).unwrap(),
        &excited(),
        &grid,
        n,
        5,
    )
    .unwrap();
    let master = integrate_master(&model, &rho0, &grid).unwrap();
    let worst = stats
        .mean_state
        .iter()
        .zip(&master)
        .map(|(a, b)| trace_distance(a.operator(), b.operator()).unwrap())
        .fold(0.0, f64::max);
    assert!(worst <= 3.0 / (n as f64).sqrt(), "{worst}");
}

#[test]
fn coarse_step_is_rejected() {
    let model = betadyne(&decay_qubit(5.0).unwrap(), &UnravelingSpec::uniform(1, C64::new(2.0, 0.0))).unwrap();
    let grid = TimeGrid::new(0.0, 1.0, 10).unwrap();
    let err = mc_trajectory(&model, &excited(), &grid, 0).unwrap_err();
    assert!(matches!(err, Error::StepTooCoarse { .. }), "{err:?}");
}
