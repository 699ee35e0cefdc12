use super::*;
use crate::model::testing::mild;
use crate::model::Therapy;
use crate::spline::SplineSpace2D;
use crate::state::SystemState;

fn simulator(elements: usize, dt: f64) -> Simulator {
    let space = SplineSpace2D::new(3000.0, elements).unwrap();
    let controls = StepControls {
        dt,
        ..StepControls::default()
    };
    Simulator::new(space, mild(), Therapy::none(), AlphaParams::default(), controls).unwrap()
}

fn healthy(sim: &Simulator) -> SystemState {
    let p = sim.params();
    SystemState::uniform(sim.space(), 0.0, p.s_h / p.gamma_h, p.alpha_h / p.gamma_p)
}

#[test]
fn healthy_equilibrium_is_a_fixed_point() {
    let mut sim = simulator(16, 0.1);
    let s0 = healthy(&sim);
    let mut s = s0.clone();
    for _ in 0..5 {
        s = sim.advance(&s, 0.1).unwrap().0;
    }
    let drift = s.values.iter().zip(&s0.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(drift < 1e-9, "drift {drift}");
}

/// Spatially uniform p with φ ≡ 0 follows p' = α_h − γ_p p exactly in space.
fn uniform_psa_error(dt: f64) -> f64 {
    let mut sim = simulator(4, dt);
    sim.controls_mut().newton.tolerance = 1e-12;
    sim.controls_mut().gmres.tolerance = 1e-13;
    let p = *sim.params();
    let p0 = 0.5;
    let values = SystemState::uniform(sim.space(), 0.0, 1.0, p0).values;
    let mut s = sim.initialize(values, 0.0).unwrap();
    let steps = (4.0 / dt).round() as usize;
    for _ in 0..steps {
        s = sim.advance(&s, dt).unwrap().0;
    }
    let eq = p.alpha_h / p.gamma_p;
    let exact = eq + (p0 - eq) * (-p.gamma_p * 4.0).exp();
    s.psa().iter().map(|v| (v - exact).abs()).fold(0.0, f64::max)
}

#[test]
fn uniform_psa_is_second_order() {
    let errs: Vec<f64> = [0.4, 0.2, 0.1].iter().map(|&dt| uniform_psa_error(dt)).collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((1.8..2.2).contains(&order), "errors {errs:?}");
    }
}

#[test]
fn results_depend_on_elapsed_time_only() {
    let mut sim = simulator(8, 0.1);
    let space = sim.space().clone();
    let values = crate::spline::l2_project(&space, |x, y| {
        let r = ((x - 1500.0).powi(2) + (y - 1500.0).powi(2)).sqrt();
        0.5 - 0.5 * (10.0 * (r / 400.0 - 1.0)).tanh()
    })
    .unwrap();
    let mut full = SystemState::uniform(&space, 0.0, 1.0, 0.0625).values;
    full[..space.n_basis()].copy_from_slice(&values);
    let a = sim.initialize(full.clone(), 0.0).unwrap();
    let b = sim.initialize(full, 1000.0).unwrap();
    let ra = sim.run(a, 1.0, 0.5, &mut |_| Ok(())).unwrap();
    let rb = sim.run(b, 1.0, 0.5, &mut |_| Ok(())).unwrap();
    assert_eq!(rb.time, 1001.0);
    let diff = ra.values.iter().zip(&rb.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(diff <= 1e-12, "{diff}");
}

#[test]
fn observer_cadence_and_determinism() {
    let mut sim = simulator(4, 0.5);
    let s0 = healthy(&sim);
    let mut times = Vec::new();
    let end = sim
        .run(s0.clone(), 10.0, 1.0, &mut |o| {
            times.push(o.state.time);
            Ok(())
        })
        .unwrap();
    assert_eq!(times.len(), 11);
    assert_eq!(times[0], 0.0);
    assert_eq!(end.time, 10.0);
    let again = sim.run(s0, 10.0, 1.0, &mut |_| Ok(())).unwrap();
    assert_eq!(end, again);
}

#[test]
fn rejects_incommensurate_cadence() {
    let mut sim = simulator(4, 0.1);
    let s0 = healthy(&sim);
    assert!(sim.run(s0, 1.0, 0.25, &mut |_| Ok(())).is_err());
}

#[test]
fn dose_time_is_a_step_boundary_with_positive_effect() {
    let space = SplineSpace2D::new(3000.0, 4).unwrap();
    let therapy = Therapy {
        cytotoxic: Some(crate::model::TherapySchedule::periodic(0.35, 21.0, 1, 75.0, 1.59e-2, 5.0).unwrap()),
        antiangiogenic: None,
    };
    let controls = StepControls {
        dt: 0.1,
        ..StepControls::default()
    };
    let mut sim = Simulator::new(space, mild(), therapy, AlphaParams::default(), controls).unwrap();
    let s0 = healthy(&sim);
    let mut steps = Vec::new();
    let mut s = s0;
    // walk manually through run's observation hook at every grid point
    s = sim
        .run(s, 1.0, 0.1, &mut |o| {
            steps.push(o.state.time);
            Ok(())
        })
        .unwrap();
    assert_eq!(s.time, 1.0);
    assert_eq!(steps.len(), 11);
    let af = sim.alpha().alpha_f();
    assert!(sim.therapy().u(0.35 + af * 0.05) > 0.0);
    assert_eq!(sim.therapy().u(0.35 - 1e-9), 0.0);
}

#[test]
fn newton_divergence_reports_time() {
    let mut sim = simulator(4, 0.1);
    sim.controls_mut().newton.max_iterations = 1;
    sim.controls_mut().newton.tolerance = 1e-300;
    sim.controls_mut().newton.abs_floor = 0.0;
    let space = sim.space().clone();
    let mut values = SystemState::uniform(&space, 0.5, 0.3, 0.1).values;
    for i in 0..space.n_basis() {
        if space.is_boundary(i) {
            values[i] = 0.0;
        }
    }
    let s = sim.initialize(values, 7.0).unwrap();
    match sim.advance(&s, 0.1) {
        Err(crate::Error::NewtonDivergence { time, history, .. }) => {
            assert_eq!(time, 7.0);
            assert_eq!(history.len(), 2);
            assert!(history.iter().all(|h| h.len() == 3));
        }
        other => panic!("{other:?}"),
    }
}
