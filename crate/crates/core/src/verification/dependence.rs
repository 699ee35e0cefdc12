//! Stability of the discrete solution map with respect to the initial tumor
//! field and the cytotoxic drug effect. The continuous estimate bounds
//! ‖φ₁ − φ₂‖ by the data differences; here the discrete analogue is measured
//! and checked to be linear in the perturbation size.

use serde::Serialize;

use crate::error::Result;
use crate::model::{Therapy, TherapySchedule};
use crate::scenario::Scenario;
use crate::spline::{load_vector, MassSolver, SplineSpace2D};
use crate::state::SystemState;

use super::mms::tight_controls;

/// L² norm of the spline field with coefficients `c`.
pub fn l2_norm(space: &SplineSpace2D, c: &[f64]) -> f64 {
    let mut acc = 0.0;
    space.for_each_quadrature_point([c], |_, _, w, [v]| acc += w * v * v);
    acc.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DependenceRatio {
    /// Perturbation size in its data norm.
    pub delta: f64,
    /// sup over observed times of ‖Δφ(t)‖_{L²}.
    pub sup_difference: f64,
    /// `sup_difference / delta`, or zero when `delta` is zero.
    pub ratio: f64,
}

/// Which datum is perturbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Perturbation {
    /// Initial tumor field, by `δ ψ / ‖ψ‖` with a smooth ψ vanishing on the boundary.
    InitialPhase,
    /// Cytotoxic effect, by one dose at t = 0 scaled so ‖Δu‖_{L²(0,T;L²)} = δ.
    Cytotoxic,
}

fn run_phi(scenario: &Scenario, values: Vec<f64>, therapy: Therapy, horizon: f64, every: f64) -> Result<Vec<Vec<f64>>> {
    let mut sc = scenario.clone();
    sc.therapy = therapy;
    let mut sim = sc.simulator()?;
    *sim.controls_mut() = tight_controls(sc.time.dt);
    let s0: SystemState = sim.initialize(values, 0.0)?;
    let mut out = Vec::new();
    sim.run(s0, horizon, every, &mut |o| {
        out.push(o.state.phi().to_vec());
        Ok(())
    })?;
    Ok(out)
}

/// Runs the base scenario and one perturbed run per `delta`, observing every
/// `every` days over `horizon`, with tight solver tolerances so that the
/// algebraic error stays far below the perturbation.
pub fn continuous_dependence_probe(
    scenario: &Scenario,
    kind: Perturbation,
    deltas: &[f64],
    horizon: f64,
    every: f64,
) -> Result<Vec<DependenceRatio>> {
    let space = scenario.space()?;
    let base_values = scenario.initial_values(&space)?;
    let base = run_phi(scenario, base_values.clone(), scenario.therapy.clone(), horizon, every)?;
    let nb = space.n_basis();

    let side = space.side();
    let mut shape = load_vector(&space, |x, y| {
        (std::f64::consts::PI * x / side).sin() * (std::f64::consts::PI * y / side).sin()
    });
    MassSolver::new(&space)?.solve_interior(&mut shape);
    let shape_norm = l2_norm(&space, &shape);

    let mut out = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let runs = match kind {
            Perturbation::InitialPhase => {
                let mut v = base_values.clone();
                for (vi, si) in v[..nb].iter_mut().zip(&shape) {
                    *vi += delta * si / shape_norm;
                }
                run_phi(scenario, v, scenario.therapy.clone(), horizon, every)?
            }
            Perturbation::Cytotoxic => {
                let therapy = if delta == 0.0 {
                    scenario.therapy.clone()
                } else {
                    // ‖β a e^{-t/τ}‖²_{L²(0,T;L²)} = (βa)² |Ω| τ/2 (1 − e^{−2T/τ})
                    let tau = 5.0;
                    let scale = (space.area() * 0.5 * tau * (1.0 - (-2.0 * horizon / tau).exp())).sqrt();
                    let dose = TherapySchedule::periodic(0.0, 1.0, 1, delta / scale, 1.0, tau)?;
                    Therapy {
                        cytotoxic: Some(dose),
                        antiangiogenic: scenario.therapy.antiangiogenic.clone(),
                    }
                };
                run_phi(scenario, base_values.clone(), therapy, horizon, every)?
            }
        };
        let sup = base
            .iter()
            .zip(&runs)
            .map(|(a, b)| {
                let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
                l2_norm(&space, &d)
            })
            .fold(0.0, f64::max);
        out.push(DependenceRatio {
            delta,
            sup_difference: sup,
            ratio: if delta == 0.0 { 0.0 } else { sup / delta },
        });
    }
    Ok(out)
}

/// Relative spread `|r₁ − r₂| / max(r₁, r₂)` of two ratios.
pub fn ratio_spread(a: &DependenceRatio, b: &DependenceRatio) -> f64 {
    (a.ratio - b.ratio).abs() / a.ratio.max(b.ratio)
}
