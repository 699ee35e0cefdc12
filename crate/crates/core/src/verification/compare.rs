//! Production step against the dense oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::integrator::{AlphaParams, Simulator, StepControls};
use crate::model::{ModelParameters, Therapy};
use crate::spline::{assemble_residual, Drugs, SplineSpace2D, StageValues};
use crate::state::SystemState;

use super::oracle::OracleResidual;

/// Random admissible state: φ in [0, 1] with zero boundary values and rates,
/// σ in [0.1, 1.1], p in [0, 0.8], rates in [−0.1, 0.1].
pub fn random_state(space: &SplineSpace2D, rng: &mut ChaCha8Rng) -> SystemState {
    let nb = space.n_basis();
    let mut values = vec![0.0; 3 * nb];
    let mut rates = vec![0.0; 3 * nb];
    for i in 0..nb {
        if !space.is_boundary(i) {
            values[i] = rng.gen_range(0.0..1.0);
            rates[i] = rng.gen_range(-0.1..0.1);
        }
        values[nb + i] = rng.gen_range(0.1..1.1);
        values[2 * nb + i] = rng.gen_range(0.0..0.8);
        rates[nb + i] = rng.gen_range(-0.1..0.1);
        rates[2 * nb + i] = rng.gen_range(-0.1..0.1);
    }
    SystemState::new(0.0, values, rates)
}

/// Largest difference between production and oracle residuals at random
/// stage states, relative to the largest residual entry.
pub fn residual_discrepancy(
    side: f64,
    n_el: usize,
    params: ModelParameters,
    quadrature_points: usize,
    zero_phase: bool,
    states: usize,
    seed: u64,
) -> Result<f64> {
    let space = SplineSpace2D::new(side, n_el)?;
    let oracle = OracleResidual::new(side, n_el, params, quadrature_points);
    let nb = space.n_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut out = vec![0.0; 3 * nb];
    for _ in 0..states {
        let mut s = random_state(&space, &mut rng);
        if zero_phase {
            s.values[..nb].iter_mut().for_each(|v| *v = 0.0);
            s.rates[..nb].iter_mut().for_each(|v| *v = 0.0);
        }
        let drugs = Drugs {
            u: rng.gen_range(0.0..1.0),
            s: rng.gen_range(0.0..0.5),
        };
        assemble_residual(&space, &params, StageValues { rates: &s.rates, values: &s.values }, drugs, None, &mut out)?;
        let reference = oracle.residual(&s.rates, &s.values, drugs.u, drugs.s);
        let scale = reference.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = out.iter().zip(&reference).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        worst = worst.max(diff / scale);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepComparison {
    /// Max coefficient difference of the new values, relative to the largest value.
    pub values: f64,
    /// Same for the new rates, relative to the largest rate.
    pub rates: f64,
}

impl StepComparison {
    pub fn worst(&self) -> f64 {
        self.values.max(self.rates)
    }
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

/// One production step (with `controls`) against one oracle step from the
/// same state, for `states` random states.
#[allow(clippy::too_many_arguments)]
pub fn step_comparison(
    side: f64,
    n_el: usize,
    params: ModelParameters,
    therapy: &Therapy,
    controls: StepControls,
    states: usize,
    seed: u64,
) -> Result<Vec<StepComparison>> {
    let space = SplineSpace2D::new(side, n_el)?;
    let oracle = OracleResidual::new(side, n_el, params, 3);
    let alpha = AlphaParams::default();
    let dt = controls.dt;
    let mut sim = Simulator::new(space.clone(), params, therapy.clone(), alpha, controls)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(states);
    for _ in 0..states {
        let mut s = random_state(&space, &mut rng);
        s.time = rng.gen_range(0.0..120.0);
        let (next, _) = sim.advance(&s, dt)?;
        let (values, rates) = oracle.step(&s.values, &s.rates, s.time, dt, alpha.rho_inf(), therapy, 1e-13)?;
        out.push(StepComparison {
            values: rel_diff(&next.values, &values),
            rates: rel_diff(&next.rates, &rates),
        });
    }
    Ok(out)
}
