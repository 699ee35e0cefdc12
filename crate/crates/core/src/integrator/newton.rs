use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::norm2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonControls {
    /// Required reduction of each field's residual norm relative to its
    /// value at the first iterate.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Absolute norm below which a field counts as converged.
    pub abs_floor: f64,
}

impl Default for NewtonControls {
    fn default() -> Self {
        Self {
            tolerance: 1e-3,
            max_iterations: 20,
            abs_floor: 1e-12,
        }
    }
}

/// A nonlinear system `R(x) = 0` split into independently monitored fields.
pub trait NewtonProblem {
    /// Index ranges of the fields whose norms are checked separately.
    fn fields(&self) -> Vec<Range<usize>>;
    fn residual(&mut self, x: &[f64], out: &mut [f64]) -> Result<()>;
    /// Solves `J(x) dx = rhs`; returns the number of linear iterations.
    fn solve_tangent(&mut self, x: &[f64], rhs: &[f64], dx: &mut [f64]) -> Result<usize>;
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct NewtonStats {
    pub iterations: usize,
    pub linear_iterations: usize,
    /// Per-field residual norms, one entry per iterate (including the first).
    pub history: Vec<Vec<f64>>,
}

impl NewtonStats {
    pub fn final_norms(&self) -> &[f64] {
        self.history.last().map_or(&[], |v| v.as_slice())
    }
}

/// Newton–Raphson iteration from the predictor in `x`, updated in place.
///
/// Converged when every field satisfies
/// `‖R_f‖ ≤ max(tolerance · ‖R_f⁰‖, abs_floor)`, so that a field with a
/// small natural scale cannot hide behind a large one.
pub fn newton_solve(problem: &mut dyn NewtonProblem, x: &mut [f64], controls: &NewtonControls) -> Result<NewtonStats> {
    let fields = problem.fields();
    let mut r = vec![0.0; x.len()];
    let mut dx = vec![0.0; x.len()];
    let mut stats = NewtonStats::default();
    let norms_of = |r: &[f64]| -> Vec<f64> { fields.iter().map(|f| norm2(&r[f.clone()])).collect() };

    problem.residual(x, &mut r)?;
    let initial = norms_of(&r);
    let targets: Vec<f64> = initial.iter().map(|n| (controls.tolerance * n).max(controls.abs_floor)).collect();
    stats.history.push(initial.clone());
    let converged = |norms: &[f64]| norms.iter().zip(&targets).all(|(n, t)| n <= t);
    if initial.iter().all(|n| *n <= controls.abs_floor) {
        return Ok(stats);
    }

    loop {
        if stats.iterations >= controls.max_iterations || stats.history.last().unwrap().iter().any(|n| !n.is_finite()) {
            return Err(Error::NewtonDivergence {
                time: f64::NAN,
                iterations: stats.iterations,
                history: stats.history,
            });
        }
        r.iter_mut().for_each(|v| *v = -*v);
        dx.iter_mut().for_each(|v| *v = 0.0);
        stats.linear_iterations += problem.solve_tangent(x, &r, &mut dx)?;
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
        stats.iterations += 1;
        problem.residual(x, &mut r)?;
        let norms = norms_of(&r);
        let done = converged(&norms);
        stats.history.push(norms);
        if done {
            return Ok(stats);
        }
    }
}
