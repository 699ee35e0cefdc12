use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::alpha::AlphaParams;
use super::newton::{newton_solve, NewtonControls, NewtonProblem};
use crate::error::{Error, Result};
use crate::linalg::{gmres_solve, GmresControls, Jacobi};
use crate::model::{ModelParameters, Therapy};
use crate::spline::{
    assemble_residual, Drugs, JacobianAssembler, MassSolver, SplineSpace2D, StageValues, TangentScaling,
};
use crate::state::SystemState;

/// Time-dependent volumetric forcing `(t, x, y) -> (f_φ, f_σ, f_p)`.
pub type Forcing = Box<dyn Fn(f64, f64, f64) -> [f64; 3] + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControls {
    /// Time step [day].
    pub dt: f64,
    pub newton: NewtonControls,
    pub gmres: GmresControls,
}

impl Default for StepControls {
    fn default() -> Self {
        Self {
            dt: 0.1,
            newton: NewtonControls::default(),
            gmres: GmresControls::default(),
        }
    }
}

impl StepControls {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param("dt", "must be positive and finite"));
        }
        if !(self.newton.tolerance > 0.0 && self.newton.tolerance.is_finite()) {
            return Err(Error::param("newton.tolerance", "must be positive"));
        }
        if self.newton.max_iterations == 0 {
            return Err(Error::param("newton.max_iterations", "must be at least 1"));
        }
        if !(self.newton.abs_floor >= 0.0) {
            return Err(Error::param("newton.abs_floor", "must be non-negative"));
        }
        self.gmres.validate()
    }
}

/// Solver statistics of one step (or accumulated over several).
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StepStats {
    pub newton_iterations: usize,
    pub gmres_iterations: usize,
    /// Linear solves that hit the GMRES iteration cap.
    pub gmres_unconverged: usize,
    /// Per-field residual norms at the accepted iterate.
    pub final_norms: Vec<f64>,
}

impl StepStats {
    pub fn accumulate(&mut self, other: &StepStats) {
        self.newton_iterations += other.newton_iterations;
        self.gmres_iterations += other.gmres_iterations;
        self.gmres_unconverged += other.gmres_unconverged;
        self.final_norms.clone_from(&other.final_norms);
    }
}

/// Generalized-α integrator for the coupled φ / σ / p system.
pub struct Simulator {
    space: SplineSpace2D,
    params: ModelParameters,
    therapy: Therapy,
    alpha: AlphaParams,
    controls: StepControls,
    assembler: JacobianAssembler,
    mass: MassSolver,
    forcing: Option<Forcing>,
}

impl std::fmt::Debug for Simulator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Simulator")
            .field("elements", &self.space.elements_per_side())
            .field("params", &self.params)
            .field("alpha", &self.alpha)
            .field("controls", &self.controls)
            .field("forcing", &self.forcing.is_some())
            .finish()
    }
}

impl Simulator {
    pub fn new(
        space: SplineSpace2D,
        params: ModelParameters,
        therapy: Therapy,
        alpha: AlphaParams,
        controls: StepControls,
    ) -> Result<Self> {
        params.validate()?;
        therapy.validate()?;
        controls.validate()?;
        let assembler = JacobianAssembler::new(&space);
        let mass = MassSolver::new(&space)?;
        Ok(Self {
            space,
            params,
            therapy,
            alpha,
            controls,
            assembler,
            mass,
            forcing: None,
        })
    }

    /// Adds a volumetric forcing to every equation (manufactured solutions).
    pub fn with_forcing(mut self, forcing: Forcing) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn space(&self) -> &SplineSpace2D {
        &self.space
    }

    pub fn params(&self) -> &ModelParameters {
        &self.params
    }

    pub fn therapy(&self) -> &Therapy {
        &self.therapy
    }

    pub fn alpha(&self) -> AlphaParams {
        self.alpha
    }

    pub fn controls(&self) -> &StepControls {
        &self.controls
    }

    pub fn controls_mut(&mut self) -> &mut StepControls {
        &mut self.controls
    }

    pub fn drugs_at(&self, t: f64) -> Drugs {
        Drugs {
            u: self.therapy.u(t),
            s: self.therapy.s(t),
        }
    }

    /// Absolute Newton floor for the discrete residual norm: the configured
    /// floor is a pointwise residual density, and `‖R‖₂ ≈ r · h · L`.
    fn newton_controls(&self) -> NewtonControls {
        let mut c = self.controls.newton;
        c.abs_floor *= self.space.element_size() * self.space.side();
        c
    }

    fn residual(&self, t: f64, stage: StageValues<'_>, out: &mut [f64]) -> Result<()> {
        let drugs = self.drugs_at(t);
        match &self.forcing {
            Some(f) => {
                let src = |x: f64, y: f64| f(t, x, y);
                assemble_residual(&self.space, &self.params, stage, drugs, Some(&src), out)
            }
            None => assemble_residual(&self.space, &self.params, stage, drugs, None, out),
        }
    }

    /// Rates solving `M U̇ = −R_spatial(U)` field by field, with the φ rates
    /// zero on the boundary.
    pub fn consistent_rates(&self, values: &[f64], t: f64) -> Result<Vec<f64>> {
        let zero = vec![0.0; values.len()];
        let mut r = vec![0.0; values.len()];
        self.residual(t, StageValues { rates: &zero, values }, &mut r)?;
        r.iter_mut().for_each(|v| *v = -*v);
        let nb = self.space.n_basis();
        let (phi, rest) = r.split_at_mut(nb);
        self.mass.solve_interior(phi);
        let (sigma, psa) = rest.split_at_mut(nb);
        self.mass.solve(sigma);
        self.mass.solve(psa);
        Ok(r)
    }

    /// State at time `t` with consistently initialized rates.
    pub fn initialize(&self, values: Vec<f64>, t: f64) -> Result<SystemState> {
        let mut values = values;
        for (i, v) in values.iter_mut().take(self.space.n_basis()).enumerate() {
            if self.space.is_boundary(i) {
                *v = 0.0;
            }
        }
        let rates = self.consistent_rates(&values, t)?;
        let state = SystemState::new(t, values, rates);
        state.check(&self.space)?;
        Ok(state)
    }

    /// One generalized-α step of size `dt` from `state`.
    pub fn advance(&mut self, state: &SystemState, dt: f64) -> Result<(SystemState, StepStats)> {
        state.check(&self.space)?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::param("dt", "must be positive and finite"));
        }
        let (am, af, gamma) = (self.alpha.alpha_m(), self.alpha.alpha_f(), self.alpha.gamma());
        let t_stage = state.time + af * dt;
        let mut x: Vec<f64> = state.rates.iter().map(|r| (gamma - 1.0) / gamma * r).collect();
        let newton = self.newton_controls();
        let gmres = self.controls.gmres;
        let n = x.len();
        let mut problem = StageProblem {
            sim: self,
            state,
            dt,
            t_stage,
            coeffs: (am, af, gamma),
            gmres,
            stage_rates: vec![0.0; n],
            stage_values: vec![0.0; n],
            gmres_iterations: 0,
            gmres_unconverged: 0,
        };
        let stats = newton_solve(&mut problem, &mut x, &newton).map_err(|e| match e {
            Error::NewtonDivergence { iterations, history, .. } => Error::NewtonDivergence {
                time: state.time,
                iterations,
                history,
            },
            other => other,
        })?;
        let (gmres_iterations, gmres_unconverged) = (problem.gmres_iterations, problem.gmres_unconverged);
        let values = state
            .values
            .iter()
            .zip(&state.rates)
            .zip(&x)
            .map(|((u, r0), r1)| u + dt * r0 + gamma * dt * (r1 - r0))
            .collect();
        let next = SystemState::new(state.time + dt, values, x);
        Ok((
            next,
            StepStats {
                newton_iterations: stats.iterations,
                gmres_iterations,
                gmres_unconverged,
                final_norms: stats.final_norms().to_vec(),
            },
        ))
    }
}

struct StageProblem<'a> {
    sim: &'a mut Simulator,
    state: &'a SystemState,
    dt: f64,
    t_stage: f64,
    coeffs: (f64, f64, f64),
    gmres: GmresControls,
    stage_rates: Vec<f64>,
    stage_values: Vec<f64>,
    gmres_iterations: usize,
    gmres_unconverged: usize,
}

impl StageProblem<'_> {
    /// Stage rates U̇_{n+α_m} and values U_{n+α_f} for a trial U̇_{n+1}.
    fn set_stage(&mut self, x: &[f64]) {
        let (am, af, gamma) = self.coeffs;
        let dt = self.dt;
        for i in 0..x.len() {
            let (u0, r0) = (self.state.values[i], self.state.rates[i]);
            self.stage_rates[i] = r0 + am * (x[i] - r0);
            let u1 = u0 + dt * r0 + gamma * dt * (x[i] - r0);
            self.stage_values[i] = u0 + af * (u1 - u0);
        }
    }
}

impl NewtonProblem for StageProblem<'_> {
    fn fields(&self) -> Vec<Range<usize>> {
        let nb = self.sim.space.n_basis();
        vec![0..nb, nb..2 * nb, 2 * nb..3 * nb]
    }

    fn residual(&mut self, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.set_stage(x);
        let stage = StageValues {
            rates: &self.stage_rates,
            values: &self.stage_values,
        };
        self.sim.residual(self.t_stage, stage, out)
    }

    fn solve_tangent(&mut self, x: &[f64], rhs: &[f64], dx: &mut [f64]) -> Result<usize> {
        self.set_stage(x);
        let (am, af, gamma) = self.coeffs;
        let scaling = TangentScaling {
            mass: am,
            stiffness: af * gamma * self.dt,
        };
        let drugs = self.sim.drugs_at(self.t_stage);
        let sim = &mut *self.sim;
        let a = sim.assembler.assemble(&sim.space, &sim.params, &self.stage_values, scaling, drugs)?;
        let precond = Jacobi::new(a)?;
        let report = gmres_solve(a, rhs, dx, &precond, &self.gmres)?;
        self.gmres_iterations += report.iterations;
        if !report.converged {
            self.gmres_unconverged += 1;
        }
        Ok(report.iterations)
    }
}
