//! Scenario definitions: named presets, the TOML configuration format and
//! the initial state.

mod config;
mod io;
mod presets;

pub use config::{parse_config, to_config_string};
pub use io::{snapshot_file_name, write_snapshot, write_timeseries, TIMESERIES_HEADER};
pub use presets::{preset, preset_names, PLANS, TUMOR_CLASSES, VARIANTS};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{AlphaParams, NewtonControls, Simulator, StepControls};
use crate::linalg::GmresControls;
use crate::model::{validate_scenario, ModelParameters, ScenarioValidation, Therapy};
use crate::spline::{l2_project, SplineSpace2D};
use crate::state::SystemState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TumorClass {
    Mild,
    Aggressive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupplyVariant {
    Reference,
    RichSupply,
    PoorSupply,
    HighUptake,
    LowUptake,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TherapyPlan {
    None,
    Cytotoxic,
    Antiangiogenic,
    Combined,
}

/// Where a parameter value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Published,
    /// Chosen by calibration runs of this code; not a published value.
    Calibrated,
    User,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    /// Side length L_d [µm].
    pub side: f64,
    /// Elements per side.
    pub elements: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSettings {
    /// Step [day].
    pub dt: f64,
    /// Simulated time [day].
    pub horizon: f64,
    pub rho_inf: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    pub newton_tolerance: f64,
    pub newton_max_iterations: usize,
    pub newton_abs_floor: f64,
    pub gmres_tolerance: f64,
    pub gmres_max_iterations: usize,
    pub gmres_restart: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        let (n, g) = (NewtonControls::default(), GmresControls::default());
        Self {
            newton_tolerance: n.tolerance,
            newton_max_iterations: n.max_iterations,
            newton_abs_floor: n.abs_floor,
            gmres_tolerance: g.tolerance,
            gmres_max_iterations: g.max_iterations,
            gmres_restart: g.restart,
        }
    }
}

/// Ellipsoidal tanh tumor seed and affine σ₀, p₀ profiles in φ₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialCondition {
    /// Semi-axis along x [µm].
    pub a: f64,
    /// Semi-axis along y [µm].
    pub b: f64,
    /// Steepness of the tanh profile [-].
    pub sharpness: f64,
    pub c_sigma0: f64,
    pub c_sigma1: f64,
    pub c_p0: f64,
    pub c_p1: f64,
}

impl InitialCondition {
    /// φ₀ at (x, y) for a tumor centered in a square of side `side`.
    pub fn phi0(&self, side: f64, x: f64, y: f64) -> f64 {
        let (dx, dy) = (x - 0.5 * side, y - 0.5 * side);
        let r = (dx * dx / (self.a * self.a) + dy * dy / (self.b * self.b)).sqrt();
        0.5 - 0.5 * (self.sharpness * (r - 1.0)).tanh()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    /// Time-series cadence [day].
    pub timeseries_every: f64,
    /// Snapshot cadence [day]; 0 disables snapshots.
    pub snapshot_every: f64,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self {
            timeseries_every: 1.0,
            snapshot_every: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioInfo {
    pub name: String,
    pub tumor: TumorClass,
    pub variant: SupplyVariant,
    pub plan: TherapyPlan,
    /// Provenance of the tilting threshold σ_l and width σ_r.
    pub tilt_provenance: Provenance,
}

/// Everything needed to run one simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub scenario: ScenarioInfo,
    pub domain: Domain,
    pub time: TimeSettings,
    pub solver: SolverSettings,
    pub model: ModelParameters,
    pub initial: InitialCondition,
    pub output: OutputSettings,
    #[serde(default)]
    pub therapy: Therapy,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.therapy.validate()?;
        if !(self.domain.side > 0.0 && self.domain.side.is_finite()) {
            return Err(Error::param("domain.side", "must be positive"));
        }
        if self.domain.elements < 4 {
            return Err(Error::param("domain.elements", "must be at least 4"));
        }
        if !(self.time.horizon >= 0.0 && self.time.horizon.is_finite()) {
            return Err(Error::param("time.horizon", "must be non-negative"));
        }
        AlphaParams::from_rho_inf(self.time.rho_inf)?;
        self.step_controls().validate()?;
        let ic = &self.initial;
        for (name, v) in [("initial.a", ic.a), ("initial.b", ic.b), ("initial.sharpness", ic.sharpness)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, "must be positive"));
            }
        }
        let o = &self.output;
        if !(o.timeseries_every > 0.0) || !(o.snapshot_every >= 0.0) {
            return Err(Error::param("output", "cadences must be positive (snapshots: non-negative)"));
        }
        let multiple = |a: f64, b: f64| ((a / b) - (a / b).round()).abs() < 1e-9;
        if !multiple(o.timeseries_every, self.time.dt) {
            return Err(Error::param("output.timeseries_every", "must be a multiple of time.dt"));
        }
        if o.snapshot_every > 0.0 && !multiple(o.snapshot_every, o.timeseries_every) {
            return Err(Error::param("output.snapshot_every", "must be a multiple of output.timeseries_every"));
        }
        Ok(())
    }

    /// Double-well and supply-positivity checks over the horizon.
    pub fn check(&self) -> ScenarioValidation {
        validate_scenario(&self.model, &self.therapy, self.time.horizon)
    }

    pub fn step_controls(&self) -> StepControls {
        let s = &self.solver;
        StepControls {
            dt: self.time.dt,
            newton: NewtonControls {
                tolerance: s.newton_tolerance,
                max_iterations: s.newton_max_iterations,
                abs_floor: s.newton_abs_floor,
            },
            gmres: GmresControls {
                tolerance: s.gmres_tolerance,
                max_iterations: s.gmres_max_iterations,
                restart: s.gmres_restart,
            },
        }
    }

    pub fn space(&self) -> Result<SplineSpace2D> {
        SplineSpace2D::new(self.domain.side, self.domain.elements)
    }

    pub fn simulator(&self) -> Result<Simulator> {
        self.validate()?;
        Simulator::new(
            self.space()?,
            self.model,
            self.therapy.clone(),
            AlphaParams::from_rho_inf(self.time.rho_inf)?,
            self.step_controls(),
        )
    }

    /// Control variables of the L² projections of φ₀, σ₀ and p₀, with the
    /// boundary entries of Φ zeroed.
    pub fn initial_values(&self, space: &SplineSpace2D) -> Result<Vec<f64>> {
        let ic = self.initial;
        let side = space.side();
        let mut values = l2_project(space, |x, y| ic.phi0(side, x, y))?;
        for (i, v) in values.iter_mut().enumerate() {
            if space.is_boundary(i) {
                *v = 0.0;
            }
        }
        values.extend(l2_project(space, |x, y| ic.c_sigma0 + ic.c_sigma1 * ic.phi0(side, x, y))?);
        values.extend(l2_project(space, |x, y| ic.c_p0 + ic.c_p1 * ic.phi0(side, x, y))?);
        Ok(values)
    }

    /// Initial state with consistently initialized rates.
    pub fn initial_state(&self, sim: &Simulator) -> Result<SystemState> {
        sim.initialize(self.initial_values(sim.space())?, 0.0)
    }
}
