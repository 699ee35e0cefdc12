//! Scalar diagnostics extracted from a state: tumor volume, serum PSA, bound
//! monitoring and contour morphology.

mod bounds;
mod contour;
mod psa;

pub use bounds::{bounds_monitor, BoundTolerance, BoundsReport, Extremum};
pub use contour::{isoperimetric_ratio, lattice_contour, level_contour, Contour};
pub use psa::{psa_ode_residual, PsaSample};

use serde::Serialize;

use crate::spline::SplineSpace2D;
use crate::state::SystemState;

/// µm² per mm².
pub const UM2_PER_MM2: f64 = 1.0e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TumorVolume {
    /// ∫φ [µm²].
    pub tumor: f64,
    /// |Ω| − ∫φ [µm²].
    pub healthy: f64,
    /// ∫φ / |Ω|.
    pub fraction: f64,
}

impl TumorVolume {
    pub fn tumor_mm2(&self) -> f64 {
        self.tumor / UM2_PER_MM2
    }

    pub fn healthy_mm2(&self) -> f64 {
        self.healthy / UM2_PER_MM2
    }
}

/// Tumor volume V_c = ∫φ dx and its complement.
pub fn tumor_volume(space: &SplineSpace2D, phi: &[f64]) -> TumorVolume {
    let area = space.area();
    let tumor = space.integrate(phi);
    TumorVolume {
        tumor,
        healthy: area - tumor,
        fraction: tumor / area,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SerumPsa {
    /// ∫p dx [ng/mL/cc · µm²].
    pub raw: f64,
    /// ∫p dx / |Ω| [ng/mL/cc].
    pub mean: f64,
}

/// Serum PSA as the integral of tissue PSA over the domain.
pub fn serum_psa(space: &SplineSpace2D, psa: &[f64]) -> SerumPsa {
    let raw = space.integrate(psa);
    SerumPsa {
        raw,
        mean: raw / space.area(),
    }
}

/// Measure of `{φ > 1/2}` estimated at the quadrature points [µm²].
pub fn thresholded_area(space: &SplineSpace2D, phi: &[f64]) -> f64 {
    let mut area = 0.0;
    space.for_each_quadrature_point([phi], |_, _, w, [v]| {
        if v > 0.5 {
            area += w;
        }
    });
    area
}

/// One row of the scalar time series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub time: f64,
    pub volume: TumorVolume,
    pub psa: SerumPsa,
    pub u: f64,
    pub s: f64,
    pub bounds: BoundsReport,
    pub newton_iterations: usize,
    pub gmres_iterations: usize,
}

impl Diagnostics {
    pub fn from_observation(obs: &crate::integrator::Observation<'_>) -> Self {
        let mut d = diagnose(obs.sim.space(), obs.sim.therapy(), obs.state);
        d.newton_iterations = obs.stats.newton_iterations;
        d.gmres_iterations = obs.stats.gmres_iterations;
        d
    }

    pub fn psa_sample(&self) -> PsaSample {
        PsaSample {
            t: self.time,
            serum: self.psa.raw,
            healthy: self.volume.healthy,
            tumor: self.volume.tumor,
        }
    }
}

/// Diagnostics of a state outside a running simulation.
pub fn diagnose(space: &SplineSpace2D, therapy: &crate::model::Therapy, state: &SystemState) -> Diagnostics {
    Diagnostics {
        time: state.time,
        volume: tumor_volume(space, state.phi()),
        psa: serum_psa(space, state.psa()),
        u: therapy.u(state.time),
        s: therapy.s(state.time),
        bounds: bounds_monitor(space, state),
        newton_iterations: 0,
        gmres_iterations: 0,
    }
}
