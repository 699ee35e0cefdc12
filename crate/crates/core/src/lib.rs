//! Phase-field model of prostate tumor growth with nutrient and tissue PSA,
//! discretized with quadratic B-splines and integrated in time with the
//! generalized-α method.

pub mod error;
pub mod integrator;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod scenario;
pub mod spline;
pub mod state;
pub mod verification;

pub use error::{Error, Result};
pub use integrator::{AlphaParams, Simulator, StepControls, StepStats};
pub use model::{ModelParameters, Therapy, TherapySchedule};
pub use scenario::Scenario;
pub use spline::SplineSpace2D;
pub use state::SystemState;
