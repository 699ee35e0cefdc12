//! Generalized-α time stepping with Newton–Krylov stage solves.

mod alpha;
mod newton;
mod simulation;
mod stepper;

pub use alpha::AlphaParams;
pub use newton::{newton_solve, NewtonControls, NewtonProblem, NewtonStats};
pub use simulation::Observation;
pub use stepper::{Forcing, Simulator, StepControls, StepStats};

#[cfg(test)]
mod tests;
