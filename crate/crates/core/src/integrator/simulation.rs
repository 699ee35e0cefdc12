use super::stepper::{Simulator, StepStats};
use crate::error::{Error, Result};
use crate::state::SystemState;

/// Step boundaries closer than this fraction of Δt are merged.
const SNAP_FRACTION: f64 = 1e-6;

/// What an observer sees at an observation time.
#[derive(Debug)]
pub struct Observation<'a> {
    pub sim: &'a Simulator,
    pub state: &'a SystemState,
    /// Index of the observation (0 at the initial state).
    pub index: usize,
    /// Solver work accumulated since the previous observation.
    pub stats: &'a StepStats,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Boundary {
    time: f64,
    /// Grid index if the boundary lies on the constant-Δt grid.
    grid: Option<usize>,
}

/// Step boundaries from `t0` to `t0 + duration`: the constant-Δt grid plus
/// any dose time falling strictly between grid points.
fn step_boundaries(t0: f64, duration: f64, dt: f64, doses: &[f64]) -> Vec<Boundary> {
    let snap = SNAP_FRACTION * dt;
    let end = t0 + duration;
    let n = ((duration / dt) + SNAP_FRACTION).floor() as usize;
    let mut out: Vec<Boundary> = (0..=n)
        .map(|k| Boundary {
            time: t0 + k as f64 * dt,
            grid: Some(k),
        })
        .collect();
    if end - out[n].time > snap {
        out.push(Boundary { time: end, grid: None });
    } else {
        out[n].time = end;
    }
    for &d in doses {
        if d <= t0 + snap || d >= end - snap {
            continue;
        }
        match out.iter_mut().find(|b| (b.time - d).abs() <= snap) {
            Some(b) => b.time = d,
            None => out.push(Boundary { time: d, grid: None }),
        }
    }
    out.sort_by(|a, b| a.time.total_cmp(&b.time));
    out
}

impl Simulator {
    /// Advances `initial` over `duration` days with the configured Δt,
    /// placing a step boundary at every dose time, and calls `observer` at
    /// the initial state and every `observe_every` days.
    pub fn run(
        &mut self,
        initial: SystemState,
        duration: f64,
        observe_every: f64,
        observer: &mut dyn FnMut(Observation<'_>) -> Result<()>,
    ) -> Result<SystemState> {
        if !(duration >= 0.0 && duration.is_finite()) {
            return Err(Error::param("horizon", "must be non-negative and finite"));
        }
        let dt = self.controls().dt;
        let every = (observe_every / dt).round() as usize;
        if every == 0 || (every as f64 * dt - observe_every).abs() > SNAP_FRACTION * dt {
            return Err(Error::param(
                "observe_every",
                format!("must be a positive multiple of dt = {dt}, got {observe_every}"),
            ));
        }
        let bounds = step_boundaries(initial.time, duration, dt, &self.therapy().dose_times());
        let mut state = initial;
        let mut pending = StepStats::default();
        let mut index = 0;
        observer(Observation {
            sim: self,
            state: &state,
            index,
            stats: &pending,
        })?;
        for w in bounds.windows(2) {
            let (a, b) = (w[0], w[1]);
            let t_start = state.time;
            let (mut next, stats) = self.advance(&state, b.time - a.time).map_err(|e| match e {
                e @ Error::NewtonDivergence { .. } => e,
                other => Error::Step {
                    time: t_start,
                    source: Box::new(other),
                },
            })?;
            // pin the clock to the boundary so no rounding drift accumulates
            next.time = b.time;
            state = next;
            pending.accumulate(&stats);
            if b.grid.is_some_and(|k| k % every == 0) {
                index += 1;
                observer(Observation {
                    sim: self,
                    state: &state,
                    index,
                    stats: &pending,
                })?;
                pending = StepStats::default();
            }
        }
        Ok(state)
    }
}
