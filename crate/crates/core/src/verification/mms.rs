//! Manufactured solutions: a forcing is added to every equation so that
//! prescribed smooth fields solve the discrete problem up to discretization
//! error, and the error is measured against them.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrator::{AlphaParams, NewtonControls, Simulator, StepControls};
use crate::linalg::GmresControls;
use crate::model::{ModelParameters, Therapy};
use crate::spline::{load_vector, GaussRule, MassSolver, SplineSpace2D, LOCAL};

/// Exact fields `(φ*, σ*, p*)` with their derivatives.
pub trait Manufactured: Send + Sync {
    fn value(&self, t: f64, x: f64, y: f64) -> [f64; 3];
    fn time_derivative(&self, t: f64, x: f64, y: f64) -> [f64; 3];
    fn gradient(&self, t: f64, x: f64, y: f64) -> [[f64; 2]; 3];
    fn laplacian(&self, t: f64, x: f64, y: f64) -> [f64; 3];
}

/// Low-frequency trigonometric fields on [0, L]²: φ* vanishes on the
/// boundary, σ* and p* have zero normal derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigSolution {
    pub side: f64,
    /// Drop the time dependence (all time factors equal one).
    pub stationary: bool,
}

impl TrigSolution {
    fn factors(&self, t: f64) -> ([f64; 3], [f64; 3]) {
        if self.stationary {
            return ([1.0; 3], [0.0; 3]);
        }
        (
            [1.0 + 0.5 * t * t, 1.0 + 0.5 * t.sin(), (-0.5 * t).exp()],
            [t, 0.5 * t.cos(), -0.5 * (-0.5 * t).exp()],
        )
    }

    fn shapes(&self, x: f64, y: f64) -> ([f64; 3], [[f64; 2]; 3], [f64; 3]) {
        let k = PI / self.side;
        let (sx, sy, cx, cy) = ((k * x).sin(), (k * y).sin(), (k * x).cos(), (k * y).cos());
        let (c2x, s2x) = ((2.0 * k * x).cos(), (2.0 * k * x).sin());
        let value = [0.5 * sx * sy, 0.2 * cx * cy, 0.1 * c2x * cy];
        let grad = [
            [0.5 * k * cx * sy, 0.5 * k * sx * cy],
            [-0.2 * k * sx * cy, -0.2 * k * cx * sy],
            [-0.2 * k * s2x * cy, -0.1 * k * c2x * sy],
        ];
        let lap = [-2.0 * k * k * value[0], -2.0 * k * k * value[1], -5.0 * k * k * value[2]];
        (value, grad, lap)
    }
}

const OFFSET: [f64; 3] = [0.0, 0.6, 0.3];

impl Manufactured for TrigSolution {
    fn value(&self, t: f64, x: f64, y: f64) -> [f64; 3] {
        let (f, _) = self.factors(t);
        let (v, _, _) = self.shapes(x, y);
        [0, 1, 2].map(|i| OFFSET[i] + f[i] * v[i])
    }
    fn time_derivative(&self, t: f64, x: f64, y: f64) -> [f64; 3] {
        let (_, df) = self.factors(t);
        let (v, _, _) = self.shapes(x, y);
        [0, 1, 2].map(|i| df[i] * v[i])
    }
    fn gradient(&self, t: f64, x: f64, y: f64) -> [[f64; 2]; 3] {
        let (f, _) = self.factors(t);
        let (_, g, _) = self.shapes(x, y);
        [0, 1, 2].map(|i| [f[i] * g[i][0], f[i] * g[i][1]])
    }
    fn laplacian(&self, t: f64, x: f64, y: f64) -> [f64; 3] {
        let (f, _) = self.factors(t);
        let (_, _, l) = self.shapes(x, y);
        [0, 1, 2].map(|i| f[i] * l[i])
    }
}

/// Spatially constant fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantSolution(pub [f64; 3]);

impl Manufactured for ConstantSolution {
    fn value(&self, _: f64, _: f64, _: f64) -> [f64; 3] {
        self.0
    }
    fn time_derivative(&self, _: f64, _: f64, _: f64) -> [f64; 3] {
        [0.0; 3]
    }
    fn gradient(&self, _: f64, _: f64, _: f64) -> [[f64; 2]; 3] {
        [[0.0; 2]; 3]
    }
    fn laplacian(&self, _: f64, _: f64, _: f64) -> [f64; 3] {
        [0.0; 3]
    }
}

/// Rejects fields violating φ* = 0 or ∂σ*/∂n = ∂p*/∂n = 0 on the boundary.
pub fn check_compatibility(sol: &dyn Manufactured, side: f64, times: &[f64]) -> Result<()> {
    let samples = 17;
    for &t in times {
        for k in 0..=samples {
            let s = side * k as f64 / samples as f64;
            // (point, outward normal)
            for (x, y, n) in [(s, 0.0, [0.0, -1.0]), (s, side, [0.0, 1.0]), (0.0, s, [-1.0, 0.0]), (side, s, [1.0, 0.0])] {
                let v = sol.value(t, x, y);
                let g = sol.gradient(t, x, y);
                let scale = 1.0 + v.iter().map(|a| a.abs()).fold(0.0, f64::max);
                if v[0].abs() > 1e-10 * scale {
                    return Err(Error::param("manufactured", format!("phi* = {} on the boundary at ({x}, {y})", v[0])));
                }
                for (f, name) in [(1, "sigma*"), (2, "p*")] {
                    let dn = g[f][0] * n[0] + g[f][1] * n[1];
                    if dn.abs() * side > 1e-10 * scale {
                        return Err(Error::param("manufactured", format!("normal derivative of {name} = {dn} at ({x}, {y})")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Forcing that makes `sol` an exact solution of the model.
pub fn forcing(params: ModelParameters, sol: impl Manufactured + 'static) -> crate::integrator::Forcing {
    Box::new(move |t, x, y| {
        let [ph, sg, ps] = sol.value(t, x, y);
        let dt = sol.time_derivative(t, x, y);
        let lap = sol.laplacian(t, x, y);
        [
            dt[0] - params.lambda * lap[0] + params.potential_derivative(ph, sg, 0.0),
            dt[1] - params.eta * lap[1] - params.nutrient_reaction(ph, sg, 0.0),
            dt[2] - params.d_psa * lap[2] - params.psa_reaction(ph, ps),
        ]
    })
}

/// L² errors of the three fields against `sol` at time `t`, with a 5-point
/// rule per direction.
pub fn l2_errors(space: &SplineSpace2D, values: &[f64], sol: &dyn Manufactured, t: f64) -> [f64; 3] {
    let rule = GaussRule::new(5);
    let nb = space.n_basis();
    let h = space.element_size();
    let mut err = [0.0; 3];
    for ey in 0..space.elements_per_side() {
        for ex in 0..space.elements_per_side() {
            let dofs = space.element_dofs(ex, ey);
            for (qy, wy) in rule.points.iter().zip(&rule.weights) {
                for (qx, wx) in rule.points.iter().zip(&rule.weights) {
                    let b = space.eval_basis(ex, ey, [*qx, *qy]);
                    let [x, y] = space.map_point(ex, ey, [*qx, *qy]);
                    let exact = sol.value(t, x, y);
                    for f in 0..3 {
                        let uh: f64 = (0..LOCAL).map(|k| values[f * nb + dofs[k]] * b.values[k]).sum();
                        err[f] += wx * wy * h * h * (uh - exact[f]).powi(2);
                    }
                }
            }
        }
    }
    err.map(f64::sqrt)
}

/// Tight solver settings so that algebraic error stays below discretization error.
pub fn tight_controls(dt: f64) -> StepControls {
    StepControls {
        dt,
        newton: NewtonControls {
            tolerance: 1e-10,
            max_iterations: 30,
            abs_floor: 1e-10,
        },
        gmres: GmresControls {
            tolerance: 1e-12,
            max_iterations: 2000,
            restart: 200,
        },
    }
}

/// Runs the forced problem from the projected exact data to `horizon` and
/// returns the L² errors at the end.
pub fn mms_run<S: Manufactured + Copy + 'static>(
    params: ModelParameters,
    sol: S,
    side: f64,
    elements: usize,
    dt: f64,
    horizon: f64,
) -> Result<[f64; 3]> {
    check_compatibility(&sol, side, &[0.0, horizon])?;
    let space = SplineSpace2D::new(side, elements)?;
    let mass = MassSolver::new(&space)?;
    let mut values = Vec::with_capacity(3 * space.n_basis());
    for f in 0..3 {
        let mut b = load_vector(&space, |x, y| sol.value(0.0, x, y)[f]);
        if f == 0 {
            mass.solve_interior(&mut b);
        } else {
            mass.solve(&mut b);
        }
        values.extend(b);
    }
    let mut sim = Simulator::new(space, params, Therapy::none(), AlphaParams::default(), tight_controls(dt))?
        .with_forcing(forcing(params, sol));
    let s0 = sim.initialize(values, 0.0)?;
    let end = sim.run(s0, horizon, dt, &mut |_| Ok(()))?;
    Ok(l2_errors(sim.space(), &end.values, &sol, end.time))
}

/// Least-squares slope of log(error) against log(size).
pub fn fitted_order(sizes: &[f64], errors: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = sizes.iter().zip(errors).map(|(h, e)| (h.ln(), e.ln())).collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Drops trailing ladder points whose error no longer decreases by at least
/// `min_ratio` (roundoff or solver floor).
fn trim_floor(errors: &[f64], min_ratio: f64) -> usize {
    let mut keep = errors.len();
    while keep > 2 && errors[keep - 2] / errors[keep - 1] < min_ratio {
        keep -= 1;
    }
    keep
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderResult {
    /// Mesh sizes or time steps.
    pub sizes: Vec<f64>,
    /// Per-field L² errors at each ladder point.
    pub errors: Vec<[f64; 3]>,
    /// Fitted order per field over the points above the floor.
    pub orders: [f64; 3],
    /// Number of leading points used in the fit.
    pub used: usize,
}

fn ladder(sizes: Vec<f64>, errors: Vec<[f64; 3]>, min_ratio: f64) -> LadderResult {
    let used = (0..3)
        .map(|f| trim_floor(&errors.iter().map(|e| e[f]).collect::<Vec<_>>(), min_ratio))
        .min()
        .unwrap_or(0);
    let orders = [0, 1, 2].map(|f| {
        let e: Vec<f64> = errors[..used].iter().map(|e| e[f]).collect();
        fitted_order(&sizes[..used], &e)
    });
    LadderResult {
        sizes,
        errors,
        orders,
        used,
    }
}

/// Parameters of the manufactured study: the reference constitutive laws on
/// a domain small enough that diffusion is not negligible.
pub fn mms_params() -> ModelParameters {
    crate::scenario::preset("mild/reference/none").expect("preset").model
}

pub const MMS_SIDE: f64 = 100.0;

/// Spatial ladder with the stationary fields (no time-discretization error).
pub fn spatial_study(elements: &[usize]) -> Result<LadderResult> {
    let params = mms_params();
    let sol = TrigSolution {
        side: MMS_SIDE,
        stationary: true,
    };
    let mut errors = Vec::new();
    for &n in elements {
        errors.push(mms_run(params, sol, MMS_SIDE, n, 0.1, 1.0)?);
    }
    let sizes = elements.iter().map(|&n| MMS_SIDE / n as f64).collect();
    Ok(ladder(sizes, errors, 2.0))
}

/// Temporal ladder with the time-dependent fields on a fixed mesh.
pub fn temporal_study(elements: usize, steps: &[f64], horizon: f64) -> Result<LadderResult> {
    let params = mms_params();
    let sol = TrigSolution {
        side: MMS_SIDE,
        stationary: false,
    };
    let mut errors = Vec::new();
    for &dt in steps {
        errors.push(mms_run(params, sol, MMS_SIDE, elements, dt, horizon)?);
    }
    Ok(ladder(steps.to_vec(), errors, 1.5))
}
