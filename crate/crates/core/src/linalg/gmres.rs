use serde::{Deserialize, Serialize};

use super::{dot, norm2, Preconditioner, SparseMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmresControls {
    /// Relative reduction of the residual norm required for convergence.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Krylov subspace size before restarting.
    pub restart: usize,
}

impl Default for GmresControls {
    fn default() -> Self {
        Self {
            tolerance: 1e-3,
            max_iterations: 500,
            restart: 200,
        }
    }
}

impl GmresControls {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::param("gmres_tolerance", "must be positive"));
        }
        if self.max_iterations < 1 || self.restart < 1 {
            return Err(Error::param("gmres_max_iterations", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GmresReport {
    pub converged: bool,
    pub iterations: usize,
    pub initial_residual: f64,
    pub final_residual: f64,
    /// Residual norm after each inner iteration.
    pub history: Vec<f64>,
    /// The Krylov space became invariant, so the iterate is exact.
    pub happy_breakdown: bool,
}

/// Restarted GMRES with right preconditioning.
///
/// Solves `A x = b` starting from the contents of `x`. Right preconditioning
/// keeps the minimized quantity equal to the true residual `‖b − A x‖₂`;
/// convergence means it dropped below `tolerance` times its initial value.
/// Hitting `max_iterations` is reported through `converged = false`, not as
/// an error.
pub fn gmres_solve(
    a: &SparseMatrix,
    b: &[f64],
    x: &mut [f64],
    precond: &dyn Preconditioner,
    controls: &GmresControls,
) -> Result<GmresReport> {
    controls.validate()?;
    let n = a.dim();
    for len in [b.len(), x.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, actual: len });
        }
    }
    if b.iter().chain(x.iter()).any(|v| !v.is_finite()) {
        return Err(Error::LinearSolve("non-finite right-hand side or initial guess".into()));
    }

    let mut r = vec![0.0; n];
    residual(a, b, x, &mut r);
    let initial = norm2(&r);
    let mut report = GmresReport {
        converged: initial == 0.0,
        iterations: 0,
        initial_residual: initial,
        final_residual: initial,
        history: Vec::new(),
        happy_breakdown: false,
    };
    if initial == 0.0 {
        return Ok(report);
    }
    let target = controls.tolerance * initial;
    let m = controls.restart.min(controls.max_iterations);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let mut hess = vec![vec![0.0; m]; m + 1];
    let (mut cs, mut sn, mut g) = (vec![0.0; m], vec![0.0; m], vec![0.0; m + 1]);
    let mut z = vec![0.0; n];
    let mut beta = initial;

    loop {
        basis.clear();
        basis.push(r.iter().map(|v| v / beta).collect());
        g.iter_mut().for_each(|v| *v = 0.0);
        g[0] = beta;
        let mut k = 0;
        while k < m && report.iterations < controls.max_iterations {
            precond.apply(&basis[k], &mut z);
            let mut w = vec![0.0; n];
            a.apply(&z, &mut w);
            let before = norm2(&w);
            // modified Gram–Schmidt, with a second pass on cancellation
            for (i, v) in basis.iter().enumerate() {
                let h = dot(&w, v);
                hess[i][k] = h;
                axpy(&mut w, -h, v);
            }
            let mut after = norm2(&w);
            if after < 0.7 * before {
                for (i, v) in basis.iter().enumerate() {
                    let h = dot(&w, v);
                    hess[i][k] += h;
                    axpy(&mut w, -h, v);
                }
                after = norm2(&w);
            }
            hess[k + 1][k] = after;
            for i in 0..k {
                let t = cs[i] * hess[i][k] + sn[i] * hess[i + 1][k];
                hess[i + 1][k] = -sn[i] * hess[i][k] + cs[i] * hess[i + 1][k];
                hess[i][k] = t;
            }
            let (c, s) = givens(hess[k][k], hess[k + 1][k]);
            cs[k] = c;
            sn[k] = s;
            hess[k][k] = c * hess[k][k] + s * hess[k + 1][k];
            hess[k + 1][k] = 0.0;
            g[k + 1] = -s * g[k];
            g[k] *= c;
            k += 1;
            report.iterations += 1;
            let estimate = g[k].abs();
            if !estimate.is_finite() {
                return Err(Error::LinearSolve("GMRES produced a non-finite residual".into()));
            }
            report.history.push(estimate);
            if after <= 1e-14 * before.max(f64::MIN_POSITIVE) {
                report.happy_breakdown = true;
                break;
            }
            if estimate <= target {
                break;
            }
            basis.push(w.iter().map(|v| v / after).collect());
        }

        // y = H⁻¹ g, then x += P⁻¹ V y
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= hess[i][j] * y[j];
            }
            y[i] = s / hess[i][i];
        }
        let mut update = vec![0.0; n];
        for (yi, v) in y.iter().zip(&basis) {
            axpy(&mut update, *yi, v);
        }
        precond.apply(&update, &mut z);
        axpy(x, 1.0, &z);

        residual(a, b, x, &mut r);
        beta = norm2(&r);
        report.final_residual = beta;
        if beta <= target || report.happy_breakdown {
            report.converged = beta <= target || report.happy_breakdown;
            return Ok(report);
        }
        if report.iterations >= controls.max_iterations {
            return Ok(report);
        }
    }
}

fn residual(a: &SparseMatrix, b: &[f64], x: &[f64], r: &mut [f64]) {
    a.apply(x, r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn givens(a: f64, b: f64) -> (f64, f64) {
    if b == 0.0 {
        (1.0, 0.0)
    } else {
        let r = a.hypot(b);
        (a / r, b / r)
    }
}
