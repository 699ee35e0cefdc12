use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::SparseMatrix;
use crate::model::ModelParameters;
use crate::spline::{assemble_residual, Drugs, JacobianAssembler, SplineSpace2D, StageValues, TangentScaling};

/// Finite-difference discrepancies at two step sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdDiscrepancy {
    pub step: f64,
    pub at_step: f64,
    pub at_half_step: f64,
}

impl FdDiscrepancy {
    pub fn worst(&self) -> f64 {
        self.at_step.max(self.at_half_step)
    }
}

/// Largest column-wise relative difference between `jacobian` and central
/// differences of the residual along `mass · e_j` in the rates and
/// `stiffness · e_j` in the values. Constraint rows and constrained
/// columns (boundary φ) are skipped.
#[allow(clippy::too_many_arguments)]
pub fn fd_discrepancy(
    space: &SplineSpace2D,
    params: &ModelParameters,
    rates: &[f64],
    values: &[f64],
    scaling: TangentScaling,
    drugs: Drugs,
    jacobian: &SparseMatrix,
    eps: f64,
) -> Result<f64> {
    let n = values.len();
    let nb = space.n_basis();
    let dense = jacobian.to_dense();
    let free = |i: usize| i >= nb || !space.is_boundary(i);
    let (mut rp, mut rm) = (vec![0.0; n], vec![0.0; n]);
    let mut worst: f64 = 0.0;
    for j in (0..n).filter(|&j| free(j)) {
        let eval = |sign: f64, out: &mut [f64]| -> Result<()> {
            let mut r = rates.to_vec();
            let mut v = values.to_vec();
            r[j] += sign * eps * scaling.mass;
            v[j] += sign * eps * scaling.stiffness;
            assemble_residual(space, params, StageValues { rates: &r, values: &v }, drugs, None, out)
        };
        eval(1.0, &mut rp)?;
        eval(-1.0, &mut rm)?;
        let (mut diff, mut scale): (f64, f64) = (0.0, 0.0);
        for i in (0..n).filter(|&i| free(i)) {
            let fd = (rp[i] - rm[i]) / (2.0 * eps);
            let an = dense[i * n + j];
            diff = diff.max((fd - an).abs());
            scale = scale.max(an.abs());
        }
        worst = worst.max(diff / scale.max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

/// Random stage states (φ in [0, 1] with zero boundary values, σ in
/// [0, 1.2], p in [0, 1]) and random drug levels; returns the discrepancy
/// for each state at `eps` and `eps / 2`.
pub fn jacobian_fd_check(
    space: &SplineSpace2D,
    params: &ModelParameters,
    states: usize,
    seed: u64,
    eps: f64,
) -> Result<Vec<FdDiscrepancy>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assembler = JacobianAssembler::new(space);
    let nb = space.n_basis();
    let mut out = Vec::with_capacity(states);
    for _ in 0..states {
        let values: Vec<f64> = (0..3 * nb)
            .map(|k| match k / nb {
                0 if space.is_boundary(k) => 0.0,
                0 => rng.gen_range(0.0..1.0),
                1 => rng.gen_range(0.0..1.2),
                _ => rng.gen_range(0.0..1.0),
            })
            .collect();
        let rates: Vec<f64> = (0..3 * nb).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let dt = rng.gen_range(0.01..0.5);
        let scaling = TangentScaling {
            mass: 5.0 / 6.0,
            stiffness: 2.0 / 3.0 * 2.0 / 3.0 * dt,
        };
        let drugs = Drugs {
            u: rng.gen_range(0.0..1.0),
            s: rng.gen_range(0.0..1.0),
        };
        let jac = assembler.assemble(space, params, &values, scaling, drugs)?.clone();
        let a = fd_discrepancy(space, params, &rates, &values, scaling, drugs, &jac, eps)?;
        let b = fd_discrepancy(space, params, &rates, &values, scaling, drugs, &jac, eps / 2.0)?;
        out.push(FdDiscrepancy {
            step: eps,
            at_step: a,
            at_half_step: b,
        });
    }
    Ok(out)
}
