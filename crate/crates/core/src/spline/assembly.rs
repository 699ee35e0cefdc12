//! Galerkin residual and tangent assembly for the coupled φ / σ / p system.
//!
//! Coupled vectors are blocked by field: `[Φ, Σ, P]`, each of length
//! `space.n_basis()`. Rows of `R_φ` belonging to boundary control points are
//! replaced by the strong constraint `φ_j = 0`.

use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::model::ModelParameters;

use super::space::{BasisValues, SplineSpace2D, LOCAL, QUAD_1D};

/// Drug effects at the evaluation time.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Drugs {
    /// Cytotoxic effect u [-].
    pub u: f64,
    /// Antiangiogenic supply reduction s [g/L/day].
    pub s: f64,
}

/// Stage rates and values at which the residual is evaluated.
#[derive(Debug, Clone, Copy)]
pub struct StageValues<'a> {
    pub rates: &'a [f64],
    pub values: &'a [f64],
}

/// Coefficients of the Newton tangent: `mass * ∂/∂rate + stiffness * ∂/∂value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentScaling {
    pub mass: f64,
    pub stiffness: f64,
}

/// Extra volumetric source `(f_φ, f_σ, f_p)` added to the right-hand side of
/// each equation, as a function of position.
pub type Source<'a> = &'a dyn Fn(f64, f64) -> [f64; 3];

pub fn split_fields(v: &[f64]) -> (&[f64], &[f64], &[f64]) {
    let nb = v.len() / 3;
    (&v[..nb], &v[nb..2 * nb], &v[2 * nb..])
}

fn empty_basis() -> BasisValues {
    BasisValues {
        values: [0.0; LOCAL],
        gradients: [[0.0; 2]; LOCAL],
    }
}

/// Galerkin residual `R = (R_φ, R_σ, R_p)` with the Dirichlet rows replaced.
pub fn assemble_residual(
    space: &SplineSpace2D,
    params: &ModelParameters,
    stage: StageValues<'_>,
    drugs: Drugs,
    source: Option<Source<'_>>,
    out: &mut [f64],
) -> Result<()> {
    accumulate_residual(space, params, stage, drugs, source, &|_, _| true, out)?;
    apply_dirichlet_rows(space, stage.values, out);
    Ok(())
}

/// Replaces boundary rows of `R_φ` with the constraint residual `φ_j − 0`.
pub fn apply_dirichlet_rows(space: &SplineSpace2D, values: &[f64], out: &mut [f64]) {
    for (i, &b) in space.boundary_mask().iter().enumerate() {
        if b {
            out[i] = values[i];
        }
    }
}

/// Sums element contributions of the selected elements into `out`
/// (overwritten), without the Dirichlet replacement.
pub(crate) fn accumulate_residual(
    space: &SplineSpace2D,
    params: &ModelParameters,
    stage: StageValues<'_>,
    drugs: Drugs,
    source: Option<Source<'_>>,
    include: &dyn Fn(usize, usize) -> bool,
    out: &mut [f64],
) -> Result<()> {
    let nb = space.n_basis();
    for len in [stage.rates.len(), stage.values.len(), out.len()] {
        if len != 3 * nb {
            return Err(Error::DimensionMismatch { expected: 3 * nb, actual: len });
        }
    }
    out.iter_mut().for_each(|v| *v = 0.0);
    let (phi, sigma, psa) = split_fields(stage.values);
    let (dphi, dsigma, dpsa) = split_fields(stage.rates);
    let rule = space.gauss_rule();
    let n_el = space.elements_per_side();
    let mut basis = empty_basis();

    for ey in 0..n_el {
        for ex in 0..n_el {
            if !include(ex, ey) {
                continue;
            }
            let dofs = space.element_dofs(ex, ey);
            let mut local = [[0.0; 6]; LOCAL];
            for (k, &d) in dofs.iter().enumerate() {
                local[k] = [phi[d], sigma[d], psa[d], dphi[d], dsigma[d], dpsa[d]];
            }
            let mut r = [[0.0; 3]; LOCAL];
            for qy in 0..QUAD_1D {
                for qx in 0..QUAD_1D {
                    space.tabulated(ex, ey, qx, qy, &mut basis);
                    let w = space.weight(qx, qy);
                    let mut f = [0.0; 6];
                    let mut grad = [[0.0; 2]; 3];
                    for k in 0..LOCAL {
                        let n = basis.values[k];
                        let [gx, gy] = basis.gradients[k];
                        for c in 0..6 {
                            f[c] += local[k][c] * n;
                        }
                        for c in 0..3 {
                            grad[c][0] += local[k][c] * gx;
                            grad[c][1] += local[k][c] * gy;
                        }
                    }
                    let [ph, sg, ps, dph, dsg, dps] = f;
                    let extra = match source {
                        Some(src) => {
                            let [x, y] = space.map_point(ex, ey, [rule.points[qx], rule.points[qy]]);
                            src(x, y)
                        }
                        None => [0.0; 3],
                    };
                    let mass = [
                        w * (dph + params.potential_derivative(ph, sg, drugs.u) - extra[0]),
                        w * (dsg - params.nutrient_reaction(ph, sg, drugs.s) - extra[1]),
                        w * (dps - params.psa_reaction(ph, ps) - extra[2]),
                    ];
                    let flux = [
                        [w * params.lambda * grad[0][0], w * params.lambda * grad[0][1]],
                        [w * params.eta * grad[1][0], w * params.eta * grad[1][1]],
                        [w * params.d_psa * grad[2][0], w * params.d_psa * grad[2][1]],
                    ];
                    for k in 0..LOCAL {
                        let n = basis.values[k];
                        let [gx, gy] = basis.gradients[k];
                        for c in 0..3 {
                            r[k][c] += n * mass[c] + gx * flux[c][0] + gy * flux[c][1];
                        }
                    }
                }
            }
            if r.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { ex, ey });
            }
            for (k, &d) in dofs.iter().enumerate() {
                out[d] += r[k][0];
                out[nb + d] += r[k][1];
                out[2 * nb + d] += r[k][2];
            }
        }
    }
    Ok(())
}

/// Sparsity of one scalar block: basis functions interact when their
/// supports overlap, i.e. both index offsets are at most the degree.
#[derive(Debug, Clone)]
struct ScalarPattern {
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    // per element, per local (row a, col b): position in `cols`
    elem_pos: Vec<[u32; LOCAL * LOCAL]>,
}

impl ScalarPattern {
    fn new(space: &SplineSpace2D) -> Self {
        let n = space.n_basis_1d();
        let mut row_ptr = vec![0];
        let mut cols = Vec::new();
        for i in 0..n * n {
            let (ix, iy) = (i % n, i / n);
            for jy in iy.saturating_sub(2)..=(iy + 2).min(n - 1) {
                for jx in ix.saturating_sub(2)..=(ix + 2).min(n - 1) {
                    cols.push((jy * n + jx) as u32);
                }
            }
            row_ptr.push(cols.len());
        }
        let n_el = space.elements_per_side();
        let mut elem_pos = Vec::with_capacity(n_el * n_el);
        for ey in 0..n_el {
            for ex in 0..n_el {
                let dofs = space.element_dofs(ex, ey);
                let mut pos = [0u32; LOCAL * LOCAL];
                for a in 0..LOCAL {
                    let row = &cols[row_ptr[dofs[a]]..row_ptr[dofs[a] + 1]];
                    for b in 0..LOCAL {
                        let k = row.binary_search(&(dofs[b] as u32)).expect("element pair outside pattern");
                        pos[a * LOCAL + b] = (row_ptr[dofs[a]] + k) as u32;
                    }
                }
                elem_pos.push(pos);
            }
        }
        Self { row_ptr, cols, elem_pos }
    }

    fn nnz(&self) -> usize {
        self.cols.len()
    }

    fn to_matrix(&self, values: Vec<f64>) -> SparseMatrix {
        SparseMatrix::from_csr(self.row_ptr.len() - 1, self.row_ptr.clone(), self.cols.clone(), values).expect("valid pattern")
    }
}

/// Assembles the Newton tangent `∂R/∂U̇_{n+1}` of the generalized-α stage
/// residual. The pattern, the mass matrix and the stiffness matrix are built
/// once; each call only integrates the state-dependent reaction blocks.
#[derive(Debug, Clone)]
pub struct JacobianAssembler {
    nb: usize,
    pattern: ScalarPattern,
    mass: Vec<f64>,
    stiffness: Vec<f64>,
    col_boundary: Vec<bool>,
    weighted: [Vec<f64>; 4],
    matrix: SparseMatrix,
}

impl JacobianAssembler {
    pub fn new(space: &SplineSpace2D) -> Self {
        let nb = space.n_basis();
        let pattern = ScalarPattern::new(space);
        let nnz = pattern.nnz();
        let (mut mass, mut stiffness) = (vec![0.0; nnz], vec![0.0; nnz]);
        let n_el = space.elements_per_side();
        let mut basis = empty_basis();
        for ey in 0..n_el {
            for ex in 0..n_el {
                let pos = &pattern.elem_pos[ey * n_el + ex];
                for qy in 0..QUAD_1D {
                    for qx in 0..QUAD_1D {
                        space.tabulated(ex, ey, qx, qy, &mut basis);
                        let w = space.weight(qx, qy);
                        for a in 0..LOCAL {
                            for b in 0..LOCAL {
                                let p = pos[a * LOCAL + b] as usize;
                                mass[p] += w * basis.values[a] * basis.values[b];
                                let (ga, gb) = (basis.gradients[a], basis.gradients[b]);
                                stiffness[p] += w * (ga[0] * gb[0] + ga[1] * gb[1]);
                            }
                        }
                    }
                }
            }
        }
        let col_boundary = pattern.cols.iter().map(|&c| space.is_boundary(c as usize)).collect();

        // coupled structure: every row holds two scalar blocks side by side
        let mut row_ptr = vec![0];
        let mut cols = Vec::with_capacity(6 * nnz);
        let second_offset = [nb, nb, 2 * nb];
        for offset in second_offset {
            for i in 0..nb {
                let row = &pattern.cols[pattern.row_ptr[i]..pattern.row_ptr[i + 1]];
                cols.extend(row.iter().copied());
                cols.extend(row.iter().map(|&c| c + offset as u32));
                row_ptr.push(cols.len());
            }
        }
        let values = vec![0.0; cols.len()];
        let matrix = SparseMatrix::from_csr(3 * nb, row_ptr, cols, values).expect("valid coupled pattern");
        Self {
            nb,
            weighted: [vec![0.0; nnz], vec![0.0; nnz], vec![0.0; nnz], vec![0.0; nnz]],
            pattern,
            mass,
            stiffness,
            col_boundary,
            matrix,
        }
    }

    /// Scalar mass matrix ∫ N_i N_j.
    pub fn mass_matrix(&self) -> SparseMatrix {
        self.pattern.to_matrix(self.mass.clone())
    }

    /// Scalar stiffness matrix ∫ ∇N_i · ∇N_j.
    pub fn stiffness_matrix(&self) -> SparseMatrix {
        self.pattern.to_matrix(self.stiffness.clone())
    }

    /// Tangent at stage values `values` (U_{n+α_f}).
    pub fn assemble(
        &mut self,
        space: &SplineSpace2D,
        params: &ModelParameters,
        values: &[f64],
        scaling: TangentScaling,
        drugs: Drugs,
    ) -> Result<&SparseMatrix> {
        let nb = self.nb;
        if values.len() != 3 * nb {
            return Err(Error::DimensionMismatch { expected: 3 * nb, actual: values.len() });
        }
        let (phi, sigma, _) = split_fields(values);
        for w in &mut self.weighted {
            w.iter_mut().for_each(|v| *v = 0.0);
        }
        let n_el = space.elements_per_side();
        let mut basis = empty_basis();
        let supply_jump = params.s_h - params.s_c + drugs.s;
        for ey in 0..n_el {
            for ex in 0..n_el {
                let dofs = space.element_dofs(ex, ey);
                let mut local = [[0.0; 2]; LOCAL];
                for (k, &d) in dofs.iter().enumerate() {
                    local[k] = [phi[d], sigma[d]];
                }
                let mut blocks = [[0.0; LOCAL * LOCAL]; 4];
                for qy in 0..QUAD_1D {
                    for qx in 0..QUAD_1D {
                        space.tabulated(ex, ey, qx, qy, &mut basis);
                        let w = space.weight(qx, qy);
                        let (mut ph, mut sg) = (0.0, 0.0);
                        for k in 0..LOCAL {
                            ph += local[k][0] * basis.values[k];
                            sg += local[k][1] * basis.values[k];
                        }
                        let coef = [
                            w * params.potential_curvature(ph, sg, drugs.u),
                            w * params.potential_cross(ph, sg),
                            w * ((params.gamma_c - params.gamma_h) * sg + supply_jump),
                            w * (params.gamma_h * (1.0 - ph) + params.gamma_c * ph),
                        ];
                        for a in 0..LOCAL {
                            for b in 0..LOCAL {
                                let t = basis.values[a] * basis.values[b];
                                for (blk, c) in blocks.iter_mut().zip(coef) {
                                    blk[a * LOCAL + b] += c * t;
                                }
                            }
                        }
                    }
                }
                if blocks.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite { ex, ey });
                }
                let pos = &self.pattern.elem_pos[ey * n_el + ex];
                for (dst, blk) in self.weighted.iter_mut().zip(&blocks) {
                    for (p, v) in pos.iter().zip(blk) {
                        dst[*p as usize] += v;
                    }
                }
            }
        }
        self.compose(space, params, scaling);
        Ok(&self.matrix)
    }

    fn compose(&mut self, space: &SplineSpace2D, params: &ModelParameters, scaling: TangentScaling) {
        let nb = self.nb;
        let (cm, ck) = (scaling.mass, scaling.stiffness);
        let [w_pp, w_ps, w_sp, w_ss] = &self.weighted;
        let (mass, stiff, mask) = (&self.mass, &self.stiffness, &self.col_boundary);
        let row_ptr = self.matrix.row_ptr().to_vec();
        let values = self.matrix.values_mut();
        let psa_coupling = ck * (params.alpha_h - params.alpha_c);
        for field in 0..3 {
            for i in 0..nb {
                let (s0, s1) = (self.pattern.row_ptr[i], self.pattern.row_ptr[i + 1]);
                let len = s1 - s0;
                let c0 = row_ptr[field * nb + i];
                let (first, second) = values[c0..c0 + 2 * len].split_at_mut(len);
                for (o, k) in (s0..s1).enumerate() {
                    let (coupled, own) = match field {
                        0 => (
                            cm * mass[k] + ck * (params.lambda * stiff[k] + w_pp[k]),
                            ck * w_ps[k],
                        ),
                        1 => (
                            ck * w_sp[k],
                            cm * mass[k] + ck * (params.eta * stiff[k] + w_ss[k]),
                        ),
                        _ => (
                            psa_coupling * mass[k],
                            cm * mass[k] + ck * (params.d_psa * stiff[k] + params.gamma_p * mass[k]),
                        ),
                    };
                    first[o] = if mask[k] { 0.0 } else { coupled };
                    second[o] = own;
                }
            }
        }
        // constraint rows: unit diagonal
        for i in (0..nb).filter(|&i| space.is_boundary(i)) {
            let (s0, s1) = (self.pattern.row_ptr[i], self.pattern.row_ptr[i + 1]);
            let c0 = row_ptr[i];
            for (o, k) in (s0..s1).enumerate() {
                values[c0 + o] = if self.pattern.cols[k] as usize == i { 1.0 } else { 0.0 };
                values[c0 + (s1 - s0) + o] = 0.0;
            }
        }
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }
}
