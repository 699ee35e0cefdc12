use crate::error::{Error, Result};

use super::bspline::KnotVector;
use super::quadrature::{GaussRule, QuadratureRule};

/// Polynomial degree of the spline spaces.
pub const DEGREE: usize = 2;
/// Nonzero basis functions per element and direction.
pub const LOCAL_1D: usize = DEGREE + 1;
/// Nonzero basis functions per element.
pub const LOCAL: usize = LOCAL_1D * LOCAL_1D;
/// Quadrature points per element and direction.
pub const QUAD_1D: usize = 3;
/// Quadrature points per element.
pub const QUAD: usize = QUAD_1D * QUAD_1D;

/// Values and physical gradients of the basis functions supported on one element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisValues {
    pub values: [f64; LOCAL],
    pub gradients: [[f64; 2]; LOCAL],
}

/// Tensor-product quadratic B-spline space on the square [0, L]².
///
/// Both directions share one clamped uniform knot vector. Global basis
/// `i = iy * n + ix` is the product of 1D functions `ix` and `iy`; basis `a`
/// local to element `(ex, ey)` has `ix = ex + a % 3`, `iy = ey + a / 3`.
#[derive(Debug, Clone)]
pub struct SplineSpace2D {
    side: f64,
    elements: usize,
    knots: KnotVector,
    rule: GaussRule,
    quadrature: QuadratureRule,
    // per 1D element: basis values / physical derivatives at quadrature points, [q][a]
    table_values: Vec<[[f64; LOCAL_1D]; QUAD_1D]>,
    table_derivs: Vec<[[f64; LOCAL_1D]; QUAD_1D]>,
    boundary: Vec<bool>,
}

impl SplineSpace2D {
    pub fn new(side: f64, elements: usize) -> Result<Self> {
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::param("domain_side", format!("must be positive, got {side}")));
        }
        if elements < 4 {
            return Err(Error::param("elements", format!("need at least 4 elements per side, got {elements}")));
        }
        let knots = KnotVector::clamped_uniform(side, elements, DEGREE);
        let rule = GaussRule::new(QUAD_1D);
        let h = side / elements as f64;
        let mut table_values = Vec::with_capacity(elements);
        let mut table_derivs = Vec::with_capacity(elements);
        for e in 0..elements {
            let mut vals = [[0.0; LOCAL_1D]; QUAD_1D];
            let mut ders = [[0.0; LOCAL_1D]; QUAD_1D];
            for q in 0..QUAD_1D {
                let x = (e as f64 + rule.points[q]) * h;
                knots.eval(e, x, &mut vals[q], &mut ders[q]);
            }
            table_values.push(vals);
            table_derivs.push(ders);
        }
        let n = knots.n_basis();
        let boundary = (0..n * n)
            .map(|i| {
                let (ix, iy) = (i % n, i / n);
                ix == 0 || iy == 0 || ix == n - 1 || iy == n - 1
            })
            .collect();
        Ok(Self {
            side,
            elements,
            knots,
            quadrature: QuadratureRule::tensor(&rule),
            rule,
            table_values,
            table_derivs,
            boundary,
        })
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn elements_per_side(&self) -> usize {
        self.elements
    }

    pub fn element_size(&self) -> f64 {
        self.side / self.elements as f64
    }

    pub fn area(&self) -> f64 {
        self.side * self.side
    }

    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }

    pub fn quadrature(&self) -> &QuadratureRule {
        &self.quadrature
    }

    pub fn gauss_rule(&self) -> &GaussRule {
        &self.rule
    }

    /// Basis functions per direction.
    pub fn n_basis_1d(&self) -> usize {
        self.elements + DEGREE
    }

    /// Basis functions per scalar field.
    pub fn n_basis(&self) -> usize {
        let n = self.n_basis_1d();
        n * n
    }

    pub fn n_elements(&self) -> usize {
        self.elements * self.elements
    }

    /// Whether control point `i` lies on ∂Ω.
    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary[i]
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    /// Physical location of element `(ex, ey)` local coordinates.
    pub fn map_point(&self, ex: usize, ey: usize, local: [f64; 2]) -> [f64; 2] {
        let h = self.element_size();
        [(ex as f64 + local[0]) * h, (ey as f64 + local[1]) * h]
    }

    /// Global indices of the basis functions supported on an element.
    pub fn element_dofs(&self, ex: usize, ey: usize) -> [usize; LOCAL] {
        let n = self.n_basis_1d();
        let mut dofs = [0; LOCAL];
        for b in 0..LOCAL_1D {
            for a in 0..LOCAL_1D {
                dofs[b * LOCAL_1D + a] = (ey + b) * n + ex + a;
            }
        }
        dofs
    }

    /// Basis values and gradients at tabulated quadrature point `(qx, qy)`.
    #[inline]
    pub(crate) fn tabulated(&self, ex: usize, ey: usize, qx: usize, qy: usize, out: &mut BasisValues) {
        let (vx, dx) = (&self.table_values[ex][qx], &self.table_derivs[ex][qx]);
        let (vy, dy) = (&self.table_values[ey][qy], &self.table_derivs[ey][qy]);
        for b in 0..LOCAL_1D {
            for a in 0..LOCAL_1D {
                let k = b * LOCAL_1D + a;
                out.values[k] = vx[a] * vy[b];
                out.gradients[k] = [dx[a] * vy[b], vx[a] * dy[b]];
            }
        }
    }

    /// Physical quadrature weight (reference weight times element area).
    #[inline]
    pub(crate) fn weight(&self, qx: usize, qy: usize) -> f64 {
        let h = self.element_size();
        self.rule.weights[qx] * self.rule.weights[qy] * h * h
    }

    /// Basis values and physical gradients at local coordinates of an element.
    pub fn eval_basis(&self, ex: usize, ey: usize, local: [f64; 2]) -> BasisValues {
        let h = self.element_size();
        let (mut vx, mut dx, mut vy, mut dy) = ([0.0; LOCAL_1D], [0.0; LOCAL_1D], [0.0; LOCAL_1D], [0.0; LOCAL_1D]);
        self.knots.eval(ex, (ex as f64 + local[0]) * h, &mut vx, &mut dx);
        self.knots.eval(ey, (ey as f64 + local[1]) * h, &mut vy, &mut dy);
        let mut out = BasisValues {
            values: [0.0; LOCAL],
            gradients: [[0.0; 2]; LOCAL],
        };
        for b in 0..LOCAL_1D {
            for a in 0..LOCAL_1D {
                let k = b * LOCAL_1D + a;
                out.values[k] = vx[a] * vy[b];
                out.gradients[k] = [dx[a] * vy[b], vx[a] * dy[b]];
            }
        }
        out
    }

    /// Element containing a physical point, with its local coordinates.
    pub fn locate(&self, x: f64, y: f64) -> (usize, usize, [f64; 2]) {
        let h = self.element_size();
        let find = |c: f64| {
            let e = ((c / h).floor().max(0.0) as usize).min(self.elements - 1);
            (e, (c / h - e as f64).clamp(0.0, 1.0))
        };
        let (ex, lx) = find(x);
        let (ey, ly) = find(y);
        (ex, ey, [lx, ly])
    }

    /// Value of the spline field with control variables `coeffs` at (x, y).
    pub fn evaluate(&self, coeffs: &[f64], x: f64, y: f64) -> f64 {
        self.evaluate_with_gradient(coeffs, x, y).0
    }

    pub fn evaluate_with_gradient(&self, coeffs: &[f64], x: f64, y: f64) -> (f64, [f64; 2]) {
        let (ex, ey, local) = self.locate(x, y);
        let basis = self.eval_basis(ex, ey, local);
        let dofs = self.element_dofs(ex, ey);
        let mut value = 0.0;
        let mut grad = [0.0; 2];
        for k in 0..LOCAL {
            let c = coeffs[dofs[k]];
            value += c * basis.values[k];
            grad[0] += c * basis.gradients[k][0];
            grad[1] += c * basis.gradients[k][1];
        }
        (value, grad)
    }

    /// Calls `f(x, y, weight, field values)` at every quadrature point, where
    /// the field values are those of each coefficient vector in `fields`.
    pub fn for_each_quadrature_point<const N: usize>(&self, fields: [&[f64]; N], mut f: impl FnMut(f64, f64, f64, [f64; N])) {
        let mut basis = BasisValues {
            values: [0.0; LOCAL],
            gradients: [[0.0; 2]; LOCAL],
        };
        for ey in 0..self.elements {
            for ex in 0..self.elements {
                let dofs = self.element_dofs(ex, ey);
                for qy in 0..QUAD_1D {
                    for qx in 0..QUAD_1D {
                        self.tabulated(ex, ey, qx, qy, &mut basis);
                        let mut vals = [0.0; N];
                        for (v, c) in vals.iter_mut().zip(fields.iter()) {
                            *v = (0..LOCAL).map(|k| c[dofs[k]] * basis.values[k]).sum();
                        }
                        let [x, y] = self.map_point(ex, ey, [self.rule.points[qx], self.rule.points[qy]]);
                        f(x, y, self.weight(qx, qy), vals);
                    }
                }
            }
        }
    }

    /// Samples a field on the uniform lattice of `per_element · n_el + 1`
    /// points per side, origin (0, 0); values are row-major with x fastest.
    pub fn sample_lattice(&self, coeffs: &[f64], per_element: usize) -> Vec<f64> {
        let per_element = per_element.max(1);
        let n = per_element * self.elements + 1;
        let spacing = self.side / (per_element * self.elements) as f64;
        // separable evaluation: 1D basis rows once, then the tensor contraction
        let rows: Vec<(usize, [f64; LOCAL_1D])> = (0..n)
            .map(|i| {
                let x = if i + 1 == n { self.side } else { i as f64 * spacing };
                let e = (i / per_element).min(self.elements - 1);
                let (mut v, mut d) = ([0.0; LOCAL_1D], [0.0; LOCAL_1D]);
                self.knots.eval(e, x, &mut v, &mut d);
                (e, v)
            })
            .collect();
        let nb = self.n_basis_1d();
        // contract along x first: tmp[iy_basis][ix_point]
        let mut tmp = vec![0.0; nb * n];
        for by in 0..nb {
            let line = &coeffs[by * nb..(by + 1) * nb];
            for (ix, (e, v)) in rows.iter().enumerate() {
                tmp[by * n + ix] = (0..LOCAL_1D).map(|a| line[e + a] * v[a]).sum();
            }
        }
        let mut out = vec![0.0; n * n];
        for (iy, (e, v)) in rows.iter().enumerate() {
            for ix in 0..n {
                out[iy * n + ix] = (0..LOCAL_1D).map(|b| tmp[(e + b) * n + ix] * v[b]).sum();
            }
        }
        out
    }

    /// ∫_Ω of a spline field by quadrature.
    pub fn integrate(&self, coeffs: &[f64]) -> f64 {
        let mut total = 0.0;
        self.for_each_quadrature_point([coeffs], |_, _, w, [v]| total += w * v);
        total
    }
}
