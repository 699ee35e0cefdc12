//! Mass-matrix solves and L² projection.
//!
//! On a tensor-product space the mass matrix is the Kronecker product of the
//! 1D mass matrix with itself, so `M c = b` reduces to banded 1D solves along
//! each direction.

use crate::error::{Error, Result};

use super::space::{SplineSpace2D, DEGREE, LOCAL, QUAD_1D};

/// Cholesky factor of a symmetric positive definite band matrix.
#[derive(Debug, Clone)]
struct BandCholesky {
    n: usize,
    bw: usize,
    // l[i * (bw + 1) + k] = L[i, i - bw + k]
    l: Vec<f64>,
}

impl BandCholesky {
    fn factor(n: usize, bw: usize, entry: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let mut sum = entry(i, j);
                let k0 = j0.max(j.saturating_sub(bw));
                for k in k0..j {
                    sum -= l[i * w + (k + bw - i)] * l[j * w + (k + bw - j)];
                }
                if i == j {
                    if sum <= 0.0 {
                        return Err(Error::LinearSolve(format!("mass matrix not positive definite at row {i}")));
                    }
                    l[i * w + bw] = sum.sqrt();
                } else {
                    l[i * w + (j + bw - i)] = sum / l[j * w + bw];
                }
            }
        }
        Ok(Self { n, bw, l })
    }

    /// Solves in place for a strided vector `x[offset + k * stride]`.
    fn solve_strided(&self, x: &mut [f64], offset: usize, stride: usize) {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        let at = |k: usize| offset + k * stride;
        for i in 0..n {
            let mut sum = x[at(i)];
            for k in i.saturating_sub(bw)..i {
                sum -= self.l[i * w + (k + bw - i)] * x[at(k)];
            }
            x[at(i)] = sum / self.l[i * w + bw];
        }
        for i in (0..n).rev() {
            let mut sum = x[at(i)];
            for k in i + 1..(i + bw + 1).min(n) {
                sum -= self.l[k * w + (i + bw - k)] * x[at(k)];
            }
            x[at(i)] = sum / self.l[i * w + bw];
        }
    }
}

/// Direct solver for the scalar mass matrix of a [`SplineSpace2D`], with a
/// variant restricted to interior (non-Dirichlet) control points.
#[derive(Debug, Clone)]
pub struct MassSolver {
    n: usize,
    full: BandCholesky,
    interior: BandCholesky,
}

impl MassSolver {
    pub fn new(space: &SplineSpace2D) -> Result<Self> {
        let mass = mass_1d(space);
        let n = space.n_basis_1d();
        let full = BandCholesky::factor(n, DEGREE, |i, j| mass[i][j])?;
        let interior = BandCholesky::factor(n - 2, DEGREE, |i, j| mass[i + 1][j + 1])?;
        Ok(Self { n, full, interior })
    }

    /// Solves `M c = b` in place.
    pub fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        assert_eq!(b.len(), n * n);
        for row in 0..n {
            self.full.solve_strided(b, row * n, 1);
        }
        for col in 0..n {
            self.full.solve_strided(b, col, n);
        }
    }

    /// Solves the mass system restricted to interior control points; the
    /// boundary entries of `b` are ignored and set to zero.
    pub fn solve_interior(&self, b: &mut [f64]) {
        let n = self.n;
        assert_eq!(b.len(), n * n);
        for row in 1..n - 1 {
            self.interior.solve_strided(b, row * n + 1, 1);
        }
        for col in 1..n - 1 {
            self.interior.solve_strided(b, n + col, n);
        }
        for i in 0..n * n {
            let (ix, iy) = (i % n, i / n);
            if ix == 0 || iy == 0 || ix == n - 1 || iy == n - 1 {
                b[i] = 0.0;
            }
        }
    }
}

/// Dense 1D mass matrix ∫ N_i N_j on one direction (banded, returned dense
/// by rows for the factorization).
fn mass_1d(space: &SplineSpace2D) -> Vec<Vec<f64>> {
    let n = space.n_basis_1d();
    let kv = space.knots();
    let rule = space.gauss_rule();
    let h = space.element_size();
    let mut m = vec![vec![0.0; n]; n];
    let (mut v, mut d) = ([0.0; DEGREE + 1], [0.0; DEGREE + 1]);
    for e in 0..space.elements_per_side() {
        for q in 0..QUAD_1D {
            kv.eval(e, (e as f64 + rule.points[q]) * h, &mut v, &mut d);
            let w = rule.weights[q] * h;
            for a in 0..=DEGREE {
                for b in 0..=DEGREE {
                    m[e + a][e + b] += w * v[a] * v[b];
                }
            }
        }
    }
    m
}

/// Load vector `b_i = ∫ N_i g`.
pub fn load_vector(space: &SplineSpace2D, g: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let mut b = vec![0.0; space.n_basis()];
    let rule = space.gauss_rule();
    let n_el = space.elements_per_side();
    let mut basis = super::space::BasisValues {
        values: [0.0; LOCAL],
        gradients: [[0.0; 2]; LOCAL],
    };
    for ey in 0..n_el {
        for ex in 0..n_el {
            let dofs = space.element_dofs(ex, ey);
            for qy in 0..QUAD_1D {
                for qx in 0..QUAD_1D {
                    space.tabulated(ex, ey, qx, qy, &mut basis);
                    let [x, y] = space.map_point(ex, ey, [rule.points[qx], rule.points[qy]]);
                    let gw = g(x, y) * space.weight(qx, qy);
                    for k in 0..LOCAL {
                        b[dofs[k]] += gw * basis.values[k];
                    }
                }
            }
        }
    }
    b
}

/// L² projection of a pointwise function onto the spline space.
pub fn l2_project(space: &SplineSpace2D, g: impl Fn(f64, f64) -> f64) -> Result<Vec<f64>> {
    let mut c = load_vector(space, g);
    MassSolver::new(space)?.solve(&mut c);
    if let Some(i) = c.iter().position(|v| !v.is_finite()) {
        return Err(Error::LinearSolve(format!("non-finite projection coefficient at {i}")));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_projects_to_ones() {
        let space = SplineSpace2D::new(3000.0, 6).unwrap();
        let c = l2_project(&space, |_, _| 1.0).unwrap();
        assert!(c.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn reproduces_quadratics() {
        let space = SplineSpace2D::new(2.0, 5).unwrap();
        let g = |x: f64, y: f64| 0.3 + x - 0.7 * y + 0.25 * x * x - 0.4 * x * y + 0.9 * y * y;
        let c = l2_project(&space, g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let (x, y) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
            assert!((space.evaluate(&c, x, y) - g(x, y)).abs() < 1e-10);
        }
    }

    #[test]
    fn linear_function_reproduced() {
        let space = SplineSpace2D::new(3000.0, 8).unwrap();
        let c = l2_project(&space, |x, _| x).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (x, y) = (rng.gen_range(0.0..3000.0), rng.gen_range(0.0..3000.0));
            assert!((space.evaluate(&c, x, y) - x).abs() < 1e-10 * 3000.0);
        }
    }

    #[test]
    fn interior_solve_matches_dense_restriction() {
        let space = SplineSpace2D::new(1.0, 5).unwrap();
        let solver = MassSolver::new(&space).unwrap();
        let n = space.n_basis();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut x: Vec<f64> = (0..n).map(|i| if space.is_boundary(i) { 0.0 } else { rng.gen() }).collect();
        // b = M x via load vectors of basis products
        let m1 = mass_1d(&space);
        let n1 = space.n_basis_1d();
        let mut b = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                b[i] += m1[i % n1][j % n1] * m1[i / n1][j / n1] * x[j];
            }
        }
        solver.solve_interior(&mut b);
        for i in 0..n {
            assert!((b[i] - x[i]).abs() < 1e-10, "{i}");
        }
        x.iter_mut().for_each(|v| *v = 0.0);
    }
}
