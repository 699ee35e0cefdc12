//! Residual of the coupled system coded independently of the production
//! assembly: its own Gauss nodes, its own recursive B-spline evaluation and
//! the constitutive laws written out from the parameter values. Only the
//! ordering of unknowns is shared, so the two can be compared entry by entry.

use std::f64::consts::PI;

use crate::error::Result;
use crate::linalg::{lu_solve, DenseMatrix};
use crate::model::{ModelParameters, Therapy};

/// Gauss–Legendre nodes and weights on [0, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n and its derivative
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(0.5 * (1.0 - x));
        weights.push(1.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// Open-interval clamped uniform knots of degree 2 on [0, side].
fn knots(side: f64, n_el: usize) -> Vec<f64> {
    let h = side / n_el as f64;
    let mut k = vec![0.0, 0.0];
    k.extend((0..=n_el).map(|i| i as f64 * h));
    k.push(side);
    k.push(side);
    k
}

/// N_{i,p}(x) by the textbook recursion; x must not sit on a knot.
fn basis(k: &[f64], i: usize, p: usize, x: f64) -> f64 {
    if p == 0 {
        return if k[i] <= x && x < k[i + 1] { 1.0 } else { 0.0 };
    }
    let mut v = 0.0;
    let d1 = k[i + p] - k[i];
    if d1 > 0.0 {
        v += (x - k[i]) / d1 * basis(k, i, p - 1, x);
    }
    let d2 = k[i + p + 1] - k[i + 1];
    if d2 > 0.0 {
        v += (k[i + p + 1] - x) / d2 * basis(k, i + 1, p - 1, x);
    }
    v
}

fn basis_derivative(k: &[f64], i: usize, p: usize, x: f64) -> f64 {
    let mut d = 0.0;
    let d1 = k[i + p] - k[i];
    if d1 > 0.0 {
        d += p as f64 / d1 * basis(k, i, p - 1, x);
    }
    let d2 = k[i + p + 1] - k[i + 1];
    if d2 > 0.0 {
        d -= p as f64 / d2 * basis(k, i + 1, p - 1, x);
    }
    d
}

/// Independent residual evaluator on a small square mesh.
#[derive(Debug, Clone)]
pub struct OracleResidual {
    side: f64,
    n_el: usize,
    knots: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    params: ModelParameters,
}

impl OracleResidual {
    pub fn new(side: f64, n_el: usize, params: ModelParameters, quadrature_points: usize) -> Self {
        let (nodes, weights) = gauss_legendre(quadrature_points);
        Self {
            side,
            n_el,
            knots: knots(side, n_el),
            nodes,
            weights,
            params,
        }
    }

    pub fn n_basis_1d(&self) -> usize {
        self.n_el + 2
    }

    fn is_boundary(&self, i: usize) -> bool {
        let n = self.n_basis_1d();
        let (ix, iy) = (i % n, i / n);
        ix == 0 || iy == 0 || ix == n - 1 || iy == n - 1
    }

    /// R(rates, values) with boundary φ rows replaced by `φ_j`.
    pub fn residual(&self, rates: &[f64], values: &[f64], u: f64, s: f64) -> Vec<f64> {
        let n = self.n_basis_1d();
        let nb = n * n;
        let p = &self.params;
        let h = self.side / self.n_el as f64;
        let mut r = vec![0.0; 3 * nb];
        let rho = p.k_rho / p.kbar_rho;
        let apo = -p.k_a / p.kbar_a;
        for ey in 0..self.n_el {
            for ex in 0..self.n_el {
                for (qy, wy) in self.nodes.iter().zip(&self.weights) {
                    for (qx, wx) in self.nodes.iter().zip(&self.weights) {
                        let x = (ex as f64 + qx) * h;
                        let y = (ey as f64 + qy) * h;
                        let w = wx * wy * h * h;
                        let mut sup = Vec::with_capacity(9);
                        for iy in ey..ey + 3 {
                            for ix in ex..ex + 3 {
                                let (bx, by) = (basis(&self.knots, ix, 2, x), basis(&self.knots, iy, 2, y));
                                let (dx, dy) = (
                                    basis_derivative(&self.knots, ix, 2, x),
                                    basis_derivative(&self.knots, iy, 2, y),
                                );
                                sup.push((iy * n + ix, bx * by, [dx * by, bx * dy]));
                            }
                        }
                        let field = |v: &[f64], off: usize| -> (f64, [f64; 2]) {
                            let mut val = 0.0;
                            let mut g = [0.0; 2];
                            for (i, b, d) in &sup {
                                val += v[off + i] * b;
                                g[0] += v[off + i] * d[0];
                                g[1] += v[off + i] * d[1];
                            }
                            (val, g)
                        };
                        let (ph, gph) = field(values, 0);
                        let (sg, gsg) = field(values, nb);
                        let (ps, gps) = field(values, 2 * nb);
                        let (dph, _) = field(rates, 0);
                        let (dsg, _) = field(rates, nb);
                        let (dps, _) = field(rates, 2 * nb);

                        let m = p.m_ref * ((rho + apo) / 2.0 + (rho - apo) / PI * ((sg - p.sigma_l) / p.sigma_r).atan());
                        let tilt = m - p.m_ref * u;
                        // ∂/∂φ of Mφ²(1−φ)² − Mφ²(3−2φ)·tilt
                        let dg = p.mobility * (2.0 * ph * (1.0 - ph).powi(2) - 2.0 * ph * ph * (1.0 - ph))
                            - p.mobility * (6.0 * ph - 6.0 * ph * ph) * tilt;
                        let nut = p.s_h * (1.0 - ph) + (p.s_c - s) * ph - (p.gamma_h * (1.0 - ph) + p.gamma_c * ph) * sg;
                        let psa = p.alpha_h * (1.0 - ph) + p.alpha_c * ph - p.gamma_p * ps;

                        for (i, b, d) in &sup {
                            r[*i] += w * (b * (dph + dg) + p.lambda * (d[0] * gph[0] + d[1] * gph[1]));
                            r[nb + i] += w * (b * (dsg - nut) + p.eta * (d[0] * gsg[0] + d[1] * gsg[1]));
                            r[2 * nb + i] += w * (b * (dps - psa) + p.d_psa * (d[0] * gps[0] + d[1] * gps[1]));
                        }
                    }
                }
            }
        }
        for i in 0..nb {
            if self.is_boundary(i) {
                r[i] = values[i];
            }
        }
        r
    }

    /// One generalized-α step solved by Newton with a finite-difference
    /// Jacobian of this residual and dense LU. Returns (values, rates).
    #[allow(clippy::too_many_arguments)]
    pub fn step(
        &self,
        values: &[f64],
        rates: &[f64],
        t: f64,
        dt: f64,
        rho_inf: f64,
        therapy: &Therapy,
        tolerance: f64,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let am = 0.5 * (3.0 - rho_inf) / (1.0 + rho_inf);
        let af = 1.0 / (1.0 + rho_inf);
        let gamma = 0.5 + am - af;
        let (u, s) = (therapy.u(t + af * dt), therapy.s(t + af * dt));
        let n = values.len();
        let stage = |x: &[f64]| -> Vec<f64> {
            let mut sr = vec![0.0; n];
            let mut sv = vec![0.0; n];
            for i in 0..n {
                sr[i] = rates[i] + am * (x[i] - rates[i]);
                let v1 = values[i] + dt * rates[i] + gamma * dt * (x[i] - rates[i]);
                sv[i] = values[i] + af * (v1 - values[i]);
            }
            self.residual(&sr, &sv, u, s)
        };
        let mut x: Vec<f64> = rates.iter().map(|r| (gamma - 1.0) / gamma * r).collect();
        let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
        let mut r = stage(&x);
        let r0 = norm(&r);
        for _ in 0..50 {
            if norm(&r) <= tolerance * r0 || norm(&r) < 1e-300 {
                break;
            }
            let mut jac = DenseMatrix::zeros(n);
            for j in 0..n {
                let eps = 1e-7 * (1.0 + x[j].abs());
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += eps;
                xm[j] -= eps;
                let (rp, rm) = (stage(&xp), stage(&xm));
                for i in 0..n {
                    *jac.at_mut(i, j) = (rp[i] - rm[i]) / (2.0 * eps);
                }
            }
            let minus_r: Vec<f64> = r.iter().map(|v| -v).collect();
            let dx = lu_solve(&jac, &minus_r)?;
            for (xi, di) in x.iter_mut().zip(&dx) {
                *xi += di;
            }
            r = stage(&x);
        }
        let v1 = (0..n).map(|i| values[i] + dt * rates[i] + gamma * dt * (x[i] - rates[i])).collect();
        Ok((v1, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_nodes_integrate_polynomials() {
        for n in 1..=6 {
            let (x, w) = gauss_legendre(n);
            for deg in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                assert!((q - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn recursive_basis_is_a_partition_of_unity() {
        let k = knots(5.0, 5);
        for &x in &[0.1, 1.3, 2.5, 4.99] {
            let s: f64 = (0..7).map(|i| basis(&k, i, 2, x)).sum();
            let d: f64 = (0..7).map(|i| basis_derivative(&k, i, 2, x)).sum();
            assert!((s - 1.0).abs() < 1e-14 && d.abs() < 1e-13);
        }
    }
}
