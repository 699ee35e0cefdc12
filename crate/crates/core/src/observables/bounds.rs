use serde::{Deserialize, Serialize};

use crate::spline::SplineSpace2D;
use crate::state::SystemState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub value: f64,
    pub x: f64,
    pub y: f64,
}

/// Field extrema over all quadrature points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    pub min_phi: Extremum,
    pub max_phi: Extremum,
    pub min_sigma: Extremum,
    pub min_p: Extremum,
}

/// Admissible overshoot beyond the continuous bounds 0 ≤ φ ≤ 1, σ ≥ 0, p ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundTolerance {
    pub phi: f64,
    pub sigma: f64,
    pub psa: f64,
}

impl Default for BoundTolerance {
    fn default() -> Self {
        Self {
            phi: 0.05,
            sigma: 1e-3,
            psa: 1e-3,
        }
    }
}

impl BoundsReport {
    /// Human-readable descriptions of every bound exceeded beyond `tol`.
    pub fn violations(&self, tol: &BoundTolerance) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |bad: bool, what: &str, e: &Extremum| {
            if bad {
                out.push(format!("{what} = {:.6e} at ({:.1}, {:.1})", e.value, e.x, e.y));
            }
        };
        check(self.min_phi.value < -tol.phi, "min phi", &self.min_phi);
        check(self.max_phi.value > 1.0 + tol.phi, "max phi", &self.max_phi);
        check(self.min_sigma.value < -tol.sigma, "min sigma", &self.min_sigma);
        check(self.min_p.value < -tol.psa, "min p", &self.min_p);
        out
    }
}

/// Extrema of φ, σ, p evaluated at the quadrature points.
pub fn bounds_monitor(space: &SplineSpace2D, state: &SystemState) -> BoundsReport {
    let start = |v: f64| Extremum { value: v, x: f64::NAN, y: f64::NAN };
    let mut r = BoundsReport {
        min_phi: start(f64::INFINITY),
        max_phi: start(f64::NEG_INFINITY),
        min_sigma: start(f64::INFINITY),
        min_p: start(f64::INFINITY),
    };
    space.for_each_quadrature_point([state.phi(), state.sigma(), state.psa()], |x, y, _, [ph, sg, p]| {
        let at = |value| Extremum { value, x, y };
        if ph < r.min_phi.value {
            r.min_phi = at(ph);
        }
        if ph > r.max_phi.value {
            r.max_phi = at(ph);
        }
        if sg < r.min_sigma.value {
            r.min_sigma = at(sg);
        }
        if p < r.min_p.value {
            r.min_p = at(p);
        }
    });
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn healthy_state_extrema() {
        let space = SplineSpace2D::new(3000.0, 8).unwrap();
        let s = SystemState::uniform(&space, 0.0, 1.0, 0.0625);
        let r = bounds_monitor(&space, &s);
        assert_eq!((r.min_phi.value, r.max_phi.value), (0.0, 0.0));
        assert!((r.min_sigma.value - 1.0).abs() < 1e-14);
        assert!((r.min_p.value - 0.0625).abs() < 1e-14);
        assert!(r.violations(&BoundTolerance::default()).is_empty());
    }

    #[test]
    fn spike_is_flagged() {
        let space = SplineSpace2D::new(3000.0, 8).unwrap();
        let mut s = SystemState::uniform(&space, 0.0, 1.0, 0.0625);
        let center = 5 * space.n_basis_1d() + 5;
        s.values[center] = 2.0;
        let r = bounds_monitor(&space, &s);
        assert!(r.max_phi.value > 1.05);
        let v = r.violations(&BoundTolerance::default());
        assert_eq!(v.len(), 1);
        assert!(v[0].starts_with("max phi"));
    }
}
