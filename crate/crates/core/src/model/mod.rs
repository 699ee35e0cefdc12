//! Constitutive functions of the tumor / nutrient / PSA model.
//!
//! Everything here is a pure pointwise function of the local field values.

mod params;
mod therapy;
mod validation;

use std::f64::consts::PI;

pub use params::ModelParameters;
pub use therapy::{Dose, Therapy, TherapySchedule};
pub use validation::{validate_scenario, Check, ScenarioValidation};

impl ModelParameters {
    /// Tilting function m(σ): nutrient-dependent net proliferation [1/day].
    pub fn tilting(&self, sigma: f64) -> f64 {
        let (rho, a) = (self.rho(), self.apoptosis());
        self.m_ref * (0.5 * (rho + a) + (rho - a) / PI * ((sigma - self.sigma_l) / self.sigma_r).atan())
    }

    /// dm/dσ.
    pub fn tilting_slope(&self, sigma: f64) -> f64 {
        let z = (sigma - self.sigma_l) / self.sigma_r;
        self.m_ref * (self.rho() - self.apoptosis()) / (PI * self.sigma_r * (1.0 + z * z))
    }

    /// f(φ, σ, u) = M [1 − 2φ − 3 (m(σ) − m_ref u)].
    pub fn well_factor(&self, phi: f64, sigma: f64, u: f64) -> f64 {
        self.mobility * (1.0 - 2.0 * phi - 3.0 * (self.tilting(sigma) - self.m_ref * u))
    }

    /// Tilted double-well potential G = F(φ) − h(φ)(m(σ) − m_ref u).
    pub fn potential(&self, phi: f64, sigma: f64, u: f64) -> f64 {
        let m = self.mobility;
        let well = m * phi * phi * (1.0 - phi) * (1.0 - phi);
        let interp = m * phi * phi * (3.0 - 2.0 * phi);
        well - interp * (self.tilting(sigma) - self.m_ref * u)
    }

    /// ∂G/∂φ = 2φ(1 − φ) f(φ, σ, u).
    pub fn potential_derivative(&self, phi: f64, sigma: f64, u: f64) -> f64 {
        2.0 * phi * (1.0 - phi) * self.well_factor(phi, sigma, u)
    }

    /// ∂²G/∂φ².
    pub fn potential_curvature(&self, phi: f64, sigma: f64, u: f64) -> f64 {
        2.0 * (1.0 - 2.0 * phi) * self.well_factor(phi, sigma, u) - 4.0 * self.mobility * phi * (1.0 - phi)
    }

    /// ∂²G/∂φ∂σ.
    pub fn potential_cross(&self, phi: f64, sigma: f64) -> f64 {
        -6.0 * self.mobility * phi * (1.0 - phi) * self.tilting_slope(sigma)
    }

    /// Non-diffusive part of the nutrient equation [g/L/day].
    pub fn nutrient_reaction(&self, phi: f64, sigma: f64, s: f64) -> f64 {
        self.s_h * (1.0 - phi) + (self.s_c - s) * phi - (self.gamma_h * (1.0 - phi) + self.gamma_c * phi) * sigma
    }

    /// Non-diffusive part of the tissue PSA equation [ng/mL/cc/day].
    pub fn psa_reaction(&self, phi: f64, p: f64) -> f64 {
        self.alpha_h * (1.0 - phi) + self.alpha_c * phi - self.gamma_p * p
    }
}


#[cfg(test)]
mod tests {
    use super::testing::mild;
    use proptest::prelude::*;

    #[test]
    fn tilting_at_threshold() {
        let p = mild();
        let expected = p.m_ref * (p.rho() + p.apoptosis()) / 2.0;
        assert_eq!(p.tilting(p.sigma_l), expected);
        // 0.0755 * (0.53333 - 0.33333) / 2
        assert!((p.tilting(p.sigma_l) - 7.55e-3).abs() < 1e-15);
    }

    #[test]
    fn tilting_limits() {
        let p = mild();
        assert!((p.tilting(1e12) - p.m_ref * p.rho()).abs() < 1e-12);
        assert!((p.tilting(-1e12) - p.m_ref * p.apoptosis()).abs() < 1e-12);
    }

    #[test]
    fn potential_derivative_values() {
        let p = mild();
        assert_eq!(p.potential_derivative(0.0, 0.7, 0.3), 0.0);
        assert_eq!(p.potential_derivative(1.0, 0.7, 0.3), 0.0);
        // tilt cancelled by the drug
        let sigma = 0.4;
        let u = p.tilting(sigma) / p.m_ref;
        assert!(p.potential_derivative(0.5, sigma, u).abs() < 1e-15);
        // m(σ_l) = m_ref (ρ + A) / 2 = 7.55e-3, so ∂G/∂φ = 2 · 0.25 · 2.5 · (−3 · 7.55e-3)
        assert!((p.potential_derivative(0.5, p.sigma_l, 0.0) + 2.83125e-2).abs() < 1e-15);
    }

    #[test]
    fn potential_values() {
        let p = mild();
        assert_eq!(p.potential(0.0, 0.3, 0.1), 0.0);
        let sigma = 0.9;
        assert!((p.potential(1.0, sigma, 0.0) + p.mobility * p.tilting(sigma)).abs() < 1e-15);
    }

    #[test]
    fn potential_central_difference() {
        let p = mild();
        let (phi, sigma, u, eps) = (0.3, 1.0, 0.0, 1e-6);
        let fd = (p.potential(phi + eps, sigma, u) - p.potential(phi - eps, sigma, u)) / (2.0 * eps);
        let exact = p.potential_derivative(phi, sigma, u);
        assert!(((fd - exact) / exact).abs() < 1e-6);
    }

    #[test]
    fn reactions_at_equilibria() {
        let p = mild();
        assert_eq!(p.nutrient_reaction(0.0, p.s_h / p.gamma_h, 0.0), 0.0);
        assert!(p.nutrient_reaction(1.0, p.s_c / p.gamma_c, 0.0).abs() < 1e-15);
        assert!((p.s_c / p.gamma_c - 0.16176).abs() < 1e-5);
        assert_eq!(p.nutrient_reaction(0.0, 0.0, 0.0), 2.0);
        let p_eq = p.alpha_h / p.gamma_p;
        // the initial-condition constant 0.0625 is this value to three digits
        assert!((p_eq - 0.0625).abs() < 2e-5);
        assert!(p.psa_reaction(0.0, p_eq).abs() < 1e-17);
        assert!((p.psa_reaction(1.0, 0.0) - 0.2568).abs() < 1e-15);
        assert!(p.psa_reaction(0.5, 100.0) < 0.0);
    }

    proptest! {
        #[test]
        fn tilting_is_monotone(a in -10.0f64..10.0, b in -10.0f64..10.0) {
            let p = mild();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(p.tilting(lo) <= p.tilting(hi));
            let m = p.tilting(a);
            prop_assert!(m > p.m_ref * p.apoptosis() && m < p.m_ref * p.rho());
        }

        #[test]
        fn derivative_matches_central_difference(phi in -0.2f64..1.2, sigma in 0.0f64..2.0, u in 0.0f64..1.5) {
            let p = mild();
            let eps = 1e-5;
            let fd = (p.potential(phi + eps, sigma, u) - p.potential(phi - eps, sigma, u)) / (2.0 * eps);
            let exact = p.potential_derivative(phi, sigma, u);
            prop_assert!((fd - exact).abs() <= 1e-8 + 1e-6 * exact.abs());
            let fd2 = (p.potential_derivative(phi + eps, sigma, u) - p.potential_derivative(phi - eps, sigma, u)) / (2.0 * eps);
            prop_assert!((fd2 - p.potential_curvature(phi, sigma, u)).abs() <= 1e-8 + 1e-6 * fd2.abs());
            let fds = (p.potential_derivative(phi, sigma + eps, u) - p.potential_derivative(phi, sigma - eps, u)) / (2.0 * eps);
            prop_assert!((fds - p.potential_cross(phi, sigma)).abs() <= 1e-8 + 1e-6 * fds.abs());
        }

        #[test]
        fn reactions_are_affine(phi in 0.0f64..1.0, x0 in 0.0f64..2.0, dx in 0.01f64..1.0, s in 0.0f64..1.0) {
            let p = mild();
            let (a, b, c) = (x0, x0 + dx, x0 + 2.0 * dx);
            let n = |x| p.nutrient_reaction(phi, x, s);
            prop_assert!((n(c) - 2.0 * n(b) + n(a)).abs() < 1e-12);
            let q = |x| p.psa_reaction(phi, x);
            prop_assert!((q(c) - 2.0 * q(b) + q(a)).abs() < 1e-12);
        }

        #[test]
        fn double_well_has_one_interior_root(sigma in -1.0f64..3.0, u in 0.0f64..1.2) {
            let p = mild();
            prop_assume!((p.tilting(sigma) - p.m_ref * u).abs() < 1.0 / 3.0);
            let n = 2000;
            let vals: Vec<f64> = (1..n).map(|k| p.potential_derivative(k as f64 / n as f64, sigma, u)).collect();
            let changes = vals.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
            prop_assert_eq!(changes, 1);
        }
    }
}
