use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants of the three-field model.
///
/// Time is measured in days, length in µm, nutrient in g/L and tissue PSA in
/// ng/mL/cc. The proliferation and apoptosis indices are derived from the
/// rate pairs on demand rather than stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParameters {
    /// Tumor phase-field diffusivity [µm²/day].
    pub lambda: f64,
    /// Tumor mobility [1/day].
    pub mobility: f64,
    /// Net proliferation scaling [1/day].
    pub m_ref: f64,
    /// Proliferation rate [1/day].
    pub k_rho: f64,
    /// Scaling reference for the proliferation rate [1/day].
    pub kbar_rho: f64,
    /// Apoptosis rate [1/day].
    pub k_a: f64,
    /// Scaling reference for the apoptosis rate [1/day].
    pub kbar_a: f64,
    /// Nutrient threshold [g/L].
    pub sigma_l: f64,
    /// Nutrient reference width [g/L].
    pub sigma_r: f64,
    /// Nutrient diffusivity [µm²/day].
    pub eta: f64,
    /// Nutrient supply in healthy tissue [g/L/day].
    pub s_h: f64,
    /// Nutrient supply in tumor tissue [g/L/day].
    pub s_c: f64,
    /// Nutrient uptake in healthy tissue [1/day].
    pub gamma_h: f64,
    /// Nutrient uptake in tumor tissue [1/day].
    pub gamma_c: f64,
    /// Tissue PSA diffusivity [µm²/day].
    pub d_psa: f64,
    /// Healthy tissue PSA production [ng/mL/cc/day].
    pub alpha_h: f64,
    /// Tumor tissue PSA production [ng/mL/cc/day].
    pub alpha_c: f64,
    /// Tissue PSA decay rate [1/day].
    pub gamma_p: f64,
}

impl ModelParameters {
    /// Proliferation index ρ = K_ρ / K̄_ρ.
    pub fn rho(&self) -> f64 {
        self.k_rho / self.kbar_rho
    }

    /// Apoptosis index A = −K_A / K̄_A (negative).
    pub fn apoptosis(&self) -> f64 {
        -self.k_a / self.kbar_a
    }

    /// Interface width ℓ = sqrt(λ / M) [µm].
    pub fn interface_width(&self) -> f64 {
        (self.lambda / self.mobility).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        let fields: [(&'static str, f64); 18] = [
            ("lambda", self.lambda),
            ("mobility", self.mobility),
            ("m_ref", self.m_ref),
            ("k_rho", self.k_rho),
            ("kbar_rho", self.kbar_rho),
            ("k_a", self.k_a),
            ("kbar_a", self.kbar_a),
            ("sigma_l", self.sigma_l),
            ("sigma_r", self.sigma_r),
            ("eta", self.eta),
            ("s_h", self.s_h),
            ("s_c", self.s_c),
            ("gamma_h", self.gamma_h),
            ("gamma_c", self.gamma_c),
            ("d_psa", self.d_psa),
            ("alpha_h", self.alpha_h),
            ("alpha_c", self.alpha_c),
            ("gamma_p", self.gamma_p),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::param(name, format!("must be positive and finite, got {value}")));
            }
        }
        if (self.m_ref * self.rho()).abs() >= 1.0 / 3.0 {
            return Err(Error::param("k_rho", "|m_ref * rho| must stay below 1/3"));
        }
        if (self.m_ref * self.apoptosis()).abs() >= 1.0 / 3.0 {
            return Err(Error::param("k_a", "|m_ref * A| must stay below 1/3"));
        }
        Ok(())
    }
}
