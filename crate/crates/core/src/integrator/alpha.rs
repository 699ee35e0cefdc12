use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generalized-α parameters for first-order systems, derived from the
/// high-frequency spectral radius ρ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaParams {
    rho_inf: f64,
}

impl AlphaParams {
    pub fn from_rho_inf(rho_inf: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho_inf) {
            return Err(Error::param("rho_inf", format!("must lie in [0, 1], got {rho_inf}")));
        }
        Ok(Self { rho_inf })
    }

    pub fn rho_inf(&self) -> f64 {
        self.rho_inf
    }

    pub fn alpha_m(&self) -> f64 {
        0.5 * (3.0 - self.rho_inf) / (1.0 + self.rho_inf)
    }

    pub fn alpha_f(&self) -> f64 {
        1.0 / (1.0 + self.rho_inf)
    }

    pub fn gamma(&self) -> f64 {
        0.5 + self.alpha_m() - self.alpha_f()
    }
}

impl Default for AlphaParams {
    fn default() -> Self {
        Self { rho_inf: 0.5 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-15
    }

    #[test]
    fn coefficients() {
        let a = AlphaParams::from_rho_inf(0.5).unwrap();
        assert!(close(a.alpha_m(), 5.0 / 6.0) && close(a.alpha_f(), 2.0 / 3.0) && close(a.gamma(), 2.0 / 3.0));
        let a = AlphaParams::from_rho_inf(1.0).unwrap();
        assert!(close(a.alpha_m(), 0.5) && close(a.alpha_f(), 0.5) && close(a.gamma(), 0.5));
        let a = AlphaParams::from_rho_inf(0.0).unwrap();
        assert!(close(a.alpha_m(), 1.5) && close(a.alpha_f(), 1.0) && close(a.gamma(), 1.0));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(AlphaParams::from_rho_inf(-0.1).is_err());
        assert!(AlphaParams::from_rho_inf(1.5).is_err());
        assert!(AlphaParams::from_rho_inf(f64::NAN).is_err());
    }
}
