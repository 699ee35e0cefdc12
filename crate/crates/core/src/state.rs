use crate::error::{Error, Result};
use crate::spline::{split_fields, SplineSpace2D};

/// Control variables of φ, σ, p and their time derivatives at one time level.
///
/// Both vectors are blocked by field: `[Φ, Σ, P]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    /// Time [day].
    pub time: f64,
    pub values: Vec<f64>,
    pub rates: Vec<f64>,
}

impl SystemState {
    pub fn new(time: f64, values: Vec<f64>, rates: Vec<f64>) -> Self {
        Self { time, values, rates }
    }

    /// State with spatially constant fields and zero rates; φ is still
    /// zeroed on the boundary.
    pub fn uniform(space: &SplineSpace2D, phi: f64, sigma: f64, psa: f64) -> Self {
        let nb = space.n_basis();
        let mut values = Vec::with_capacity(3 * nb);
        values.extend((0..nb).map(|i| if space.is_boundary(i) { 0.0 } else { phi }));
        values.extend(std::iter::repeat(sigma).take(nb));
        values.extend(std::iter::repeat(psa).take(nb));
        Self {
            time: 0.0,
            rates: vec![0.0; 3 * nb],
            values,
        }
    }

    pub fn n_basis(&self) -> usize {
        self.values.len() / 3
    }

    pub fn phi(&self) -> &[f64] {
        split_fields(&self.values).0
    }

    pub fn sigma(&self) -> &[f64] {
        split_fields(&self.values).1
    }

    pub fn psa(&self) -> &[f64] {
        split_fields(&self.values).2
    }

    /// Checks sizes, finiteness and the homogeneous Dirichlet condition on φ.
    pub fn check(&self, space: &SplineSpace2D) -> Result<()> {
        let n = 3 * space.n_basis();
        for len in [self.values.len(), self.rates.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, actual: len });
            }
        }
        if !self.time.is_finite() || self.values.iter().chain(&self.rates).any(|v| !v.is_finite()) {
            return Err(Error::param("state", "non-finite entries"));
        }
        for i in (0..space.n_basis()).filter(|&i| space.is_boundary(i)) {
            if self.values[i] != 0.0 || self.rates[i] != 0.0 {
                return Err(Error::param("state", format!("boundary control variable {i} of phi is not zero")));
            }
        }
        Ok(())
    }
}
