//! Sparse storage and Krylov solvers for the coupled Newton systems.

mod dense;
mod gmres;
mod sparse;

pub use dense::{lu_solve, DenseMatrix};
pub use gmres::{gmres_solve, GmresControls, GmresReport};
pub use sparse::SparseMatrix;

use crate::error::{Error, Result};

pub trait Preconditioner {
    /// y = P⁻¹ x.
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// No preconditioning.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityPreconditioner;

impl Preconditioner for IdentityPreconditioner {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }
}

/// Diagonal (Jacobi) preconditioner.
#[derive(Debug, Clone)]
pub struct Jacobi {
    inv_diag: Vec<f64>,
}

impl Jacobi {
    pub fn new(a: &SparseMatrix) -> Result<Self> {
        let inv_diag = a
            .diagonal()
            .into_iter()
            .enumerate()
            .map(|(i, d)| if d == 0.0 || !d.is_finite() { Err(Error::ZeroDiagonal { index: i }) } else { Ok(1.0 / d) })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { inv_diag })
    }
}

impl Preconditioner for Jacobi {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for ((yi, xi), di) in y.iter_mut().zip(x).zip(&self.inv_diag) {
            *yi = xi * di;
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_halves_for_twice_identity() {
        let mut a = SparseMatrix::identity(4);
        a.values_mut().iter_mut().for_each(|v| *v = 2.0);
        let p = Jacobi::new(&a).unwrap();
        let mut y = [0.0; 4];
        p.apply(&[2.0, 4.0, -6.0, 1.0], &mut y);
        assert_eq!(y, [1.0, 2.0, -3.0, 0.5]);
    }

    #[test]
    fn jacobi_rejects_zero_diagonal() {
        let a = SparseMatrix::from_triplets(3, &[(0, 0, 1.0), (1, 1, 0.0), (2, 2, 3.0), (1, 2, 1.0)]);
        match Jacobi::new(&a) {
            Err(Error::ZeroDiagonal { index }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }
}
