use crate::error::{Error, Result};

/// Square matrix in compressed sparse row form. Column indices are sorted
/// and unique within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds from raw CSR arrays, checking the structural invariants.
    pub fn from_csr(dim: usize, row_ptr: Vec<usize>, cols: Vec<u32>, values: Vec<f64>) -> Result<Self> {
        if row_ptr.len() != dim + 1 || row_ptr[0] != 0 || *row_ptr.last().unwrap() != cols.len() || cols.len() != values.len() {
            return Err(Error::LinearSolve("inconsistent CSR arrays".into()));
        }
        for r in 0..dim {
            let row = &cols[row_ptr[r]..row_ptr[r + 1]];
            if row.windows(2).any(|w| w[0] >= w[1]) || row.iter().any(|&c| c as usize >= dim) {
                return Err(Error::LinearSolve(format!("row {r} has unsorted or out-of-range columns")));
            }
        }
        Ok(Self {
            dim,
            row_ptr,
            cols,
            values,
        })
    }

    /// Sums duplicate entries.
    pub fn from_triplets(dim: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); dim];
        for &(i, j, v) in triplets {
            rows[i].push((j as u32, v));
        }
        let mut row_ptr = vec![0];
        let (mut cols, mut values) = (Vec::new(), Vec::new());
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            for (c, v) in row {
                if cols.len() > *row_ptr.last().unwrap() && *cols.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            values,
        }
    }

    pub fn from_dense(dim: usize, dense: &[f64]) -> Self {
        let triplets: Vec<_> = (0..dim * dim).filter(|&k| dense[k] != 0.0).map(|k| (k / dim, k % dim, dense[k])).collect();
        Self::from_triplets(dim, &triplets)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: (0..=dim).collect(),
            cols: (0..dim as u32).collect(),
            values: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn cols(&self) -> &[u32] {
        &self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Entries of row `i` as (column, value) pairs.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().zip(&self.values[r]).map(|(&c, &v)| (c as usize, v))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&(j as u32)) {
            Ok(k) => self.values[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// y = A x.
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.len(),
            });
        }
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: y.len(),
            });
        }
        self.apply(x, y);
        Ok(())
    }

    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.dim];
        self.spmv_into(x, &mut y)?;
        Ok(y)
    }

    #[inline]
    pub(crate) fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let (start, end) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut sum = 0.0;
            for (c, v) in self.cols[start..end].iter().zip(&self.values[start..end]) {
                sum += v * x[*c as usize];
            }
            *yi = sum;
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim * self.dim];
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                d[i * self.dim + j] = v;
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_zero() {
        let x = [1.0, -2.0, 3.5];
        assert_eq!(SparseMatrix::identity(3).spmv(&x).unwrap(), x.to_vec());
        let zero = SparseMatrix::from_triplets(3, &[]);
        assert_eq!(zero.spmv(&x).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dense: Vec<f64> = (0..25).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = SparseMatrix::from_dense(5, &dense);
        let x: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y = a.spmv(&x).unwrap();
        for i in 0..5 {
            let expected: f64 = (0..5).map(|j| dense[i * 5 + j] * x[j]).sum();
            assert!((y[i] - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let a = SparseMatrix::identity(3);
        assert!(matches!(a.spmv(&[1.0, 2.0]), Err(Error::DimensionMismatch { expected: 3, actual: 2 })));
    }

    #[test]
    fn triplets_merge_duplicates() {
        let a = SparseMatrix::from_triplets(2, &[(0, 1, 1.0), (0, 1, 2.0), (1, 0, 4.0)]);
        assert_eq!(a.get(0, 1), 3.0);
        assert_eq!(a.nnz(), 2);
        assert!(SparseMatrix::from_csr(2, vec![0, 2, 2], vec![1, 0], vec![1.0, 1.0]).is_err());
    }

    proptest! {
        #[test]
        fn spmv_is_linear(seed in 0u64..1000, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 12;
            let triplets: Vec<_> = (0..40).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(-1.0..1.0))).collect();
            let a = SparseMatrix::from_triplets(n, &triplets);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let combo: Vec<f64> = x.iter().zip(&y).map(|(a, b)| alpha * a + beta * b).collect();
            let lhs = a.spmv(&combo).unwrap();
            let (ax, ay) = (a.spmv(&x).unwrap(), a.spmv(&y).unwrap());
            for i in 0..n {
                prop_assert!((lhs[i] - (alpha * ax[i] + beta * ay[i])).abs() < 1e-13);
            }
        }
    }
}
