/// Clamped uniform knot vector on [0, length].
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    pub knots: Vec<f64>,
    pub degree: usize,
    pub elements: usize,
}

impl KnotVector {
    pub fn clamped_uniform(length: f64, elements: usize, degree: usize) -> Self {
        let h = length / elements as f64;
        let mut knots = vec![0.0; degree];
        knots.extend((0..=elements).map(|i| if i == elements { length } else { i as f64 * h }));
        knots.extend(std::iter::repeat(length).take(degree));
        Self { knots, degree, elements }
    }

    pub fn n_basis(&self) -> usize {
        self.elements + self.degree
    }

    /// Values and first derivatives of the `degree + 1` basis functions that
    /// are nonzero on `element`, evaluated at `x` (which may lie on the
    /// closed element interval). Basis `a` has global index `element + a`.
    pub fn eval(&self, element: usize, x: f64, values: &mut [f64], derivs: &mut [f64]) {
        let p = self.degree;
        let span = element + p;
        let k = &self.knots;
        // triangular table of basis values, Cox–de Boor
        let mut ndu = vec![vec![0.0; p + 1]; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        ndu[0][0] = 1.0;
        for j in 1..=p {
            left[j] = x - k[span + 1 - j];
            right[j] = k[span + j] - x;
            let mut saved = 0.0;
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }
        for j in 0..=p {
            values[j] = ndu[j][p];
        }
        if p == 0 {
            derivs[0] = 0.0;
            return;
        }
        // first derivative from the degree p−1 values
        for r in 0..=p {
            let mut d = 0.0;
            if r >= 1 {
                d += ndu[r - 1][p - 1] / ndu[p][r - 1];
            }
            if r < p {
                d -= ndu[r][p - 1] / ndu[p][r];
            }
            derivs[r] = d * p as f64;
        }
    }
}
