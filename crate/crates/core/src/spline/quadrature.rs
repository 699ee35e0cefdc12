use serde::Serialize;

/// Gauss–Legendre rule on the unit interval [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Rule with `n` points (1..=5), exact for polynomials of degree 2n − 1.
    pub fn new(n: usize) -> Self {
        // nodes and weights on [-1, 1]
        let (x, w): (&[f64], &[f64]) = match n {
            1 => (&[0.0], &[2.0]),
            2 => {
                const A: f64 = 0.577_350_269_189_625_8;
                (&[-A, A], &[1.0, 1.0])
            }
            3 => {
                const A: f64 = 0.774_596_669_241_483_4;
                (&[-A, 0.0, A], &[5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])
            }
            4 => (
                &[
                    -0.861_136_311_594_052_6,
                    -0.339_981_043_584_856_3,
                    0.339_981_043_584_856_3,
                    0.861_136_311_594_052_6,
                ],
                &[
                    0.347_854_845_137_453_9,
                    0.652_145_154_862_546_1,
                    0.652_145_154_862_546_1,
                    0.347_854_845_137_453_9,
                ],
            ),
            5 => (
                &[
                    -0.906_179_845_938_664,
                    -0.538_469_310_105_683,
                    0.0,
                    0.538_469_310_105_683,
                    0.906_179_845_938_664,
                ],
                &[
                    0.236_926_885_056_189_1,
                    0.478_628_670_499_366_5,
                    0.568_888_888_888_888_9,
                    0.478_628_670_499_366_5,
                    0.236_926_885_056_189_1,
                ],
            ),
            _ => panic!("Gauss rule with {n} points is not tabulated"),
        };
        Self {
            points: x.iter().map(|&xi| 0.5 * (xi + 1.0)).collect(),
            weights: w.iter().map(|&wi| 0.5 * wi).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Tensor Gauss rule on the reference element [0, 1]².
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn tensor(rule: &GaussRule) -> Self {
        let mut points = Vec::with_capacity(rule.len() * rule.len());
        let mut weights = Vec::with_capacity(points.capacity());
        for (&y, &wy) in rule.points.iter().zip(&rule.weights) {
            for (&x, &wx) in rule.points.iter().zip(&rule.weights) {
                points.push([x, y]);
                weights.push(wx * wy);
            }
        }
        Self { points, weights }
    }
}
