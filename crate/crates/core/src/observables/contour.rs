use serde::Serialize;

use crate::spline::SplineSpace2D;

/// Enclosed area and length of a level set extracted by marching squares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Contour {
    pub area: f64,
    pub perimeter: f64,
    pub segments: usize,
}

impl Contour {
    /// 4π·Area / Perimeter², 1 for a disk.
    pub fn isoperimetric_ratio(&self) -> Option<f64> {
        (self.perimeter > 0.0).then(|| 4.0 * std::f64::consts::PI * self.area / (self.perimeter * self.perimeter))
    }
}

type Point = [f64; 2];

/// Marching squares on a row-major `n × n` lattice with the given spacing.
/// Every segment is oriented with the super-level region on its left, so the
/// shoelace sum gives the enclosed area directly.
pub fn lattice_contour(values: &[f64], n: usize, spacing: f64, level: f64) -> Contour {
    let mut c = Contour {
        area: 0.0,
        perimeter: 0.0,
        segments: 0,
    };
    let mut push = |p: Point, q: Point, grad: Point| {
        let d = [q[0] - p[0], q[1] - p[1]];
        // left normal (−d_y, d_x) must point up the gradient
        let (p, q) = if grad[0] * -d[1] + grad[1] * d[0] >= 0.0 { (p, q) } else { (q, p) };
        c.area += 0.5 * (p[0] * q[1] - q[0] * p[1]);
        c.perimeter += d[0].hypot(d[1]);
        c.segments += 1;
    };
    let lerp = |a: f64, b: f64| (level - a) / (b - a);
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            let v = [
                values[j * n + i],
                values[j * n + i + 1],
                values[(j + 1) * n + i + 1],
                values[(j + 1) * n + i],
            ];
            let inside: Vec<bool> = v.iter().map(|&x| x > level).collect();
            if inside.iter().all(|&b| b) || inside.iter().all(|&b| !b) {
                continue;
            }
            let (x0, y0) = (i as f64 * spacing, j as f64 * spacing);
            let corner = [[x0, y0], [x0 + spacing, y0], [x0 + spacing, y0 + spacing], [x0, y0 + spacing]];
            // crossings on edges k = (corner k, corner k+1)
            let mut cross: Vec<(usize, Point)> = Vec::with_capacity(4);
            for k in 0..4 {
                let l = (k + 1) % 4;
                if inside[k] != inside[l] {
                    let s = lerp(v[k], v[l]);
                    let (a, b) = (corner[k], corner[l]);
                    cross.push((k, [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]));
                }
            }
            // bilinear gradient at the cell center
            let grad = [
                0.5 * (v[1] - v[0] + v[2] - v[3]) / spacing,
                0.5 * (v[3] - v[0] + v[2] - v[1]) / spacing,
            ];
            if cross.len() == 2 {
                push(cross[0].1, cross[1].1, grad);
            } else {
                // saddle: pair edges according to the center value
                let center_inside = v.iter().sum::<f64>() / 4.0 > level;
                let pair_first = inside[0] == center_inside;
                let (a, b, c2, d) = if pair_first {
                    (cross[0].1, cross[1].1, cross[2].1, cross[3].1)
                } else {
                    (cross[3].1, cross[0].1, cross[1].1, cross[2].1)
                };
                // each segment cuts off one corner; orient each by the local corner
                for (p, q) in [(a, b), (c2, d)] {
                    let mid = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
                    let center = [x0 + 0.5 * spacing, y0 + 0.5 * spacing];
                    let outward = [mid[0] - center[0], mid[1] - center[1]];
                    let g = if center_inside { [-outward[0], -outward[1]] } else { outward };
                    push(p, q, g);
                }
            }
        }
    }
    c.area = c.area.abs();
    c
}

/// Level set `φ = level` of a spline field sampled `per_element` times per
/// element side.
pub fn level_contour(space: &SplineSpace2D, phi: &[f64], per_element: usize, level: f64) -> Contour {
    let per_element = per_element.max(1);
    let n = per_element * space.elements_per_side() + 1;
    let spacing = space.side() / (n - 1) as f64;
    lattice_contour(&space.sample_lattice(phi, per_element), n, spacing, level)
}

/// Isoperimetric ratio of the `φ = 1/2` contour, `None` without a contour.
pub fn isoperimetric_ratio(space: &SplineSpace2D, phi: &[f64]) -> Option<f64> {
    level_contour(space, phi, 4, 0.5).isoperimetric_ratio()
}
