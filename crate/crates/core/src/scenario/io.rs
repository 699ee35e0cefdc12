use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::observables::Diagnostics;
use crate::spline::SplineSpace2D;
use crate::state::SystemState;

pub const TIMESERIES_HEADER: &str =
    "t_day,V_c_mm2,V_c_frac,V_h_mm2,P_s_raw,P_s_mean,u,s,min_phi,max_phi,min_sigma,min_p,newton_iters,gmres_iters";

/// Lattice points per element side in snapshots.
const SNAPSHOT_PER_ELEMENT: usize = 2;

fn real(out: &mut String, v: f64) {
    write!(out, "{v:.16e}").expect("writing to a String");
}

fn row(out: &mut String, d: &Diagnostics) {
    let reals = [
        d.time,
        d.volume.tumor_mm2(),
        d.volume.fraction,
        d.volume.healthy_mm2(),
        d.psa.raw,
        d.psa.mean,
        d.u,
        d.s,
        d.bounds.min_phi.value,
        d.bounds.max_phi.value,
        d.bounds.min_sigma.value,
        d.bounds.min_p.value,
    ];
    for v in reals {
        real(out, v);
        out.push(',');
    }
    writeln!(out, "{},{}", d.newton_iterations, d.gmres_iterations).expect("writing to a String");
}

/// CSV text of a time series.
pub fn timeseries_csv(rows: &[Diagnostics]) -> String {
    let mut out = String::with_capacity(256 * (rows.len() + 1));
    out.push_str(TIMESERIES_HEADER);
    out.push('\n');
    for d in rows {
        row(&mut out, d);
    }
    out
}

pub fn write_timeseries(path: &Path, rows: &[Diagnostics]) -> Result<()> {
    fs::write(path, timeseries_csv(rows)).map_err(|e| Error::io(path, e))
}

/// `fields_t0060.0.vtk` style names: day zero-padded to four integer digits
/// with one decimal.
pub fn snapshot_file_name(t: f64) -> String {
    format!("fields_t{t:06.1}.vtk")
}

/// Legacy ASCII VTK structured-points file with point data φ, σ, p sampled
/// on the `(2 n_el + 1)²` lattice.
pub fn snapshot_vtk(space: &SplineSpace2D, state: &SystemState) -> String {
    let n = SNAPSHOT_PER_ELEMENT * space.elements_per_side() + 1;
    let spacing = space.side() / (n - 1) as f64;
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\n");
    writeln!(out, "tumor fields t={:.16e}", state.time).unwrap();
    out.push_str("ASCII\nDATASET STRUCTURED_POINTS\n");
    writeln!(out, "DIMENSIONS {n} {n} 1").unwrap();
    out.push_str("ORIGIN 0 0 0\n");
    let mut sp = String::new();
    real(&mut sp, spacing);
    writeln!(out, "SPACING {sp} {sp} 1").unwrap();
    writeln!(out, "POINT_DATA {}", n * n).unwrap();
    for (name, coeffs) in [("phi", state.phi()), ("sigma", state.sigma()), ("p", state.psa())] {
        writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default").unwrap();
        for v in space.sample_lattice(coeffs, SNAPSHOT_PER_ELEMENT) {
            real(&mut out, v);
            out.push('\n');
        }
    }
    out
}

/// Writes a snapshot into `dir` and returns its path.
pub fn write_snapshot(space: &SplineSpace2D, state: &SystemState, dir: &Path) -> Result<PathBuf> {
    let path = dir.join(snapshot_file_name(state.time));
    fs::write(&path, snapshot_vtk(space, state)).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Therapy;
    use crate::observables::diagnose;

    #[test]
    fn header_and_one_row() {
        let space = SplineSpace2D::new(3000.0, 4).unwrap();
        let s = SystemState::uniform(&space, 0.0, 1.0, 0.0625);
        let csv = timeseries_csv(&[diagnose(&space, &Therapy::none(), &s)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], TIMESERIES_HEADER);
        let cells: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(cells.len(), 14);
        assert_eq!(cells[0], "0.0000000000000000e0");
        let vh: f64 = cells[3].parse().unwrap();
        assert_eq!(vh, 9.0);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn file_names() {
        assert_eq!(snapshot_file_name(0.0), "fields_t0000.0.vtk");
        assert_eq!(snapshot_file_name(60.0), "fields_t0060.0.vtk");
        assert_eq!(snapshot_file_name(365.0), "fields_t0365.0.vtk");
    }

    #[test]
    fn vtk_layout() {
        let space = SplineSpace2D::new(3000.0, 4).unwrap();
        let s = SystemState::uniform(&space, 0.0, 1.0, 0.0625);
        let text = snapshot_vtk(&space, &s);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# vtk DataFile Version 3.0");
        assert_eq!(lines[4], "DIMENSIONS 9 9 1");
        assert_eq!(lines[7], "POINT_DATA 81");
        assert_eq!(lines.len(), 8 + 3 * (2 + 81));
    }
}
