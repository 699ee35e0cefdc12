use pcasim_core::observables::{diagnose, Diagnostics};
use pcasim_core::scenario::{preset, snapshot_file_name, write_snapshot, write_timeseries, TIMESERIES_HEADER};
use pcasim_core::SplineSpace2D;

fn small(name: &str, elements: usize) -> pcasim_core::Scenario {
    let mut sc = preset(name).unwrap();
    sc.domain.elements = elements;
    sc
}

fn rows(sc: &pcasim_core::Scenario, horizon: f64, every: f64) -> Vec<Diagnostics> {
    let mut sim = sc.simulator().unwrap();
    let s0 = sc.initial_state(&sim).unwrap();
    let mut out = Vec::new();
    sim.run(s0, horizon, every, &mut |o| {
        out.push(Diagnostics::from_observation(&o));
        Ok(())
    })
    .unwrap();
    out
}

#[test]
fn zero_horizon_gives_header_and_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ts.csv");
    write_timeseries(&path, &rows(&small("mild/reference/none", 8), 0.0, 1.0)).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, [TIMESERIES_HEADER, lines[1]]);
    assert!(lines[1].starts_with("0.0000000000000000e0,"));
}

#[test]
fn year_with_daily_cadence_has_366_rows() {
    let r = rows(&small("aggressive/reference/combined", 4), 365.0, 1.0);
    assert_eq!(r.len(), 366);
    assert!((r.last().unwrap().time - 365.0).abs() < 1e-9);
    // the drug columns follow the schedules
    let sc = preset("aggressive/reference/combined").unwrap();
    for d in &r {
        assert_eq!(d.u, sc.therapy.u(d.time));
        assert_eq!(d.s, sc.therapy.s(d.time));
    }
}

/// Independent reader for the legacy ASCII structured-points layout.
fn read_vtk(text: &str) -> (usize, f64, Vec<(String, Vec<f64>)>) {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# vtk DataFile Version 3.0"));
    lines.next();
    assert_eq!(lines.next(), Some("ASCII"));
    assert_eq!(lines.next(), Some("DATASET STRUCTURED_POINTS"));
    let dims: Vec<usize> = lines.next().unwrap().split_whitespace().skip(1).map(|v| v.parse().unwrap()).collect();
    assert_eq!(dims[0], dims[1]);
    assert_eq!(dims[2], 1);
    assert_eq!(lines.next(), Some("ORIGIN 0 0 0"));
    let spacing: f64 = lines.next().unwrap().split_whitespace().nth(1).unwrap().parse().unwrap();
    let npts: usize = lines.next().unwrap().split_whitespace().nth(1).unwrap().parse().unwrap();
    assert_eq!(npts, dims[0] * dims[1]);
    let mut fields = Vec::new();
    while let Some(l) = lines.next() {
        let name = l.split_whitespace().nth(1).unwrap().to_owned();
        assert_eq!(lines.next(), Some("LOOKUP_TABLE default"));
        let vals: Vec<f64> = lines.by_ref().take(npts).map(|v| v.trim().parse().unwrap()).collect();
        fields.push((name, vals));
    }
    (dims[0], spacing, fields)
}

#[test]
fn snapshot_round_trips_through_an_independent_reader() {
    let sc = small("mild/reference/none", 16);
    let sim = sc.simulator().unwrap();
    let state = sc.initial_state(&sim).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = write_snapshot(sim.space(), &state, dir.path()).unwrap();
    assert_eq!(path.file_name().unwrap().to_str().unwrap(), snapshot_file_name(0.0));
    let (n, spacing, fields) = read_vtk(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(n, 33);
    assert!((spacing - 3000.0 / 32.0).abs() < 1e-12);
    let names: Vec<&str> = fields.iter().map(|f| f.0.as_str()).collect();
    assert_eq!(names, ["phi", "sigma", "p"]);
    let space: &SplineSpace2D = sim.space();
    for (f, (_, vals)) in fields.iter().enumerate() {
        let nb = space.n_basis();
        let coeffs = &state.values[f * nb..(f + 1) * nb];
        for (k, v) in vals.iter().enumerate() {
            let (x, y) = ((k % n) as f64 * spacing, (k / n) as f64 * spacing);
            let exact = space.evaluate(coeffs, x.min(3000.0), y.min(3000.0));
            assert!((v - exact).abs() <= 1e-12 * exact.abs().max(1.0), "{f} {k}: {v} vs {exact}");
        }
    }
}

#[test]
fn initial_ellipse_is_recovered() {
    let sc = preset("mild/reference/none").unwrap();
    let space = sc.space().unwrap();
    let values = sc.initial_values(&space).unwrap();
    let state = pcasim_core::SystemState::new(0.0, values.clone(), vec![0.0; values.len()]);
    let space = &space;
    // the tanh layer is ~15 µm thick: 1e-2 at 256², 2e-3 once h is halved again
    assert!((space.evaluate(state.phi(), 1650.0, 1500.0) - 0.5).abs() < 1e-2);
    let mut fine = sc.clone();
    fine.domain.elements = 512;
    let fine_space = fine.space().unwrap();
    let fine_phi = fine.initial_values(&fine_space).unwrap();
    assert!((fine_space.evaluate(&fine_phi[..fine_space.n_basis()], 1650.0, 1500.0) - 0.5).abs() < 2e-3);
    // φ₀ = 1/2 on the ellipse with semi-axes 150 (x) and 200 (y)
    for k in 0..16 {
        let th = k as f64 * std::f64::consts::PI / 8.0;
        let (x, y) = (1500.0 + 150.0 * th.cos(), 1500.0 + 200.0 * th.sin());
        assert!((space.evaluate(state.phi(), x, y) - 0.5).abs() < 0.05);
    }
    assert!((space.evaluate(state.phi(), 1500.0, 1500.0) - 1.0).abs() < 0.05);
    let d = diagnose(space, &sc.therapy, &state);
    let ellipse = std::f64::consts::PI * 150.0 * 200.0;
    assert!((d.volume.tumor - ellipse).abs() < 0.05 * ellipse);
}

#[test]
fn untreated_mild_tumor_grows_monotonically_at_first() {
    let r = rows(&small("mild/reference/none", 32), 20.0, 1.0);
    for w in r.windows(2) {
        assert!(w[1].volume.tumor >= w[0].volume.tumor * (1.0 - 1e-3), "{} -> {}", w[0].volume.tumor, w[1].volume.tumor);
    }
    assert!(r.last().unwrap().volume.tumor > r[0].volume.tumor);
}
