//! The verification checks bundled into one report.

use serde::Serialize;

use crate::error::Result;
use crate::scenario::preset;
use crate::spline::SplineSpace2D;

use super::{
    continuous_dependence_probe, jacobian_fd_check, mms::tight_controls, ratio_spread, spatial_study, step_comparison,
    temporal_study, Perturbation,
};

/// Acceptance region of a reported value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Bound {
    Below(f64),
    AtLeast(f64),
    Within(f64, f64),
}

impl Bound {
    pub fn admits(&self, v: f64) -> bool {
        match *self {
            Bound::Below(t) => v < t,
            Bound::AtLeast(t) => v >= t,
            Bound::Within(lo, hi) => (lo..=hi).contains(&v),
        }
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Below(t) => write!(f, "< {t:e}"),
            Bound::AtLeast(t) => write!(f, ">= {t:e}"),
            Bound::Within(lo, hi) => write!(f, "in [{lo}; {hi}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub check: &'static str,
    pub quantity: String,
    pub value: f64,
    pub bound: Bound,
}

impl ReportRow {
    fn new(check: &'static str, quantity: impl Into<String>, value: f64, bound: Bound) -> Self {
        Self {
            check,
            quantity: quantity.into(),
            value,
            bound,
        }
    }

    pub fn passed(&self) -> bool {
        self.bound.admits(self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Shorter ladders and no dependence probe (seconds instead of minutes).
    pub quick: bool,
}

/// Runs manufactured-solution orders, the tangent finite-difference check,
/// the dense oracle comparison and the dependence probe.
pub fn run_suite(options: SuiteOptions) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    let fields = ["phi", "sigma", "p"];

    let (levels, steps): (&[usize], &[f64]) = if options.quick {
        (&[8, 16, 32], &[0.4, 0.2, 0.1])
    } else {
        (&[8, 16, 32, 64], &[0.4, 0.2, 0.1, 0.05])
    };
    let spatial = spatial_study(levels)?;
    for (f, o) in fields.iter().zip(spatial.orders) {
        rows.push(ReportRow::new("mms-spatial", format!("L2 order {f}"), o, Bound::Within(2.7, 3.3)));
    }
    let temporal = temporal_study(if options.quick { 16 } else { 32 }, steps, 0.8)?;
    for (f, o) in fields.iter().zip(temporal.orders) {
        rows.push(ReportRow::new("mms-temporal", format!("L2 order {f}"), o, Bound::Within(1.8, 2.2)));
    }

    let scenario = preset("mild/reference/combined")?;
    for n in [4, 8] {
        let space = SplineSpace2D::new(scenario.domain.side, n)?;
        let worst = jacobian_fd_check(&space, &scenario.model, 20, n as u64, 1e-6)?
            .iter()
            .map(|d| d.worst())
            .fold(0.0, f64::max);
        rows.push(ReportRow::new("jacobian-fd", format!("max relative discrepancy {n}x{n}"), worst, Bound::Below(1e-5)));
    }

    let worst = step_comparison(scenario.domain.side, 6, scenario.model, &scenario.therapy, tight_controls(0.1), 10, 5)?
        .iter()
        .map(|c| c.worst())
        .fold(0.0, f64::max);
    rows.push(ReportRow::new("dense-oracle", "max relative coefficient difference 6x6", worst, Bound::Below(1e-8)));

    if !options.quick {
        let mut sc = preset("mild/reference/none")?;
        sc.domain.elements = 32;
        for (kind, label) in [(Perturbation::InitialPhase, "phi0"), (Perturbation::Cytotoxic, "u")] {
            let r = continuous_dependence_probe(&sc, kind, &[1e-3, 1e-4], 10.0, 0.5)?;
            rows.push(ReportRow::new("dependence", format!("ratio {label} delta=1e-3"), r[0].ratio, Bound::AtLeast(0.0)));
            rows.push(ReportRow::new("dependence", format!("ratio {label} delta=1e-4"), r[1].ratio, Bound::AtLeast(0.0)));
            rows.push(ReportRow::new("dependence", format!("ratio spread {label}"), ratio_spread(&r[0], &r[1]), Bound::Below(0.1)));
        }
    }
    Ok(rows)
}

pub const REPORT_HEADER: &str = "check,quantity,value,acceptance,passed";

/// CSV rendering of the report.
pub fn report_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{:.6e},{},{}\n", r.check, r.quantity, r.value, r.bound, r.passed()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_and_csv() {
        assert!(Bound::Within(1.8, 2.2).admits(2.0));
        assert!(!Bound::Within(1.8, 2.2).admits(2.3));
        assert!(!Bound::Below(1e-5).admits(1e-5));
        let rows = vec![ReportRow::new("x", "y", 2.0, Bound::Within(1.8, 2.2))];
        assert_eq!(report_csv(&rows), "check,quantity,value,acceptance,passed\nx,y,2.000000e0,in [1.8; 2.2],true\n");
    }
}
