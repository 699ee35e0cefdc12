use serde::Serialize;

use super::{ModelParameters, Therapy};

/// Outcome of one scenario check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub passed: bool,
    /// Supremum of the checked quantity over the horizon.
    pub supremum: f64,
    pub limit: f64,
    /// First time at which the limit is violated, if any.
    pub violation_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioValidation {
    /// sup |m(σ) − m_ref u(t)| < 1/3 over σ ∈ ℝ and t ∈ [0, horizon].
    pub double_well: Check,
    /// sup s(t) ≤ S_c over [0, horizon].
    pub supply: Check,
}

impl ScenarioValidation {
    pub fn passed(&self) -> bool {
        self.double_well.passed && self.supply.passed
    }
}

/// Checks the double-well regime and the antiangiogenic supply bound.
///
/// Violations are reported, not raised: the model still integrates, it just
/// loses its double-well interpretation.
pub fn validate_scenario(params: &ModelParameters, therapy: &Therapy, horizon: f64) -> ScenarioValidation {
    let (rho, a) = (params.rho(), params.apoptosis());
    // m(σ) sweeps the open interval (m_ref A, m_ref ρ); the extreme of
    // |m − m_ref u| at a fixed u is therefore reached at one of the ends.
    let tilt_sup = |u: f64| params.m_ref * (rho - u).abs().max((a - u).abs());

    let limit = 1.0 / 3.0;
    let mut candidates = vec![0.0];
    candidates.extend(therapy.dose_times().into_iter().filter(|&t| t >= 0.0 && t <= horizon));
    let mut supremum: f64 = 0.0;
    let mut violation_time = None;
    for t in candidates {
        let value = tilt_sup(therapy.u(t));
        if value >= limit && violation_time.is_none() {
            violation_time = Some(t);
        }
        supremum = supremum.max(value);
    }
    let double_well = Check {
        passed: violation_time.is_none(),
        supremum,
        limit,
        violation_time,
    };

    let supply = match &therapy.antiangiogenic {
        None => Check {
            passed: true,
            supremum: 0.0,
            limit: params.s_c,
            violation_time: None,
        },
        Some(schedule) => {
            let violation_time = schedule
                .dose_times()
                .filter(|&t| t >= 0.0 && t <= horizon)
                .find(|&t| schedule.value(t) > params.s_c);
            Check {
                passed: violation_time.is_none(),
                supremum: schedule.supremum(horizon).0,
                limit: params.s_c,
                violation_time,
            }
        }
    };

    ScenarioValidation { double_well, supply }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testing::mild;
    use crate::model::TherapySchedule;

    #[test]
    fn untreated_mild_passes() {
        let p = mild();
        let report = validate_scenario(&p, &Therapy::none(), 365.0);
        assert!(report.passed());
        assert!((report.double_well.supremum - 0.0755 * (0.8 / 1.5)).abs() < 1e-12);
        assert!((report.double_well.supremum - 0.04027).abs() < 1e-5);
    }

    #[test]
    fn docetaxel_schedule_passes_against_brute_force() {
        let p = mild();
        let therapy = Therapy {
            cytotoxic: Some(TherapySchedule::periodic(60.0, 21.0, 10, 75.0, 1.59e-2, 5.0).unwrap()),
            antiangiogenic: None,
        };
        let report = validate_scenario(&p, &therapy, 365.0);
        assert!(report.passed());
        // brute-force sup over a fine grid, sweeping sigma through the arctan range
        let mut brute: f64 = 0.0;
        for k in 0..=36_500 {
            let u = therapy.u(k as f64 * 0.01);
            for sigma in [-1e9, 1e9] {
                brute = brute.max((p.tilting(sigma) - p.m_ref * u).abs());
            }
        }
        assert!(report.double_well.supremum >= brute - 1e-9);
        assert!(brute < 1.0 / 3.0);
    }

    #[test]
    fn excessive_antiangiogenic_dose_fails_at_first_dose() {
        let p = mild();
        let therapy = Therapy {
            cytotoxic: None,
            antiangiogenic: Some(TherapySchedule::periodic(60.0, 21.0, 10, 15.0, 0.2, 30.0).unwrap()),
        };
        let report = validate_scenario(&p, &therapy, 365.0);
        assert!(!report.supply.passed);
        assert_eq!(report.supply.violation_time, Some(60.0));
        assert!(report.double_well.passed);
    }
}
