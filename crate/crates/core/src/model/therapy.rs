use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dose {
    /// Delivery time [day].
    pub time: f64,
    /// Delivered amount, in the unit carried by the schedule.
    pub amount: f64,
}

/// Exponentially decaying drug effect from a sequence of bolus doses.
///
/// The effect of a dose is `beta * amount * exp(-(t - T) / tau)` for
/// `t >= T` and zero before. The dose acts at its own delivery instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TherapySchedule {
    pub doses: Vec<Dose>,
    /// Effect per unit dose.
    pub beta: f64,
    /// Mean drug lifetime [day].
    pub tau: f64,
    /// Opaque label for the dose unit (e.g. "mg/m2"); never used in arithmetic.
    #[serde(default)]
    pub dose_unit: String,
}

impl TherapySchedule {
    pub fn new(doses: Vec<Dose>, beta: f64, tau: f64) -> Result<Self> {
        let schedule = Self {
            doses,
            beta,
            tau,
            dose_unit: String::new(),
        };
        schedule.validate()?;
        Ok(schedule)
    }

    /// `count` equal doses starting at `first`, one every `interval` days.
    pub fn periodic(first: f64, interval: f64, count: usize, amount: f64, beta: f64, tau: f64) -> Result<Self> {
        let doses = (0..count)
            .map(|i| Dose {
                time: first + interval * i as f64,
                amount,
            })
            .collect();
        Self::new(doses, beta, tau)
    }

    pub fn with_unit(mut self, unit: impl Into<String>) -> Self {
        self.dose_unit = unit.into();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::param("beta", format!("must be positive, got {}", self.beta)));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::param("tau", format!("must be positive, got {}", self.tau)));
        }
        for dose in &self.doses {
            if !(dose.amount.is_finite() && dose.amount > 0.0) {
                return Err(Error::param("dose", format!("must be positive, got {}", dose.amount)));
            }
            if !dose.time.is_finite() {
                return Err(Error::param("dose", "delivery time must be finite"));
            }
        }
        if self.doses.windows(2).any(|w| w[1].time <= w[0].time) {
            return Err(Error::param("dose", "delivery times must be strictly increasing"));
        }
        Ok(())
    }

    /// Drug effect at time `t`.
    pub fn value(&self, t: f64) -> f64 {
        self.doses
            .iter()
            .take_while(|d| d.time <= t)
            .map(|d| self.beta * d.amount * (-(t - d.time) / self.tau).exp())
            .sum()
    }

    pub fn dose_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.doses.iter().map(|d| d.time)
    }

    /// Supremum of the effect over `[0, horizon]` and the time where it is
    /// attained. The effect only decays between doses, so the supremum sits
    /// at a delivery instant (or is zero before the first dose).
    pub fn supremum(&self, horizon: f64) -> (f64, Option<f64>) {
        self.doses
            .iter()
            .filter(|d| d.time >= 0.0 && d.time <= horizon)
            .map(|d| (self.value(d.time), Some(d.time)))
            .fold((0.0, None), |best, cand| if cand.0 > best.0 { cand } else { best })
    }
}

/// The pair of drug schedules applied in a scenario.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Therapy {
    pub cytotoxic: Option<TherapySchedule>,
    pub antiangiogenic: Option<TherapySchedule>,
}

impl Therapy {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        for s in self.cytotoxic.iter().chain(self.antiangiogenic.iter()) {
            s.validate()?;
        }
        Ok(())
    }

    /// Cytotoxic effect u(t) [-].
    pub fn u(&self, t: f64) -> f64 {
        self.cytotoxic.as_ref().map_or(0.0, |c| c.value(t))
    }

    /// Antiangiogenic supply reduction s(t) [g/L/day].
    pub fn s(&self, t: f64) -> f64 {
        self.antiangiogenic.as_ref().map_or(0.0, |a| a.value(t))
    }

    /// All delivery times of both drugs, sorted and deduplicated.
    pub fn dose_times(&self) -> Vec<f64> {
        let mut times: Vec<f64> = self
            .cytotoxic
            .iter()
            .chain(self.antiangiogenic.iter())
            .flat_map(|s| s.dose_times())
            .collect();
        times.sort_by(f64::total_cmp);
        times.dedup();
        times
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docetaxel(count: usize) -> TherapySchedule {
        TherapySchedule::periodic(60.0, 21.0, count, 75.0, 1.59e-2, 5.0).unwrap()
    }

    #[test]
    fn zero_before_first_dose() {
        let s = docetaxel(10);
        assert_eq!(s.value(0.0), 0.0);
        assert_eq!(s.value(59.999), 0.0);
    }

    #[test]
    fn single_dose_values() {
        let s = docetaxel(1);
        assert!((s.value(60.0) - 1.1925).abs() < 1e-12);
        assert!((s.value(65.0) - 1.1925 * (-1.0f64).exp()).abs() < 1e-12);
        assert!((s.value(65.0) - 0.43870).abs() < 1e-5);
    }

    #[test]
    fn superposition_at_second_dose() {
        let s = docetaxel(2);
        let expected = 1.1925 * (1.0 + (-21.0f64 / 5.0).exp());
        assert!((s.value(81.0) - expected).abs() < 1e-12);
        assert!((s.value(81.0) - 1.21038).abs() < 1e-5);
    }

    #[test]
    fn antiangiogenic_values() {
        let s = TherapySchedule::periodic(60.0, 21.0, 10, 15.0, 0.04, 30.0).unwrap();
        assert!((s.value(60.0) - 0.6).abs() < 1e-12);
        assert!((s.value(81.0) - 0.89795).abs() < 1e-5);
        assert_eq!(s.value(10.0), 0.0);
    }

    #[test]
    fn rejects_bad_schedules() {
        assert!(TherapySchedule::periodic(60.0, 21.0, 2, 75.0, 0.0, 5.0).is_err());
        assert!(TherapySchedule::periodic(60.0, 21.0, 2, 75.0, 1.0, -5.0).is_err());
        assert!(TherapySchedule::periodic(60.0, 21.0, 2, -1.0, 1.0, 5.0).is_err());
        let doses = vec![Dose { time: 5.0, amount: 1.0 }, Dose { time: 5.0, amount: 1.0 }];
        assert!(TherapySchedule::new(doses, 1.0, 1.0).is_err());
    }

    #[test]
    fn supremum_sits_on_a_dose() {
        let s = docetaxel(10);
        let (sup, at) = s.supremum(365.0);
        let brute = (0..=365_000)
            .map(|k| s.value(k as f64 * 1e-3))
            .fold(0.0f64, f64::max);
        assert!(sup >= brute - 1e-12);
        assert!(at.unwrap() >= 60.0);
        assert_eq!(s.supremum(30.0), (0.0, None));
    }

    #[test]
    fn merged_dose_times() {
        let therapy = Therapy {
            cytotoxic: Some(docetaxel(3)),
            antiangiogenic: Some(TherapySchedule::periodic(60.0, 21.0, 3, 15.0, 0.04, 30.0).unwrap()),
        };
        assert_eq!(therapy.dose_times(), vec![60.0, 81.0, 102.0]);
    }
}
