use super::{
    Domain, InitialCondition, OutputSettings, Provenance, Scenario, ScenarioInfo, SolverSettings, SupplyVariant,
    TherapyPlan, TimeSettings, TumorClass,
};
use crate::error::{Error, Result};
use crate::model::{ModelParameters, Therapy, TherapySchedule};

pub const TUMOR_CLASSES: [(&str, TumorClass); 2] = [("mild", TumorClass::Mild), ("aggressive", TumorClass::Aggressive)];

pub const VARIANTS: [(&str, SupplyVariant); 5] = [
    ("reference", SupplyVariant::Reference),
    ("rich-supply", SupplyVariant::RichSupply),
    ("poor-supply", SupplyVariant::PoorSupply),
    ("high-uptake", SupplyVariant::HighUptake),
    ("low-uptake", SupplyVariant::LowUptake),
];

pub const PLANS: [(&str, TherapyPlan); 4] = [
    ("none", TherapyPlan::None),
    ("cytotoxic", TherapyPlan::Cytotoxic),
    ("antiangiogenic", TherapyPlan::Antiangiogenic),
    ("combined", TherapyPlan::Combined),
];

/// Nutrient threshold and width of the tilting function. Not published;
/// chosen by calibration runs of this code.
pub const SIGMA_L: f64 = 0.41;
pub const SIGMA_R: f64 = 0.05;

const FIRST_DOSE: f64 = 60.0;
const DOSE_INTERVAL: f64 = 21.0;
const DOSE_COUNT: usize = 10;

/// All `class/variant/plan` preset names.
pub fn preset_names() -> Vec<String> {
    let mut names = Vec::with_capacity(40);
    for (c, _) in TUMOR_CLASSES {
        for (v, _) in VARIANTS {
            for (p, _) in PLANS {
                names.push(format!("{c}/{v}/{p}"));
            }
        }
    }
    names
}

fn model(tumor: TumorClass, variant: SupplyVariant) -> ModelParameters {
    let (k_rho, k_a) = match tumor {
        TumorClass::Mild => (0.8e-2, 0.7e-2),
        TumorClass::Aggressive => (1.5e-2, 1.37e-2),
    };
    let s_c = match variant {
        SupplyVariant::RichSupply => 3.125,
        SupplyVariant::PoorSupply => 2.375,
        _ => 2.75,
    };
    let gamma_c = match variant {
        SupplyVariant::HighUptake => 18.0,
        SupplyVariant::LowUptake => 16.0,
        _ => 17.0,
    };
    let alpha_h = 1.712e-2;
    ModelParameters {
        lambda: 640.0,
        mobility: 2.5,
        m_ref: 7.55e-2,
        k_rho,
        kbar_rho: 1.5e-2,
        k_a,
        kbar_a: 2.1e-2,
        sigma_l: SIGMA_L,
        sigma_r: SIGMA_R,
        eta: 6.4e4,
        s_h: 2.0,
        s_c,
        gamma_h: 2.0,
        gamma_c,
        d_psa: 640.0,
        alpha_h,
        alpha_c: 15.0 * alpha_h,
        gamma_p: 0.274,
    }
}

/// Docetaxel: 75 mg/m² per dose.
fn cytotoxic() -> TherapySchedule {
    TherapySchedule::periodic(FIRST_DOSE, DOSE_INTERVAL, DOSE_COUNT, 75.0, 1.59e-2, 5.0)
        .expect("valid schedule")
        .with_unit("mg/m2")
}

/// Bevacizumab: 15 mg/kg per dose.
fn antiangiogenic() -> TherapySchedule {
    TherapySchedule::periodic(FIRST_DOSE, DOSE_INTERVAL, DOSE_COUNT, 15.0, 0.04, 30.0)
        .expect("valid schedule")
        .with_unit("mg/kg")
}

fn lookup<T: Copy>(table: &[(&str, T)], key: &str) -> Option<T> {
    table.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

/// Builds the named preset, e.g. `mild/reference/none`.
pub fn preset(name: &str) -> Result<Scenario> {
    let parts: Vec<&str> = name.split('/').collect();
    let unknown = || Error::UnknownPreset(name.to_string());
    let [c, v, p] = parts[..] else {
        return Err(unknown());
    };
    let tumor = lookup(&TUMOR_CLASSES, c).ok_or_else(unknown)?;
    let variant = lookup(&VARIANTS, v).ok_or_else(unknown)?;
    let plan = lookup(&PLANS, p).ok_or_else(unknown)?;
    let therapy = match plan {
        TherapyPlan::None => Therapy::none(),
        TherapyPlan::Cytotoxic => Therapy {
            cytotoxic: Some(cytotoxic()),
            antiangiogenic: None,
        },
        TherapyPlan::Antiangiogenic => Therapy {
            cytotoxic: None,
            antiangiogenic: Some(antiangiogenic()),
        },
        TherapyPlan::Combined => Therapy {
            cytotoxic: Some(cytotoxic()),
            antiangiogenic: Some(antiangiogenic()),
        },
    };
    Ok(Scenario {
        scenario: ScenarioInfo {
            name: name.to_string(),
            tumor,
            variant,
            plan,
            tilt_provenance: Provenance::Calibrated,
        },
        domain: Domain {
            side: 3000.0,
            elements: 256,
        },
        time: TimeSettings {
            dt: 0.1,
            horizon: 365.0,
            rho_inf: 0.5,
        },
        solver: SolverSettings::default(),
        model: model(tumor, variant),
        initial: InitialCondition {
            a: 150.0,
            b: 200.0,
            sharpness: 10.0,
            c_sigma0: 1.0,
            c_sigma1: -0.8,
            c_p0: 0.0625,
            c_p1: 0.7975,
        },
        output: OutputSettings::default(),
        therapy,
    })
}
