use super::Scenario;
use crate::error::{Error, Result};

/// Parses and validates a TOML scenario file.
pub fn parse_config(text: &str) -> Result<Scenario> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    scenario.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(scenario)
}

pub fn to_config_string(scenario: &Scenario) -> Result<String> {
    toml::to_string_pretty(scenario).map_err(|e| Error::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{preset, preset_names};

    #[test]
    fn every_preset_round_trips() {
        for name in preset_names() {
            let s = preset(&name).unwrap();
            let text = to_config_string(&s).unwrap();
            assert_eq!(parse_config(&text).unwrap(), s, "{name}");
        }
    }

    #[test]
    fn sections_are_readable() {
        let text = to_config_string(&preset("mild/reference/combined").unwrap()).unwrap();
        for section in ["[scenario]", "[domain]", "[time]", "[solver]", "[model]", "[initial]", "[output]", "[therapy.cytotoxic]", "[[therapy.antiangiogenic.doses]]"] {
            assert!(text.contains(section), "{section} missing");
        }
        assert!(text.contains("k_rho = 0.008"));
    }

    #[test]
    fn unknown_key_reports_line_and_key() {
        let text = to_config_string(&preset("mild/reference/none").unwrap()).unwrap();
        let bad = text.replace("lambda = ", "lamda = ");
        let msg = parse_config(&bad).unwrap_err().to_string();
        assert!(msg.contains("lamda") && msg.contains("line"), "{msg}");
    }

    #[test]
    fn bad_value_reports_line() {
        let text = to_config_string(&preset("mild/reference/none").unwrap()).unwrap();
        let bad = text.replace("elements = 256", "elements = \"many\"");
        let msg = parse_config(&bad).unwrap_err().to_string();
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn invalid_value_is_rejected() {
        let text = to_config_string(&preset("mild/reference/none").unwrap()).unwrap();
        let bad = text.replace("dt = 0.1", "dt = -0.1");
        assert!(matches!(parse_config(&bad), Err(Error::Config(_))));
    }
}
