//! Scenario configuration files and angle parsing.
//!
//! Scenarios are TOML with strict validation: unknown keys are rejected and
//! semantic errors name the offending field. The `angle_unit` key selects
//! how plain numbers are read (`"rad"`, or `"pi"` for multiples of pi).

use crate::channel::{Channel, ChannelSpec};
use crate::node::{CouplingEdge, MechanicalModeSpec, ModeLabel, NodeSpec, Topology};
use serde::Deserialize;
use std::f64::consts::PI;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("config error: {0}")]
    Invalid(String),

    #[error("config error in {field}: {source}")]
    Node {
        field: String,
        source: crate::error::NodeSpecError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    #[default]
    Rad,
    Pi,
}

impl std::str::FromStr for AngleUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rad" => Ok(AngleUnit::Rad),
            "pi" => Ok(AngleUnit::Pi),
            other => Err(format!("unknown angle unit '{other}' (expected rad or pi)")),
        }
    }
}

/// Parses an angle: `0.25pi`, `pi/3`, `3pi/4`, `pi`, or a plain number
/// interpreted per `unit`.
pub fn parse_angle(s: &str, unit: AngleUnit) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    if let Some(pos) = t.find("pi") {
        let (coeff_str, rest) = (&t[..pos], &t[pos + 2..]);
        let coeff: f64 = if coeff_str.is_empty() {
            1.0
        } else {
            coeff_str
                .parse()
                .map_err(|_| format!("bad angle coefficient in '{s}'"))?
        };
        let divisor: f64 = match rest.strip_prefix('/') {
            None if rest.is_empty() => 1.0,
            Some(d) => d
                .parse()
                .map_err(|_| format!("bad angle divisor in '{s}'"))?,
            _ => return Err(format!("trailing garbage after pi in '{s}'")),
        };
        if divisor == 0.0 {
            return Err(format!("zero divisor in angle '{s}'"));
        }
        return Ok(coeff * PI / divisor);
    }
    let value: f64 = t.parse().map_err(|_| format!("bad angle '{s}'"))?;
    Ok(match unit {
        AngleUnit::Rad => value,
        AngleUnit::Pi => value * PI,
    })
}

/// Formats an angle as a multiple of pi, e.g. `0.25pi`.
pub fn format_angle_pi(angle: f64) -> String {
    format!("{}pi", angle / PI)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelEntry {
    label: Channel,
    xi: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeEntry {
    label: ModeLabel,
    delta: f64,
    #[serde(default)]
    gamma: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CouplingEntry {
    channel: Channel,
    mode: ModeLabel,
    j: f64,
}

/// Serialized scenario: topology, channels, modes, couplings and phase.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    topology: Topology,
    phi: f64,
    #[serde(default)]
    angle_unit: AngleUnit,
    channels: Vec<ChannelEntry>,
    modes: Vec<ModeEntry>,
    couplings: Vec<CouplingEntry>,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn angle_unit(&self) -> AngleUnit {
        self.angle_unit
    }

    /// Validates into the node and channel list every backend consumes.
    pub fn build(&self) -> Result<(NodeSpec, Vec<ChannelSpec>), ConfigError> {
        let phi = match self.angle_unit {
            AngleUnit::Rad => self.phi,
            AngleUnit::Pi => self.phi * PI,
        };
        let want = self.topology.n_channels();
        if self.channels.len() != want {
            return Err(ConfigError::Invalid(format!(
                "channels: topology {} needs exactly {want} entries, got {}",
                self.topology,
                self.channels.len()
            )));
        }
        let mut channels = Vec::with_capacity(want);
        for (i, entry) in self.channels.iter().enumerate() {
            if entry.label.index() != i {
                return Err(ConfigError::Invalid(format!(
                    "channels[{i}]: expected label '{}' (fixed order a, b, c)",
                    Channel::ALL[i]
                )));
            }
            channels.push(ChannelSpec::new(entry.label, entry.xi).map_err(|source| {
                ConfigError::Node {
                    field: format!("channels[{i}].xi"),
                    source,
                }
            })?);
        }

        let modes: Vec<MechanicalModeSpec> = self
            .modes
            .iter()
            .enumerate()
            .map(|(i, m)| {
                MechanicalModeSpec::new(m.label, m.delta, m.gamma).map_err(|source| {
                    ConfigError::Node {
                        field: format!("modes[{i}]"),
                        source,
                    }
                })
            })
            .collect::<Result<_, _>>()?;

        let edges: Vec<CouplingEdge> = self
            .couplings
            .iter()
            .map(|c| CouplingEdge {
                channel: c.channel,
                mode: c.mode,
                strength: c.j,
                carries_phase: (c.channel, c.mode) == (Channel::B, ModeLabel::D1),
            })
            .collect();

        let node = NodeSpec::new(self.topology, modes, edges, phi).map_err(|source| {
            ConfigError::Node {
                field: "topology/modes/couplings".into(),
                source,
            }
        })?;
        Ok((node, channels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG5: &str = r#"
topology = "circulator-two-modes"
phi = 0.5
angle_unit = "pi"

[[channels]]
label = "a"
xi = 1.0

[[channels]]
label = "b"
xi = 1.0

[[channels]]
label = "c"
xi = 1.2396773773849388

[[modes]]
label = "d1"
delta = 0.0

[[modes]]
label = "d2"
delta = 0.0

[[couplings]]
channel = "a"
mode = "d1"
j = 1.0

[[couplings]]
channel = "b"
mode = "d1"
j = 1.0

[[couplings]]
channel = "a"
mode = "d2"
j = 1.2

[[couplings]]
channel = "b"
mode = "d2"
j = 1.2

[[couplings]]
channel = "c"
mode = "d2"
j = 1.75316856006489
"#;

    #[test]
    fn fig5_config_builds() {
        let cfg = ScenarioConfig::from_toml(FIG5).unwrap();
        let (node, channels) = cfg.build().unwrap();
        assert_eq!(node.topology(), Topology::CirculatorTwoModes);
        assert!((node.phi() - PI / 2.0).abs() < 1e-15);
        assert_eq!(channels.len(), 3);
        assert!((channels[2].xi - 1.239_677_377_384_938_8).abs() < 1e-15);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = FIG5.replace("angle_unit = \"pi\"", "angle_unit = \"pi\"\nbogus = 3");
        let err = ScenarioConfig::from_toml(&bad).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn parse_errors_carry_location() {
        let bad = FIG5.replace("xi = 1.0", "xi = \"one\"");
        let err = ScenarioConfig::from_toml(&bad).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "expected line info in: {msg}");
    }

    #[test]
    fn wrong_channel_order_rejected() {
        let bad = FIG5.replacen("label = \"a\"", "label = \"b\"", 1);
        let cfg = ScenarioConfig::from_toml(&bad).unwrap();
        let err = cfg.build().unwrap_err();
        assert!(err.to_string().contains("channels[0]"), "{err}");
    }

    #[test]
    fn missing_edge_rejected() {
        let bad = FIG5.replace(
            "[[couplings]]\nchannel = \"c\"\nmode = \"d2\"\nj = 1.75316856006489\n",
            "",
        );
        let cfg = ScenarioConfig::from_toml(&bad).unwrap();
        assert!(cfg.build().is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)] // the pinned f64 image of pi/4 is the point
    fn angle_parsing_round_trip() {
        assert_eq!(parse_angle("0.25pi", AngleUnit::Rad).unwrap(), 0.7853981633974483);
        assert_eq!(
            parse_angle("0.25pi", AngleUnit::Rad).unwrap(),
            0.25 * PI
        );
        assert_eq!(parse_angle("pi/3", AngleUnit::Rad).unwrap(), PI / 3.0);
        assert_eq!(parse_angle("3pi/4", AngleUnit::Rad).unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("pi", AngleUnit::Rad).unwrap(), PI);
        assert_eq!(parse_angle("0.5", AngleUnit::Pi).unwrap(), 0.5 * PI);
        assert_eq!(parse_angle("1.25", AngleUnit::Rad).unwrap(), 1.25);
        assert!(parse_angle("pie", AngleUnit::Rad).is_err());
        assert!(parse_angle("pi/0", AngleUnit::Rad).is_err());
        // format -> parse round trip is exact
        let formatted = format_angle_pi(0.7853981633974483);
        assert_eq!(formatted, "0.25pi");
        assert_eq!(
            parse_angle(&formatted, AngleUnit::Rad).unwrap(),
            0.7853981633974483
        );
    }
}
