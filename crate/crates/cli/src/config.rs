//! Scenario configuration: JSON schema, parsing, and validation.
//!
//! Complex numbers are two-element `[re, im]` arrays everywhere. Validation
//! collects every offending field so a bad config fails with one complete
//! report instead of a scavenger hunt.

use std::fmt;

use serde::{Deserialize, Serialize};

use octet_core::phase::SweepAngle;
use octet_core::polarization::PolarizationModelKind;
use octet_core::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Dephasing3,
    BerryLoop,
    Polarization,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Scenario::Dephasing3 => "dephasing3",
            Scenario::BerryLoop => "berry_loop",
            Scenario::Polarization => "polarization",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    Lossy,
    PureDephasing,
    AtomicBath,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleName {
    Alpha,
    Beta,
    Gamma,
    Chi,
    Xi,
}

impl From<AngleName> for SweepAngle {
    fn from(angle: AngleName) -> Self {
        match angle {
            AngleName::Alpha => SweepAngle::Alpha,
            AngleName::Beta => SweepAngle::Beta,
            AngleName::Gamma => SweepAngle::Gamma,
            AngleName::Chi => SweepAngle::Chi,
            AngleName::Xi => SweepAngle::Xi,
        }
    }
}

/// One linear sweep of a phase angle around the loop.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub angle: AngleName,
    pub from: f64,
    pub to: f64,
}

/// Closed parameter loop: fixed (r, θ, φ) and base phases, plus the sweeps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopSpec {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub chi: f64,
    #[serde(default)]
    pub xi: f64,
    pub sweeps: Vec<SweepSpec>,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Pure-state amplitudes as three [re, im] pairs. For `dephasing3` these
    /// span the qutrit basis; for `polarization` they span
    /// (|0,0⟩, |1,1⟩, |1,0⟩).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<[[f64; 2]; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_plus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_minus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelName>,
    #[serde(rename = "loop", skip_serializing_if = "Option::is_none")]
    pub loop_spec: Option<LoopSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_every: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let config: ScenarioConfig =
            serde_json::from_str(text).map_err(|err| format!("invalid config JSON: {err}"))?;
        config.validate()?;
        Ok(config)
    }

    pub fn delta_amplitudes(&self) -> Option<[Complex64; 3]> {
        self.delta
            .map(|pairs| pairs.map(|[re, im]| Complex64::new(re, im)))
    }

    /// Field-level validation; the error lists every offending field.
    pub fn validate(&self) -> Result<(), String> {
        let mut problems: Vec<String> = Vec::new();
        let mut require = |present: bool, field: &str| {
            if !present {
                problems.push(format!("{field}: required for scenario {}", self.scenario));
            }
        };

        match self.scenario {
            Scenario::Dephasing3 => {
                require(self.omega.is_some(), "omega");
                require(self.eta.is_some(), "eta");
                require(self.delta.is_some(), "delta");
                require(self.t_max.is_some(), "t_max");
                require(self.dt.is_some(), "dt");
                if let Some(eta) = self.eta {
                    if eta < 0.0 {
                        problems.push(format!("eta: rate must be >= 0, got {eta}"));
                    }
                }
            }
            Scenario::BerryLoop => {
                require(self.loop_spec.is_some(), "loop");
                if let Some(spec) = &self.loop_spec {
                    if spec.r < 0.0 {
                        problems.push(format!("loop.r: must be >= 0, got {}", spec.r));
                    }
                    if spec.samples < 2 {
                        problems
                            .push(format!("loop.samples: need at least 2, got {}", spec.samples));
                    }
                    if spec.sweeps.is_empty() {
                        problems.push("loop.sweeps: at least one sweep required".into());
                    }
                    for (index, sweep) in spec.sweeps.iter().enumerate() {
                        let span = sweep.to - sweep.from;
                        let turns = span / (2.0 * std::f64::consts::PI);
                        if (turns - turns.round()).abs() > 1e-9 {
                            problems.push(format!(
                                "loop.sweeps[{index}]: span {span} is not a multiple of 2*pi, \
                                 the loop would not close"
                            ));
                        }
                    }
                }
            }
            Scenario::Polarization => {
                require(self.model.is_some(), "model");
                require(self.delta.is_some(), "delta");
                require(self.t_max.is_some(), "t_max");
                require(self.dt.is_some(), "dt");
                match self.model {
                    Some(ModelName::Lossy) | Some(ModelName::PureDephasing) => {
                        require(self.gamma_plus.is_some(), "gamma_plus");
                        require(self.gamma_minus.is_some(), "gamma_minus");
                    }
                    Some(ModelName::AtomicBath) => {
                        require(self.gamma.is_some(), "gamma");
                        require(self.omega.is_some(), "omega");
                        if let Some(delta) = self.delta {
                            let vacuum = (delta[0][0], delta[0][1]);
                            if vacuum != (0.0, 0.0) {
                                problems.push(
                                    "delta[0]: the atomic-bath model acts on the single-photon \
                                     block, the vacuum amplitude must be [0, 0]"
                                        .into(),
                                );
                            }
                        }
                    }
                    None => {}
                }
                if let Some(n_max) = self.n_max {
                    if n_max < 1 {
                        problems.push(format!("n_max: need at least 1, got {n_max}"));
                    }
                }
            }
        }

        for (name, value) in [
            ("gamma_plus", self.gamma_plus),
            ("gamma_minus", self.gamma_minus),
            ("gamma", self.gamma),
        ] {
            if let Some(rate) = value {
                if rate < 0.0 {
                    problems.push(format!("{name}: rate must be >= 0, got {rate}"));
                }
            }
        }
        if let Some(dt) = self.dt {
            if !dt.is_finite() || dt <= 0.0 {
                problems.push(format!("dt: must be > 0, got {dt}"));
            }
        }
        if let Some(t_max) = self.t_max {
            if t_max < 0.0 {
                problems.push(format!("t_max: must be >= 0, got {t_max}"));
            }
        }
        if let Some(sample_every) = self.sample_every {
            if sample_every == 0 {
                problems.push("sample_every: must be >= 1".into());
            }
        }
        if let Some(delta) = self.delta {
            let norm: f64 = delta.iter().map(|[re, im]| re * re + im * im).sum();
            if (norm - 1.0).abs() > 1e-9 {
                problems.push(format!("delta: amplitudes must have unit norm, got |delta|^2 = {norm}"));
            }
        }

        if problems.is_empty() {
            Ok(())
        } else {
            Err(format!("config errors:\n  - {}", problems.join("\n  - ")))
        }
    }

    /// The polarization model named by the config (validated fields only).
    pub fn polarization_kind(&self) -> Option<PolarizationModelKind> {
        match self.model? {
            ModelName::Lossy => Some(PolarizationModelKind::Lossy {
                gamma_plus: self.gamma_plus?,
                gamma_minus: self.gamma_minus?,
            }),
            ModelName::PureDephasing => Some(PolarizationModelKind::PureDephasing {
                gamma_plus: self.gamma_plus?,
                gamma_minus: self.gamma_minus?,
            }),
            ModelName::AtomicBath => Some(PolarizationModelKind::AtomicBath {
                gamma: self.gamma?,
                omega: self.omega?,
            }),
        }
    }
}
