//! Simulation configuration files.
//!
//! A configuration is a JSON document holding the protocol parameters, the
//! channel and the receiver switches. Every named preset of
//! [`umac_core::presets`] can be loaded by name or dumped as JSON and edited.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use umac_core::channel::FadingModel;
use umac_core::presets::{preset, PRESET_NAMES};
use umac_core::receiver::{PreambleCancellation, MAX_SIC_ITERATIONS};
use umac_core::trial::TrialConfig;
use umac_core::txproto::{ProtocolConfig, Scheme};

use crate::error::{Result, SimError};

fn one() -> usize {
    1
}

fn yes() -> bool {
    true
}

fn default_iterations() -> usize {
    MAX_SIC_ITERATIONS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    /// Label written to the `protocol` column of result files.
    pub name: String,
    pub protocol: ProtocolConfig,
    pub fading: FadingModel,
    #[serde(default = "one")]
    pub rx_antennas: usize,
    /// TIN-SIC when true, single-pass TIN otherwise.
    #[serde(default = "yes")]
    pub sic: bool,
    #[serde(default)]
    pub ideal_detection: bool,
    #[serde(default)]
    pub preamble_cancellation: PreambleCancellation,
    /// OMP list size override; the default is `ceil(1.5·K_a)`.
    #[serde(default)]
    pub list_size: Option<usize>,
    #[serde(default = "default_iterations")]
    pub max_iterations: usize,
}

impl SimConfig {
    pub fn from_preset(name: &str) -> Result<Self> {
        let p = preset(name).ok_or_else(|| SimError::UnknownPreset(name.to_string()))?;
        Ok(SimConfig {
            name: p.name.to_string(),
            protocol: p.protocol,
            fading: p.fading,
            rx_antennas: 1,
            sic: true,
            ideal_detection: p.ideal_detection,
            preamble_cancellation: PreambleCancellation::default(),
            list_size: None,
            max_iterations: MAX_SIC_ITERATIONS,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SimConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Accepts a preset name or the path of a JSON file.
    pub fn load(spec: &str) -> Result<Self> {
        if PRESET_NAMES.contains(&spec) {
            return Self::from_preset(spec);
        }
        let path = Path::new(spec);
        if !path.exists() {
            return Err(SimError::UnknownPreset(spec.to_string()));
        }
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.protocol.validate()?;
        if self.rx_antennas == 0 {
            return Err(SimError::Config("rx_antennas must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(SimError::Config("max_iterations must be at least 1".into()));
        }
        if self.list_size == Some(0) {
            return Err(SimError::Config("list_size must be at least 1".into()));
        }
        Ok(())
    }

    /// Builds the scheme (codes, dictionary) and the per-trial settings.
    pub fn trial_config(&self) -> Result<TrialConfig> {
        self.validate()?;
        let scheme = Arc::new(Scheme::new(self.protocol.clone())?);
        let mut cfg = TrialConfig::new(scheme, self.fading);
        cfg.n_rx = self.rx_antennas;
        cfg.ideal_detection = self.ideal_detection;
        cfg.receiver.sic = self.sic;
        cfg.receiver.max_iterations = self.max_iterations;
        cfg.receiver.list_size = self.list_size;
        cfg.receiver.preamble_cancellation = self.preamble_cancellation;
        Ok(cfg)
    }
}
