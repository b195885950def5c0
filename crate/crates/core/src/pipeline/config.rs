use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::edges::CannyParams;
use crate::filtering::FrangiParams;
use crate::segmentation::SeShape;
use crate::topology::PruneParams;
use crate::tracking::CostWeights;

/// Which image Otsu thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OtsuSource {
    /// Vesselness magnitude, quantized to 256 levels.
    #[default]
    Magnitude,
    /// The median-filtered input. For dark vessels it is inverted first so
    /// that the vessels end up above the threshold.
    Original,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClosingConfig {
    pub shape: SeShape,
    pub radius: usize,
}

impl Default for ClosingConfig {
    fn default() -> Self {
        Self {
            shape: SeShape::Square,
            radius: 1,
        }
    }
}

/// Where graph nodes come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeSource {
    /// Every pixel of the pruned skeleton.
    #[default]
    Skeleton,
    /// Strict local maxima of the vesselness magnitude.
    LocalMaxima,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NodeConfig {
    pub source: NodeSource,
    pub window: usize,
    pub floor: f64,
}

impl Default for NodeConfig {
    fn default() -> Self {
        Self {
            source: NodeSource::Skeleton,
            window: 5,
            floor: 0.05,
        }
    }
}

/// Every knob of a run. All fields are optional in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub median_window: usize,
    pub frangi: FrangiParams,
    pub otsu_source: OtsuSource,
    pub closing: ClosingConfig,
    pub min_component_size: usize,
    pub prune: PruneParams,
    pub canny: CannyParams,
    pub nodes: NodeConfig,
    pub cost: CostWeights,
    /// Arc-length spacing of radius samples, pixels.
    pub radius_step: f64,
    pub output_dir: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            median_window: 3,
            frangi: FrangiParams::default(),
            otsu_source: OtsuSource::Magnitude,
            closing: ClosingConfig::default(),
            min_component_size: 20,
            prune: PruneParams::default(),
            canny: CannyParams::default(),
            nodes: NodeConfig::default(),
            cost: CostWeights::default(),
            radius_step: 1.0,
            output_dir: None,
        }
    }
}

impl PipelineConfig {
    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks that do not need an image. Stage-level parameter errors are
    /// reported by the stage that uses them.
    pub fn validate(&self) -> Result<(), PipelineError> {
        if !(self.radius_step.is_finite() && self.radius_step > 0.0) {
            return Err(PipelineError::Config("radius_step must be positive".into()));
        }
        Ok(())
    }
}
