use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::costmaps::{CannyThresholds, FusionWeights};
use crate::detection::Footprint;
use crate::error::{Error, Result};
use crate::geometry::DepthRange;
use crate::registry::{ClusterMetric, ClusterParams};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsConfig {
    pub c1_depth_confidence: f64,
    pub c2_flatness: f64,
    pub c3_steepness: f64,
    pub c4_energy: f64,
}

/// Every tunable of the pipeline. Field names carry their units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub profile: String,
    pub weights: WeightsConfig,
    pub decision_threshold: f64,
    pub theta_th_deg: f64,
    pub canny_low_m: f64,
    pub canny_high_m: f64,
    pub smoothing_window_px: usize,
    pub uav_radius_m: f64,
    pub safety_factor: f64,
    pub dedup_radius_m: f64,
    pub cluster_dist_m: f64,
    pub cluster_z_m: f64,
    pub cluster_metric: ClusterMetric,
    pub d_min_m: f64,
    pub d_max_m: f64,
}

impl PipelineConfig {
    fn base(profile: &str, weights: [f64; 4], threshold: f64, cluster_z_m: f64) -> Self {
        Self {
            profile: profile.to_string(),
            weights: WeightsConfig {
                c1_depth_confidence: weights[0],
                c2_flatness: weights[1],
                c3_steepness: weights[2],
                c4_energy: weights[3],
            },
            decision_threshold: threshold,
            theta_th_deg: 15.0,
            canny_low_m: 0.05,
            canny_high_m: 0.20,
            smoothing_window_px: 3,
            // half of the 0.26 m frame
            uav_radius_m: 0.13,
            safety_factor: 1.0,
            dedup_radius_m: 0.25,
            cluster_dist_m: 0.5,
            cluster_z_m,
            cluster_metric: ClusterMetric::Xy,
            d_min_m: crate::DEFAULT_D_MIN,
            d_max_m: crate::DEFAULT_D_MAX,
        }
    }

    /// Simulation profile: ground-truth depth, so depth confidence is weighted low.
    pub fn sim() -> Self {
        Self::base("sim", [0.05, 0.4, 0.4, 0.15], 0.72, 0.01)
    }

    /// Real-world profile for noisy stereo depth.
    pub fn real() -> Self {
        Self::base("real", [0.15, 0.35, 0.4, 0.1], 0.7, 0.05)
    }

    pub fn profile(name: &str) -> Result<Self> {
        match name {
            "sim" => Ok(Self::sim()),
            "real" => Ok(Self::real()),
            other => Err(Error::config(format!(
                "unknown profile '{other}' (expected sim or real)"
            ))),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn fusion_weights(&self) -> FusionWeights {
        FusionWeights {
            c1: self.weights.c1_depth_confidence,
            c2: self.weights.c2_flatness,
            c3: self.weights.c3_steepness,
            c4: self.weights.c4_energy,
            decision_threshold: self.decision_threshold,
            theta_th: self.theta_th_deg.to_radians(),
        }
    }

    pub fn canny(&self) -> CannyThresholds {
        CannyThresholds {
            low: self.canny_low_m,
            high: self.canny_high_m,
        }
    }

    pub fn footprint(&self) -> Footprint {
        Footprint {
            uav_radius: self.uav_radius_m,
            safety_factor: self.safety_factor,
        }
    }

    pub fn cluster_params(&self) -> ClusterParams {
        ClusterParams {
            dist_th: self.cluster_dist_m,
            z_th: self.cluster_z_m,
            metric: self.cluster_metric,
        }
    }

    pub fn depth_range(&self) -> Result<DepthRange> {
        DepthRange::new(self.d_min_m, self.d_max_m)
    }

    pub fn validate(&self) -> Result<()> {
        self.fusion_weights().validate()?;
        self.canny().validate()?;
        self.cluster_params().validate()?;
        self.depth_range()?;
        if !(0.0..=1.0).contains(&self.decision_threshold) {
            return Err(Error::config("decision threshold must lie in [0, 1]"));
        }
        if self.smoothing_window_px == 0 || self.smoothing_window_px.is_multiple_of(2) {
            return Err(Error::config("smoothing window must be odd and >= 1"));
        }
        let positive = [
            ("uav_radius_m", self.uav_radius_m),
            ("safety_factor", self.safety_factor),
            ("dedup_radius_m", self.dedup_radius_m),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self::sim()
    }
}
