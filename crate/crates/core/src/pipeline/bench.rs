use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use statrs::statistics::Statistics;

use crate::error::{Error, Result};
use crate::geometry::DepthFrame;

use super::{Pipeline, PipelineConfig};

pub const STAGE_NAMES: [&str; 7] = [
    "Depth Accuracy",
    "Flatness",
    "Steepness",
    "Energy",
    "Final",
    "Dense Detection",
    "Clustering",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageStats {
    pub name: String,
    pub mean_ms: f64,
    pub std_ms: f64,
}

impl StageStats {
    fn from_samples(name: &str, samples: &[f64]) -> Self {
        let std = if samples.len() > 1 {
            samples.std_dev()
        } else {
            0.0
        };
        Self {
            name: name.to_string(),
            mean_ms: samples.mean(),
            std_ms: std,
        }
    }
}

/// Per-stage wall time over `frames × repetitions` samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub frames: usize,
    pub repetitions: usize,
    pub width: usize,
    pub height: usize,
    pub stages: Vec<StageStats>,
    pub total: StageStats,
}

impl TimingReport {
    pub fn stage(&self, name: &str) -> Option<&StageStats> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} frames x {} reps at {}x{}",
            self.frames, self.repetitions, self.width, self.height
        );
        let _ = writeln!(s, "{:<18} {:>12}", "Costmap", "Time (ms)");
        for st in self.stages.iter().chain(std::iter::once(&self.total)) {
            let _ = writeln!(
                s,
                "{:<18} {:>12}",
                st.name,
                format!("{:.1} ± {:.1}", st.mean_ms, st.std_ms)
            );
        }
        s
    }
}

/// Times every stage after one warm-up pass. Each repetition starts from an
/// empty registry and clusters the registry after every frame.
pub fn bench(cfg: &PipelineConfig, frames: &[DepthFrame], repetitions: usize) -> Result<TimingReport> {
    if frames.is_empty() || repetitions == 0 {
        return Err(Error::config("bench needs at least one frame and one repetition"));
    }
    // One untimed pass so allocator and cache state match the timed passes.
    let mut warm = Pipeline::new(cfg.clone())?;
    for frame in frames {
        warm.push_frame(frame)?;
        std::hint::black_box(warm.clusters()?);
    }
    let mut per_stage: Vec<Vec<f64>> = vec![Vec::new(); STAGE_NAMES.len()];
    let mut totals = Vec::new();
    for _ in 0..repetitions {
        let mut pipeline = Pipeline::new(cfg.clone())?;
        for frame in frames {
            let mut times = pipeline.push_frame(frame)?.times;
            let start = std::time::Instant::now();
            let clusters = pipeline.clusters()?;
            times.clustering = start.elapsed();
            std::hint::black_box(clusters);
            for (acc, d) in per_stage.iter_mut().zip(times.as_array()) {
                acc.push(d.as_secs_f64() * 1e3);
            }
            totals.push(times.total().as_secs_f64() * 1e3);
        }
    }
    let (width, height) = frames[0].shape();
    Ok(TimingReport {
        frames: frames.len(),
        repetitions,
        width,
        height,
        stages: STAGE_NAMES
            .iter()
            .zip(&per_stage)
            .map(|(n, s)| StageStats::from_samples(n, s))
            .collect(),
        total: StageStats::from_samples("Total Time", &totals),
    })
}
