//! End-to-end orchestration: configuration profiles, per-frame processing,
//! the global registry, output files, and the per-stage benchmark.

mod bench;
mod config;
mod run;

pub use bench::{bench, StageStats, TimingReport, STAGE_NAMES};
pub use config::{PipelineConfig, WeightsConfig};
pub use run::{
    dump_costmaps, process_frame, run_pipeline, write_outputs, ClustersFile, FrameMaps,
    FrameResult, Pipeline, PipelineOutput, StageTimes, CANDIDATES_FILE, CLUSTERS_FILE,
    SITES_FILE,
};
