use std::path::Path;
use std::time::{Duration, Instant};

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::costmaps::{
    canny_edges, decision_map, depth_confidence_map, energy_map, flatness_from_edges,
    minmax_normalize, steepness_map, surface_normals, BinaryMap, Costmap, Orientation,
};
use crate::detection::{candidates_to_world, dense_candidates, CandidateSite, LandingSite};
use crate::error::Result;
use crate::geometry::DepthFrame;
use crate::io::{binary_to_pgm, preview_pgm, write_json, write_jsonl, write_pfm, write_pgm};
use crate::registry::{cluster_sites, ClusterSite, RegistrySnapshot, SiteRegistry};
use crate::Grid;

use super::PipelineConfig;

pub const CANDIDATES_FILE: &str = "candidates.jsonl";
pub const SITES_FILE: &str = "sites.json";
pub const CLUSTERS_FILE: &str = "clusters.json";

/// Every map computed for one frame. These are the exact arrays the
/// candidate test reads.
#[derive(Clone, Debug)]
pub struct FrameMaps {
    pub depth_confidence_raw: Costmap,
    pub depth_confidence: Costmap,
    pub edges: BinaryMap,
    pub flatness_raw: Costmap,
    pub flatness: Costmap,
    pub steepness: Costmap,
    pub energy_raw: Costmap,
    pub energy: Costmap,
    pub decision: Costmap,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageTimes {
    pub depth_accuracy: Duration,
    pub flatness: Duration,
    pub steepness: Duration,
    pub energy: Duration,
    pub fusion: Duration,
    /// Candidate extraction, world projection and registry insertion.
    pub detection: Duration,
    pub clustering: Duration,
}

impl StageTimes {
    pub fn total(&self) -> Duration {
        self.as_array().iter().sum()
    }

    pub fn as_array(&self) -> [Duration; 7] {
        [
            self.depth_accuracy,
            self.flatness,
            self.steepness,
            self.energy,
            self.fusion,
            self.detection,
            self.clustering,
        ]
    }
}

#[derive(Clone, Debug)]
pub struct FrameResult {
    pub frame_id: u64,
    pub maps: FrameMaps,
    pub candidates: Vec<CandidateSite>,
    pub sites: Vec<LandingSite>,
    /// Candidates whose world projection failed.
    pub skipped: usize,
    pub times: StageTimes,
}

fn timed<T>(slot: &mut Duration, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *slot += start.elapsed();
    out
}

/// Runs the per-frame part of the pipeline. Registry insertion is left to
/// [`Pipeline::push_frame`].
pub fn process_frame(cfg: &PipelineConfig, frame: &DepthFrame) -> Result<FrameResult> {
    let weights = cfg.fusion_weights();
    let mut t = StageTimes::default();

    let (depth_confidence_raw, depth_confidence) = timed(&mut t.depth_accuracy, || {
        let raw = depth_confidence_map(frame);
        let norm = minmax_normalize(&raw, Orientation::HigherIsBetter);
        (raw, norm)
    });

    let (edges, flatness_raw, flatness) = timed(&mut t.flatness, || -> Result<_> {
        let edges = canny_edges(frame, cfg.canny())?;
        let raw = flatness_from_edges(frame, &edges);
        let norm = minmax_normalize(&raw, Orientation::HigherIsBetter);
        Ok((edges, raw, norm))
    })?;

    let steepness = timed(&mut t.steepness, || -> Result<_> {
        let normals = surface_normals(frame, cfg.smoothing_window_px)?;
        Ok(steepness_map(&normals, weights.theta_th))
    })?;

    let (energy_raw, energy) = timed(&mut t.energy, || {
        let raw = energy_map(frame);
        let norm = minmax_normalize(&raw, Orientation::LowerIsBetter);
        (raw, norm)
    });

    let decision = timed(&mut t.fusion, || {
        decision_map(&depth_confidence, &flatness, &steepness, &energy, &weights)
    })?;

    let (candidates, sites, skipped) = timed(&mut t.detection, || -> Result<_> {
        let cands = dense_candidates(&decision, &flatness_raw, frame, &weights, cfg.footprint())?;
        let (sites, skipped) = candidates_to_world(&cands, frame);
        Ok((cands, sites, skipped))
    })?;
    debug!(
        "frame {}: {} candidates, {} skipped",
        frame.frame_id,
        candidates.len(),
        skipped
    );

    Ok(FrameResult {
        frame_id: frame.frame_id,
        maps: FrameMaps {
            depth_confidence_raw,
            depth_confidence,
            edges,
            flatness_raw,
            flatness,
            steepness,
            energy_raw,
            energy,
            decision,
        },
        candidates,
        sites,
        skipped,
        times: t,
    })
}

/// Stateful pipeline: accumulates candidates and the global site registry.
#[derive(Clone, Debug)]
pub struct Pipeline {
    cfg: PipelineConfig,
    registry: SiteRegistry,
    candidates: Vec<CandidateSite>,
    frames_processed: usize,
    frames_skipped: usize,
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            registry: SiteRegistry::new(cfg.dedup_radius_m)?,
            cfg,
            candidates: Vec::new(),
            frames_processed: 0,
            frames_skipped: 0,
        })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    pub fn registry(&self) -> &SiteRegistry {
        &self.registry
    }

    pub fn push_frame(&mut self, frame: &DepthFrame) -> Result<FrameResult> {
        let mut result = process_frame(&self.cfg, frame)?;
        let start = Instant::now();
        for site in &result.sites {
            self.registry.insert(*site)?;
        }
        result.times.detection += start.elapsed();
        self.candidates.extend_from_slice(&result.candidates);
        self.frames_processed += 1;
        Ok(result)
    }

    /// Records a frame that could not be loaded.
    pub fn skip_frame(&mut self) {
        self.frames_skipped += 1;
    }

    pub fn clusters(&self) -> Result<Vec<ClusterSite>> {
        cluster_sites(&self.registry, &self.cfg.cluster_params())
    }

    pub fn finish(self) -> Result<PipelineOutput> {
        let clusters = self.clusters()?;
        Ok(PipelineOutput {
            candidates: self.candidates,
            registry: self.registry.snapshot(),
            clusters,
            frames_processed: self.frames_processed,
            frames_skipped: self.frames_skipped,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineOutput {
    pub candidates: Vec<CandidateSite>,
    pub registry: RegistrySnapshot,
    pub clusters: Vec<ClusterSite>,
    pub frames_processed: usize,
    pub frames_skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClustersFile {
    pub clusters: Vec<ClusterSite>,
}

/// Processes a frame stream. Frames that fail to load are counted and
/// skipped; processing errors abort. With `dump_dir`, every frame's maps are
/// written there.
pub fn run_pipeline<I>(
    cfg: &PipelineConfig,
    frames: I,
    dump_dir: Option<&Path>,
) -> Result<PipelineOutput>
where
    I: IntoIterator<Item = Result<DepthFrame>>,
{
    let mut pipeline = Pipeline::new(cfg.clone())?;
    for frame in frames {
        let frame = match frame {
            Ok(f) => f,
            Err(e) if e.is_config() => return Err(e),
            Err(e) => {
                warn!("skipping frame: {e}");
                pipeline.skip_frame();
                continue;
            }
        };
        let result = pipeline.push_frame(&frame)?;
        if let Some(dir) = dump_dir {
            dump_costmaps(dir, result.frame_id, &result.maps)?;
        }
    }
    pipeline.finish()
}

/// Writes candidates.jsonl, sites.json and clusters.json into `dir`.
pub fn write_outputs(dir: &Path, out: &PipelineOutput) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| crate::Error::io(dir, e))?;
    write_jsonl(&dir.join(CANDIDATES_FILE), &out.candidates)?;
    write_json(&dir.join(SITES_FILE), &out.registry)?;
    write_json(
        &dir.join(CLUSTERS_FILE),
        &ClustersFile {
            clusters: out.clusters.clone(),
        },
    )
}

fn to_f32(map: &Costmap) -> Grid<f32> {
    Grid::from_fn(map.width(), map.height(), |x, y| match map.value(x, y) {
        Some(v) => v as f32,
        None => f32::NAN,
    })
}

/// Writes each map as `{frame:06}_{name}.pfm` (invalid pixels are NaN) plus a
/// `.pgm` preview, and the edge map as a binary PGM.
pub fn dump_costmaps(dir: &Path, frame_id: u64, maps: &FrameMaps) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| crate::Error::io(dir, e))?;
    let named = [
        ("depth_confidence_raw", &maps.depth_confidence_raw),
        ("depth_confidence", &maps.depth_confidence),
        ("flatness_raw", &maps.flatness_raw),
        ("flatness", &maps.flatness),
        ("steepness", &maps.steepness),
        ("energy_raw", &maps.energy_raw),
        ("energy", &maps.energy),
        ("decision", &maps.decision),
    ];
    for (name, map) in named {
        let stem = format!("{frame_id:06}_{name}");
        write_pfm(&dir.join(format!("{stem}.pfm")), &to_f32(map))?;
        write_pgm(&dir.join(format!("{stem}.pgm")), &preview_pgm(map))?;
    }
    write_pgm(
        &dir.join(format!("{frame_id:06}_edges.pgm")),
        &binary_to_pgm(&maps.edges),
    )
}
