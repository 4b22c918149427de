//! Prints per-scene detection statistics for the canonical scenes.
//!
//! `cargo run --example scene_report -- [sim|real] [dedup_radius_m]`

use landsite::pipeline::{Pipeline, PipelineConfig};
use landsite::scene::canonical_scenes;

fn main() -> landsite::Result<()> {
    let profile = std::env::args().nth(1).unwrap_or_else(|| "sim".into());
    let mut cfg = PipelineConfig::profile(&profile)?;
    if let Some(r) = std::env::args().nth(2) {
        cfg.dedup_radius_m = r
            .parse()
            .map_err(|_| landsite::Error::config(format!("bad dedup radius '{r}'")))?;
    }
    for scene in canonical_scenes() {
        let mut pipeline = Pipeline::new(cfg.clone())?;
        let mut candidates = 0;
        for r in scene.render(cfg.depth_range()?)? {
            let res = pipeline.push_frame(&r.frame)?;
            let d = res.maps.decision.valid_range();
            let f = res.maps.flatness_raw.valid_range();
            println!(
                "  {} frame {}: {} candidates, J range {:?}, flat_raw range {:?}",
                scene.name,
                r.frame.frame_id,
                res.candidates.len(),
                d,
                f
            );
            candidates += res.candidates.len();
        }
        let clusters = pipeline.clusters()?;
        println!(
            "{}: {} candidates, {} sites, {} clusters",
            scene.name,
            candidates,
            pipeline.registry().len(),
            clusters.len()
        );
        for c in clusters.iter().take(5) {
            println!(
                "    ({:.2}, {:.2}, {:.2}) score {:.3} members {}",
                c.cx, c.cy, c.cz, c.mean_score, c.members
            );
        }
    }
    Ok(())
}
