use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use landsite::geometry::DepthFrame;
use landsite::io::{read_frame_stream, read_json, write_frame_stream, write_json};
use landsite::pipeline::{
    bench, dump_costmaps, process_frame, run_pipeline, write_outputs, ClustersFile,
    PipelineConfig,
};
use landsite::registry::{cluster_sites, RegistrySnapshot, SiteRegistry};
use landsite::scene::{canonical_scene, SCENE_NAMES};

const EXIT_CONFIG: u8 = 1;
const EXIT_DATA: u8 = 2;

#[derive(Parser)]
#[command(name = "landsite", version, about = "Landing-site detection from depth frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Sim,
    Real,
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON configuration file; overrides --profile.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "sim")]
    profile: Profile,
}

impl ConfigArgs {
    fn load(&self) -> landsite::Result<PipelineConfig> {
        let cfg = match &self.config {
            Some(path) => PipelineConfig::load(path)?,
            None => match self.profile {
                Profile::Sim => PipelineConfig::sim(),
                Profile::Real => PipelineConfig::real(),
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline over a frame stream directory.
    Detect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dump_costmaps: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Write the costmaps of one frame (or all frames) of a stream.
    Costmap {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        frame: Option<u64>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Render a canonical scene into a frame stream directory.
    Synth {
        #[arg(long)]
        scene: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Depth noise standard deviation in meters.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
    /// Time every pipeline stage.
    Bench {
        /// Frame stream directory; if absent, --scene is rendered.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "RUBBLE")]
        scene: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// Where to write timing.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Re-cluster a saved sites.json.
    Cluster {
        #[arg(long)]
        sites: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Print a profile as JSON.
    Config {
        #[arg(long, value_enum, default_value = "sim")]
        profile: Profile,
    },
}

fn load_stream(dir: &Path, cfg: &PipelineConfig) -> Result<Vec<landsite::Result<DepthFrame>>> {
    let stream = read_frame_stream(dir, cfg.depth_range()?)
        .with_context(|| format!("reading frame stream {}", dir.display()))?;
    Ok(stream.frames().collect())
}

fn synth_frames(name: &str, seed: u64, noise: f64, cfg: &PipelineConfig) -> Result<Vec<DepthFrame>> {
    let mut scene = canonical_scene(name, seed).ok_or_else(|| {
        landsite::Error::config(format!(
            "unknown scene '{name}' (expected one of {})",
            SCENE_NAMES.join(", ")
        ))
    })?;
    scene.spec = scene.spec.with_noise(noise, seed);
    Ok(scene
        .render(cfg.depth_range()?)?
        .into_iter()
        .map(|r| r.frame)
        .collect())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Detect {
            input,
            out,
            dump_costmaps,
            config,
        } => {
            let cfg = config.load()?;
            let frames = load_stream(&input, &cfg)?;
            let output = run_pipeline(&cfg, frames, dump_costmaps.as_deref())?;
            write_outputs(&out, &output)?;
            info!(
                "{} frames ({} skipped), {} candidates, {} sites, {} clusters",
                output.frames_processed,
                output.frames_skipped,
                output.candidates.len(),
                output.registry.sites.len(),
                output.clusters.len()
            );
        }
        Command::Costmap {
            input,
            out,
            frame,
            config,
        } => {
            let cfg = config.load()?;
            let mut found = false;
            for f in load_stream(&input, &cfg)? {
                let f = f?;
                if frame.is_some_and(|id| id != f.frame_id) {
                    continue;
                }
                found = true;
                let result = process_frame(&cfg, &f)?;
                dump_costmaps(&out, f.frame_id, &result.maps)?;
            }
            if let (Some(id), false) = (frame, found) {
                return Err(landsite::Error::config(format!("frame {id} not in stream")).into());
            }
        }
        Command::Synth {
            scene,
            out,
            seed,
            noise,
        } => {
            let frames = synth_frames(&scene, seed, noise, &PipelineConfig::sim())?;
            write_frame_stream(&out, &frames)?;
            info!("wrote {} frames to {}", frames.len(), out.display());
        }
        Command::Bench {
            input,
            scene,
            seed,
            reps,
            out,
            config,
        } => {
            let cfg = config.load()?;
            let frames = match input {
                Some(dir) => load_stream(&dir, &cfg)?
                    .into_iter()
                    .collect::<landsite::Result<Vec<_>>>()?,
                None => synth_frames(&scene, seed, 0.0, &cfg)?,
            };
            let report = bench(&cfg, &frames, reps)?;
            print!("{}", report.to_table());
            if let Some(path) = out {
                write_json(&path, &report)?;
            }
        }
        Command::Cluster { sites, out, config } => {
            let cfg = config.load()?;
            let snapshot: RegistrySnapshot = read_json(&sites)?;
            let registry = SiteRegistry::from_snapshot(&snapshot)?;
            let clusters = cluster_sites(&registry, &cfg.cluster_params())?;
            write_json(&out, &ClustersFile { clusters })?;
        }
        Command::Config { profile } => {
            let cfg = match profile {
                Profile::Sim => PipelineConfig::sim(),
                Profile::Real => PipelineConfig::real(),
            };
            println!("{}", serde_json::to_string_pretty(&cfg)?);
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<landsite::Error>() {
        Some(e) if e.is_config() => EXIT_CONFIG,
        _ => EXIT_DATA,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
