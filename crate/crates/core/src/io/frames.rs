//! Frame-stream directories.
//!
//! ```text
//! stream/
//!   intrinsics.json   {fx, fy, cx, cy, width, height}
//!   frames.jsonl      {frame_id, t_sec, qw, qx, qy, qz, tx, ty, tz} per line
//!   000000.pfm        depth in meters, 0 where invalid
//! ```

use std::io::BufRead;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{open_file, read_json, read_pfm, write_json, write_jsonl, write_pfm};
use crate::error::{Error, Result};
use crate::geometry::{CameraIntrinsics, DepthFrame, DepthRange, Pose, Vec3};
use crate::grid::Grid;

pub const FRAMES_FILE: &str = "frames.jsonl";
pub const INTRINSICS_FILE: &str = "intrinsics.json";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoseRecord {
    pub frame_id: u64,
    pub t_sec: f64,
    pub qw: f64,
    pub qx: f64,
    pub qy: f64,
    pub qz: f64,
    pub tx: f64,
    pub ty: f64,
    pub tz: f64,
}

impl PoseRecord {
    pub fn from_pose(frame_id: u64, t_sec: f64, pose: &Pose) -> Self {
        let q = pose.quaternion();
        let t = pose.translation();
        Self {
            frame_id,
            t_sec,
            qw: q.w,
            qx: q.i,
            qy: q.j,
            qz: q.k,
            tx: t.x,
            ty: t.y,
            tz: t.z,
        }
    }

    pub fn pose(&self) -> Result<Pose> {
        Pose::from_quaternion(
            self.qw,
            self.qx,
            self.qy,
            self.qz,
            Vec3::new(self.tx, self.ty, self.tz),
        )
    }
}

pub fn depth_file_name(frame_id: u64) -> String {
    format!("{frame_id:06}.pfm")
}

pub fn read_intrinsics(path: &Path) -> Result<CameraIntrinsics> {
    let k: CameraIntrinsics = read_json(path)?;
    k.validate()?;
    Ok(k)
}

pub fn read_pose_records(path: &Path) -> Result<Vec<PoseRecord>> {
    let f = open_file(path)?;
    let mut out = Vec::new();
    for (i, line) in f.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: PoseRecord = serde_json::from_str(&line).map_err(|e| {
            Error::format("pose record", format!("{}:{}: {e}", path.display(), i + 1))
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn read_frame(
    dir: &Path,
    record: &PoseRecord,
    intrinsics: &CameraIntrinsics,
    range: DepthRange,
) -> Result<DepthFrame> {
    let raw = read_pfm(&dir.join(depth_file_name(record.frame_id)))?;
    let depth = raw.map(|&v| v as f64);
    DepthFrame::new(
        depth,
        *intrinsics,
        record.pose()?,
        record.frame_id,
        record.t_sec,
        range,
    )
}

/// Lazily loaded frames of a stream directory.
#[derive(Clone, Debug)]
pub struct FrameStream {
    pub dir: PathBuf,
    pub intrinsics: CameraIntrinsics,
    pub records: Vec<PoseRecord>,
    pub range: DepthRange,
}

impl FrameStream {
    pub fn frames(&self) -> impl Iterator<Item = Result<DepthFrame>> + '_ {
        self.records
            .iter()
            .map(move |r| read_frame(&self.dir, r, &self.intrinsics, self.range))
    }
}

pub fn read_frame_stream(dir: &Path, range: DepthRange) -> Result<FrameStream> {
    Ok(FrameStream {
        dir: dir.to_path_buf(),
        intrinsics: read_intrinsics(&dir.join(INTRINSICS_FILE))?,
        records: read_pose_records(&dir.join(FRAMES_FILE))?,
        range,
    })
}

/// Writes frames as a stream directory. All frames must share intrinsics.
pub fn write_frame_stream(dir: &Path, frames: &[DepthFrame]) -> Result<()> {
    let Some(first) = frames.first() else {
        return Err(Error::config("no frames to write"));
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_json(&dir.join(INTRINSICS_FILE), &first.intrinsics)?;
    let mut records = Vec::with_capacity(frames.len());
    for f in frames {
        if f.intrinsics != first.intrinsics {
            return Err(Error::config("frames in one stream must share intrinsics"));
        }
        let depth: Grid<f32> = Grid::from_fn(f.width(), f.height(), |x, y| {
            if f.is_valid(x, y) {
                f.depth.at(x, y) as f32
            } else {
                0.0
            }
        });
        write_pfm(&dir.join(depth_file_name(f.frame_id)), &depth)?;
        records.push(PoseRecord::from_pose(
            f.frame_id,
            f.timestamp,
            &f.pose_world_from_camera,
        ));
    }
    write_jsonl(&dir.join(FRAMES_FILE), &records)
}
