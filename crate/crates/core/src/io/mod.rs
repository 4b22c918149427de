//! File formats: PFM/PGM rasters, pose/intrinsics records, frame streams.

mod frames;
mod pfm;
mod pgm;

pub use frames::{
    depth_file_name, read_frame, read_frame_stream, read_intrinsics, read_pose_records,
    write_frame_stream, FrameStream, PoseRecord, FRAMES_FILE, INTRINSICS_FILE,
};
pub use pfm::{read_pfm, read_pfm_from, write_pfm, write_pfm_to};
pub use pgm::{binary_to_pgm, preview_pgm, read_pgm, write_pgm, write_pgm_to};

use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn create_file(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub(crate) fn open_file(path: &Path) -> Result<std::io::BufReader<std::fs::File>> {
    std::fs::File::open(path)
        .map(std::io::BufReader::new)
        .map_err(|e| Error::io(path, e))
}

/// Writes a JSON document followed by a newline.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    use std::io::Write;
    let mut f = create_file(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f).map_err(|e| Error::io(path, e))?;
    f.flush().map_err(|e| Error::io(path, e))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let f = open_file(path)?;
    Ok(serde_json::from_reader(f)?)
}

/// Writes one compact JSON record per line.
pub fn write_jsonl<T: serde::Serialize>(path: &Path, records: &[T]) -> Result<()> {
    use std::io::Write;
    let mut f = create_file(path)?;
    for r in records {
        serde_json::to_writer(&mut f, r)?;
        writeln!(f).map_err(|e| Error::io(path, e))?;
    }
    f.flush().map_err(|e| Error::io(path, e))
}
