//! Single-channel Portable Float Map: `Pf` header, little-endian samples
//! (negative scale), scanlines stored bottom-to-top.

use std::io::{BufRead, Write};
use std::path::Path;

use super::{create_file, open_file};
use crate::error::{Error, Result};
use crate::grid::Grid;

pub fn write_pfm_to<W: Write>(mut out: W, grid: &Grid<f32>) -> std::io::Result<()> {
    write!(out, "Pf\n{} {}\n-1.0\n", grid.width(), grid.height())?;
    let mut buf = Vec::with_capacity(grid.width() * 4);
    for y in (0..grid.height()).rev() {
        buf.clear();
        for v in grid.row(y) {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        out.write_all(&buf)?;
    }
    Ok(())
}

pub fn write_pfm(path: &Path, grid: &Grid<f32>) -> Result<()> {
    let mut f = create_file(path)?;
    write_pfm_to(&mut f, grid)
        .and_then(|_| f.flush())
        .map_err(|e| Error::io(path, e))
}

fn header_token<R: BufRead>(r: &mut R) -> Result<String> {
    let mut line = String::new();
    loop {
        line.clear();
        let n = r
            .read_line(&mut line)
            .map_err(|e| Error::format("pfm", e.to_string()))?;
        if n == 0 {
            return Err(Error::format("pfm", "truncated header"));
        }
        let t = line.trim();
        if !t.is_empty() && !t.starts_with('#') {
            return Ok(t.to_string());
        }
    }
}

pub fn read_pfm_from<R: BufRead>(mut r: R) -> Result<Grid<f32>> {
    let magic = header_token(&mut r)?;
    if magic != "Pf" {
        return Err(Error::format(
            "pfm",
            format!("expected single-channel 'Pf', found '{magic}'"),
        ));
    }
    let dims = header_token(&mut r)?;
    let mut it = dims.split_whitespace().map(str::parse::<usize>);
    let (w, h) = match (it.next(), it.next(), it.next()) {
        (Some(Ok(w)), Some(Ok(h)), None) if w > 0 && h > 0 => (w, h),
        _ => return Err(Error::format("pfm", format!("bad dimensions '{dims}'"))),
    };
    let scale: f32 = header_token(&mut r)?
        .parse()
        .map_err(|_| Error::format("pfm", "bad scale"))?;
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::format("pfm", "scale must be non-zero"));
    }
    let little = scale < 0.0;

    let mut bytes = vec![0u8; w * h * 4];
    r.read_exact(&mut bytes)
        .map_err(|_| Error::format("pfm", format!("expected {} bytes of samples", w * h * 4)))?;
    let mut data = vec![0f32; w * h];
    for (i, chunk) in bytes.chunks_exact(4).enumerate() {
        let b = [chunk[0], chunk[1], chunk[2], chunk[3]];
        let v = if little {
            f32::from_le_bytes(b)
        } else {
            f32::from_be_bytes(b)
        };
        let (row_from_bottom, x) = (i / w, i % w);
        data[(h - 1 - row_from_bottom) * w + x] = v;
    }
    Grid::from_vec(w, h, data)
}

pub fn read_pfm(path: &Path) -> Result<Grid<f32>> {
    read_pfm_from(open_file(path)?)
}
