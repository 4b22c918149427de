//! Binary 8-bit PGM (`P5`).

use std::io::{BufRead, Read, Write};
use std::path::Path;

use super::{create_file, open_file};
use crate::costmaps::{BinaryMap, Costmap};
use crate::error::{Error, Result};
use crate::grid::Grid;

pub fn write_pgm_to<W: Write>(mut out: W, grid: &Grid<u8>) -> std::io::Result<()> {
    write!(out, "P5\n{} {}\n255\n", grid.width(), grid.height())?;
    out.write_all(grid.as_slice())
}

pub fn write_pgm(path: &Path, grid: &Grid<u8>) -> Result<()> {
    let mut f = create_file(path)?;
    write_pgm_to(&mut f, grid)
        .and_then(|_| f.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn read_pgm(path: &Path) -> Result<Grid<u8>> {
    let mut r = open_file(path)?;
    let mut tokens = Vec::new();
    let mut line = String::new();
    while tokens.len() < 4 {
        line.clear();
        if r.read_line(&mut line).map_err(|e| Error::io(path, e))? == 0 {
            return Err(Error::format("pgm", "truncated header"));
        }
        let content = line.split('#').next().unwrap_or("");
        tokens.extend(content.split_whitespace().map(str::to_string));
    }
    if tokens[0] != "P5" || tokens[3] != "255" {
        return Err(Error::format("pgm", "only 8-bit binary P5 is supported"));
    }
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::format("pgm", format!("bad dimension '{s}'")))
    };
    let (w, h) = (parse(&tokens[1])?, parse(&tokens[2])?);
    let mut data = vec![0u8; w * h];
    r.read_exact(&mut data)
        .map_err(|_| Error::format("pgm", "truncated pixel data"))?;
    Grid::from_vec(w, h, data)
}

/// Edges as 255, background as 0.
pub fn binary_to_pgm(map: &BinaryMap) -> Grid<u8> {
    map.map(|&b| if b { 255 } else { 0 })
}

/// 8-bit preview scaled over the valid range; invalid pixels are 0 and
/// valid pixels map to 1..=255.
pub fn preview_pgm(map: &Costmap) -> Grid<u8> {
    let (lo, hi) = map.valid_range().unwrap_or((0.0, 1.0));
    let span = hi - lo;
    Grid::from_fn(map.width(), map.height(), |x, y| match map.value(x, y) {
        None => 0,
        Some(v) if span > 0.0 => 1 + ((v - lo) / span * 254.0).round() as u8,
        Some(_) => 128,
    })
}
