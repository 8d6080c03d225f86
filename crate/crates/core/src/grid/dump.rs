//! Grid snapshot format.
//!
//! ```text
//! VOXGRID1\n
//! <dims_x> <dims_y> <dims_z>\n
//! <vox_size> <origin_x> <origin_y> <origin_z>\n
//! <dims_x·dims_y·dims_z state bytes in idx order>
//! ```
//!
//! State bytes: 0 unknown, 1 free, 2 occupied, 3 unknown-and-traced.

use std::io::{BufRead, BufReader, Read, Write};

use super::{GridSpec, VoxelGrid, VoxelState};
use crate::error::{Error, Result};
use crate::math::Vec3;
use crate::scalar::Real;

pub const DUMP_MAGIC: &str = "VOXGRID1";

pub fn write_dump<T: Real, W: Write>(grid: &VoxelGrid<T>, mut w: W) -> Result<()> {
    let s = grid.spec();
    let [dx, dy, dz] = s.dims();
    let o = s.origin();
    writeln!(w, "{DUMP_MAGIC}")?;
    writeln!(w, "{dx} {dy} {dz}")?;
    writeln!(w, "{} {} {} {}", s.vox_size(), o.x, o.y, o.z)?;
    // VoxelState is repr(u8); its discriminants are the on-disk bytes.
    let bytes: Vec<u8> = grid.cells().iter().map(|&c| c as u8).collect();
    w.write_all(&bytes)?;
    w.flush()?;
    Ok(())
}

fn malformed(detail: impl Into<String>) -> Error {
    Error::Format {
        what: "grid dump",
        detail: detail.into(),
    }
}

fn header_line<R: BufRead>(r: &mut R) -> Result<String> {
    let mut line = String::new();
    if r.read_line(&mut line)? == 0 {
        return Err(malformed("truncated header"));
    }
    Ok(line.trim_end_matches(['\n', '\r']).to_string())
}

fn parse_fields<V: std::str::FromStr>(line: &str, n: usize, what: &str) -> Result<Vec<V>> {
    let vals: Vec<V> = line
        .split_whitespace()
        .map(|t| t.parse::<V>().map_err(|_| malformed(format!("bad {what} `{t}`"))))
        .collect::<Result<_>>()?;
    if vals.len() != n {
        return Err(malformed(format!("expected {n} {what} values, got {}", vals.len())));
    }
    Ok(vals)
}

pub fn read_dump<T: Real, R: Read>(r: R) -> Result<VoxelGrid<T>> {
    let mut r = BufReader::new(r);
    if header_line(&mut r)? != DUMP_MAGIC {
        return Err(malformed("missing VOXGRID1 magic"));
    }
    let dims: Vec<usize> = parse_fields(&header_line(&mut r)?, 3, "dims")?;
    let geo: Vec<T> = parse_fields(&header_line(&mut r)?, 4, "geometry")?;
    let spec = GridSpec::from_dims([dims[0], dims[1], dims[2]], geo[0], Vec3::new(geo[1], geo[2], geo[3]))?;
    let mut bytes = Vec::with_capacity(spec.num_voxels());
    r.read_to_end(&mut bytes)?;
    if bytes.len() != spec.num_voxels() {
        return Err(malformed(format!(
            "expected {} state bytes, got {}",
            spec.num_voxels(),
            bytes.len()
        )));
    }
    let cells = bytes
        .iter()
        .map(|&b| VoxelState::from_byte(b).ok_or_else(|| malformed(format!("bad state byte {b}"))))
        .collect::<Result<Vec<_>>>()?;
    VoxelGrid::from_cells(spec, cells)
}
