//! Self-describing binary field dumps.
//!
//! Layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 8     | magic `DIRACFLD` |
//! | 4     | format version (u32, currently 1) |
//! | 4     | reals per node (u32, always 8) |
//! | 24    | node counts nx, ny, nz (u64) |
//! | 24    | spacings (f64) |
//! | 24    | origin (f64) |
//! | 8     | time stamp (f64) |
//! | nx·ny·nz·64 | Re Ψ₁, Im Ψ₁, …, Re Ψ₄, Im Ψ₄ per node, x slowest, z fastest |

use std::io::{Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{BispinorField, PositionGrid};
use crate::spinor::Bispinor;

pub const MAGIC: &[u8; 8] = b"DIRACFLD";
pub const VERSION: u32 = 1;
pub const REALS_PER_NODE: u32 = 8;
pub const HEADER_BYTES: usize = 8 + 4 + 4 + 24 + 24 + 24 + 8;

pub fn write_dump_to(mut w: impl Write, field: &BispinorField) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    w.write_u32::<LittleEndian>(REALS_PER_NODE)?;
    for n in field.grid.n {
        w.write_u64::<LittleEndian>(n as u64)?;
    }
    for v in field.grid.spacing.iter().chain(&field.grid.origin) {
        w.write_f64::<LittleEndian>(*v)?;
    }
    w.write_f64::<LittleEndian>(field.time)?;
    let mut buf = Vec::with_capacity(field.data.len() * 64);
    for s in &field.data {
        for c in s.0 {
            buf.write_f64::<LittleEndian>(c.re)?;
            buf.write_f64::<LittleEndian>(c.im)?;
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_dump_from(mut r: impl Read) -> Result<BispinorField> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("not a field dump (bad magic)".into()));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported dump version {version}")));
    }
    let reals = r.read_u32::<LittleEndian>()?;
    if reals != REALS_PER_NODE {
        return Err(Error::Format(format!("expected {REALS_PER_NODE} reals per node, found {reals}")));
    }
    let mut n = [0usize; 3];
    for v in &mut n {
        *v = usize::try_from(r.read_u64::<LittleEndian>()?)
            .map_err(|_| Error::Format("grid size does not fit in memory".into()))?;
    }
    let mut geo = [0.0; 6];
    for v in &mut geo {
        *v = r.read_f64::<LittleEndian>()?;
    }
    let time = r.read_f64::<LittleEndian>()?;
    let grid = PositionGrid::new(n, [geo[0], geo[1], geo[2]], [geo[3], geo[4], geo[5]])
        .map_err(|e| Error::Format(format!("bad grid in header: {e}")))?;
    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;
    if payload.len() != grid.len() * 64 {
        return Err(Error::Format(format!(
            "payload has {} bytes, header implies {}",
            payload.len(),
            grid.len() * 64
        )));
    }
    let mut cur = payload.as_slice();
    let mut data = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let mut s = Bispinor::ZERO;
        for c in 0..4 {
            let re = cur.read_f64::<LittleEndian>()?;
            let im = cur.read_f64::<LittleEndian>()?;
            s.0[c] = Complex64::new(re, im);
        }
        data.push(s);
    }
    Ok(BispinorField { grid, time, data })
}

pub fn write_dump(path: &Path, field: &BispinorField) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_dump_to(&mut w, field)?;
    w.flush()?;
    Ok(())
}

pub fn read_dump(path: &Path) -> Result<BispinorField> {
    read_dump_from(std::io::BufReader::new(std::fs::File::open(path)?))
}
