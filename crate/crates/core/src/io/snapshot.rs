//! Binary field snapshots: the 8-byte magic `DYSNAP01`, then little-endian
//! `u32` version, `u32` nx, `u32` ny, `f64` Lx, `f64` Ly, `f64` t and
//! `nx * ny` interleaved `(re, im)` binary64 pairs in physical space,
//! row-major in x.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{FieldState, Representation, SpectralGrid};

pub const SNAPSHOT_MAGIC: &[u8; 8] = b"DYSNAP01";
pub const SNAPSHOT_VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 4 + 4 + 8 + 8 + 8;

pub fn encode_snapshot(state: &FieldState) -> Vec<u8> {
    let p = state.to_physical();
    let g = p.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * g.len());
    out.extend_from_slice(SNAPSHOT_MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    out.extend_from_slice(&(g.nx() as u32).to_le_bytes());
    out.extend_from_slice(&(g.ny() as u32).to_le_bytes());
    out.extend_from_slice(&g.lx().to_le_bytes());
    out.extend_from_slice(&g.ly().to_le_bytes());
    out.extend_from_slice(&p.time().to_le_bytes());
    for v in p.values() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().expect("four bytes"))
}

fn f64_at(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().expect("eight bytes"))
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<FieldState> {
    if bytes.len() < 8 || &bytes[..8] != SNAPSHOT_MAGIC {
        return Err(Error::Snapshot("bad magic, not a DYSNAP01 file".into()));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Snapshot(format!("truncated header: {} bytes", bytes.len())));
    }
    let version = u32_at(bytes, 8);
    if version != SNAPSHOT_VERSION {
        return Err(Error::Snapshot(format!(
            "unsupported version {version}, this reader handles {SNAPSHOT_VERSION}"
        )));
    }
    let (nx, ny) = (u32_at(bytes, 12) as usize, u32_at(bytes, 16) as usize);
    let (lx, ly, t) = (f64_at(bytes, 20), f64_at(bytes, 28), f64_at(bytes, 36));
    let grid = if ny == 1 {
        SpectralGrid::line(nx, lx)?
    } else {
        SpectralGrid::new(nx, ny, lx, ly)?
    };
    let expected = HEADER_LEN + 16 * nx * ny;
    if bytes.len() != expected {
        return Err(Error::Snapshot(format!(
            "payload has {} bytes, expected {expected} for a {nx} x {ny} grid",
            bytes.len()
        )));
    }
    let values = bytes[HEADER_LEN..]
        .chunks_exact(16)
        .map(|c| Complex64::new(f64_at(c, 0), f64_at(c, 8)))
        .collect();
    FieldState::new(grid, values, Representation::Physical, t)
}

pub fn write_snapshot(state: &FieldState, path: &Path) -> Result<()> {
    fs::write(path, encode_snapshot(state)).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<FieldState> {
    decode_snapshot(&fs::read(path).map_err(|e| Error::io(path, e))?)
}
