//! Binary embedding cache.
//!
//! Layout (little-endian): magic `b"ALEC"`, version `u32`, dimension `u32`,
//! row count `u64`, then `count * d` `f32` values row-major. Row ids live in a
//! sidecar text file `<path>.ids`, one per line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"ALEC";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingCache {
    pub dimension: usize,
    pub ids: Vec<u64>,
    pub rows: Vec<Vec<f32>>,
}

fn ids_path(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".ids");
    PathBuf::from(p)
}

pub fn write_embedding_cache(path: &Path, ids: &[u64], rows: &[Vec<f64>]) -> Result<()> {
    if ids.len() != rows.len() {
        return Err(Error::invalid("one id per embedding row is required"));
    }
    let d = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::invalid("embedding rows differ in length"));
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(d as u32).to_le_bytes())?;
    w.write_all(&(rows.len() as u64).to_le_bytes())?;
    for r in rows {
        for &v in r {
            w.write_all(&(v as f32).to_le_bytes())?;
        }
    }
    w.flush()?;
    let mut sidecar = BufWriter::new(File::create(ids_path(path))?);
    for id in ids {
        writeln!(sidecar, "{id}")?;
    }
    sidecar.flush()?;
    Ok(())
}

pub fn read_embedding_cache(path: &Path) -> Result<EmbeddingCache> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header = [0u8; 20];
    r.read_exact(&mut header)?;
    if &header[..4] != MAGIC {
        return Err(Error::format(path, 0, "not an embedding cache (bad magic)"));
    }
    let version = u32::from_le_bytes(header[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::format(path, 0, format!("unsupported cache version {version}")));
    }
    let d = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    let count = u64::from_le_bytes(header[12..20].try_into().unwrap()) as usize;
    let mut rows = Vec::with_capacity(count);
    let mut buf = [0u8; 4];
    for _ in 0..count {
        let mut row = Vec::with_capacity(d);
        for _ in 0..d {
            r.read_exact(&mut buf)?;
            row.push(f32::from_le_bytes(buf));
        }
        rows.push(row);
    }
    let sidecar = ids_path(path);
    let mut ids = Vec::with_capacity(count);
    for (i, line) in BufReader::new(File::open(&sidecar)?).lines().enumerate() {
        let line = line?;
        ids.push(line.trim().parse().map_err(|e| Error::format(&sidecar, i + 1, format!("{e}")))?);
    }
    if ids.len() != count {
        return Err(Error::format(&sidecar, ids.len(), format!("expected {count} ids")));
    }
    Ok(EmbeddingCache {
        dimension: d,
        ids,
        rows,
    })
}
