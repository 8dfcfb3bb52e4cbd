//! Field files: a one-line JSON header followed by raw little-endian f64
//! payload, row-major with the x index outermost. Round trips are bit-exact.

use crate::error::{Error, Result};
use crate::grid::{Domain, SampledField};
use ndarray::Array2;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
struct FieldHeader {
    nx: usize,
    ny: usize,
    x0: f64,
    y0: f64,
    dx: f64,
    dy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mask: Option<Vec<u8>>,
    dtype: String,
}

fn corrupt(path: &Path, reason: impl Into<String>) -> Error {
    Error::CorruptFile {
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

/// Write a field (header + payload) to `path`.
pub fn write_field(field: &SampledField, path: &Path) -> Result<()> {
    let d = &field.domain;
    let header = FieldHeader {
        nx: d.nx,
        ny: d.ny,
        x0: d.x0,
        y0: d.y0,
        dx: d.dx,
        dy: d.dy,
        mask: d
            .mask()
            .map(|m| m.iter().map(|&b| if b { 1u8 } else { 0u8 }).collect()),
        dtype: "f64-le".into(),
    };
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;
    for v in field.values.iter() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Read a field back; any size mismatch is a corrupt-file error and no
/// partial field is returned.
pub fn read_field(path: &Path) -> Result<SampledField> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header_bytes = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        let n = r.read(&mut byte)?;
        if n == 0 {
            return Err(corrupt(path, "missing header line"));
        }
        if byte[0] == b'\n' {
            break;
        }
        header_bytes.push(byte[0]);
        if header_bytes.len() > 1 << 20 {
            return Err(corrupt(path, "header line exceeds 1 MiB"));
        }
    }
    let header: FieldHeader = serde_json::from_slice(&header_bytes)
        .map_err(|e| corrupt(path, format!("bad header: {e}")))?;
    if header.dtype != "f64-le" {
        return Err(corrupt(path, format!("unsupported dtype {:?}", header.dtype)));
    }
    let count = header.nx * header.ny;
    let mut payload = vec![0u8; count * 8];
    r.read_exact(&mut payload)
        .map_err(|_| corrupt(path, "payload shorter than header promises"))?;
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(corrupt(path, "trailing bytes after payload"));
    }
    let mut values = Array2::zeros((header.nx, header.ny));
    for (k, chunk) in payload.chunks_exact(8).enumerate() {
        values[[k / header.ny, k % header.ny]] =
            f64::from_le_bytes(chunk.try_into().expect("chunk size is 8"));
    }
    let mask = match header.mask {
        None => None,
        Some(bits) => {
            if bits.len() != count {
                return Err(corrupt(path, "mask length does not match grid"));
            }
            let mut m = Array2::from_elem((header.nx, header.ny), false);
            for (k, &b) in bits.iter().enumerate() {
                m[[k / header.ny, k % header.ny]] = b != 0;
            }
            Some(m)
        }
    };
    let domain = Domain::from_parts(
        header.x0, header.y0, header.dx, header.dy, header.nx, header.ny, mask,
    )?;
    SampledField::new(domain, values)
}
