//! Field dumps: one JSON header line, then little-endian `(re, im)` f64 pairs.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::IoError;
use crate::grid::{Field, GridSpec, RadialBoundary};

/// Model data stored alongside the field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DumpMeta {
    pub b: f64,
    pub delta: f64,
    pub sigma: f64,
    pub lambda: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    kind: String,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boundary: Option<RadialBoundary>,
    points: usize,
    time_tag: f64,
    b: f64,
    delta: f64,
    sigma: f64,
    lambda: f64,
}

pub fn write_field(path: &Path, field: &Field, meta: &DumpMeta) -> Result<(), IoError> {
    let (kind, extent, r_max, boundary) = match *field.grid() {
        GridSpec::Tensor { extent, .. } => ("tensor", Some(extent), None, None),
        GridSpec::Radial {
            r_max, boundary, ..
        } => ("radial", None, Some(r_max), Some(boundary)),
    };
    let header = Header {
        kind: kind.into(),
        n: field.grid().dim(),
        extent,
        r_max,
        boundary,
        points: field.grid().points(),
        time_tag: field.time_tag,
        b: meta.b,
        delta: meta.delta,
        sigma: meta.sigma,
        lambda: meta.lambda,
    };
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut w, &header).map_err(|e| IoError::Format(e.to_string()))?;
    w.write_all(b"\n")?;
    for v in field.values() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<(Field, DumpMeta), IoError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut line = Vec::new();
    r.read_until(b'\n', &mut line)?;
    let header: Header = serde_json::from_slice(&line)
        .map_err(|e| IoError::Format(format!("{}: bad header: {e}", path.display())))?;
    let grid = match header.kind.as_str() {
        "tensor" => GridSpec::tensor(
            header.n,
            header.extent.ok_or_else(|| IoError::Format("missing extent".into()))?,
            header.points,
        ),
        "radial" => GridSpec::radial(
            header.n,
            header.r_max.ok_or_else(|| IoError::Format("missing r_max".into()))?,
            header.points,
        )
        .map(|g| g.with_boundary(header.boundary.unwrap_or_default())),
        other => return Err(IoError::Format(format!("unknown grid kind `{other}`"))),
    }
    .map_err(|e| IoError::Format(e.to_string()))?;

    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;
    if payload.len() != 16 * grid.len() {
        return Err(IoError::Format(format!(
            "{}: payload has {} bytes, expected {}",
            path.display(),
            payload.len(),
            16 * grid.len()
        )));
    }
    let word = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8-byte chunk"));
    let values = payload
        .chunks_exact(16)
        .map(|c| Complex64::new(word(&c[..8]), word(&c[8..])))
        .collect();
    let field = Field::new(grid, values, header.time_tag).map_err(|e| IoError::Format(e.to_string()))?;
    let meta = DumpMeta {
        b: header.b,
        delta: header.delta,
        sigma: header.sigma,
        lambda: header.lambda,
    };
    Ok((field, meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let meta = DumpMeta {
            b: 0.5,
            delta: 0.1,
            sigma: 3.0,
            lambda: -1.0,
        };
        for grid in [
            GridSpec::tensor(2, 7.3, 16).unwrap(),
            GridSpec::radial(3, 5.0, 33)
                .unwrap()
                .with_boundary(RadialBoundary::Harmonic),
        ] {
            let mut f = Field::from_fn(grid, |c| {
                Complex64::new(c[0].sin() / 3.0, (c[0] * 1.1).cos() * 1e-300)
            })
            .unwrap();
            f.time_tag = 0.1 + 0.2;
            let path = dir.path().join("f.bin");
            write_field(&path, &f, &meta).unwrap();
            let (g, m) = read_field(&path).unwrap();
            assert_eq!(m, meta);
            assert_eq!(g.grid(), f.grid());
            assert_eq!(g.time_tag.to_bits(), f.time_tag.to_bits());
            for (a, b) in g.values().iter().zip(f.values()) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let grid = GridSpec::radial(3, 5.0, 8).unwrap();
        let path = dir.path().join("f.bin");
        let meta = DumpMeta {
            b: 0.5,
            delta: 0.0,
            sigma: 3.0,
            lambda: -1.0,
        };
        write_field(&path, &Field::zeros(grid), &meta).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        assert!(read_field(&path).is_err());
    }
}
