use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GridSpec, SampledField};
use crate::error::{Error, Result};

/// JSON descriptor of a gridded field:
/// `{"kind":"grid","dim":d,"half_extent":L,"samples":N,"source":"corpus:..."|"file:..."}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub kind: String,
    pub dim: usize,
    pub half_extent: f64,
    pub samples: usize,
    pub source: String,
}

impl FieldDescriptor {
    pub fn grid(&self) -> Result<GridSpec> {
        if self.kind != "grid" {
            return Err(Error::Parse(format!(
                "descriptor kind must be \"grid\", got {:?}",
                self.kind
            )));
        }
        GridSpec::new(self.dim, self.half_extent, self.samples)
    }
}

pub fn read_descriptor(path: &Path) -> Result<FieldDescriptor> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Reads little-endian `(re, im)` f64 pairs in row-major order.
pub fn read_raw_values(path: &Path, grid: GridSpec) -> Result<SampledField> {
    let bytes = fs::read(path)?;
    let expected = grid.len() * 16;
    if bytes.len() != expected {
        return Err(Error::Parse(format!(
            "{}: expected {expected} bytes for {} complex values, found {}",
            path.display(),
            grid.len(),
            bytes.len()
        )));
    }
    let values = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8-byte chunk"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8-byte chunk"));
            Complex64::new(re, im)
        })
        .collect();
    SampledField::new(grid, values)
}

/// Writes the values of `field` in the format read by [`read_raw_values`].
pub fn write_raw_values(field: &SampledField, path: &Path) -> Result<()> {
    let mut bytes = Vec::with_capacity(field.values().len() * 16);
    for v in field.values() {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let grid = GridSpec::new(2, 1.5, 6).unwrap();
        let f = SampledField::from_fn(grid, |x| Complex64::new(x[0], -x[1] * 0.25)).unwrap();
        let path = dir.path().join("f.bin");
        write_raw_values(&f, &path).unwrap();
        assert_eq!(read_raw_values(&path, grid).unwrap(), f);
        let small = GridSpec::new(1, 1.5, 6).unwrap();
        assert!(matches!(read_raw_values(&path, small), Err(Error::Parse(_))));
    }

    #[test]
    fn descriptor_parses() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.json");
        fs::write(
            &path,
            r#"{"kind":"grid","dim":2,"half_extent":4.0,"samples":64,"source":"corpus:ball?d=2"}"#,
        )
        .unwrap();
        let d = read_descriptor(&path).unwrap();
        assert_eq!(d.grid().unwrap(), GridSpec::new(2, 4.0, 64).unwrap());
        assert_eq!(d.source, "corpus:ball?d=2");
    }
}
