//! JSON wire formats: point clouds, surface samples and matrices.
//!
//! Floats are written with 17 significant digits so that every `f64`
//! survives a write-then-read cycle; non-finite values become `null`.

use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::classify::SampleSet;
use crate::error::{Error, Result};
use crate::hypersurface::{NormalFrame, SurfaceSample};
use crate::space::{NordenSpace, RealMatrix, RealVector};

pub const FORMAT_VERSION: u32 = 1;

/// Compact JSON formatter printing floats as `{:.16e}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` with [`Sig17`].
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidFile(e.to_string()))?;
    String::from_utf8(out).map_err(|e| Error::InvalidFile(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CloudKind {
    Points,
    Samples,
}

/// One surface sample on the wire. `A` is listed row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub point: Vec<f64>,
    pub xi: Vec<f64>,
    pub tangent_basis: Vec<Vec<f64>>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
}

impl SampleRecord {
    pub fn from_sample(sample: &SurfaceSample) -> Self {
        let a = sample.shape_operator();
        Self {
            point: sample.point().iter().copied().collect(),
            xi: sample.frame().xi().iter().copied().collect(),
            tangent_basis: sample
                .tangent_basis()
                .iter()
                .map(|v| v.iter().copied().collect())
                .collect(),
            a: matrix_rows(a),
        }
    }

    /// Validates the record against `space` and the sample invariants.
    pub fn to_sample(&self, space: NordenSpace, tol: f64) -> Result<SurfaceSample> {
        let dim = space.dim();
        let malformed = |what: String| Error::MalformedSample(what);
        if self.point.len() != dim || self.xi.len() != dim {
            return Err(malformed(format!("point and xi must have length {dim}")));
        }
        if self.tangent_basis.len() + 2 != dim || self.tangent_basis.iter().any(|v| v.len() != dim) {
            return Err(malformed(format!("tangent_basis must hold {} vectors of length {dim}", dim - 2)));
        }
        let a = rows_to_matrix(&self.a).ok_or_else(|| malformed("A is not a rectangular matrix".into()))?;
        if a.nrows() != dim - 2 || a.ncols() != dim - 2 {
            return Err(malformed(format!("A must be {0}x{0}", dim - 2)));
        }
        let point = RealVector::from_vec(self.point.clone());
        let frame = NormalFrame::new(point.clone(), RealVector::from_vec(self.xi.clone()), tol)
            .map_err(|e| malformed(e.to_string()))?;
        let basis = self
            .tangent_basis
            .iter()
            .map(|v| RealVector::from_vec(v.clone()))
            .collect();
        SurfaceSample::new(point, frame, basis, a, tol).map_err(|e| malformed(e.to_string()))
    }
}

/// A versioned list of points, optionally with per-point surface data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloudFile {
    pub version: u32,
    pub m: usize,
    pub kind: CloudKind,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<SampleRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl PointCloudFile {
    pub fn from_points(space: NordenSpace, points: &[RealVector], provenance: Option<String>) -> Self {
        Self {
            version: FORMAT_VERSION,
            m: space.m(),
            kind: CloudKind::Points,
            points: points.iter().map(|p| p.iter().copied().collect()).collect(),
            samples: None,
            provenance,
        }
    }

    pub fn from_sample_set(set: &SampleSet) -> Self {
        let samples: Vec<SampleRecord> = set.samples().iter().map(SampleRecord::from_sample).collect();
        Self {
            version: FORMAT_VERSION,
            m: set.space().m(),
            kind: CloudKind::Samples,
            points: samples.iter().map(|s| s.point.clone()).collect(),
            samples: Some(samples),
            provenance: Some(set.provenance().to_string()).filter(|p| !p.is_empty()),
        }
    }

    /// Checks version and array lengths.
    pub fn validate(&self) -> Result<()> {
        if self.version != FORMAT_VERSION {
            return Err(Error::InvalidFile(format!("unsupported version {}", self.version)));
        }
        let space = NordenSpace::new(self.m).map_err(|e| Error::InvalidFile(e.to_string()))?;
        if let Some(i) = self.points.iter().position(|p| p.len() != space.dim()) {
            return Err(Error::InvalidFile(format!("point {i} does not have length {}", space.dim())));
        }
        match (self.kind, &self.samples) {
            (CloudKind::Samples, None) => Err(Error::InvalidFile("kind \"samples\" without samples".into())),
            (CloudKind::Samples, Some(s)) if s.len() != self.points.len() => {
                Err(Error::InvalidFile("samples and points differ in count".into()))
            }
            (CloudKind::Points, Some(_)) => Err(Error::InvalidFile("kind \"points\" with samples".into())),
            _ => Ok(()),
        }
    }

    pub fn space(&self) -> Result<NordenSpace> {
        NordenSpace::new(self.m).map_err(|e| Error::InvalidFile(e.to_string()))
    }

    pub fn to_points(&self) -> Result<Vec<RealVector>> {
        self.validate()?;
        Ok(self.points.iter().map(|p| RealVector::from_vec(p.clone())).collect())
    }

    pub fn to_sample_set(&self, tol: f64) -> Result<SampleSet> {
        self.validate()?;
        let space = self.space()?;
        let records = self
            .samples
            .as_ref()
            .ok_or_else(|| Error::InvalidFile("file holds points, not samples".into()))?;
        for (record, point) in records.iter().zip(&self.points) {
            if &record.point != point {
                return Err(Error::InvalidFile("sample point differs from the points list".into()));
            }
        }
        let samples = records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.to_sample(space, tol)
                    .map_err(|e| Error::MalformedSample(format!("sample {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        SampleSet::new(space, samples, self.provenance.clone().unwrap_or_default())
    }

    pub fn to_json(&self) -> Result<String> {
        to_json_string(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|e| Error::InvalidFile(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidFile(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::InvalidFile(format!("{}: {e}", path.display())))
    }
}

pub fn matrix_rows(a: &RealMatrix) -> Vec<Vec<f64>> {
    a.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// `None` for ragged or empty input.
pub fn rows_to_matrix(rows: &[Vec<f64>]) -> Option<RealMatrix> {
    let ncols = rows.first()?.len();
    if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return None;
    }
    Some(RealMatrix::from_row_iterator(rows.len(), ncols, rows.iter().flatten().copied()))
}

/// Reads a square matrix stored as a JSON array of rows.
pub fn read_matrix(path: &Path) -> Result<RealMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidFile(format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}

pub fn parse_matrix(text: &str) -> Result<RealMatrix> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(text).map_err(|e| Error::InvalidFile(e.to_string()))?;
    let a = rows_to_matrix(&rows).ok_or_else(|| Error::InvalidFile("matrix rows are ragged or empty".into()))?;
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidFile(format!("matrix is {}x{}, not square", a.nrows(), a.ncols())));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::{HSphere, Hypersurface};

    #[test]
    fn floats_round_trip() {
        let values = vec![0.1, 1.0 / 3.0, -2.5e-300, 1e300, f64::MIN_POSITIVE, 0.0, -0.0, 123_456_789.123_456_79];
        let text = to_json_string(&values).unwrap();
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        for (a, b) in values.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits(), "{a} vs {b} in {text}");
        }
        assert_eq!(to_json_string(&vec![f64::NAN]).unwrap(), "[null]");
    }

    #[test]
    fn sample_file_round_trip() {
        let space = NordenSpace::new(4).unwrap();
        let sphere = HSphere::new(RealVector::from_fn(8, |i, _| 0.3 * i as f64), 3.0, 4.0).unwrap();
        let set = SampleSet::new(space, sphere.sample_surfaces(5, 1, 1e-9).unwrap(), "sphere").unwrap();
        let file = PointCloudFile::from_sample_set(&set);
        let text = file.to_json().unwrap();
        let back = PointCloudFile::from_json(&text).unwrap();
        assert_eq!(back, file);
        let restored = back.to_sample_set(1e-9).unwrap();
        assert_eq!(restored.samples(), set.samples());
    }

    #[test]
    fn malformed_files_are_rejected() {
        let space = NordenSpace::new(4).unwrap();
        let mut file = PointCloudFile::from_points(space, &[space.e(0)], None);
        assert!(file.validate().is_ok());
        file.version = 2;
        assert!(file.validate().is_err());
        file.version = 1;
        file.points[0].pop();
        assert!(file.validate().is_err());
        assert!(PointCloudFile::from_json("{\"version\":1}").is_err());
        assert!(parse_matrix("[[1,2],[3]]").is_err());
        assert!(parse_matrix("[[1,2,3],[3,4,5]]").is_err());
        assert_eq!(parse_matrix("[[1,2],[3,4]]").unwrap()[(1, 0)], 3.0);
    }
}
