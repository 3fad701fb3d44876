//! JSON file formats and CSV export.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{GeoftError, Result};
use crate::fields::{GaussianFunction, GridSpec, SampledField};
use crate::forms::GeometricStructure;
use crate::fraclap::FracPath;
use crate::lattice::Lattice;
use crate::linalg;
use crate::spectral::{FrequencyLattice, Spectrum};

/// `{"dim": n, "matrix": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureFile {
    pub dim: usize,
    pub matrix: Vec<Vec<f64>>,
}

impl StructureFile {
    pub fn from_structure(s: &GeometricStructure) -> Self {
        Self {
            dim: s.dim(),
            matrix: linalg::to_rows(s.matrix()),
        }
    }

    pub fn into_structure(self) -> Result<GeometricStructure> {
        if self.matrix.len() != self.dim || self.matrix.iter().any(|r| r.len() != self.dim) {
            return Err(GeoftError::InvalidInput(format!(
                "structure file declares dim {} but the matrix is not {0}x{0}",
                self.dim
            )));
        }
        GeometricStructure::from_rows(&self.matrix)
    }
}

/// Field and spectrum files share this layout. Fields carry `grid`;
/// spectra carry `"domain": "frequency"`, the `lattice` or explicit
/// `points`, and the source grid when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<FrequencyLattice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    pub values: Vec<[f64; 2]>,
}

fn pairs(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn complexes(values: &[[f64; 2]]) -> Vec<Complex64> {
    values.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

impl FieldFile {
    pub fn from_field(f: &SampledField) -> Self {
        Self {
            domain: None,
            grid: Some(f.grid.clone()),
            lattice: None,
            points: None,
            values: pairs(&f.values),
        }
    }

    pub fn from_spectrum(s: &Spectrum) -> Self {
        Self {
            domain: Some("frequency".into()),
            grid: s.source.clone(),
            lattice: Some(s.lattice.clone()),
            points: None,
            values: pairs(&s.values),
        }
    }

    /// Values at an explicit list of points in `domain`.
    pub fn from_points(domain: &str, points: Vec<Vec<f64>>, values: &[Complex64]) -> Self {
        Self {
            domain: Some(domain.into()),
            grid: None,
            lattice: None,
            points: Some(points),
            values: pairs(values),
        }
    }

    pub fn values(&self) -> Vec<Complex64> {
        complexes(&self.values)
    }
}

/// Anything a transform can start from.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Field(SampledField),
    Gaussian(GaussianFunction),
    Spectrum(Spectrum),
    Points { points: Vec<Vec<f64>>, values: Vec<Complex64> },
}

fn read_value(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn load_structure(path: &Path) -> Result<GeometricStructure> {
    read::<StructureFile>(path)?.into_structure()
}

pub fn load_gaussian(path: &Path) -> Result<GaussianFunction> {
    gaussian_from_value(read_value(path)?)
}

fn gaussian_from_value(v: Value) -> Result<GaussianFunction> {
    let mut g: GaussianFunction = serde_json::from_value(v)?;
    if g.phase_freq.is_empty() {
        g.phase_freq = vec![0.0; g.center.len()];
    }
    g.validate()?;
    Ok(g)
}

fn field_from_file(f: FieldFile) -> Result<Input> {
    let values = f.values();
    if let Some(lattice) = f.lattice {
        if lattice.len() != values.len() {
            return Err(GeoftError::InvalidInput(format!(
                "lattice has {} points but {} values were given",
                lattice.len(),
                values.len()
            )));
        }
        return Ok(Input::Spectrum(Spectrum::new(lattice, values, f.grid)?));
    }
    if let Some(points) = f.points {
        if points.len() != values.len() {
            return Err(GeoftError::InvalidInput(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        return Ok(Input::Points { points, values });
    }
    let grid = f
        .grid
        .ok_or_else(|| GeoftError::InvalidInput("field file needs a grid, lattice or points".into()))?;
    // re-validate through the constructor
    let grid = GridSpec::new(grid.shape, grid.origin, grid.spacing, grid.mode)?;
    Ok(Input::Field(SampledField::new(grid, values)?))
}

/// A field, spectrum or Gaussian file, told apart by its keys.
pub fn load_input(path: &Path) -> Result<Input> {
    let v = read_value(path)?;
    if v.get("A").is_some() {
        return Ok(Input::Gaussian(gaussian_from_value(v)?));
    }
    field_from_file(serde_json::from_value(v)?)
}

pub fn load_field(path: &Path) -> Result<SampledField> {
    match load_input(path)? {
        Input::Field(f) => Ok(f),
        _ => Err(GeoftError::InvalidInput(format!(
            "{} is not a sampled field on a grid",
            path.display()
        ))),
    }
}

/// `{"generator": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub generator: Vec<Vec<f64>>,
}

pub fn load_lattice(path: &Path) -> Result<Lattice> {
    Lattice::from_rows(&read::<LatticeFile>(path)?.generator)
}

/// Either a bare list of vectors or `{"points": [...]}`.
pub fn load_points(path: &Path) -> Result<Vec<Vec<f64>>> {
    let v = read_value(path)?;
    let list = match v {
        Value::Object(mut m) => m
            .remove("points")
            .ok_or_else(|| GeoftError::InvalidInput("expected a `points` key".into()))?,
        other => other,
    };
    Ok(serde_json::from_value(list)?)
}

/// `{"s": 0.5, "structure": {...}, "path": "classical"}`; the path may also be `"all"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FracParamsFile {
    pub s: f64,
    pub structure: StructureFile,
    #[serde(default = "default_path")]
    pub path: String,
}

fn default_path() -> String {
    "classical".into()
}

pub fn load_frac_params(path: &Path) -> Result<FracParamsFile> {
    read(path)
}

/// `left`, `right` or `classical`.
pub fn parse_frac_path(s: &str) -> Result<FracPath> {
    serde_json::from_value(Value::String(s.to_string()))
        .map_err(|_| GeoftError::InvalidInput(format!("unknown path `{s}`")))
}

/// Pretty JSON followed by a newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}

/// `index,re,im` rows.
pub fn write_csv(path: &Path, values: &[Complex64]) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(out, "index,re,im")?;
    for (k, z) in values.iter().enumerate() {
        writeln!(out, "{k},{:e},{:e}", z.re, z.im)?;
    }
    out.flush()?;
    Ok(())
}
