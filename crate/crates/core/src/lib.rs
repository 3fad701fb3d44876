pub mod calculus;
pub mod cli;
pub mod error;
pub mod fields;
pub mod forms;
pub mod fraclap;
pub mod identities;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod spectral;

pub use error::{GeoftError, Result};
pub use fields::{GaussianFunction, GridMode, GridSpec, PlaneWave, SampledField};
pub use forms::{Classification, GeometricPair, GeometricStructure, Side};
