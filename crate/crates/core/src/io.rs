//! JSON file formats for pure states and density matrices.
//!
//! ```json
//! {"local_dims": [2, 2, 2], "amplitudes": [[re, im], ...]}
//! {"local_dims": [2, 2], "entries": [[[re, im], ...], ...]}
//! ```
//!
//! Amplitudes and rows follow the crate's basis ordering (party 0 most
//! significant); `entries` is row-major.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, PureState, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub local_dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &PureState) -> Self {
        Self {
            local_dims: state.local_dims().to_vec(),
            amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    /// Validates into a [`PureState`]; the amplitudes must already be normalised.
    pub fn into_state(self) -> Result<PureState> {
        let amps = self
            .amplitudes
            .iter()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        PureState::new(amps, self.local_dims)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub local_dims: Vec<usize>,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl DensityFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.entries();
        Self {
            local_dims: rho.local_dims().to_vec(),
            entries: (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| [m[(i, j)].re, m[(i, j)].im])
                        .collect()
                })
                .collect(),
        }
    }

    pub fn into_density(self) -> Result<DensityMatrix> {
        let dim = self.entries.len();
        if self.entries.iter().any(|row| row.len() != dim) {
            return Err(Error::Parse(
                "density entries must form a square array".into(),
            ));
        }
        let m = DMatrix::from_fn(dim, dim, |i, j| {
            let [re, im] = self.entries[i][j];
            C64::new(re, im)
        });
        DensityMatrix::new(m, self.local_dims)
    }
}

pub fn parse_state(json: &str) -> Result<PureState> {
    serde_json::from_str::<StateFile>(json)
        .map_err(|e| Error::Parse(e.to_string()))?
        .into_state()
}

pub fn parse_density(json: &str) -> Result<DensityMatrix> {
    serde_json::from_str::<DensityFile>(json)
        .map_err(|e| Error::Parse(e.to_string()))?
        .into_density()
}

pub fn state_to_json(state: &PureState) -> String {
    serde_json::to_string(&StateFile::from_state(state)).expect("state serialises")
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string(&DensityFile::from_density(rho)).expect("density serialises")
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read_state(path: impl AsRef<Path>) -> Result<PureState> {
    parse_state(&read(path.as_ref())?)
}

pub fn read_density(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    parse_density(&read(path.as_ref())?)
}
