//! JSON form of a [`QuantumState`]: `{"shape": {"N", "two_j"}, "kind":
//! "pure" | "mixed", "data": [[re, im], ...]}` with matrices in row-major
//! order.

use serde::{Deserialize, Serialize};

use super::{EnsembleShape, QuantumState, StateRepr};
use crate::error::{Result, SpinSqError};
use crate::linalg::{CMat, CVec, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub shape: EnsembleShape,
    pub kind: StateKind,
    pub data: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &QuantumState) -> Self {
        let (kind, data) = match state.repr() {
            StateRepr::Pure(psi) => (StateKind::Pure, psi.iter().map(|z| [z.re, z.im]).collect()),
            StateRepr::Mixed(rho) => {
                let d = rho.nrows();
                let mut data = Vec::with_capacity(d * d);
                for r in 0..d {
                    for col in 0..d {
                        let z = rho[(r, col)];
                        data.push([z.re, z.im]);
                    }
                }
                (StateKind::Mixed, data)
            }
        };
        Self {
            shape: *state.shape(),
            kind,
            data,
        }
    }

    pub fn into_state(self) -> Result<QuantumState> {
        let shape = self.shape.revalidate()?;
        let dim = shape.dim();
        let values = self.data.iter().map(|&[re, im]| C64::new(re, im));
        match self.kind {
            StateKind::Pure => {
                if self.data.len() != dim {
                    return Err(SpinSqError::ShapeMismatch(format!(
                        "pure state needs {dim} entries, found {}",
                        self.data.len()
                    )));
                }
                QuantumState::pure(shape, CVec::from_iterator(dim, values))
            }
            StateKind::Mixed => {
                if self.data.len() != dim * dim {
                    return Err(SpinSqError::ShapeMismatch(format!(
                        "density matrix needs {} entries, found {}",
                        dim * dim,
                        self.data.len()
                    )));
                }
                QuantumState::mixed(shape, CMat::from_row_iterator(dim, dim, values))
            }
        }
    }
}

impl QuantumState {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&StateFile::from_state(self)).expect("state serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| SpinSqError::Parse(e.to_string()))?;
        file.into_state()
    }
}
