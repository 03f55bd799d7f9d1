//! JSON matrix files: `{"dims": [d_a, d_b], "matrix": [[re, im], ...]}` with the
//! (d_a·d_b)² entries in row-major order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{BipartiteShape, ComplexMatrix, C64};
use crate::states::NamedOperator;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dims: [usize; 2],
    pub matrix: Vec<[f64; 2]>,
}

/// Hermiticity tolerance for matrices read from files.
pub const FILE_HERMITIAN_TOL: f64 = 1e-10;

impl MatrixFile {
    pub fn new(m: &ComplexMatrix, shape: BipartiteShape) -> Result<Self> {
        shape.check(m)?;
        Ok(Self { dims: [shape.d_a, shape.d_b], matrix: m.entries().iter().map(|c| [c.re, c.im]).collect() })
    }

    pub fn from_operator(op: &NamedOperator) -> Self {
        Self::new(&op.matrix, op.shape).expect("named operators carry a consistent shape")
    }

    pub fn shape(&self) -> Result<BipartiteShape> {
        BipartiteShape::new(self.dims[0], self.dims[1]).map_err(|e| Error::Parse(format!("dims: {e}")))
    }

    /// The matrix and its shape, after checking the entry count.
    pub fn to_matrix(&self) -> Result<(ComplexMatrix, BipartiteShape)> {
        let shape = self.shape()?;
        let n = shape.dim();
        if self.matrix.len() != n * n {
            return Err(Error::Parse(format!(
                "dims {}x{} need {} entries, file has {}",
                shape.d_a,
                shape.d_b,
                n * n,
                self.matrix.len()
            )));
        }
        if self.matrix.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parse("matrix has non-finite entries".into()));
        }
        let data = self.matrix.iter().map(|&[re, im]| C64::new(re, im)).collect();
        Ok((ComplexMatrix::from_entries(n, data)?, shape))
    }

    /// Parses as a Hermitian matrix (not necessarily a state).
    pub fn to_hermitian(&self, label: &str) -> Result<NamedOperator> {
        let (m, shape) = self.to_matrix()?;
        let defect = m.hermitian_defect();
        if defect > FILE_HERMITIAN_TOL {
            return Err(Error::Contract(format!("'{label}' is not Hermitian (defect {defect:.3e} > {FILE_HERMITIAN_TOL:e})")));
        }
        NamedOperator::new(m.hermitian_part(), shape, label, false)
    }

    /// Parses as a density matrix on the stated bipartite system.
    pub fn to_state(&self, label: &str) -> Result<NamedOperator> {
        let op = self.to_hermitian(label)?;
        NamedOperator::new(op.matrix, op.shape, label, true)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix files always serialise")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json();
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}
