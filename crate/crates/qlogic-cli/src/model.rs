//! JSON model files: named operators, states, and measuring processes on a
//! fixed-dimension system. Matrices are serialized as separate `re`/`im`
//! row-major arrays.

use std::collections::BTreeMap;

use qlogic_core::linalg::{Complex64, ComplexMatrix};
use qlogic_core::measurement::MeasuringProcess;
use qlogic_core::spectral::Observable;
use qlogic_core::{truth, TolerancePolicy};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
pub struct VectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum StateJson {
    Vector { vector: VectorJson },
    Matrix(MatrixJson),
}

#[derive(Debug, Deserialize)]
pub struct ProcessJson {
    pub probe_dim: usize,
    pub sigma: MatrixJson,
    #[serde(rename = "U")]
    pub u: MatrixJson,
    #[serde(rename = "M")]
    pub m: MatrixJson,
}

#[derive(Debug, Deserialize)]
pub struct ModelFile {
    pub dimension: usize,
    #[serde(default)]
    pub operators: BTreeMap<String, MatrixJson>,
    #[serde(default)]
    pub states: BTreeMap<String, StateJson>,
    #[serde(default)]
    pub processes: BTreeMap<String, ProcessJson>,
}

impl MatrixJson {
    pub fn to_matrix(&self, what: &str) -> Result<ComplexMatrix, CliError> {
        let dim = self.re.len();
        let square = self.im.len() == dim
            && self.re.iter().all(|row| row.len() == dim)
            && self.im.iter().all(|row| row.len() == dim);
        if !square || dim == 0 {
            return Err(CliError::model(format!("{what}: matrix is not square")));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (rr, ri) in self.re.iter().zip(&self.im) {
            for (&a, &b) in rr.iter().zip(ri) {
                entries.push(Complex64::new(a, b));
            }
        }
        ComplexMatrix::from_entries(dim, entries)
            .map_err(|e| CliError::model(format!("{what}: {e}")))
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let dim = m.dim();
        let re = (0..dim)
            .map(|i| (0..dim).map(|j| m.get(i, j).re).collect())
            .collect();
        let im = (0..dim)
            .map(|i| (0..dim).map(|j| m.get(i, j).im).collect())
            .collect();
        MatrixJson { re, im }
    }
}

impl StateJson {
    fn to_density(&self, name: &str, dim: usize) -> Result<ComplexMatrix, CliError> {
        match self {
            StateJson::Matrix(m) => {
                let rho = m.to_matrix(&format!("state {name}"))?;
                if rho.dim() != dim {
                    return Err(CliError::model(format!("state {name}: wrong dimension")));
                }
                Ok(rho)
            }
            StateJson::Vector { vector } => {
                if vector.re.len() != dim || vector.im.len() != dim {
                    return Err(CliError::model(format!("state {name}: wrong dimension")));
                }
                let v: Vec<Complex64> = vector
                    .re
                    .iter()
                    .zip(&vector.im)
                    .map(|(&a, &b)| Complex64::new(a, b))
                    .collect();
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > 1e-6 {
                    return Err(CliError::model(format!(
                        "state {name}: vector norm {norm} is not 1 within 1e-6"
                    )));
                }
                let v: Vec<Complex64> = v.into_iter().map(|z| z / norm).collect();
                Ok(ComplexMatrix::outer(&v, &v))
            }
        }
    }
}

/// A loaded model: the truth-engine model plus named measuring processes.
pub struct LoadedModel {
    pub model: truth::Model,
    pub processes: BTreeMap<String, MeasuringProcess>,
}

pub fn load(path: &std::path::Path, tol: TolerancePolicy) -> Result<LoadedModel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::model(format!("cannot read {}: {e}", path.display())))?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| CliError::model(format!("{}: {e}", path.display())))?;

    let dim = file.dimension;
    let mut model =
        truth::Model::new(dim, tol).map_err(|e| CliError::model(format!("model: {e}")))?;
    for (name, m) in &file.operators {
        let matrix = m.to_matrix(&format!("operator {name}"))?;
        if matrix.dim() != dim {
            return Err(CliError::model(format!("operator {name}: wrong dimension")));
        }
        let obs = Observable::new(matrix, &tol)
            .map_err(|e| CliError::model(format!("operator {name}: {e}")))?;
        model
            .add_observable(name, obs)
            .map_err(|e| CliError::model(format!("operator {name}: {e}")))?;
    }
    for (name, s) in &file.states {
        let rho = s.to_density(name, dim)?;
        model
            .add_state(name, rho)
            .map_err(|e| CliError::model(format!("state {name}: {e}")))?;
    }

    let mut processes = BTreeMap::new();
    for (name, p) in &file.processes {
        let sigma = p.sigma.to_matrix(&format!("process {name} sigma"))?;
        let u = p.u.to_matrix(&format!("process {name} U"))?;
        let m = p.m.to_matrix(&format!("process {name} M"))?;
        let mp = MeasuringProcess::new(dim, p.probe_dim, sigma, u, m, &tol)
            .map_err(|e| CliError::model(format!("process {name}: {e}")))?;
        processes.insert(name.clone(), mp);
    }
    Ok(LoadedModel { model, processes })
}
