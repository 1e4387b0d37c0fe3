//! On-disk JSON schemas and their conversions to library types.
//!
//! Matrices are row-major; complex numbers are two-element [re, im] arrays.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use lcanon_core::gksl::{build_cp_generator, build_gksl_generator, Generator, GeneratorClass};
use lcanon_core::{KrausSet, Operator, SuperOperator};

use crate::error::CliError;
use crate::jsonfmt::Json;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl OperatorFile {
    pub fn to_operator(&self, what: &str) -> Result<Operator, CliError> {
        if self.data.len() != self.rows * self.cols {
            return Err(CliError::Input(format!(
                "field 'data' of {what}: expected {} entries for {}x{}, got {}",
                self.rows * self.cols,
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        let entries: Vec<Complex64> = self
            .data
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        Operator::from_vec(self.rows, self.cols, entries)
            .map_err(|e| CliError::Input(format!("{what}: {e}")))
    }
}

pub fn operator_to_json(op: &Operator) -> Json {
    let mut data = Vec::with_capacity(op.rows() * op.cols());
    for r in 0..op.rows() {
        for c in 0..op.cols() {
            let z = op.get(r, c);
            data.push(Json::complex(z.re, z.im));
        }
    }
    let mut obj = Json::object();
    obj.push("rows", Json::Int(op.rows() as i64));
    obj.push("cols", Json::Int(op.cols() as i64));
    obj.push("data", Json::Array(data));
    obj
}

/// A generator (or plain map) in one of the three accepted presentations.
#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorFile {
    /// Raw superoperator matrix acting on vectorized operators.
    SuperopMatrix { matrix: OperatorFile },
    /// L = K(·) + (·)K* + Σ V_j(·)V_j*.
    KPlusKraus {
        k: OperatorFile,
        #[serde(default)]
        kraus: Vec<OperatorFile>,
    },
    /// L = −i[H,·] + Σ V_j(·)V_j* − ½{Σ V_j*V_j, ·}.
    Gksl {
        h: OperatorFile,
        #[serde(default)]
        kraus: Vec<OperatorFile>,
    },
}

/// A parsed generator file, normalized to library types.
pub enum LoadedGenerator {
    Matrix(SuperOperator),
    KPlusKraus { k: Operator, kraus: KrausSet },
    Gksl { h: Operator, kraus: KrausSet },
}

impl LoadedGenerator {
    /// The underlying superoperator (the map itself for `superop_matrix`
    /// files, the assembled generator otherwise).
    pub fn superop(&self) -> Result<SuperOperator, CliError> {
        match self {
            LoadedGenerator::Matrix(s) => Ok(s.clone()),
            LoadedGenerator::KPlusKraus { k, kraus } => Ok(build_cp_generator(k, kraus)
                .map_err(CliError::from_core)?
                .superop()
                .clone()),
            LoadedGenerator::Gksl { h, kraus } => Ok(build_gksl_generator(h, kraus)
                .map_err(CliError::from_core)?
                .superop()
                .clone()),
        }
    }

    pub fn to_generator(&self, cptp: bool) -> Result<Generator, CliError> {
        match self {
            LoadedGenerator::Matrix(s) => Generator::from_superop(
                s.clone(),
                if cptp {
                    GeneratorClass::CptpSemigroup
                } else {
                    GeneratorClass::Unknown
                },
            )
            .map_err(CliError::from_core),
            LoadedGenerator::KPlusKraus { k, kraus } => {
                let g = build_cp_generator(k, kraus).map_err(CliError::from_core)?;
                if cptp {
                    Generator::from_superop(g.superop().clone(), GeneratorClass::CptpSemigroup)
                        .map_err(CliError::from_core)
                } else {
                    Ok(g)
                }
            }
            LoadedGenerator::Gksl { h, kraus } => {
                build_gksl_generator(h, kraus).map_err(CliError::from_core)
            }
        }
    }
}

fn kraus_set_from_files(files: &[OperatorFile], what: &str) -> Result<Option<KrausSet>, CliError> {
    if files.is_empty() {
        return Ok(None);
    }
    let ops = files
        .iter()
        .enumerate()
        .map(|(j, f)| f.to_operator(&format!("{what}.kraus[{j}]")))
        .collect::<Result<Vec<_>, _>>()?;
    KrausSet::new(ops)
        .map(Some)
        .map_err(|e| CliError::Input(format!("{what}.kraus: {e}")))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {what} file {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("invalid {what} file {}: {e}", path.display())))
}

pub fn read_operator(path: &Path, what: &str) -> Result<Operator, CliError> {
    let file: OperatorFile = read_json(path, what)?;
    file.to_operator(what)
}

pub fn read_generator(path: &Path) -> Result<LoadedGenerator, CliError> {
    let file: GeneratorFile = read_json(path, "generator")?;
    match file {
        GeneratorFile::SuperopMatrix { matrix } => {
            let m = matrix.to_operator("generator.matrix")?;
            let d2 = m.rows();
            let d = (d2 as f64).sqrt().round() as usize;
            if d * d != d2 || m.cols() != d2 {
                return Err(CliError::Input(format!(
                    "field 'matrix' of generator: a superoperator matrix must be d²xd², got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
            let s = SuperOperator::new(d, d, m.into_data()).map_err(CliError::from_core)?;
            Ok(LoadedGenerator::Matrix(s))
        }
        GeneratorFile::KPlusKraus { k, kraus } => {
            let k = k.to_operator("generator.k")?;
            let ks = kraus_set_from_files(&kraus, "generator")?
                .unwrap_or_else(|| KrausSet::empty(k.rows(), k.rows()));
            Ok(LoadedGenerator::KPlusKraus { k, kraus: ks })
        }
        GeneratorFile::Gksl { h, kraus } => {
            let h = h.to_operator("generator.h")?;
            let ks = kraus_set_from_files(&kraus, "generator")?
                .unwrap_or_else(|| KrausSet::empty(h.rows(), h.rows()));
            Ok(LoadedGenerator::Gksl { h, kraus: ks })
        }
    }
}

/// Canonical-decomposition file: the output of `canonicalize`, re-read by
/// `verify`.
#[derive(Debug, Deserialize)]
pub struct DecompositionFile {
    pub mode: String,
    pub reference: OperatorFile,
    pub k: OperatorFile,
    #[serde(default)]
    pub h: Option<OperatorFile>,
    #[serde(default)]
    pub kraus: Vec<OperatorFile>,
    #[serde(default)]
    #[allow(dead_code)] // residuals are recomputed, never trusted
    pub residuals: serde_json::Value,
}

pub fn write_output(path: Option<&Path>, json: &Json) -> Result<(), CliError> {
    let text = json.to_string_pretty();
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
