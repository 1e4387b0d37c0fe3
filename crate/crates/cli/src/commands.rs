use std::path::Path;

use num_complex::Complex64;

use lcanon_core::choi::{choi_map, surjectivity_witness};
use lcanon_core::gksl::{
    canonicalize, canonicalize_cptp, canonicalize_parts, verify_canonical,
    CanonicalDecomposition, DecompositionMode,
};
use lcanon_core::kraus::{kraus_from_choi, KrausSet};
use lcanon_core::{Tolerances, WeightRule, WeightedBasis};

use crate::error::CliError;
use crate::files::{
    operator_to_json, read_generator, read_json, read_operator, write_output, DecompositionFile,
    LoadedGenerator,
};
use crate::jsonfmt::Json;

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Cp,
    Cptp,
}

fn tolerances_json(tol: &Tolerances) -> Json {
    let mut obj = Json::object();
    obj.push("tol_eq", Json::Float(tol.tol_eq));
    obj.push("tol_psd", Json::Float(tol.tol_psd));
    obj.push("tol_recon", Json::Float(tol.tol_recon));
    obj.push("rank_tol", Json::Float(tol.rank_tol));
    obj
}

fn residuals_json(residuals: &std::collections::BTreeMap<String, f64>) -> Json {
    let mut obj = Json::object();
    for (k, v) in residuals {
        obj.push(k, Json::Float(*v));
    }
    obj
}

fn kraus_json(ks: &KrausSet) -> Json {
    Json::Array(ks.operators().iter().map(operator_to_json).collect())
}

fn decomposition_json(cd: &CanonicalDecomposition, tol: &Tolerances) -> Json {
    let mut obj = Json::object();
    obj.push(
        "mode",
        Json::Str(
            match cd.mode {
                DecompositionMode::Cp => "cp",
                DecompositionMode::Cptp => "cptp",
            }
            .into(),
        ),
    );
    obj.push("reference", operator_to_json(&cd.reference));
    obj.push("k", operator_to_json(&cd.k));
    if let Some(h) = &cd.hamiltonian {
        obj.push("h", operator_to_json(h));
    }
    obj.push("kraus", kraus_json(&cd.phi));
    obj.push("residuals", residuals_json(&cd.residuals));
    obj.push("tolerances", tolerances_json(tol));
    obj
}

pub fn cmd_canonicalize(
    generator_path: &Path,
    reference_path: &Path,
    mode: Mode,
    out: Option<&Path>,
    tol: &Tolerances,
) -> Result<(), CliError> {
    let loaded = read_generator(generator_path)?;
    let b = read_operator(reference_path, "reference")?;
    let cd = match (mode, &loaded) {
        (Mode::Cp, LoadedGenerator::KPlusKraus { k, kraus }) => {
            // The file already provides an initial decomposition; shift it
            // directly instead of re-extracting.
            canonicalize_parts(k, kraus, &b, tol).map_err(CliError::from_core)?
        }
        (Mode::Cp, _) => {
            let l = loaded.to_generator(false)?;
            canonicalize(&l, &b, tol).map_err(CliError::from_core)?
        }
        (Mode::Cptp, _) => {
            let l = loaded.to_generator(true)?;
            canonicalize_cptp(&l, &b, tol).map_err(CliError::from_core)?
        }
    };
    write_output(out, &decomposition_json(&cd, tol))
}

pub fn cmd_choi(
    map_path: &Path,
    weights: Option<&str>,
    out: Option<&Path>,
    _tol: &Tolerances,
) -> Result<(), CliError> {
    let superop = read_generator(map_path)?.superop()?;
    let d = superop.dim_in();
    let wb = match weights {
        None => WeightedBasis::uniform(d),
        Some(spec) => {
            let parsed: Result<Vec<f64>, _> =
                spec.split(',').map(|s| s.trim().parse::<f64>()).collect();
            let vals = parsed.map_err(|e| {
                CliError::Input(format!("flag --weights: cannot parse '{spec}': {e}"))
            })?;
            if vals.len() != d {
                return Err(CliError::Input(format!(
                    "flag --weights: expected {d} weights for a dimension-{d} map, got {}",
                    vals.len()
                )));
            }
            WeightedBasis::standard(vals.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
                .map_err(CliError::from_core)?
        }
    };
    let choi = choi_map(&superop, &wb).map_err(CliError::from_core)?;
    let eigs = choi.eigenvalues().map_err(CliError::from_core)?;
    let mut obj = Json::object();
    obj.push("dim_in", Json::Int(choi.dim_in() as i64));
    obj.push("dim_out", Json::Int(choi.dim_out() as i64));
    obj.push(
        "weights",
        Json::Array(wb.weights().iter().map(|w| Json::complex(w.re, w.im)).collect()),
    );
    obj.push("choi", operator_to_json(&choi.as_operator()));
    obj.push("min_eigenvalue", Json::Float(eigs.first().copied().unwrap_or(0.0)));
    obj.push("max_eigenvalue", Json::Float(eigs.last().copied().unwrap_or(0.0)));
    obj.push("hermiticity_defect", Json::Float(choi.hermiticity_defect()));
    write_output(out, &obj)
}

pub fn cmd_kraus(map_path: &Path, out: Option<&Path>, tol: &Tolerances) -> Result<(), CliError> {
    let superop = read_generator(map_path)?.superop()?;
    let wb = WeightedBasis::uniform(superop.dim_in());
    let choi = choi_map(&superop, &wb).map_err(CliError::from_core)?;
    let ks = kraus_from_choi(&choi, tol.rank_tol).map_err(CliError::from_core)?;
    let mut obj = Json::object();
    obj.push("count", Json::Int(ks.len() as i64));
    obj.push(
        "choi_eigenvalues",
        Json::Array(
            ks.weights_info
                .clone()
                .unwrap_or_default()
                .into_iter()
                .map(Json::Float)
                .collect(),
        ),
    );
    obj.push("kraus", kraus_json(&ks));
    write_output(out, &obj)
}

pub fn cmd_verify(
    decomposition_path: &Path,
    generator_path: &Path,
    out: Option<&Path>,
    tol: &Tolerances,
) -> Result<(), CliError> {
    let file: DecompositionFile = read_json(decomposition_path, "decomposition")?;
    let mode = match file.mode.as_str() {
        "cp" => DecompositionMode::Cp,
        "cptp" => DecompositionMode::Cptp,
        other => {
            return Err(CliError::Input(format!(
                "field 'mode' of decomposition: expected 'cp' or 'cptp', got '{other}'"
            )))
        }
    };
    let k = file.k.to_operator("decomposition.k")?;
    let hamiltonian = match (&file.h, mode) {
        (Some(h), _) => Some(h.to_operator("decomposition.h")?),
        (None, DecompositionMode::Cptp) => {
            return Err(CliError::Input(
                "field 'h' of decomposition: required in cptp mode".into(),
            ))
        }
        (None, DecompositionMode::Cp) => None,
    };
    let reference = file.reference.to_operator("decomposition.reference")?;
    let kraus_ops = file
        .kraus
        .iter()
        .enumerate()
        .map(|(j, f)| f.to_operator(&format!("decomposition.kraus[{j}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let phi = if kraus_ops.is_empty() {
        KrausSet::empty(k.rows(), k.rows())
    } else {
        KrausSet::new(kraus_ops).map_err(CliError::from_core)?
    };
    let cd = CanonicalDecomposition {
        mode,
        k,
        hamiltonian,
        phi,
        reference,
        residuals: Default::default(),
    };
    let l = read_generator(generator_path)?.to_generator(mode == DecompositionMode::Cptp)?;
    let report = verify_canonical(&cd, &l, tol).map_err(CliError::from_core)?;

    let mut obj = Json::object();
    obj.push("passed", Json::Bool(report.passed()));
    obj.push(
        "failures",
        Json::Array(report.failures.iter().map(|f| Json::Str(f.clone())).collect()),
    );
    obj.push("residuals", residuals_json(&report.residuals));
    obj.push("tolerances", tolerances_json(tol));
    write_output(out, &obj)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Math(format!(
            "verification failed: {}",
            report.failures.join(", ")
        )))
    }
}

pub fn parse_weight_rule(spec: &str) -> Result<WeightRule, CliError> {
    let (name, value) = spec.split_once(':').ok_or_else(|| {
        CliError::Input(format!(
            "flag --weights: expected 'geometric:<r>' or 'power:<p>', got '{spec}'"
        ))
    })?;
    let value: f64 = value.trim().parse().map_err(|e| {
        CliError::Input(format!("flag --weights: cannot parse parameter of '{spec}': {e}"))
    })?;
    match name {
        "geometric" => Ok(WeightRule::Geometric { ratio: value }),
        "power" => Ok(WeightRule::InversePower { exponent: value }),
        other => Err(CliError::Input(format!(
            "flag --weights: unknown rule '{other}' (expected 'geometric' or 'power')"
        ))),
    }
}

pub fn cmd_witness(weights: &str, dims: &str, out: Option<&Path>) -> Result<(), CliError> {
    let rule = parse_weight_rule(weights)?;
    let (lo, hi) = dims
        .split_once(':')
        .ok_or_else(|| CliError::Input(format!("flag --dims: expected 'a:b', got '{dims}'")))?;
    let lo: usize = lo
        .trim()
        .parse()
        .map_err(|e| CliError::Input(format!("flag --dims: {e}")))?;
    let hi: usize = hi
        .trim()
        .parse()
        .map_err(|e| CliError::Input(format!("flag --dims: {e}")))?;
    if lo == 0 || hi < lo {
        return Err(CliError::Input(format!(
            "flag --dims: range {lo}:{hi} must satisfy 1 <= a <= b"
        )));
    }
    let d_list: Vec<usize> = (lo..=hi).collect();
    let table = surjectivity_witness(rule, &d_list).map_err(CliError::from_core)?;
    let mut obj = Json::object();
    obj.push("rule", Json::Str(weights.to_string()));
    obj.push("absolutely_summable", Json::Bool(rule.is_absolutely_summable()));
    let rows = table
        .into_iter()
        .map(|(d, sup)| {
            let mut row = Json::object();
            row.push("dim", Json::Int(d as i64));
            row.push("sup_norm", Json::Float(sup));
            row
        })
        .collect();
    obj.push("table", Json::Array(rows));
    write_output(out, &obj)
}
