//! JSON schemas for persisted artifacts.
//!
//! All numbers that matter are carried as canonical rational strings, never
//! as floats. Emission is byte-stable: struct fields serialize in a fixed
//! order and jet terms iterate in graded-lex order, so identical values
//! produce identical files. Parsing validates semantically after the JSON
//! layer and reports failures with a field path.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::certificate::{BairePoint, CounterexampleCertificate};
use crate::error::{OdeError, OperatorError, ScalarError};
use crate::jet::Jet;
use crate::multi_index::MultiIndex;
use crate::ode1d::OdeProblem;
use crate::operator::DiffOperator;
use crate::scalar::{parse_rational, Scalar};
use crate::solver::SolveTrace;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid value at {path}: {reason}")]
    Field { path: String, reason: String },
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Ode(#[from] OdeError),
}

fn field_error(path: impl Into<String>, reason: impl ToString) -> IoError {
    IoError::Field {
        path: path.into(),
        reason: reason.to_string(),
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarDto {
    re: String,
    im: String,
}

#[derive(Serialize, Deserialize)]
struct TermDto {
    gamma: Vec<usize>,
    re: String,
    im: String,
}

#[derive(Serialize, Deserialize)]
struct OperatorTermDto {
    alpha: Vec<usize>,
    coeff: Vec<TermDto>,
}

#[derive(Serialize, Deserialize)]
struct OperatorDto {
    dim: usize,
    order: usize,
    trunc_degree: usize,
    terms: Vec<OperatorTermDto>,
}

#[derive(Serialize, Deserialize)]
struct JetDto {
    dim: usize,
    trunc_degree: usize,
    terms: Vec<TermDto>,
}

#[derive(Serialize, Deserialize)]
struct BaireDto {
    coords: Vec<String>,
    witnesses: Vec<ScalarDto>,
}

#[derive(Serialize, Deserialize)]
struct CertificateDto {
    operator_digest: String,
    dim: usize,
    #[serde(rename = "K")]
    k_max: usize,
    #[serde(rename = "N")]
    trunc_degree: usize,
    flatness_through_degree: usize,
    baire: BaireDto,
    b: Vec<ScalarDto>,
    u: Vec<Vec<TermDto>>,
    #[serde(rename = "G")]
    series: Vec<TermDto>,
    residual: Vec<TermDto>,
    diagonal: Vec<String>,
    diverges: bool,
}

#[derive(Serialize, Deserialize)]
struct OdeProblemDto {
    order: usize,
    trunc_degree: usize,
    coefficients: Vec<Vec<TermDto>>,
    data: Vec<TermDto>,
}

#[derive(Serialize)]
struct TraceDto {
    stabilized_at: usize,
    iterates: Vec<Vec<TermDto>>,
    differences: Vec<Vec<TermDto>>,
}

fn scalar_to_dto(value: &Scalar) -> ScalarDto {
    ScalarDto {
        re: value.re().to_string(),
        im: value.im().to_string(),
    }
}

fn scalar_from_dto(dto: &ScalarDto, path: &str) -> Result<Scalar, IoError> {
    Scalar::parse(&dto.re, &dto.im).map_err(|err| match &err {
        ScalarError::MalformedRational { part, .. } => {
            field_error(format!("{path}.{part}"), &err)
        }
    })
}

fn jet_terms_to_dto(jet: &Jet) -> Vec<TermDto> {
    jet.terms()
        .map(|(gamma, coeff)| TermDto {
            gamma: gamma.exponents().to_vec(),
            re: coeff.re().to_string(),
            im: coeff.im().to_string(),
        })
        .collect()
}

fn jet_from_term_dtos(
    dim: usize,
    trunc_degree: usize,
    terms: &[TermDto],
    path: &str,
) -> Result<Jet, IoError> {
    let mut parsed = Vec::with_capacity(terms.len());
    for (i, term) in terms.iter().enumerate() {
        if term.gamma.len() != dim {
            return Err(field_error(
                format!("{path}[{i}].gamma"),
                format!("length {} does not match dimension {dim}", term.gamma.len()),
            ));
        }
        let coeff = Scalar::parse(&term.re, &term.im).map_err(|err| match &err {
            ScalarError::MalformedRational { part, .. } => {
                field_error(format!("{path}[{i}].{part}"), &err)
            }
        })?;
        parsed.push((MultiIndex::new(term.gamma.clone()), coeff));
    }
    Jet::from_terms(dim, trunc_degree, parsed).map_err(|err| field_error(path, err))
}

/// Canonical pretty JSON with a trailing newline.
fn emit<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

pub fn operator_to_json(op: &DiffOperator) -> String {
    let dto = OperatorDto {
        dim: op.dim(),
        order: op.order(),
        trunc_degree: op.trunc_degree(),
        terms: op
            .terms()
            .map(|(alpha, coeff)| OperatorTermDto {
                alpha: alpha.exponents().to_vec(),
                coeff: jet_terms_to_dto(coeff),
            })
            .collect(),
    };
    emit(&dto)
}

pub fn operator_from_json(text: &str) -> Result<DiffOperator, IoError> {
    let dto: OperatorDto = serde_json::from_str(text)?;
    if dto.dim == 0 {
        return Err(field_error("dim", "dimension must be at least 1"));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut terms = Vec::with_capacity(dto.terms.len());
    for (i, term) in dto.terms.iter().enumerate() {
        let path = format!("terms[{i}]");
        if term.alpha.len() != dto.dim {
            return Err(field_error(
                format!("{path}.alpha"),
                format!(
                    "length {} does not match dimension {}",
                    term.alpha.len(),
                    dto.dim
                ),
            ));
        }
        let alpha = MultiIndex::new(term.alpha.clone());
        if !seen.insert(alpha.clone()) {
            return Err(field_error(
                format!("{path}.alpha"),
                format!("duplicate derivative index {alpha}"),
            ));
        }
        let coeff = jet_from_term_dtos(
            dto.dim,
            dto.trunc_degree,
            &term.coeff,
            &format!("{path}.coeff"),
        )?;
        terms.push((alpha, coeff));
    }
    Ok(DiffOperator::new(dto.dim, dto.order, terms)?)
}

/// SHA-256 of the canonical operator serialization, lowercase hex. Stable
/// under reformatting of the input file, since it hashes the re-emission.
pub fn operator_digest(op: &DiffOperator) -> String {
    let digest = Sha256::digest(operator_to_json(op).as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

pub fn jet_to_json(jet: &Jet) -> String {
    let dto = JetDto {
        dim: jet.dim(),
        trunc_degree: jet.trunc_degree(),
        terms: jet_terms_to_dto(jet),
    };
    emit(&dto)
}

pub fn jet_from_json(text: &str) -> Result<Jet, IoError> {
    let dto: JetDto = serde_json::from_str(text)?;
    if dto.dim == 0 {
        return Err(field_error("dim", "dimension must be at least 1"));
    }
    jet_from_term_dtos(dto.dim, dto.trunc_degree, &dto.terms, "terms")
}

pub fn certificate_to_json(cert: &CounterexampleCertificate) -> Result<String, IoError> {
    let mut diagonal = Vec::with_capacity(cert.diagonal.len());
    for (k, value) in cert.diagonal.iter().enumerate() {
        if !value.is_real() {
            return Err(field_error(
                format!("diagonal[{k}]"),
                "diagonal entries must be real",
            ));
        }
        diagonal.push(value.re().to_string());
    }
    let dto = CertificateDto {
        operator_digest: cert.operator_digest.clone(),
        dim: cert.dim,
        k_max: cert.k_max,
        trunc_degree: cert.trunc_degree,
        flatness_through_degree: cert.flatness_through_degree,
        baire: BaireDto {
            coords: cert.baire.coords.iter().map(|c| c.to_string()).collect(),
            witnesses: cert
                .baire
                .witness_values
                .iter()
                .map(scalar_to_dto)
                .collect(),
        },
        b: cert.weights.iter().map(scalar_to_dto).collect(),
        u: cert.solutions.iter().map(jet_terms_to_dto).collect(),
        series: jet_terms_to_dto(&cert.series),
        residual: jet_terms_to_dto(&cert.residual),
        diagonal,
        diverges: cert.diverges,
    };
    Ok(emit(&dto))
}

pub fn certificate_from_json(text: &str) -> Result<CounterexampleCertificate, IoError> {
    let dto: CertificateDto = serde_json::from_str(text)?;
    if dto.dim < 2 {
        return Err(field_error("dim", "certificates need dimension >= 2"));
    }
    let mut coords = Vec::with_capacity(dto.baire.coords.len());
    for (i, text) in dto.baire.coords.iter().enumerate() {
        coords.push(
            parse_rational(text, "re")
                .map_err(|err| field_error(format!("baire.coords[{i}]"), err))?,
        );
    }
    if coords.len() + 1 != dto.dim {
        return Err(field_error(
            "baire.coords",
            format!("expected {} coordinates for dimension {}", dto.dim - 1, dto.dim),
        ));
    }
    let mut witness_values = Vec::with_capacity(dto.baire.witnesses.len());
    for (i, witness) in dto.baire.witnesses.iter().enumerate() {
        witness_values.push(scalar_from_dto(witness, &format!("baire.witnesses[{i}]"))?);
    }
    let mut weights = Vec::with_capacity(dto.b.len());
    for (i, b) in dto.b.iter().enumerate() {
        weights.push(scalar_from_dto(b, &format!("b[{i}]"))?);
    }
    let mut solutions = Vec::with_capacity(dto.u.len());
    for (i, terms) in dto.u.iter().enumerate() {
        solutions.push(jet_from_term_dtos(
            dto.dim,
            dto.trunc_degree,
            terms,
            &format!("u[{i}]"),
        )?);
    }
    let series = jet_from_term_dtos(dto.dim, dto.trunc_degree, &dto.series, "G")?;
    let residual = jet_from_term_dtos(
        dto.dim,
        dto.flatness_through_degree,
        &dto.residual,
        "residual",
    )?;
    let mut diagonal = Vec::with_capacity(dto.diagonal.len());
    for (k, text) in dto.diagonal.iter().enumerate() {
        let value = parse_rational(text, "re")
            .map_err(|err| field_error(format!("diagonal[{k}]"), err))?;
        diagonal.push(Scalar::real(value));
    }
    Ok(CounterexampleCertificate {
        operator_digest: dto.operator_digest,
        dim: dto.dim,
        k_max: dto.k_max,
        trunc_degree: dto.trunc_degree,
        flatness_through_degree: dto.flatness_through_degree,
        baire: BairePoint {
            coords,
            witness_values,
        },
        weights,
        solutions,
        series,
        residual,
        diagonal,
        diverges: dto.diverges,
    })
}

pub fn ode_problem_to_json(problem: &OdeProblem) -> String {
    let dto = OdeProblemDto {
        order: problem.order(),
        trunc_degree: problem.trunc_degree(),
        coefficients: problem.coefficients().iter().map(jet_terms_to_dto).collect(),
        data: jet_terms_to_dto(problem.data()),
    };
    emit(&dto)
}

pub fn ode_problem_from_json(text: &str) -> Result<OdeProblem, IoError> {
    let dto: OdeProblemDto = serde_json::from_str(text)?;
    let mut coefficients = Vec::with_capacity(dto.coefficients.len());
    for (i, terms) in dto.coefficients.iter().enumerate() {
        coefficients.push(jet_from_term_dtos(
            1,
            dto.trunc_degree,
            terms,
            &format!("coefficients[{i}]"),
        )?);
    }
    let data = jet_from_term_dtos(1, dto.trunc_degree, &dto.data, "data")?;
    Ok(OdeProblem::new(
        dto.order,
        coefficients,
        data,
        dto.trunc_degree,
    )?)
}

pub fn trace_to_json(trace: &SolveTrace) -> String {
    let dto = TraceDto {
        stabilized_at: trace.stabilized_at,
        iterates: trace.iterates.iter().map(jet_terms_to_dto).collect(),
        differences: trace.differences.iter().map(jet_terms_to_dto).collect(),
    };
    emit(&dto)
}
