//! JSON wire format for states, codes, channels, and check reports.
//!
//! Complex entries are `[re, im]` pairs, matrices are row-major arrays of
//! rows. Parsing runs the same validation as the corresponding
//! constructors, so anything that parses is usable as is.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::QuantumChannel;
use crate::densemath::ComplexMatrix;
use crate::error::{Error, Result};
use crate::qstate::{CodeSubspace, DensityOperator};
use crate::verify::{CheckReport, Verdict};

type MatrixRows = Vec<Vec<[f64; 2]>>;

fn matrix_rows(m: &ComplexMatrix) -> MatrixRows {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| {
                    let z = m.get(r, c);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    ComplexMatrix::from_rows(
        rows.iter()
            .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect(),
    )
}

fn bad_json(err: serde_json::Error) -> Error {
    Error::Parse(err.to_string())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateJson {
    dim: usize,
    matrix: MatrixRows,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeJson {
    ambient_dim: usize,
    logical_dim: usize,
    isometry: MatrixRows,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    in_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    out_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kraus: Option<Vec<MatrixRows>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    choi: Option<MatrixRows>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StinespringJson {
    in_dim: usize,
    out_dim: usize,
    env_dim: usize,
    isometry: MatrixRows,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportJson {
    verdict: String,
    method: String,
    tolerance: f64,
    quantities: BTreeMap<String, f64>,
}

/// A parsed input of any of the three object kinds.
pub enum ParsedInput {
    State(DensityOperator),
    Code(CodeSubspace),
    Channel(QuantumChannel),
}

impl ParsedInput {
    pub fn kind(&self) -> &'static str {
        match self {
            ParsedInput::State(_) => "state",
            ParsedInput::Code(_) => "code",
            ParsedInput::Channel(_) => "channel",
        }
    }
}

pub fn parse_state(text: &str) -> Result<DensityOperator> {
    let raw: StateJson = serde_json::from_str(text).map_err(bad_json)?;
    let matrix = matrix_from_rows(&raw.matrix)?;
    if matrix.rows() != raw.dim {
        return Err(Error::Parse(format!(
            "state declares dim {} but its matrix has {} rows",
            raw.dim,
            matrix.rows()
        )));
    }
    DensityOperator::new(matrix)
}

pub fn parse_code(text: &str) -> Result<CodeSubspace> {
    let raw: CodeJson = serde_json::from_str(text).map_err(bad_json)?;
    let isometry = matrix_from_rows(&raw.isometry)?;
    if isometry.rows() != raw.ambient_dim || isometry.cols() != raw.logical_dim {
        return Err(Error::Parse(format!(
            "code declares {} -> {} but its isometry is {} x {}",
            raw.logical_dim,
            raw.ambient_dim,
            isometry.rows(),
            isometry.cols()
        )));
    }
    CodeSubspace::new(isometry)
}

pub fn parse_channel(text: &str) -> Result<QuantumChannel> {
    let raw: ChannelJson = serde_json::from_str(text).map_err(bad_json)?;
    match (raw.kraus, raw.choi) {
        (Some(_), Some(_)) | (None, None) => Err(Error::Parse(
            "channel must have exactly one of \"kraus\" or \"choi\"".to_string(),
        )),
        (Some(list), None) => {
            if list.is_empty() {
                return Err(Error::Parse("channel has an empty Kraus list".to_string()));
            }
            let kraus = list
                .iter()
                .map(|rows| matrix_from_rows(rows))
                .collect::<Result<Vec<_>>>()?;
            if let Some(d) = raw.in_dim {
                if kraus[0].cols() != d {
                    return Err(Error::Parse(format!(
                        "channel declares in_dim {} but its Kraus operators have {} columns",
                        d,
                        kraus[0].cols()
                    )));
                }
            }
            if let Some(m) = raw.out_dim {
                if kraus[0].rows() != m {
                    return Err(Error::Parse(format!(
                        "channel declares out_dim {} but its Kraus operators have {} rows",
                        m,
                        kraus[0].rows()
                    )));
                }
            }
            QuantumChannel::from_kraus(kraus)
        }
        (None, Some(rows)) => {
            let (in_dim, out_dim) = match (raw.in_dim, raw.out_dim) {
                (Some(d), Some(m)) => (d, m),
                _ => {
                    return Err(Error::Parse(
                        "choi form requires in_dim and out_dim".to_string(),
                    ))
                }
            };
            QuantumChannel::from_choi(in_dim, out_dim, matrix_from_rows(&rows)?)
        }
    }
}

/// Parses a state, code, or channel, dispatching on the keys present.
pub fn parse_any(text: &str) -> Result<ParsedInput> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(bad_json)?;
    let object = value
        .as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object".to_string()))?;
    if object.contains_key("matrix") {
        Ok(ParsedInput::State(parse_state(text)?))
    } else if object.contains_key("isometry") {
        Ok(ParsedInput::Code(parse_code(text)?))
    } else if object.contains_key("kraus") || object.contains_key("choi") {
        Ok(ParsedInput::Channel(parse_channel(text)?))
    } else {
        Err(Error::Parse(
            "object has none of the keys \"matrix\", \"isometry\", \"kraus\", \"choi\"".to_string(),
        ))
    }
}

pub fn parse_report(text: &str) -> Result<CheckReport> {
    let raw: ReportJson = serde_json::from_str(text).map_err(bad_json)?;
    let claimed = match raw.verdict.as_str() {
        "pass" => Verdict::Pass,
        "fail" => Verdict::Fail,
        other => {
            return Err(Error::Parse(format!(
                "verdict must be \"pass\" or \"fail\", got {other:?}"
            )))
        }
    };
    let report = CheckReport::from_parts(raw.method, raw.tolerance, raw.quantities);
    if report.verdict() != claimed {
        return Err(Error::Parse(
            "stored verdict disagrees with the stored quantities".to_string(),
        ));
    }
    Ok(report)
}

fn to_text<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serialization of plain data cannot fail")
}

pub fn state_to_json(rho: &DensityOperator) -> String {
    to_text(&StateJson {
        dim: rho.dim(),
        matrix: matrix_rows(rho.matrix()),
    })
}

pub fn code_to_json(code: &CodeSubspace) -> String {
    to_text(&CodeJson {
        ambient_dim: code.ambient_dim(),
        logical_dim: code.logical_dim(),
        isometry: matrix_rows(code.isometry()),
    })
}

/// Serializes the channel through its Kraus operators.
pub fn channel_to_json(ch: &QuantumChannel) -> String {
    to_text(&ChannelJson {
        in_dim: Some(ch.in_dim()),
        out_dim: Some(ch.out_dim()),
        kraus: Some(ch.kraus().iter().map(matrix_rows).collect()),
        choi: None,
    })
}

/// Serializes the channel through its unit-trace Choi matrix.
pub fn choi_to_json(ch: &QuantumChannel) -> String {
    to_text(&ChannelJson {
        in_dim: Some(ch.in_dim()),
        out_dim: Some(ch.out_dim()),
        kraus: None,
        choi: Some(matrix_rows(ch.choi())),
    })
}

/// Serializes the Stinespring dilation isometry of the channel.
pub fn stinespring_to_json(ch: &QuantumChannel) -> String {
    to_text(&StinespringJson {
        in_dim: ch.in_dim(),
        out_dim: ch.out_dim(),
        env_dim: ch.env_dim(),
        isometry: matrix_rows(&ch.stinespring()),
    })
}

pub fn report_to_json(report: &CheckReport) -> String {
    to_text(&ReportJson {
        verdict: report.verdict().as_str().to_string(),
        method: report.method().to_string(),
        tolerance: report.tolerance(),
        quantities: report.quantities().clone(),
    })
}
