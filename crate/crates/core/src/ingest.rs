//! Ingestion of estimated two-qubit channels given as Pauli transfer matrices.
//!
//! The PTM is `R[P][Q] = Tr(P Λ(Q)) / 4` with rows and columns in the order
//! `II, IX, IY, IZ, XI, ..., ZZ` (first qubit is the left letter). Twirling
//! over the two-qubit Pauli group keeps only the diagonal, and the diagonal
//! determines the Pauli error probabilities through a ±1 transform.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{ChannelError, PauliChannel, ProbabilityFile, SanitizeError, SanitizeReport, DEFAULT_MAX_CLIPPED};
use crate::pauli::{Letter, Pauli};

pub const PTM_DIM: usize = 16;
pub const PTM_ORDER: &str = "II,IX,IY,IZ,XI,XX,XY,XZ,YI,YX,YY,YZ,ZI,ZX,ZY,ZZ";

const ENTRY_SLACK: f64 = 1e-6;
const TRACE_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {reason}")]
    File { path: String, reason: String },
    #[error("estimate must describe 2 qubits, got n = {0}")]
    Qubits(usize),
    #[error("unsupported basis {0:?} (expected \"pauli\")")]
    Basis(String),
    #[error("unsupported ordering {0:?}")]
    Order(String),
    #[error("PTM must be 16x16, got {rows} rows{}", bad_row.map(|(i, len)| format!(" (row {i} has {len} entries)")).unwrap_or_default())]
    Shape {
        rows: usize,
        bad_row: Option<(usize, usize)>,
    },
    #[error("PTM entry [{row}][{col}] = {value} lies outside [-1, 1]")]
    OutOfRange { row: usize, col: usize, value: f64 },
    #[error(transparent)]
    Sanitize(#[from] SanitizeError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Non-fatal issues found while validating an estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum EstimateWarning {
    /// `R[II][II]` differs from 1.
    NotTracePreserving { value: f64 },
}

impl std::fmt::Display for EstimateWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EstimateWarning::NotTracePreserving { value } => {
                write!(f, "R[II][II] = {value}; the estimate is not trace preserving")
            }
        }
    }
}

/// A validated two-qubit PTM with its experiment metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEstimate {
    ptm: [[f64; PTM_DIM]; PTM_DIM],
    pub tau_ms: f64,
    pub label: String,
}

/// The Pauli labelling row/column `i` of the PTM.
pub fn ptm_pauli(i: usize) -> Pauli {
    assert!(i < PTM_DIM);
    let mut p = Pauli::identity(2);
    p.set(0, Letter::ALL[i / 4]);
    p.set(1, Letter::ALL[i % 4]);
    p
}

impl ChannelEstimate {
    pub fn new(ptm: [[f64; PTM_DIM]; PTM_DIM], tau_ms: f64, label: impl Into<String>) -> Result<Self, IngestError> {
        for (row, r) in ptm.iter().enumerate() {
            for (col, &value) in r.iter().enumerate() {
                if !(value.abs() <= 1.0 + ENTRY_SLACK) {
                    return Err(IngestError::OutOfRange { row, col, value });
                }
            }
        }
        Ok(ChannelEstimate {
            ptm,
            tau_ms,
            label: label.into(),
        })
    }

    /// Builds from rows of arbitrary length, rejecting anything but 16x16.
    pub fn from_rows(rows: &[Vec<f64>], tau_ms: f64, label: impl Into<String>) -> Result<Self, IngestError> {
        let bad_row = rows.iter().enumerate().find(|(_, r)| r.len() != PTM_DIM).map(|(i, r)| (i, r.len()));
        if rows.len() != PTM_DIM || bad_row.is_some() {
            return Err(IngestError::Shape {
                rows: rows.len(),
                bad_row,
            });
        }
        let mut ptm = [[0.0; PTM_DIM]; PTM_DIM];
        for (dst, src) in ptm.iter_mut().zip(rows) {
            dst.copy_from_slice(src);
        }
        Self::new(ptm, tau_ms, label)
    }

    /// PTM of a two-qubit Pauli channel: diagonal `d[P] = sum_Q q_Q (-1)^<P,Q>`.
    pub fn from_pauli_channel(ch: &PauliChannel, tau_ms: f64, label: impl Into<String>) -> Result<Self, IngestError> {
        if ch.n() != 2 {
            return Err(IngestError::Qubits(ch.n()));
        }
        let mut ptm = [[0.0; PTM_DIM]; PTM_DIM];
        for (i, row) in ptm.iter_mut().enumerate() {
            let p = ptm_pauli(i);
            row[i] = ch
                .support()
                .map(|(q, v)| if p.anticommutes(&q) { -v } else { v })
                .sum();
        }
        Self::new(ptm, tau_ms, label)
    }

    pub fn ptm(&self) -> &[[f64; PTM_DIM]; PTM_DIM] {
        &self.ptm
    }

    pub fn diagonal(&self) -> [f64; PTM_DIM] {
        std::array::from_fn(|i| self.ptm[i][i])
    }

    pub fn warnings(&self) -> Vec<EstimateWarning> {
        let mut out = Vec::new();
        let value = self.ptm[0][0];
        if (value - 1.0).abs() > TRACE_TOL {
            out.push(EstimateWarning::NotTracePreserving { value });
        }
        out
    }

    pub fn to_file(&self) -> EstimateFile {
        EstimateFile {
            n: 2,
            basis: Some("pauli".into()),
            order: Some(PTM_ORDER.into()),
            ptm: self.ptm.iter().map(|r| r.to_vec()).collect(),
            tau_ms: self.tau_ms,
            label: Some(self.label.clone()),
        }
    }
}

/// On-disk PTM description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    pub ptm: Vec<Vec<f64>>,
    pub tau_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl EstimateFile {
    pub fn into_estimate(self) -> Result<ChannelEstimate, IngestError> {
        if self.n != 2 {
            return Err(IngestError::Qubits(self.n));
        }
        if let Some(b) = &self.basis {
            if !b.eq_ignore_ascii_case("pauli") {
                return Err(IngestError::Basis(b.clone()));
            }
        }
        if let Some(o) = &self.order {
            let normalized: String = o.chars().filter(|c| !c.is_whitespace()).collect();
            if normalized != PTM_ORDER {
                return Err(IngestError::Order(o.clone()));
            }
        }
        ChannelEstimate::from_rows(&self.ptm, self.tau_ms, self.label.unwrap_or_default())
    }
}

/// An estimate together with the warnings raised while loading it.
#[derive(Debug, Clone)]
pub struct LoadedEstimate {
    pub estimate: ChannelEstimate,
    pub warnings: Vec<EstimateWarning>,
}

fn file_error(path: &Path, reason: impl ToString) -> IngestError {
    IngestError::File {
        path: path.display().to_string(),
        reason: reason.to_string(),
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn parse_estimate(text: &str) -> Result<LoadedEstimate, IngestError> {
    let file: EstimateFile = serde_json::from_str(text).map_err(|e| IngestError::File {
        path: "<input>".into(),
        reason: e.to_string(),
    })?;
    let estimate = file.into_estimate()?;
    let warnings = estimate.warnings();
    Ok(LoadedEstimate { estimate, warnings })
}

pub fn load_estimate(path: &Path) -> Result<LoadedEstimate, IngestError> {
    let text = fs::read_to_string(path).map_err(|e| file_error(path, e))?;
    let file: EstimateFile = serde_json::from_str(&text).map_err(|e| file_error(path, e))?;
    let label_missing = file.label.is_none();
    let mut estimate = file.into_estimate()?;
    if label_missing {
        estimate.label = stem(path);
    }
    let warnings = estimate.warnings();
    Ok(LoadedEstimate { estimate, warnings })
}

/// Pauli probabilities in dense channel order from a PTM diagonal in PTM order:
/// `Pr(Q) = (1/16) sum_P d[P] (-1)^<P,Q>`. Not yet sanitized.
pub fn twirl_probabilities(diagonal: &[f64; PTM_DIM]) -> Vec<f64> {
    (0..PTM_DIM as u64)
        .map(|idx| {
            let q = Pauli::from_index(2, idx);
            let s: f64 = (0..PTM_DIM)
                .map(|i| if ptm_pauli(i).anticommutes(&q) { -diagonal[i] } else { diagonal[i] })
                .sum();
            s / PTM_DIM as f64
        })
        .collect()
}

/// Twirl with the default clipping bound.
pub fn pauli_twirl(est: &ChannelEstimate) -> Result<(PauliChannel, SanitizeReport), IngestError> {
    pauli_twirl_with_bound(est, DEFAULT_MAX_CLIPPED)
}

pub fn pauli_twirl_with_bound(est: &ChannelEstimate, max_clipped: f64) -> Result<(PauliChannel, SanitizeReport), IngestError> {
    let raw = twirl_probabilities(&est.diagonal());
    Ok(sanitize(&raw, max_clipped)?)
}

/// Clips negative entries of a two-qubit probability vector (dense order),
/// renormalizes, and rejects estimates that needed more than `max_clipped`.
pub fn sanitize(probs: &[f64], max_clipped: f64) -> Result<(PauliChannel, SanitizeReport), SanitizeError> {
    PauliChannel::sanitize(2, probs, max_clipped)
}

/// A two-qubit Pauli channel read from either supported file format.
#[derive(Debug, Clone)]
pub struct IngestedChannel {
    pub path: PathBuf,
    pub label: String,
    pub tau_ms: f64,
    pub channel: PauliChannel,
    pub warnings: Vec<EstimateWarning>,
    pub report: Option<SanitizeReport>,
}

/// Loads a PTM file (twirled and sanitized) or a Pauli-probability file.
pub fn load_two_qubit_channel(path: &Path, max_clipped: f64) -> Result<IngestedChannel, IngestError> {
    let text = fs::read_to_string(path).map_err(|e| file_error(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| file_error(path, e))?;
    if value.get("ptm").is_some() {
        let loaded = load_estimate(path)?;
        let (channel, report) = pauli_twirl_with_bound(&loaded.estimate, max_clipped)?;
        Ok(IngestedChannel {
            path: path.to_path_buf(),
            label: loaded.estimate.label.clone(),
            tau_ms: loaded.estimate.tau_ms,
            channel,
            warnings: loaded.warnings,
            report: Some(report),
        })
    } else {
        let file: ProbabilityFile = serde_json::from_value(value).map_err(|e| file_error(path, e))?;
        if file.n != 2 {
            return Err(IngestError::Qubits(file.n));
        }
        let channel = file.into_channel()?;
        Ok(IngestedChannel {
            path: path.to_path_buf(),
            label: file.label.clone().unwrap_or_else(|| stem(path)),
            tau_ms: file.tau_ms.unwrap_or(0.0),
            channel,
            warnings: Vec::new(),
            report: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pauli {
        s.parse().unwrap()
    }

    fn identity_ptm() -> [[f64; 16]; 16] {
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
    }

    fn file_json(rows: &[Vec<f64>]) -> String {
        serde_json::json!({
            "n": 2, "basis": "pauli", "order": PTM_ORDER, "ptm": rows, "tau_ms": 0.0, "label": "t"
        })
        .to_string()
    }

    #[test]
    fn ptm_order_labels() {
        let labels: Vec<String> = (0..16).map(|i| ptm_pauli(i).to_string()).collect();
        assert_eq!(labels.join(","), PTM_ORDER);
    }

    #[test]
    fn identity_file_loads() {
        let rows: Vec<Vec<f64>> = identity_ptm().iter().map(|r| r.to_vec()).collect();
        let loaded = parse_estimate(&file_json(&rows)).unwrap();
        assert_eq!(loaded.estimate.ptm(), &identity_ptm());
        assert!(loaded.warnings.is_empty());
    }

    #[test]
    fn wrong_shape_is_rejected() {
        let rows: Vec<Vec<f64>> = identity_ptm()[..15].iter().map(|r| r.to_vec()).collect();
        assert!(matches!(parse_estimate(&file_json(&rows)), Err(IngestError::Shape { rows: 15, .. })));
        let mut rows: Vec<Vec<f64>> = identity_ptm().iter().map(|r| r.to_vec()).collect();
        rows[3].pop();
        assert!(matches!(
            parse_estimate(&file_json(&rows)),
            Err(IngestError::Shape { rows: 16, bad_row: Some((3, 15)) })
        ));
    }

    #[test]
    fn out_of_range_and_missing_fields() {
        let mut rows: Vec<Vec<f64>> = identity_ptm().iter().map(|r| r.to_vec()).collect();
        rows[2][5] = 1.5;
        assert!(matches!(
            parse_estimate(&file_json(&rows)),
            Err(IngestError::OutOfRange { row: 2, col: 5, .. })
        ));
        rows[2][5] = 1.0 + 1e-7;
        assert!(parse_estimate(&file_json(&rows)).is_ok());
        assert!(parse_estimate(r#"{ "n": 2, "tau_ms": 0.0 }"#).is_err());
        let no_tau = serde_json::json!({ "n": 2, "ptm": identity_ptm() }).to_string();
        assert!(parse_estimate(&no_tau).is_err());
        let bad_order = serde_json::json!({ "n": 2, "order": "II,XI", "ptm": identity_ptm(), "tau_ms": 1.0 }).to_string();
        assert!(matches!(parse_estimate(&bad_order), Err(IngestError::Order(_))));
    }

    #[test]
    fn trace_warning_is_surfaced() {
        let mut ptm = identity_ptm();
        ptm[0][0] = 0.3;
        let est = ChannelEstimate::new(ptm, 0.0, "x").unwrap();
        assert_eq!(est.warnings(), vec![EstimateWarning::NotTracePreserving { value: 0.3 }]);
    }

    #[test]
    fn twirl_of_identity_is_point_mass() {
        let est = ChannelEstimate::new(identity_ptm(), 0.0, "id").unwrap();
        let (ch, report) = pauli_twirl(&est).unwrap();
        assert_eq!(ch, PauliChannel::identity(2).unwrap());
        assert_eq!(report.clipped_mass, 0.0);
    }

    #[test]
    fn twirl_of_single_flip() {
        let q = 0.07;
        let zi = p("ZI");
        let mut ptm = identity_ptm();
        for (i, row) in ptm.iter_mut().enumerate() {
            if ptm_pauli(i).anticommutes(&zi) {
                row[i] = 1.0 - 2.0 * q;
            }
        }
        let (ch, _) = pauli_twirl(&ChannelEstimate::new(ptm, 0.0, "zi").unwrap()).unwrap();
        assert!((ch.prob(&zi) - q).abs() < 1e-15);
        assert!((ch.prob(&p("II")) - (1.0 - q)).abs() < 1e-15);
        assert_eq!(ch.support().count(), 2);
    }

    #[test]
    fn coherences_are_discarded() {
        let mut ptm = identity_ptm();
        let xy = PTM_ORDER.split(',').position(|s| s == "XY").unwrap();
        let xx = PTM_ORDER.split(',').position(|s| s == "XX").unwrap();
        ptm[xy][xx] = 0.2;
        ptm[xx][xy] = -0.2;
        let (a, _) = pauli_twirl(&ChannelEstimate::new(ptm, 0.0, "c").unwrap()).unwrap();
        let (b, _) = pauli_twirl(&ChannelEstimate::new(identity_ptm(), 0.0, "i").unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn transform_applied_twice_scales_by_sixteen() {
        let d: [f64; 16] = std::array::from_fn(|i| 1.0 - 0.03 * i as f64);
        // unnormalized transform T(d) = 16 * twirl_probabilities(d), dense order
        let once: Vec<f64> = twirl_probabilities(&d).iter().map(|v| 16.0 * v).collect();
        for (i, &di) in d.iter().enumerate() {
            let pi = ptm_pauli(i);
            let twice: f64 = (0..16u64)
                .map(|idx| {
                    let v = once[idx as usize];
                    if pi.anticommutes(&Pauli::from_index(2, idx)) { -v } else { v }
                })
                .sum();
            assert!((twice - 16.0 * di).abs() < 1e-12);
        }
    }

    #[test]
    fn sanitize_rejects_large_negative_mass() {
        let mut raw = vec![0.0; 16];
        raw[0] = 1.1;
        raw[5] = -0.1;
        assert!(matches!(sanitize(&raw, DEFAULT_MAX_CLIPPED), Err(SanitizeError::ClippedMass { .. })));
        assert!(sanitize(&raw, 0.2).is_ok());
    }
}
