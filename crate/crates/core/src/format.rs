//! Text formats for arrangements (`.ea`), pure states (`.qs`) and basis
//! transformations (`.bt`).
//!
//! All three are JSON objects with explicit field names. Multi-indices are
//! 1-based arrays with one detector per screen; complex numbers are split into
//! `re` and `im` (`im` may be omitted). Entries not listed are zero.
//!
//! ```text
//! {
//!   "version": 1,
//!   "factorization": [2, 2],
//!   "label": "optional free text",
//!   "entries": [
//!     {"bra": [1, 1], "ket": [1, 1], "re": 0.5, "im": 0.0},
//!     {"bra": [2, 2], "ket": [2, 2], "re": 0.5}
//!   ]
//! }
//! ```
//!
//! A state file replaces `entries` with `amplitudes: [{"index": [..], "re", "im"}]`.
//! A transformation file has `source` and `target` factorizations and entries
//! `{"row": target index, "col": source index, "re", "im"}`.
//!
//! The serializers write the canonical form: exact zeros dropped, entries in
//! linear (row, column) order, reals with 17 significant digits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::error::{Error, ErrorCategory};
use crate::isa::ExperimentalArrangement;
use crate::tensor::{ComplexMatrix, DenseOperatorTensor, MultiIndex, ScreenConfiguration};
use crate::tolerance;
use crate::transforms::BasisTransformation;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("malformed document at line {line}, column {column}: {message}")]
    Schema {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported version {found} (expected {FORMAT_VERSION})")]
    Version { found: u64 },

    #[error("{field}: {message}")]
    Range { field: String, message: String },

    #[error("{field}: duplicate of {first}")]
    Duplicate { field: String, first: String },

    #[error("state is not normalized (norm {norm})")]
    Normalization { norm: f64 },

    #[error(transparent)]
    Model(#[from] Error),
}

impl FormatError {
    /// `None` for problems with the document itself; otherwise the category
    /// of the underlying model error.
    pub fn model_category(&self) -> Option<ErrorCategory> {
        match self {
            FormatError::Model(e) => Some(e.category()),
            FormatError::Normalization { .. } => Some(ErrorCategory::Validation),
            _ => None,
        }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        use serde_json::error::Category;
        let (line, column) = (e.line(), e.column());
        // serde_json appends " at line L column C"; keep only the message.
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(p) => message[..p].to_string(),
            None => message,
        };
        match e.classify() {
            Category::Data => FormatError::Schema { line, column, message },
            _ => FormatError::Syntax { line, column, message },
        }
    }
}

type FormatResult<T> = std::result::Result<T, FormatError>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArrangement {
    version: u64,
    factorization: Vec<usize>,
    #[serde(default)]
    label: Option<String>,
    entries: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    bra: Vec<i64>,
    ket: Vec<i64>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    version: u64,
    factorization: Vec<usize>,
    amplitudes: Vec<RawAmplitude>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAmplitude {
    index: Vec<i64>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransformation {
    version: u64,
    source: Vec<usize>,
    target: Vec<usize>,
    entries: Vec<RawMatrixEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrixEntry {
    row: Vec<i64>,
    col: Vec<i64>,
    re: f64,
    #[serde(default)]
    im: f64,
}

fn check_version(found: u64) -> FormatResult<()> {
    if found == FORMAT_VERSION {
        Ok(())
    } else {
        Err(FormatError::Version { found })
    }
}

/// Converts a raw index array into a multi-index of `shape`, naming `field`
/// on failure.
fn multi_index(raw: &[i64], shape: &ScreenConfiguration, field: &str) -> FormatResult<MultiIndex> {
    let counts = shape.detector_counts();
    if raw.len() != counts.len() {
        return Err(FormatError::Range {
            field: field.to_string(),
            message: format!("expected {} indices, found {}", counts.len(), raw.len()),
        });
    }
    raw.iter()
        .zip(counts)
        .enumerate()
        .map(|(j, (&k, &count))| {
            if k >= 1 && (k as u64) <= count as u64 {
                Ok(k as usize)
            } else {
                Err(FormatError::Range {
                    field: format!("{field}[{j}]"),
                    message: format!("detector {k} is out of range 1..={count}"),
                })
            }
        })
        .collect::<FormatResult<Vec<_>>>()
        .map(MultiIndex)
}

/// Parses an arrangement file without checking the ISA conditions.
pub fn parse_tensor(text: &str) -> FormatResult<(DenseOperatorTensor, Option<String>)> {
    let raw: RawArrangement = serde_json::from_str(text)?;
    check_version(raw.version)?;
    let shape = ScreenConfiguration::new(raw.factorization)?;
    let n = shape.dimension();
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut matrix = ComplexMatrix::zeros(n, n);
    for (e, entry) in raw.entries.iter().enumerate() {
        let bra = multi_index(&entry.bra, &shape, &format!("entries[{e}].bra"))?;
        let ket = multi_index(&entry.ket, &shape, &format!("entries[{e}].ket"))?;
        let key = (shape.flatten(&bra)?, shape.flatten(&ket)?);
        if let Some(first) = seen.insert(key, e) {
            return Err(FormatError::Duplicate {
                field: format!("entries[{e}]"),
                first: format!("entries[{first}]"),
            });
        }
        matrix[key] = Complex64::new(entry.re, entry.im);
    }
    Ok((DenseOperatorTensor::new(shape, matrix)?, raw.label))
}

/// Parses and validates an arrangement file.
pub fn parse_arrangement(text: &str) -> FormatResult<ExperimentalArrangement> {
    let (tensor, label) = parse_tensor(text)?;
    let ea = ExperimentalArrangement::new(tensor)?;
    Ok(match label {
        Some(l) => ea.with_label(l),
        None => ea,
    })
}

pub fn serialize_arrangement(ea: &ExperimentalArrangement) -> String {
    serialize_tensor(ea.alpha(), ea.label())
}

pub fn serialize_tensor(tensor: &DenseOperatorTensor, label: Option<&str>) -> String {
    let shape = tensor.shape();
    let n = tensor.dimension();
    let m = tensor.matrix();
    let mut out = String::from("{\n");
    writeln!(out, "  \"version\": {FORMAT_VERSION},").unwrap();
    writeln!(out, "  \"factorization\": {},", int_list(shape.detector_counts())).unwrap();
    if let Some(label) = label {
        writeln!(out, "  \"label\": {},", json_string(label)).unwrap();
    }
    let rows: Vec<String> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| m[(i, j)] != Complex64::new(0.0, 0.0))
        .map(|(i, j)| {
            format!(
                "    {{\"bra\": {}, \"ket\": {}, \"re\": {}, \"im\": {}}}",
                int_list(shape.unflatten(i).indices()),
                int_list(shape.unflatten(j).indices()),
                real(m[(i, j)].re),
                real(m[(i, j)].im)
            )
        })
        .collect();
    write_list(&mut out, "entries", &rows);
    out
}

/// A pure state read from a `.qs` file, renormalized to unit norm.
#[derive(Clone, Debug, PartialEq)]
pub struct StateFile {
    pub shape: ScreenConfiguration,
    pub amplitudes: Vec<Complex64>,
}

pub fn parse_state(text: &str) -> FormatResult<StateFile> {
    let raw: RawState = serde_json::from_str(text)?;
    check_version(raw.version)?;
    let shape = ScreenConfiguration::new(raw.factorization)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); shape.dimension()];
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for (a, amp) in raw.amplitudes.iter().enumerate() {
        let index = multi_index(&amp.index, &shape, &format!("amplitudes[{a}].index"))?;
        let k = shape.flatten(&index)?;
        if let Some(first) = seen.insert(k, a) {
            return Err(FormatError::Duplicate {
                field: format!("amplitudes[{a}]"),
                first: format!("amplitudes[{first}]"),
            });
        }
        amplitudes[k] = Complex64::new(amp.re, amp.im);
    }
    let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > tolerance::STATE_FILE_NORM {
        return Err(FormatError::Normalization { norm });
    }
    for z in &mut amplitudes {
        *z /= norm;
    }
    Ok(StateFile { shape, amplitudes })
}

pub fn serialize_state(shape: &ScreenConfiguration, amplitudes: &[Complex64]) -> String {
    let mut out = String::from("{\n");
    writeln!(out, "  \"version\": {FORMAT_VERSION},").unwrap();
    writeln!(out, "  \"factorization\": {},", int_list(shape.detector_counts())).unwrap();
    let rows: Vec<String> = amplitudes
        .iter()
        .enumerate()
        .filter(|(_, z)| **z != Complex64::new(0.0, 0.0))
        .map(|(k, z)| {
            format!(
                "    {{\"index\": {}, \"re\": {}, \"im\": {}}}",
                int_list(shape.unflatten(k).indices()),
                real(z.re),
                real(z.im)
            )
        })
        .collect();
    write_list(&mut out, "amplitudes", &rows);
    out
}

pub fn parse_transformation(text: &str) -> FormatResult<BasisTransformation> {
    let raw: RawTransformation = serde_json::from_str(text)?;
    check_version(raw.version)?;
    let source = ScreenConfiguration::new(raw.source)?;
    let target = ScreenConfiguration::new(raw.target)?;
    if source.dimension() != target.dimension() {
        return Err(Error::DimensionMismatch {
            expected: source.dimension(),
            found: target.dimension(),
        }
        .into());
    }
    let n = source.dimension();
    let mut lambda = ComplexMatrix::zeros(n, n);
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (e, entry) in raw.entries.iter().enumerate() {
        let row = multi_index(&entry.row, &target, &format!("entries[{e}].row"))?;
        let col = multi_index(&entry.col, &source, &format!("entries[{e}].col"))?;
        let key = (target.flatten(&row)?, source.flatten(&col)?);
        if let Some(first) = seen.insert(key, e) {
            return Err(FormatError::Duplicate {
                field: format!("entries[{e}]"),
                first: format!("entries[{first}]"),
            });
        }
        lambda[key] = Complex64::new(entry.re, entry.im);
    }
    Ok(BasisTransformation::new(source, target, lambda)?)
}

pub fn serialize_transformation(bt: &BasisTransformation) -> String {
    let (source, target) = (bt.source_shape(), bt.target_shape());
    let m = bt.lambda();
    let n = m.rows();
    let mut out = String::from("{\n");
    writeln!(out, "  \"version\": {FORMAT_VERSION},").unwrap();
    writeln!(out, "  \"source\": {},", int_list(source.detector_counts())).unwrap();
    writeln!(out, "  \"target\": {},", int_list(target.detector_counts())).unwrap();
    let rows: Vec<String> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| m[(i, j)] != Complex64::new(0.0, 0.0))
        .map(|(i, j)| {
            format!(
                "    {{\"row\": {}, \"col\": {}, \"re\": {}, \"im\": {}}}",
                int_list(target.unflatten(i).indices()),
                int_list(source.unflatten(j).indices()),
                real(m[(i, j)].re),
                real(m[(i, j)].im)
            )
        })
        .collect();
    write_list(&mut out, "entries", &rows);
    out
}

fn write_list(out: &mut String, key: &str, rows: &[String]) {
    if rows.is_empty() {
        writeln!(out, "  \"{key}\": []").unwrap();
    } else {
        writeln!(out, "  \"{key}\": [\n{}\n  ]", rows.join(",\n")).unwrap();
    }
    out.push_str("}\n");
}

fn int_list(values: &[usize]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// 17 significant digits, enough to round-trip any finite double.
pub(crate) fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const GHZ4: &str = r#"{
      "version": 1,
      "factorization": [2, 2, 2, 2],
      "entries": [
        {"bra": [1, 2, 1, 2], "ket": [1, 2, 1, 2], "re": 0.5, "im": 0},
        {"bra": [1, 2, 1, 2], "ket": [2, 2, 2, 2], "re": 0.5, "im": 0},
        {"bra": [2, 2, 2, 2], "ket": [1, 2, 1, 2], "re": 0.5, "im": 0},
        {"bra": [2, 2, 2, 2], "ket": [2, 2, 2, 2], "re": 0.5, "im": 0}
      ]
    }"#;

    #[test]
    fn four_entry_file_loads() {
        let ea = parse_arrangement(GHZ4).unwrap();
        assert_eq!(ea.alpha().dimension(), 16);
        assert_eq!(ea.alpha().matrix().as_slice().iter().filter(|z| z.re != 0.0).count(), 4);
    }

    #[test]
    fn trace_error_is_named() {
        let text = r#"{"version": 1, "factorization": [2],
            "entries": [{"bra": [1], "ket": [1], "re": 0.9}]}"#;
        match parse_arrangement(text) {
            Err(FormatError::Model(Error::InvalidArrangement(report))) => {
                let failed: Vec<_> = report.failures().map(|c| c.name).collect();
                assert_eq!(failed, vec!["trace"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn range_error_names_field() {
        let text = r#"{"version": 1, "factorization": [2, 2],
            "entries": [{"bra": [1, 1], "ket": [1, 1], "re": 0.5},
                        {"bra": [3, 1], "ket": [1, 1], "re": 0.5}]}"#;
        match parse_tensor(text) {
            Err(FormatError::Range { field, .. }) => assert_eq!(field, "entries[1].bra[0]"),
            other => panic!("unexpected {other:?}"),
        }
        let zero = r#"{"version": 1, "factorization": [2], "entries": [{"bra": [0], "ket": [1], "re": 1}]}"#;
        assert!(matches!(parse_tensor(zero), Err(FormatError::Range { .. })));
    }

    #[test]
    fn duplicates_and_syntax() {
        let dup = r#"{"version": 1, "factorization": [2],
            "entries": [{"bra": [1], "ket": [1], "re": 0.5},
                        {"bra": [1], "ket": [1], "re": 0.5}]}"#;
        assert!(matches!(parse_tensor(dup), Err(FormatError::Duplicate { .. })));

        match parse_tensor("{\n  \"version\": 1,\n  \"factorization\": [2\n}") {
            Err(FormatError::Syntax { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        let missing = r#"{"version": 1, "factorization": [2]}"#;
        assert!(matches!(parse_tensor(missing), Err(FormatError::Schema { .. })));
        let version = r#"{"version": 2, "factorization": [2], "entries": []}"#;
        assert!(matches!(parse_tensor(version), Err(FormatError::Version { found: 2 })));
    }

    #[test]
    fn canonical_round_trip() {
        let ea = parse_arrangement(GHZ4).unwrap().with_label("ghz <4>");
        let text = serialize_arrangement(&ea);
        let again = parse_arrangement(&text).unwrap();
        assert_eq!(again, ea);
        assert_eq!(serialize_arrangement(&again), text);
    }

    #[test]
    fn reals_round_trip_exactly() {
        for x in [0.1, 1.0 / 3.0, 2f64.sqrt() / 2.0, 1e-300, -5e-324, 0.7] {
            assert_eq!(real(x).parse::<f64>().unwrap(), x);
            let v: f64 = serde_json::from_str(&real(x)).unwrap();
            assert_eq!(v, x);
        }
    }

    #[test]
    fn state_norm_tolerance() {
        let ok = r#"{"version": 1, "factorization": [2],
            "amplitudes": [{"index": [1], "re": 0.70710678118}, {"index": [2], "re": 0.70710678118}]}"#;
        let s = parse_state(ok).unwrap();
        let norm: f64 = s.amplitudes.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-15);

        let bad = r#"{"version": 1, "factorization": [2], "amplitudes": [{"index": [1], "re": 0.9}]}"#;
        assert!(matches!(parse_state(bad), Err(FormatError::Normalization { .. })));
    }

    #[test]
    fn transformation_round_trip() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let shape = ScreenConfiguration::new(vec![2]).unwrap();
        let lambda = ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]);
        let bt = BasisTransformation::new(shape.clone(), shape, lambda.unwrap()).unwrap();
        let text = serialize_transformation(&bt);
        assert_eq!(parse_transformation(&text).unwrap(), bt);
    }
}
