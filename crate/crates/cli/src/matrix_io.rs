//! JSON matrix files: `{"rows": R, "cols": C, "entries": [["p/q", ...], ...]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use structdet::exactcore::{format_rat, parse_rat_canonical};
use structdet::ExactMatrix;

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

pub fn matrix_to_json(m: &ExactMatrix) -> String {
    let file = MatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        entries: (0..m.rows()).map(|i| m.row(i).iter().map(format_rat).collect()).collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("matrix file serializes");
    out.push('\n');
    out
}

/// Parses a matrix file. Entries must be canonical fraction strings.
pub fn matrix_from_json(text: &str) -> Result<ExactMatrix, CliError> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad matrix file: {e}")))?;
    if file.entries.len() != file.rows {
        return Err(CliError::Input(format!("declared {} rows, found {}", file.rows, file.entries.len())));
    }
    let mut entries = Vec::with_capacity(file.rows * file.cols);
    for (i, row) in file.entries.iter().enumerate() {
        if row.len() != file.cols {
            return Err(CliError::Input(format!("row {i} has {} entries, declared {} cols", row.len(), file.cols)));
        }
        for s in row {
            entries.push(parse_rat_canonical(s).map_err(|e| CliError::Input(format!("row {i}: {e}")))?);
        }
    }
    ExactMatrix::from_vec(file.rows, file.cols, entries).map_err(|e| CliError::Input(e.to_string()))
}

pub fn load_matrix(path: &Path) -> Result<ExactMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    matrix_from_json(&text)
}

pub fn save_matrix(m: &ExactMatrix, path: &Path) -> Result<(), CliError> {
    fs::write(path, matrix_to_json(m)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use structdet::families::build_crn;
    use structdet::SequenceSpec;

    #[test]
    fn round_trip_crn() {
        let m = build_crn(&SequenceSpec::Reciprocal, 2, 4).unwrap();
        assert_eq!(matrix_from_json(&matrix_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn canonical_entries_only() {
        let bad = r#"{"rows":1,"cols":1,"entries":[["2/4"]]}"#;
        assert!(matches!(matrix_from_json(bad), Err(CliError::Input(_))));
        let ok = r#"{"rows":1,"cols":2,"entries":[["3","-1/2"]]}"#;
        let m = matrix_from_json(ok).unwrap();
        assert_eq!(format_rat(m.get(0, 0)), "3");
        assert_eq!(format_rat(m.get(0, 1)), "-1/2");
    }

    #[test]
    fn shape_checked() {
        for text in [
            r#"{"rows":2,"cols":1,"entries":[["1"]]}"#,
            r#"{"rows":1,"cols":2,"entries":[["1"]]}"#,
            r#"{"rows":1,"cols":1,"entries":[[1]]}"#,
            r#"{"rows":1,"cols":1,"entries":[["1"]],"extra":0}"#,
        ] {
            assert!(matches!(matrix_from_json(text), Err(CliError::Input(_))), "{text}");
        }
    }
}
