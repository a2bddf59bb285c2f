//! Channel and input-distribution types with strict validation.
//!
//! A transition-matrix entry that is exactly `0.0` is a structural zero: the
//! transition cannot occur. The JSON channel format preserves that
//! distinction by writing structural zeros as the literal token `0`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

/// Errors raised while constructing or parsing channels and PMFs.
#[derive(Debug, thiserror::Error)]
pub enum ChannelError {
    #[error("empty alphabet: {0}")]
    EmptyAlphabet(&'static str),
    #[error("ragged matrix: row {row} has {got} entries, expected {expected}")]
    Ragged {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("negative entry {value} at row {row}, column {col}")]
    Negative { row: usize, col: usize, value: f64 },
    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("row sum {sum} of row {row} is off by more than 1e-9 from 1")]
    RowSum { row: usize, sum: f64 },
    #[error("matrix has {rows} rows, expected one per input ({inputs})")]
    RowCount { rows: usize, inputs: usize },
    #[error("pmf of length {got} does not match alphabet size {expected}")]
    PmfLength { got: usize, expected: usize },
    #[error("pmf sums to {sum}, off by more than 1e-9 from 1")]
    PmfSum { sum: f64 },
    #[error("entry {value} at row {row}, column {col} is positive but below 1e-300; write structural zeros as 0")]
    Subnormal { row: usize, col: usize, value: f64 },
    #[error("duplicate {kind} label {label:?}")]
    DuplicateLabel { kind: &'static str, label: String },
    #[error("operation requires exactly two inputs, channel has {inputs}")]
    BinaryInputRequired { inputs: usize },
    #[error("requested object with {size} entries exceeds the cap of {cap}")]
    SizeCap { size: u128, cap: u128 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Probability mass function over a finite alphabet.
///
/// Entries are non-negative and sum to 1 within 1e-12 (constructors
/// renormalize inputs whose sum is within 1e-9 of 1 and reject the rest).
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf(Vec<f64>);

impl Pmf {
    /// Validates and renormalizes `p`.
    pub fn new(p: Vec<f64>) -> Result<Self, ChannelError> {
        if p.is_empty() {
            return Err(ChannelError::EmptyAlphabet("pmf"));
        }
        for (i, &x) in p.iter().enumerate() {
            if !x.is_finite() {
                return Err(ChannelError::NonFinite { row: 0, col: i });
            }
            if x < 0.0 {
                return Err(ChannelError::Negative {
                    row: 0,
                    col: i,
                    value: x,
                });
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(ChannelError::PmfSum { sum });
        }
        let mut p = p;
        if (sum - 1.0).abs() > 16.0 * f64::EPSILON {
            p.iter_mut().for_each(|x| *x /= sum);
        }
        Ok(Self(p))
    }

    /// Uniform distribution on `k` symbols.
    pub fn uniform(k: usize) -> Self {
        assert!(k > 0, "uniform pmf needs a nonempty alphabet");
        Self(vec![1.0 / k as f64; k])
    }

    /// Point mass on symbol `i` of a `k`-symbol alphabet.
    pub fn point_mass(k: usize, i: usize) -> Self {
        assert!(i < k);
        let mut p = vec![0.0; k];
        p[i] = 1.0;
        Self(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Indices with strictly positive mass.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

impl std::ops::Deref for Pmf {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl fmt::Display for Pmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p:.6}")?;
        }
        write!(f, ")")
    }
}

/// A discrete memoryless channel: a row-stochastic matrix `W(y|x)` with
/// labeled input and output alphabets.
#[derive(Debug, Clone, PartialEq)]
pub struct Dmc {
    inputs: Vec<String>,
    outputs: Vec<String>,
    rows: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct DmcFile {
    inputs: Vec<String>,
    outputs: Vec<String>,
    matrix: Vec<Vec<serde_json::Value>>,
}

impl Dmc {
    /// Validates labels and matrix and renormalizes each row (rows whose sum
    /// deviates from 1 by more than 1e-9 are rejected).
    pub fn new(
        inputs: Vec<String>,
        outputs: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self, ChannelError> {
        if inputs.is_empty() {
            return Err(ChannelError::EmptyAlphabet("inputs"));
        }
        if outputs.is_empty() {
            return Err(ChannelError::EmptyAlphabet("outputs"));
        }
        for (kind, labels) in [("input", &inputs), ("output", &outputs)] {
            let mut seen = std::collections::HashSet::new();
            for l in labels.iter() {
                if !seen.insert(l.clone()) {
                    return Err(ChannelError::DuplicateLabel {
                        kind,
                        label: l.clone(),
                    });
                }
            }
        }
        if rows.len() != inputs.len() {
            return Err(ChannelError::RowCount {
                rows: rows.len(),
                inputs: inputs.len(),
            });
        }
        let mut rows = rows;
        for (i, row) in rows.iter_mut().enumerate() {
            if row.len() != outputs.len() {
                return Err(ChannelError::Ragged {
                    row: i,
                    got: row.len(),
                    expected: outputs.len(),
                });
            }
            for (j, &w) in row.iter().enumerate() {
                if !w.is_finite() {
                    return Err(ChannelError::NonFinite { row: i, col: j });
                }
                if w < 0.0 {
                    return Err(ChannelError::Negative {
                        row: i,
                        col: j,
                        value: w,
                    });
                }
                if w > 0.0 && w < 1e-300 {
                    return Err(ChannelError::Subnormal {
                        row: i,
                        col: j,
                        value: w,
                    });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(ChannelError::RowSum { row: i, sum });
            }
            // Rows off by only a few ulps are stored verbatim: dividing by
            // such a sum would perturb entries that are exact by
            // construction (the zero-pattern quantities require exact
            // values, not values correct to 1e-16).
            if (sum - 1.0).abs() > 16.0 * f64::EPSILON {
                row.iter_mut().for_each(|w| *w /= sum);
            }
        }
        Ok(Self {
            inputs,
            outputs,
            rows,
        })
    }

    /// Builds a channel with default numeric labels `"0", "1", ...`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, ChannelError> {
        let k = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let inputs = (0..k).map(|i| i.to_string()).collect();
        let outputs = (0..m).map(|j| j.to_string()).collect();
        Self::new(inputs, outputs, rows)
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn input_labels(&self) -> &[String] {
        &self.inputs
    }

    pub fn output_labels(&self) -> &[String] {
        &self.outputs
    }

    /// Transition probability `W(y|x)`.
    pub fn w(&self, x: usize, y: usize) -> f64 {
        self.rows[x][y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.rows[x]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Outputs reachable from input `x`.
    pub fn input_support(&self, x: usize) -> Vec<usize> {
        (0..self.num_outputs())
            .filter(|&y| self.rows[x][y] > 0.0)
            .collect()
    }

    /// Inputs that can produce output `y` (the set `X(y)`).
    pub fn output_support(&self, y: usize) -> Vec<usize> {
        (0..self.num_inputs())
            .filter(|&x| self.rows[x][y] > 0.0)
            .collect()
    }

    /// Output distribution `(PW)(y)` induced by input distribution `p`.
    pub fn output_distribution(&self, p: &[f64]) -> Vec<f64> {
        assert_eq!(p.len(), self.num_inputs(), "pmf length mismatch");
        let mut q = vec![0.0; self.num_outputs()];
        for (x, &px) in p.iter().enumerate() {
            if px == 0.0 {
                continue;
            }
            for (y, qy) in q.iter_mut().enumerate() {
                *qy += px * self.rows[x][y];
            }
        }
        q
    }

    /// Parses the JSON channel format.
    pub fn from_json_str(text: &str) -> Result<Self, ChannelError> {
        let file: DmcFile =
            serde_json::from_str(text).map_err(|e| ChannelError::Parse(e.to_string()))?;
        let mut rows = Vec::with_capacity(file.matrix.len());
        for (i, raw_row) in file.matrix.iter().enumerate() {
            let mut row = Vec::with_capacity(raw_row.len());
            for (j, v) in raw_row.iter().enumerate() {
                let w = v.as_f64().ok_or_else(|| {
                    ChannelError::Parse(format!("matrix entry at row {i}, column {j} is not a number"))
                })?;
                row.push(w);
            }
            rows.push(row);
        }
        Self::new(file.inputs, file.outputs, rows)
    }

    /// Serializes to the JSON channel format. Structural zeros are written as
    /// the literal `0` so a save/load round trip preserves the zero pattern.
    pub fn to_json_string(&self) -> String {
        let matrix: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&w| {
                        if w == 0.0 {
                            serde_json::Value::from(0u32)
                        } else {
                            serde_json::Value::from(w)
                        }
                    })
                    .collect()
            })
            .collect();
        let file = DmcFile {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            matrix,
        };
        serde_json::to_string_pretty(&file).expect("channel serialization cannot fail")
    }
}

impl fmt::Display for Dmc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Dmc {}x{} inputs={:?} outputs={:?}",
            self.num_inputs(),
            self.num_outputs(),
            self.inputs,
            self.outputs
        )?;
        for row in &self.rows {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Loads a channel from a JSON file on disk.
pub fn load_channel<P: AsRef<Path>>(path: P) -> Result<Dmc, ChannelError> {
    let text = std::fs::read_to_string(path)?;
    Dmc::from_json_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_file_parses_to_noiseless_binary() {
        let text = r#"{"inputs":["0","1"],"outputs":["0","1"],"matrix":[[1,0],[0,1]]}"#;
        let w = Dmc::from_json_str(text).unwrap();
        assert_eq!(w.num_inputs(), 2);
        assert_eq!(w.w(0, 0), 1.0);
        assert_eq!(w.w(0, 1), 0.0);
        assert_eq!(w.w(1, 1), 1.0);
    }

    #[test]
    fn fig1_style_file_is_valid() {
        let text = r#"{
            "inputs": ["0", "1", "2"],
            "outputs": ["0", "1", "2"],
            "matrix": [[0.9, 0.1, 0], [0.1, 0.9, 0], [0, 0, 1]]
        }"#;
        let w = Dmc::from_json_str(text).unwrap();
        assert_eq!(w.output_support(2), vec![2]);
        assert_eq!(w.output_support(0), vec![0, 1]);
    }

    #[test]
    fn bad_row_sum_is_rejected() {
        let text = r#"{"inputs":["0"],"outputs":["0","1"],"matrix":[[0.5,0.6]]}"#;
        let err = Dmc::from_json_str(text).unwrap_err();
        match err {
            ChannelError::RowSum { row: 0, sum } => assert!((sum - 1.1).abs() < 1e-12),
            other => panic!("expected RowSum, got {other:?}"),
        }
    }

    #[test]
    fn ragged_and_negative_matrices_are_rejected() {
        assert!(matches!(
            Dmc::from_rows(vec![vec![1.0, 0.0], vec![1.0]]),
            Err(ChannelError::Ragged { row: 1, .. })
        ));
        assert!(matches!(
            Dmc::from_rows(vec![vec![1.5, -0.5]]),
            Err(ChannelError::Negative { .. })
        ));
        assert!(matches!(
            Dmc::new(vec![], vec!["0".into()], vec![]),
            Err(ChannelError::EmptyAlphabet("inputs"))
        ));
    }

    #[test]
    fn near_one_row_sums_are_renormalized() {
        let w = Dmc::from_rows(vec![vec![0.3, 0.7 + 3e-10]]).unwrap();
        let sum: f64 = w.row(0).iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn structural_zeros_survive_round_trip() {
        let w = Dmc::from_rows(vec![
            vec![0.9, 0.1, 0.0],
            vec![0.1, 0.9, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let text = w.to_json_string();
        // Exact zeros appear as bare `0` tokens.
        assert!(text.contains("0,") || text.contains("0\n"));
        let w2 = Dmc::from_json_str(&text).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(w.w(x, y) == 0.0, w2.w(x, y) == 0.0);
                assert!((w.w(x, y) - w2.w(x, y)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn subnormal_positive_entries_are_rejected() {
        let err = Dmc::from_rows(vec![vec![1.0 - 1e-305, 1e-305]]).unwrap_err();
        assert!(matches!(err, ChannelError::Subnormal { .. }));
    }

    #[test]
    fn load_channel_reads_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bsc.json");
        let w = Dmc::from_rows(vec![vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        std::fs::write(&path, w.to_json_string()).unwrap();
        let loaded = load_channel(&path).unwrap();
        assert_eq!(loaded, w);
    }

    #[test]
    fn pmf_validation_and_support() {
        let p = Pmf::new(vec![0.25, 0.75, 0.0]).unwrap();
        assert_eq!(p.support(), vec![0, 1]);
        assert!(Pmf::new(vec![0.5, 0.6]).is_err());
        assert!(Pmf::new(vec![-0.1, 1.1]).is_err());
        let u = Pmf::uniform(4);
        assert!((u[2] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn output_distribution_is_stochastic() {
        let w = Dmc::from_rows(vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
        let q = w.output_distribution(&[0.3, 0.7]);
        assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((q[0] - (0.3 * 0.9 + 0.7 * 0.2)).abs() < 1e-15);
    }
}
