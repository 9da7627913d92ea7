//! On-disk vertex formats.
//!
//! `ext`: the polyhedral V-representation layout
//!
//! ```text
//! V-representation
//! begin
//! <N> <d+1> rational
//! 1 x_1 … x_d
//! end
//! ```
//!
//! JSON: `{"schema": 1, "d", "k", "alpha", "beta", "points": [["p/q", …], …]}`.
//! Points are `x_1, …, x_m` followed by `−x_1, …, −x_m`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use neighborly_core::{Construction, ExactMatrix, ExactScalar};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Ext { line: usize, message: String },
    #[error("invalid vertex JSON: {0}")]
    Json(String),
}

pub fn write_ext(c: &Construction) -> String {
    let points = c.all_vertices();
    let mut out = format!("V-representation\nbegin\n{} {} rational\n", points.rows(), points.cols() + 1);
    for row in points.row_iter() {
        out.push('1');
        for v in row {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

pub fn parse_ext(text: &str) -> Result<ExactMatrix, FormatError> {
    let err = |line: usize, message: String| FormatError::Ext { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('*'));
    let mut next = |what: &str| lines.next().ok_or_else(|| err(0, format!("missing {what}")));

    let (n, header) = next("header")?;
    if header != "V-representation" {
        return Err(err(n, format!("expected V-representation, got {header:?}")));
    }
    let (n, begin) = next("begin")?;
    if begin != "begin" {
        return Err(err(n, format!("expected begin, got {begin:?}")));
    }
    let (n, counts) = next("counts line")?;
    let fields: Vec<&str> = counts.split_whitespace().collect();
    let (rows, width) = match fields.as_slice() {
        [rows, width, "rational"] => (
            rows.parse::<usize>().map_err(|_| err(n, format!("bad row count {rows:?}")))?,
            width.parse::<usize>().map_err(|_| err(n, format!("bad width {width:?}")))?,
        ),
        _ => return Err(err(n, format!("expected '<N> <d+1> rational', got {counts:?}"))),
    };
    if width < 2 {
        return Err(err(n, "width must be at least 2".into()));
    }
    let mut entries = Vec::with_capacity(rows * (width - 1));
    for _ in 0..rows {
        let (n, line) = next("point")?;
        let values = line
            .split_whitespace()
            .map(|t| t.parse::<ExactScalar>().map_err(|e| err(n, e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != width {
            return Err(err(n, format!("expected {width} entries, got {}", values.len())));
        }
        if values[0] != ExactScalar::one() {
            return Err(err(n, "points must start with 1".into()));
        }
        entries.extend(values.into_iter().skip(1));
    }
    let (n, end) = next("end")?;
    if end != "end" {
        return Err(err(n, format!("expected end, got {end:?}")));
    }
    Ok(ExactMatrix::new(rows, width - 1, entries).expect("counted entries"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexFile {
    pub schema: u32,
    pub d: usize,
    pub k: usize,
    pub alpha: ExactScalar,
    pub beta: ExactScalar,
    pub points: Vec<Vec<ExactScalar>>,
}

impl VertexFile {
    pub fn from_construction(c: &Construction) -> Self {
        let p = c.params();
        Self {
            schema: SCHEMA_VERSION,
            d: p.d,
            k: p.k,
            alpha: p.alpha.clone(),
            beta: p.beta.clone(),
            points: c.all_vertices().row_iter().map(<[ExactScalar]>::to_vec).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ExactMatrix, FormatError> {
        ExactMatrix::from_rows(self.points.clone()).map_err(|e| FormatError::Json(e.to_string()))
    }
}

pub fn write_json(c: &Construction) -> String {
    serde_json::to_string_pretty(&VertexFile::from_construction(c)).expect("serializable") + "\n"
}

pub fn parse_json(text: &str) -> Result<VertexFile, FormatError> {
    let file: VertexFile = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    if file.schema != SCHEMA_VERSION {
        return Err(FormatError::Json(format!("unsupported schema {}", file.schema)));
    }
    if file.points.iter().any(|p| p.len() != file.d) {
        return Err(FormatError::Json("point width differs from d".into()));
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use neighborly_core::build;
    use neighborly_core::hadamard::sylvester;

    #[test]
    fn ext_round_trip() {
        let c = build(&sylvester(2).unwrap()).unwrap();
        let text = write_ext(&c);
        assert!(text.starts_with("V-representation\nbegin\n16 5 rational\n1 1 0 0 0\n"));
        assert!(text.contains("1 1/2 1/2 1/2 1/2\n"));
        assert_eq!(parse_ext(&text).unwrap(), c.all_vertices());
    }

    #[test]
    fn json_round_trip() {
        let c = build(&sylvester(4).unwrap()).unwrap();
        let file = parse_json(&write_json(&c)).unwrap();
        assert_eq!(file.k, 2);
        assert_eq!(file.points.len(), 64);
        assert_eq!(file.to_matrix().unwrap(), c.all_vertices());
    }

    #[test]
    fn ext_errors() {
        assert!(parse_ext("").is_err());
        assert!(parse_ext("V-representation\nbegin\n1 3 rational\n1 0\nend\n").is_err());
        assert!(parse_ext("V-representation\nbegin\n1 3 rational\n0 1 2\nend\n").is_err());
        assert!(parse_ext("V-representation\nbegin\n1 3 rational\n1 1 x\nend\n").is_err());
        assert!(parse_ext("V-representation\nbegin\n1 3 rational\n1 1 2\n").is_err());
        let ok = parse_ext("V-representation\nbegin\n1 3 rational\n1 1 -2/4\nend\n").unwrap();
        assert_eq!(ok.get(0, 1), &ExactScalar::new(-1, 2).unwrap());
    }
}
