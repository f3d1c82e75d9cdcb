//! TSPLIB95 `EXPLICIT` / `FULL_MATRIX` files.
//!
//! Costs are scaled and rounded to integers: down for lower-bound instances,
//! so the integer optimum divided by the scale never exceeds the true
//! optimum, and up for upper-bound instances. Excluded arcs are written as
//! one more than the sum of all finite entries, which no optimal tour that
//! avoids them can reach.

use std::fmt::Write as _;
use std::path::Path;

use super::transform::{AtspInstance, StspInstance};
use super::Mode;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemType {
    Tsp,
    Atsp,
}

impl ProblemType {
    fn as_str(self) -> &'static str {
        match self {
            ProblemType::Tsp => "TSP",
            ProblemType::Atsp => "ATSP",
        }
    }
}

/// Contents of a TSPLIB file.
#[derive(Clone, Debug, PartialEq)]
pub struct TsplibMatrix {
    pub name: String,
    pub kind: ProblemType,
    pub comments: Vec<String>,
    pub dimension: usize,
    /// Row-major integer weights.
    pub weights: Vec<i64>,
}

impl TsplibMatrix {
    pub fn weight(&self, i: usize, j: usize) -> i64 {
        self.weights[i * self.dimension + j]
    }

    /// Builds the integer matrix for an instance.
    fn scaled(name: &str, kind: ProblemType, n: usize, cost: &[f64], shift: f64, mode: Mode, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Invalid(format!("scale must be positive, got {scale}")));
        }
        let round = |c: f64| match mode {
            Mode::Lower => (c * scale).floor(),
            Mode::Upper => (c * scale).ceil(),
        };
        let mut weights = vec![0_i64; n * n];
        let mut finite_sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let c = cost[i * n + j];
                if i != j && c.is_finite() {
                    let w = round(c);
                    finite_sum += w;
                    weights[i * n + j] = w as i64;
                }
            }
        }
        let excluded = finite_sum + 1.0;
        if excluded >= i64::MAX as f64 / 2.0 {
            return Err(Error::Invalid(format!("scale {scale} overflows integer weights")));
        }
        let excluded = excluded as i64;
        for i in 0..n {
            for j in 0..n {
                if i != j && !cost[i * n + j].is_finite() {
                    weights[i * n + j] = excluded;
                }
            }
        }
        Ok(Self {
            name: name.to_owned(),
            kind,
            comments: vec![
                format!("mode {}", mode.as_str()),
                format!("scale {scale:?}"),
                format!("shift {shift:?} (unscaled, added once per visited set)"),
                format!("excluded arcs {excluded}"),
            ],
            dimension: n,
            weights,
        })
    }

    pub fn from_atsp(name: &str, atsp: &AtspInstance, scale: f64) -> Result<Self> {
        Self::scaled(name, ProblemType::Atsp, atsp.n, &atsp.cost, atsp.shift, atsp.mode, scale)
    }

    pub fn from_stsp(name: &str, stsp: &StspInstance, scale: f64) -> Result<Self> {
        Self::scaled(name, ProblemType::Tsp, stsp.n, &stsp.cost, stsp.shift, stsp.mode, scale)
    }

    pub fn to_tsplib_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "NAME: {}", self.name);
        let _ = writeln!(s, "TYPE: {}", self.kind.as_str());
        for c in &self.comments {
            let _ = writeln!(s, "COMMENT: {c}");
        }
        let _ = writeln!(s, "DIMENSION: {}", self.dimension);
        s.push_str("EDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n");
        for row in self.weights.chunks(self.dimension.max(1)) {
            let line: Vec<String> = row.iter().map(i64::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s.push_str("EOF\n");
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_tsplib_string()).map_err(|e| Error::io(path, e))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |reason: String| Error::Parse {
            what: "TSPLIB file".into(),
            reason,
        };
        let mut name = String::new();
        let mut kind = None;
        let mut comments = Vec::new();
        let mut dimension = None;
        let mut lines = text.lines();
        for line in lines.by_ref() {
            let line = line.trim();
            if line == "EDGE_WEIGHT_SECTION" {
                break;
            }
            let Some((key, value)) = line.split_once(':') else {
                if line.is_empty() {
                    continue;
                }
                return Err(bad(format!("unexpected line {line:?}")));
            };
            let value = value.trim();
            match key.trim() {
                "NAME" => name = value.to_owned(),
                "TYPE" => {
                    kind = Some(match value {
                        "TSP" => ProblemType::Tsp,
                        "ATSP" => ProblemType::Atsp,
                        other => return Err(bad(format!("unsupported TYPE {other}"))),
                    })
                }
                "COMMENT" => comments.push(value.to_owned()),
                "DIMENSION" => dimension = Some(value.parse::<usize>().map_err(|e| bad(format!("DIMENSION: {e}")))?),
                "EDGE_WEIGHT_TYPE" if value != "EXPLICIT" => {
                    return Err(bad(format!("unsupported EDGE_WEIGHT_TYPE {value}")))
                }
                "EDGE_WEIGHT_FORMAT" if value != "FULL_MATRIX" => {
                    return Err(bad(format!("unsupported EDGE_WEIGHT_FORMAT {value}")))
                }
                _ => {}
            }
        }
        let kind = kind.ok_or_else(|| bad("missing TYPE".into()))?;
        let dimension = dimension.ok_or_else(|| bad("missing DIMENSION".into()))?;
        let mut weights = Vec::with_capacity(dimension * dimension);
        for tok in lines.flat_map(str::split_whitespace) {
            if tok == "EOF" {
                break;
            }
            weights.push(tok.parse::<i64>().map_err(|e| bad(format!("weight {tok:?}: {e}")))?);
        }
        if weights.len() != dimension * dimension {
            return Err(bad(format!("expected {} weights, found {}", dimension * dimension, weights.len())));
        }
        Ok(Self {
            name,
            kind,
            comments,
            dimension,
            weights,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}
