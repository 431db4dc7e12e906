//! Matrix text files and report serialisation.
//!
//! A matrix file has a `q=<order>` header followed by one line of
//! whitespace-separated element codes per row. Text after `#` is ignored.
//!
//! ```text
//! # parity [3,2]
//! q=2
//! 1 0 1
//! 0 1 1
//! ```

use std::fmt::Write as _;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{to_decimal, ExpectationReport};
use crate::field::FieldSpec;
use crate::matrix::GenMatrix;

/// Significant digits of every decimal rendering.
pub const DECIMAL_DIGITS: usize = 15;

/// Parses a matrix file. The result may be rank-deficient.
pub fn parse_matrix(text: &str) -> Result<GenMatrix> {
    let mut field: Option<FieldSpec> = None;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: line_no, msg };
        match &field {
            None => {
                let q = line
                    .strip_prefix("q=")
                    .or_else(|| line.strip_prefix("q ="))
                    .ok_or_else(|| parse_err("expected header `q=<order>`".into()))?
                    .trim()
                    .parse::<u64>()
                    .map_err(|e| parse_err(format!("bad field order: {e}")))?;
                field = Some(FieldSpec::new(q).map_err(|e| parse_err(e.to_string()))?);
            }
            Some(f) => {
                let row = line
                    .split_whitespace()
                    .map(|t| {
                        let v = t
                            .parse::<u64>()
                            .map_err(|_| parse_err(format!("`{t}` is not an element code")))?;
                        if v >= u64::from(f.q()) {
                            return Err(parse_err(format!("entry {v} is not an element of GF({})", f.q())));
                        }
                        Ok(v)
                    })
                    .collect::<Result<Vec<_>>>()?;
                if let Some(first) = rows.first() {
                    if first.len() != row.len() {
                        return Err(parse_err(format!(
                            "row has {} entries, expected {}",
                            row.len(),
                            first.len()
                        )));
                    }
                }
                rows.push(row);
            }
        }
    }
    let field = field.ok_or(Error::Parse {
        line: 0,
        msg: "missing `q=<order>` header".into(),
    })?;
    GenMatrix::from_rows_relaxed(field, &rows)
}

/// Inverse of [`parse_matrix`].
pub fn print_matrix(g: &GenMatrix) -> String {
    let mut s = format!("q={}\n", g.field().q());
    for row in g.rows() {
        let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(s, "{}", cells.join(" "));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
    pub decimal: String,
}

impl From<&BigRational> for RationalJson {
    fn from(r: &BigRational) -> Self {
        Self {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            decimal: to_decimal(r, DECIMAL_DIGITS),
        }
    }
}

impl RationalJson {
    pub fn parse(&self) -> Result<BigRational> {
        let bad = |what: &str| Error::InvalidParameter(format!("bad {what} `{}`/`{}`", self.num, self.den));
        let num = self.num.parse().map_err(|_| bad("numerator"))?;
        let den: num_bigint::BigInt = self.den.parse().map_err(|_| bad("denominator"))?;
        if den == 0.into() {
            return Err(bad("denominator"));
        }
        Ok(BigRational::new(num, den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub q: u32,
    pub k: usize,
    pub n: usize,
    pub rows: Vec<Vec<u32>>,
}

impl From<&GenMatrix> for MatrixJson {
    fn from(g: &GenMatrix) -> Self {
        Self {
            q: g.field().q(),
            k: g.k(),
            n: g.n(),
            rows: g.rows().map(|r| r.iter().map(|e| e.value()).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetJson {
    /// `e3`, `g5` or `{1,2}` (1-based).
    pub target: String,
    #[serde(flatten)]
    pub value: RationalJson,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub zero_target: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub matrix: MatrixJson,
    pub engine: String,
    pub per_target: Vec<TargetJson>,
    pub t_max: RationalJson,
    /// Labels of the targets attaining `t_max`.
    pub argmax: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_secs: Option<f64>,
}

impl ReportJson {
    pub fn new(g: &GenMatrix, report: &ExpectationReport, timing_secs: Option<f64>) -> Self {
        let per_target: Vec<TargetJson> = report
            .per_target
            .iter()
            .map(|t| TargetJson {
                target: t.target.to_string(),
                value: RationalJson::from(&t.value),
                zero_target: t.zero_target,
            })
            .collect();
        Self {
            matrix: g.into(),
            engine: report.engine.to_string(),
            argmax: report.argmax.iter().map(|&i| per_target[i].target.clone()).collect(),
            per_target,
            t_max: (&report.t_max).into(),
            timing_secs,
        }
    }
}

/// `target,num,den,decimal` with one row per target.
pub fn report_csv(report: &ExpectationReport) -> String {
    let mut s = String::from("target,num,den,decimal\n");
    for t in &report.per_target {
        let r = RationalJson::from(&t.value);
        let _ = writeln!(s, "\"{}\",{},{},{}", t.target, r.num, r.den, r.decimal);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;
    use crate::exact::{t_max, Engine, Options};

    #[test]
    fn round_trip() {
        let text = "# example\nq=2\n1 0 1 0 1   # first row\n\n0 1 0 1 1\n";
        let g = parse_matrix(text).unwrap();
        assert_eq!((g.k(), g.n()), (2, 5));
        assert_eq!(parse_matrix(&print_matrix(&g)).unwrap(), g);
        let s = codes::sum_code_f13().unwrap();
        assert_eq!(parse_matrix(&print_matrix(&s)).unwrap(), s);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_matrix("1 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_matrix("q=6\n1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_matrix("q=3\n1 2\n1 3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_matrix("q=3\n1 2\n1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_matrix("# nothing\n"), Err(Error::Parse { line: 0, .. })));
    }

    #[test]
    fn report_json() {
        let g = parse_matrix("q=2\n1 0 1 0 1\n0 1 0 1 1\n").unwrap();
        let r = t_max(&g, Engine::Alpha, &Options::default()).unwrap();
        let j = ReportJson::new(&g, &r, None);
        assert_eq!(j.t_max.num, "23");
        assert_eq!(j.t_max.den, "12");
        assert_eq!(j.t_max.decimal, "1.91666666666667");
        assert_eq!(j.argmax, vec!["e1", "e2"]);
        let text = serde_json::to_string(&j).unwrap();
        let back: ReportJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        assert_eq!(back.t_max.parse().unwrap(), r.t_max);
        assert!(report_csv(&r).starts_with("target,num,den,decimal\n\"e1\",23,12,"));
    }
}
