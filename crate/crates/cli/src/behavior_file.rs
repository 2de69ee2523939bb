//! Plain-text probability tables.
//!
//! ```text
//! ctxdim-behavior v1
//! format conditional-per-a
//! alphabet 4 4 2 2
//! meta counts 1800000
//! # a x b y value
//! 0 0 0 0 0.7833
//! 1 0 0 0 missing
//! ```
//!
//! Every key of the alphabet must appear exactly once, either with a value or marked
//! `missing`. Text after `#` is ignored.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use ctxdim_core::behavior::validate_source;
use ctxdim_core::{Behavior, BehaviorTolerance, PartialBehavior, ProbabilitySource, Scenario};

use crate::error::ParseError;

pub const BEHAVIOR_FORMAT: &str = "ctxdim-behavior v1";
/// Default normalization and no-signaling slack for measured tables.
pub const MEASURED_TOLERANCE: f64 = 0.05;
/// Slack for theoretical tables rounded to four decimals.
pub const EXPECTED_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    /// Entries are `p(b|a,x,y)`; the joint table is `entry / n_a` under a uniform prior.
    ConditionalPerA,
    /// Entries are `p(ab|xy)`.
    Joint,
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "conditional-per-a" => Ok(TableFormat::ConditionalPerA),
            "joint" => Ok(TableFormat::Joint),
            other => Err(format!("unknown table format `{other}`, expected conditional-per-a or joint")),
        }
    }
}

impl fmt::Display for TableFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableFormat::ConditionalPerA => "conditional-per-a",
            TableFormat::Joint => "joint",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IngestError {
    #[error("conditional entries for (a={a}, x={x}, y={y}) sum to {sum}, outside 1 +- {tol}")]
    Conditional { a: usize, x: usize, y: usize, sum: f64, tol: f64 },
    #[error(transparent)]
    Core(#[from] ctxdim_core::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTableFile {
    pub format: TableFormat,
    pub scenario: Scenario,
    pub metadata: BTreeMap<String, String>,
    /// Indexed like [`Scenario::index`].
    pub entries: Vec<Option<f64>>,
}

fn numbers<const N: usize>(tokens: &[&str], line: usize, what: &str) -> Result<[usize; N], ParseError> {
    if tokens.len() != N {
        return Err(ParseError::new(line, format!("{what} needs {N} fields, found {}", tokens.len())));
    }
    let mut out = [0; N];
    for (slot, t) in out.iter_mut().zip(tokens) {
        *slot = t.parse().map_err(|_| ParseError::new(line, format!("{what}: `{t}` is not a non-negative integer")))?;
    }
    Ok(out)
}

impl ProbabilityTableFile {
    pub fn joint(src: &(impl ProbabilitySource + ?Sized)) -> Self {
        let scenario = src.scenario();
        Self {
            format: TableFormat::Joint,
            scenario,
            metadata: BTreeMap::new(),
            entries: scenario.keys().map(|(a, b, x, y)| src.probability(a, b, x, y)).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, BEHAVIOR_FORMAT)) => {}
            Some((n, other)) => return Err(ParseError::new(n, format!("expected `{BEHAVIOR_FORMAT}`, found `{other}`"))),
            None => return Err(ParseError::new(1, "empty file")),
        }
        let mut format = None;
        let mut scenario: Option<Scenario> = None;
        let mut metadata = BTreeMap::new();
        let mut entries: Vec<Option<Option<f64>>> = Vec::new();
        let mut last = 1;
        for (n, line) in lines {
            last = n;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "format" => {
                    if format.is_some() {
                        return Err(ParseError::new(n, "format given twice"));
                    }
                    let f = tokens.get(1).filter(|_| tokens.len() == 2).ok_or_else(|| ParseError::new(n, "format needs one value"))?;
                    format = Some(f.parse().map_err(|m| ParseError::new(n, m))?);
                }
                "alphabet" => {
                    if scenario.is_some() {
                        return Err(ParseError::new(n, "alphabet given twice"));
                    }
                    let [na, nb, nx, ny] = numbers::<4>(&tokens[1..], n, "alphabet")?;
                    if [na, nb, nx, ny].contains(&0) {
                        return Err(ParseError::new(n, "alphabet sizes must be positive"));
                    }
                    let s = Scenario { outcomes_a: na, outcomes_b: nb, settings_x: nx, settings_y: ny };
                    entries = vec![None; s.len()];
                    scenario = Some(s);
                }
                "meta" => {
                    let key = tokens.get(1).ok_or_else(|| ParseError::new(n, "meta needs a key"))?;
                    let value = tokens[2..].join(" ");
                    if metadata.insert(key.to_string(), value).is_some() {
                        return Err(ParseError::new(n, format!("meta key `{key}` given twice")));
                    }
                }
                _ => {
                    let s = scenario.ok_or_else(|| ParseError::new(n, "entry before the alphabet line"))?;
                    if format.is_none() {
                        return Err(ParseError::new(n, "entry before the format line"));
                    }
                    if tokens.len() != 5 {
                        return Err(ParseError::new(n, format!("entry needs `a x b y value`, found {} fields", tokens.len())));
                    }
                    let [a, x, b, y] = numbers::<4>(&tokens[..4], n, "entry key")?;
                    if a >= s.outcomes_a || b >= s.outcomes_b || x >= s.settings_x || y >= s.settings_y {
                        return Err(ParseError::new(n, format!("key (a={a}, x={x}, b={b}, y={y}) outside the alphabet")));
                    }
                    let value = match tokens[4] {
                        "missing" => None,
                        t => Some(
                            t.parse::<f64>()
                                .ok()
                                .filter(|v| v.is_finite())
                                .ok_or_else(|| ParseError::new(n, format!("`{t}` is not a finite number")))?,
                        ),
                    };
                    let slot = &mut entries[s.index(a, b, x, y)];
                    if slot.is_some() {
                        return Err(ParseError::new(n, format!("key (a={a}, x={x}, b={b}, y={y}) given twice")));
                    }
                    *slot = Some(value);
                }
            }
        }
        let scenario = scenario.ok_or_else(|| ParseError::new(last, "no alphabet line"))?;
        let format = format.ok_or_else(|| ParseError::new(last, "no format line"))?;
        if let Some((a, b, x, y)) = scenario.keys().find(|&(a, b, x, y)| entries[scenario.index(a, b, x, y)].is_none()) {
            return Err(ParseError::new(last, format!("no entry for (a={a}, x={x}, b={b}, y={y}); mark absent data `missing`")));
        }
        Ok(Self { format, scenario, metadata, entries: entries.into_iter().map(Option::flatten).collect() })
    }

    pub fn to_text(&self) -> String {
        let s = self.scenario;
        let mut out = format!(
            "{BEHAVIOR_FORMAT}\nformat {}\nalphabet {} {} {} {}\n",
            self.format, s.outcomes_a, s.outcomes_b, s.settings_x, s.settings_y
        );
        for (k, v) in &self.metadata {
            writeln!(out, "meta {k} {v}").expect("write to string");
        }
        out.push_str("# a x b y value\n");
        for x in 0..s.settings_x {
            for y in 0..s.settings_y {
                for a in 0..s.outcomes_a {
                    for b in 0..s.outcomes_b {
                        match self.entries[s.index(a, b, x, y)] {
                            Some(v) => writeln!(out, "{a} {x} {b} {y} {v}"),
                            None => writeln!(out, "{a} {x} {b} {y} missing"),
                        }
                        .expect("write to string");
                    }
                }
            }
        }
        out
    }

    /// Ingests under the declared format.
    pub fn ingest(&self, tol: f64) -> Result<PartialBehavior, IngestError> {
        self.ingest_as(self.format, tol)
    }

    /// Ingests reading the entries as `format` regardless of the header.
    pub fn ingest_as(&self, format: TableFormat, tol: f64) -> Result<PartialBehavior, IngestError> {
        let s = self.scenario;
        let scale = match format {
            TableFormat::Joint => 1.0,
            TableFormat::ConditionalPerA => {
                for (x, y, a) in (0..s.settings_x).flat_map(|x| (0..s.settings_y).flat_map(move |y| (0..s.outcomes_a).map(move |a| (x, y, a)))) {
                    let row: Option<f64> = (0..s.outcomes_b).map(|b| self.entries[s.index(a, b, x, y)]).sum();
                    if let Some(sum) = row.filter(|sum| (sum - 1.0).abs() > tol) {
                        return Err(IngestError::Conditional { a, x, y, sum, tol });
                    }
                }
                1.0 / s.outcomes_a as f64
            }
        };
        let mut p = PartialBehavior::empty(s);
        for (a, b, x, y) in s.keys() {
            p.set(a, b, x, y, self.entries[s.index(a, b, x, y)].map(|v| v * scale));
        }
        validate_source(&p, &BehaviorTolerance::uniform(tol))?;
        Ok(p)
    }
}

/// Complete table as a behavior, for callers that need every entry.
pub fn complete(p: &PartialBehavior, tol: f64) -> Result<Behavior, IngestError> {
    Ok(p.to_behavior(&BehaviorTolerance::uniform(tol))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_text() -> String {
        ProbabilityTableFile::joint(&Behavior::uniform(Scenario::CHSH)).to_text()
    }

    #[test]
    fn joint_round_trip() {
        let f = ProbabilityTableFile::parse(&uniform_text()).unwrap();
        assert_eq!(f.format, TableFormat::Joint);
        assert!(f.entries.iter().all(|e| *e == Some(0.25)));
        assert_eq!(ProbabilityTableFile::parse(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn conditional_entries_are_divided_by_the_prior() {
        let text = uniform_text().replace("format joint", "format conditional-per-a").replace(" 0.25", " 0.5");
        let p = ProbabilityTableFile::parse(&text).unwrap().ingest(1e-12).unwrap();
        assert_eq!(p.probability(1, 0, 1, 1), Some(0.25));
    }

    #[test]
    fn bad_conditional_row_is_rejected() {
        let text = uniform_text().replace("format joint", "format conditional-per-a").replace(" 0.25", " 0.5").replacen(" 0.5", " 0.9", 1);
        let f = ProbabilityTableFile::parse(&text).unwrap();
        assert!(matches!(f.ingest(0.05), Err(IngestError::Conditional { a: 0, x: 0, y: 0, .. })));
    }

    #[test]
    fn errors_carry_lines() {
        let text = uniform_text().replacen("0 0 1 0 0.25", "0 0 1 0 abc", 1);
        assert_eq!(ProbabilityTableFile::parse(&text).unwrap_err().line, 6);
        let dup = format!("{}0 0 0 0 0.25\n", uniform_text());
        assert!(ProbabilityTableFile::parse(&dup).unwrap_err().message.contains("twice"));
        let short: String = uniform_text().lines().take(8).map(|l| format!("{l}\n")).collect();
        assert!(ProbabilityTableFile::parse(&short).unwrap_err().message.contains("no entry"));
        assert_eq!(ProbabilityTableFile::parse("hello\n").unwrap_err().line, 1);
    }

    #[test]
    fn metadata_and_comments() {
        let text = uniform_text().replace("# a x b y value\n", "meta counts 1800000\nmeta duration 60 s # per setting\n");
        let f = ProbabilityTableFile::parse(&text).unwrap();
        assert_eq!(f.metadata["duration"], "60 s");
        assert_eq!(ProbabilityTableFile::parse(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn missing_entries_stay_missing() {
        let text = uniform_text().replacen("0 0 1 0 0.25", "0 0 1 0 missing", 1);
        let p = ProbabilityTableFile::parse(&text).unwrap().ingest(1e-9).unwrap();
        assert_eq!(p.missing().count(), 1);
        assert!(complete(&p, 1e-9).is_err());
    }
}
