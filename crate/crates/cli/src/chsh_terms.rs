//! Eight signed CHSH contributions, one per measurement, preparation and outcome sign.
//!
//! ```text
//! ctxdim-chsh-terms v1
//! # term <measurement 1|2> <preparation 1|2> <+|-> <value>
//! term 1 1 + 0.3516
//! term 1 1 - -0.3294
//! ```

use std::fmt::Write as _;

use crate::error::ParseError;

pub const CHSH_TERMS_FORMAT: &str = "ctxdim-chsh-terms v1";

/// Sign each term carries in the correlator sum; only measurement 2 on preparation 2
/// is anticorrelated.
pub fn pattern(measurement: usize, preparation: usize, plus: bool) -> f64 {
    let outcome = if plus { 1.0 } else { -1.0 };
    if measurement == 2 && preparation == 2 {
        -outcome
    } else {
        outcome
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshTerms {
    /// `terms[measurement − 1][preparation − 1][0 for +, 1 for −]`
    pub terms: [[[f64; 2]; 2]; 2],
}

fn keys() -> impl Iterator<Item = (usize, usize, bool)> {
    (1..=2).flat_map(|m| (1..=2).flat_map(move |p| [true, false].map(|s| (m, p, s))))
}

impl ChshTerms {
    pub fn get(&self, measurement: usize, preparation: usize, plus: bool) -> f64 {
        self.terms[measurement - 1][preparation - 1][usize::from(!plus)]
    }

    /// `S = Σ pattern·term`, the sum of absolute values when every sign matches.
    pub fn value(&self) -> f64 {
        keys().map(|(m, p, s)| pattern(m, p, s) * self.get(m, p, s)).sum()
    }

    /// Terms whose sign disagrees with the pattern.
    pub fn sign_mismatches(&self) -> Vec<(usize, usize, bool)> {
        keys().filter(|&(m, p, s)| pattern(m, p, s) * self.get(m, p, s) < 0.0).collect()
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, CHSH_TERMS_FORMAT)) => {}
            Some((n, other)) => return Err(ParseError::new(n, format!("expected `{CHSH_TERMS_FORMAT}`, found `{other}`"))),
            None => return Err(ParseError::new(1, "empty file")),
        }
        let mut seen: [[[Option<f64>; 2]; 2]; 2] = Default::default();
        let mut count = 0;
        let mut last = 1;
        for (n, line) in lines {
            last = n;
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 5 || t[0] != "term" {
                return Err(ParseError::new(n, "expected `term <measurement> <preparation> <+|-> <value>`"));
            }
            let index = |s: &str, what: &str| match s {
                "1" => Ok(0),
                "2" => Ok(1),
                _ => Err(ParseError::new(n, format!("{what} must be 1 or 2, found `{s}`"))),
            };
            let m = index(t[1], "measurement")?;
            let p = index(t[2], "preparation")?;
            let s = match t[3] {
                "+" => 0,
                "-" => 1,
                other => return Err(ParseError::new(n, format!("sign must be + or -, found `{other}`"))),
            };
            let v = t[4]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ParseError::new(n, format!("`{}` is not a finite number", t[4])))?;
            if seen[m][p][s].replace(v).is_some() {
                return Err(ParseError::new(n, "term given twice"));
            }
            count += 1;
        }
        if count != 8 {
            return Err(ParseError::new(last, format!("expected 8 terms, found {count}")));
        }
        Ok(Self { terms: seen.map(|m| m.map(|p| p.map(|v| v.expect("all eight present")))) })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{CHSH_TERMS_FORMAT}\n");
        for (m, p, s) in keys() {
            writeln!(out, "term {m} {p} {} {}", if s { '+' } else { '-' }, self.get(m, p, s)).expect("write to string");
        }
        out
    }
}
