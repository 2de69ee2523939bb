//! CSV archive format for raw plate-angle tables.
//!
//! Preparation tables carry one row per preparation `k|x` with eight plate angles (`-` for
//! an unused plate) and a phase-plate setting written as a multiple of π (`3pi/4`, `-pi/4`,
//! `0`) or in plain radians. Station tables carry one row per measurement setting.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::station::{ArmSetting, StationSetting};

pub const PREPARATION_HEADER: [&str; 10] =
    ["prep", "hwp1_a", "qwp1_a", "hwp2_a", "qwp2_a", "hwp1_b", "qwp1_b", "hwp2_b", "qwp2_b", "pp"];
pub const STATION_HEADER: [&str; 5] = ["basis", "qwp_a", "hwp_a", "qwp_b", "hwp_b"];

/// Phase-plate setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhaseEntry {
    /// `num·π/den`.
    PiFraction { num: i64, den: u64 },
    Radians(f64),
}

impl PhaseEntry {
    pub fn radians(&self) -> f64 {
        match *self {
            PhaseEntry::PiFraction { num, den } => num as f64 * std::f64::consts::PI / den as f64,
            PhaseEntry::Radians(r) => r,
        }
    }
}

impl FromStr for PhaseEntry {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let t = s.trim();
        let Some(pos) = t.find("pi") else {
            return t.parse::<f64>().map(PhaseEntry::Radians).map_err(|_| format!("bad phase `{t}`"));
        };
        let num = match &t[..pos] {
            "" => 1,
            "-" => -1,
            n => n.parse::<i64>().map_err(|_| format!("bad phase numerator in `{t}`"))?,
        };
        let den = match &t[pos + 2..] {
            "" => 1,
            d => d
                .strip_prefix('/')
                .and_then(|d| d.parse::<u64>().ok())
                .filter(|&d| d > 0)
                .ok_or_else(|| format!("bad phase denominator in `{t}`"))?,
        };
        Ok(PhaseEntry::PiFraction { num, den })
    }
}

impl fmt::Display for PhaseEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PhaseEntry::Radians(r) => write!(f, "{r}"),
            PhaseEntry::PiFraction { num: 0, .. } => write!(f, "0"),
            PhaseEntry::PiFraction { num, den } => {
                match num {
                    1 => write!(f, "pi")?,
                    -1 => write!(f, "-pi")?,
                    n => write!(f, "{n}pi")?,
                }
                if den != 1 {
                    write!(f, "/{den}")?;
                }
                Ok(())
            }
        }
    }
}

/// One preparation row; angles in degrees, in header order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateRow {
    pub k: usize,
    pub x: usize,
    pub angles: [Option<f64>; 8],
    pub pp: PhaseEntry,
}

impl PlateRow {
    pub fn angle(&self, column: &str) -> Option<f64> {
        let i = PREPARATION_HEADER[1..9].iter().position(|c| *c == column)?;
        self.angles[i]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreparationTable {
    pub rows: Vec<PlateRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationRow {
    pub y: usize,
    pub setting: StationSetting,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationTable {
    pub rows: Vec<StationRow>,
}

fn parse_error(record: &csv::StringRecord, message: String) -> Error {
    Error::Parse { line: record.position().map_or(0, |p| p.line() as usize), message }
}

fn records(text: &str, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
    let found = reader.headers().map_err(|e| Error::Parse { line: 1, message: e.to_string() })?;
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Parse { line: 1, message: format!("expected header `{}`", header.join(",")) });
    }
    reader
        .records()
        .map(|r| {
            r.map_err(|e| Error::Parse { line: e.position().map_or(0, |p| p.line() as usize), message: e.to_string() })
        })
        .collect()
}

fn angle(record: &csv::StringRecord, i: usize) -> Result<Option<f64>> {
    match &record[i] {
        "-" => Ok(None),
        s => s
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Some)
            .ok_or_else(|| parse_error(record, format!("column {}: bad angle `{s}`", i + 1))),
    }
}

fn required(record: &csv::StringRecord, i: usize) -> Result<f64> {
    angle(record, i)?.ok_or_else(|| parse_error(record, format!("column {} may not be `-`", i + 1)))
}

fn write_csv(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

impl PreparationTable {
    pub fn parse(text: &str) -> Result<Self> {
        let rows = records(text, &PREPARATION_HEADER)?
            .iter()
            .map(|r| {
                let (k, x) = r[0]
                    .split_once('|')
                    .and_then(|(k, x)| Some((k.parse().ok()?, x.parse().ok()?)))
                    .ok_or_else(|| parse_error(r, format!("bad preparation label `{}`, expected k|x", &r[0])))?;
                let mut angles = [None; 8];
                for (i, slot) in angles.iter_mut().enumerate() {
                    *slot = angle(r, i + 1)?;
                }
                let pp = r[9].parse().map_err(|m| parse_error(r, m))?;
                Ok(PlateRow { k, x, angles, pp })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }

    pub fn to_csv(&self) -> String {
        write_csv(
            &PREPARATION_HEADER,
            self.rows.iter().map(|r| {
                let mut out = vec![format!("{}|{}", r.k, r.x)];
                out.extend(r.angles.iter().map(|a| a.map_or("-".to_string(), |v| v.to_string())));
                out.push(r.pp.to_string());
                out
            }),
        )
    }

    pub fn row(&self, k: usize, x: usize) -> Option<&PlateRow> {
        self.rows.iter().find(|r| r.k == k && r.x == x)
    }
}

impl StationTable {
    pub fn parse(text: &str) -> Result<Self> {
        let rows = records(text, &STATION_HEADER)?
            .iter()
            .map(|r| {
                let y = r[0].parse().map_err(|_| parse_error(r, format!("bad setting label `{}`", &r[0])))?;
                let setting = StationSetting::new(
                    ArmSetting::new(required(r, 1)?, required(r, 2)?),
                    ArmSetting::new(required(r, 3)?, required(r, 4)?),
                );
                Ok(StationRow { y, setting })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }

    pub fn to_csv(&self) -> String {
        write_csv(
            &STATION_HEADER,
            self.rows.iter().map(|r| {
                let s = r.setting;
                [r.y as f64, s.a.qwp, s.a.hwp, s.b.qwp, s.b.hwp]
                    .iter()
                    .enumerate()
                    .map(|(i, v)| if i == 0 { r.y.to_string() } else { v.to_string() })
                    .collect()
            }),
        )
    }

    /// Settings ordered by label; labels must be exactly `0..n`.
    pub fn settings(&self) -> Result<Vec<StationSetting>> {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|r| r.y);
        if rows.iter().enumerate().any(|(i, r)| r.y != i) {
            return Err(Error::Setup("station labels must be 0, 1, ... without gaps".into()));
        }
        Ok(rows.iter().map(|r| r.setting).collect())
    }
}
