//! Meet-archive ingestion: a documented CSV schema parsed into an immutable
//! in-memory dataset with indexes by diver, meet, and (diver, meet).
//!
//! Schema (UTF-8, comma-separated, header required, columns located by
//! name):
//!
//! ```text
//! meet_id,diver_id,gender,age,round,direction,position,half_somersaults,
//! half_twists,dd,j1,...,j9,net_score,voluntary
//! ```
//!
//! `direction` in {FWD,BACK,REV,INW,TWIST}; `position` in
//! {TUCK,PIKE,STRAIGHT,FREE}; `j1..j9` optional left-packed judge marks
//! (blank = absent); `net_score` optional decimal; `voluntary` optional
//! {0,1}; `dd` decimal with one fractional digit.
//!
//! Observational archives are dirty, so parsing is best-effort by default:
//! rows that fail validation land in an error report with line numbers and
//! the rest become the dataset. Under `strict` any row error fails the whole
//! parse.

use crate::dive::{validate_descriptor, Dd, DiveDescriptor, Direction, Position};
use crate::scoring::{self, Mark, NetScore};
use serde::{Deserialize, Serialize};
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gender {
    F,
    M,
}

impl Gender {
    pub const ALL: [Gender; 2] = [Gender::F, Gender::M];

    pub fn code(self) -> &'static str {
        match self {
            Gender::F => "F",
            Gender::M => "M",
        }
    }

    pub fn from_code(s: &str) -> Option<Gender> {
        match s {
            "F" => Some(Gender::F),
            "M" => Some(Gender::M),
            _ => None,
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// One diver's one dive in one round of one meet: the atom of the dataset.
/// Carries raw judge marks, a precomputed net, or both (public archives
/// publish either).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub meet_id: String,
    pub diver_id: String,
    pub gender: Gender,
    /// Age at dive, integer years.
    pub age: u8,
    /// Round 1–11.
    pub round: u8,
    pub dive: DiveDescriptor,
    pub judge_scores: Option<Vec<Mark>>,
    pub net_score: Option<NetScore>,
    pub voluntary: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiverProfile {
    pub diver_id: String,
    pub gender: Gender,
    pub n_records: usize,
}

/// Immutable archive with indexes. No two records share
/// (meet, diver, round) and every record's diver has a profile.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    records: Vec<RoundRecord>,
    profiles: BTreeMap<String, DiverProfile>,
    by_diver: BTreeMap<String, Vec<usize>>,
    by_meet: BTreeMap<String, Vec<usize>>,
    by_diver_meet: BTreeMap<(String, String), Vec<usize>>,
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        // Indexes are derived from the records, so record + profile
        // equality is dataset equality.
        self.records == other.records && self.profiles == other.profiles
    }
}

impl Dataset {
    /// Builds a dataset from validated records, deriving profiles and
    /// indexes. Duplicate (meet, diver, round) keys or conflicting genders
    /// for one diver are rejected.
    pub fn build(records: Vec<RoundRecord>) -> Result<Dataset, IngestError> {
        let mut profiles: BTreeMap<String, DiverProfile> = BTreeMap::new();
        let mut by_diver: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut by_meet: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut by_diver_meet: BTreeMap<(String, String), Vec<usize>> = BTreeMap::new();
        let mut keys: BTreeSet<(String, String, u8)> = BTreeSet::new();

        for (i, r) in records.iter().enumerate() {
            let key = (r.meet_id.clone(), r.diver_id.clone(), r.round);
            if !keys.insert(key) {
                return Err(IngestError::DuplicateKey {
                    meet_id: r.meet_id.clone(),
                    diver_id: r.diver_id.clone(),
                    round: r.round,
                });
            }
            match profiles.entry(r.diver_id.clone()) {
                Entry::Vacant(e) => {
                    e.insert(DiverProfile {
                        diver_id: r.diver_id.clone(),
                        gender: r.gender,
                        n_records: 1,
                    });
                }
                Entry::Occupied(mut e) => {
                    let p = e.get_mut();
                    if p.gender != r.gender {
                        return Err(IngestError::GenderConflict {
                            diver_id: r.diver_id.clone(),
                        });
                    }
                    p.n_records += 1;
                }
            }
            by_diver.entry(r.diver_id.clone()).or_default().push(i);
            by_meet.entry(r.meet_id.clone()).or_default().push(i);
            by_diver_meet
                .entry((r.diver_id.clone(), r.meet_id.clone()))
                .or_default()
                .push(i);
        }

        Ok(Dataset {
            records,
            profiles,
            by_diver,
            by_meet,
            by_diver_meet,
        })
    }

    pub fn records(&self) -> &[RoundRecord] {
        &self.records
    }

    pub fn profiles(&self) -> &BTreeMap<String, DiverProfile> {
        &self.profiles
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn diver_ids(&self) -> impl Iterator<Item = &str> {
        self.by_diver.keys().map(String::as_str)
    }

    pub fn meet_ids(&self) -> impl Iterator<Item = &str> {
        self.by_meet.keys().map(String::as_str)
    }

    pub fn records_for_diver(&self, diver_id: &str) -> impl Iterator<Item = &RoundRecord> {
        self.by_diver
            .get(diver_id)
            .into_iter()
            .flatten()
            .map(|&i| &self.records[i])
    }

    pub fn records_for_meet(&self, meet_id: &str) -> impl Iterator<Item = &RoundRecord> {
        self.by_meet
            .get(meet_id)
            .into_iter()
            .flatten()
            .map(|&i| &self.records[i])
    }

    pub fn records_for_diver_meet(
        &self,
        diver_id: &str,
        meet_id: &str,
    ) -> impl Iterator<Item = &RoundRecord> {
        self.by_diver_meet
            .get(&(diver_id.to_string(), meet_id.to_string()))
            .into_iter()
            .flatten()
            .map(|&i| &self.records[i])
    }

    /// Concatenates archives; cross-archive duplicates are rejected.
    pub fn merge(datasets: Vec<Dataset>) -> Result<Dataset, IngestError> {
        let mut records = Vec::new();
        for d in datasets {
            records.extend(d.records);
        }
        Dataset::build(records)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DatasetStats {
    pub dives: usize,
    pub meets: usize,
    pub athletes: usize,
    /// Distinct (direction, rotation, position) triples, matching how an
    /// archive lists distinct performable dives.
    pub unique_dives: usize,
}

/// Exact archive counts.
pub fn dataset_stats(d: &Dataset) -> DatasetStats {
    let unique: BTreeSet<(Direction, u8, u8, Position)> = d
        .records
        .iter()
        .map(|r| {
            (
                r.dive.direction,
                r.dive.half_somersaults,
                r.dive.half_twists,
                r.dive.position,
            )
        })
        .collect();
    DatasetStats {
        dives: d.records.len(),
        meets: d.by_meet.len(),
        athletes: d.profiles.len(),
        unique_dives: unique.len(),
    }
}

/// Net score for one record: computed from the marks when present, else the
/// stored net. A stored net that contradicts the marks is an archive error.
pub fn effective_net(r: &RoundRecord) -> Result<NetScore, IngestError> {
    match (&r.judge_scores, r.net_score) {
        (Some(marks), stored) => {
            let computed = scoring::net_score(marks).map_err(IngestError::Scoring)?;
            if let Some(stored) = stored {
                if stored != computed {
                    return Err(IngestError::InconsistentNet {
                        meet_id: r.meet_id.clone(),
                        diver_id: r.diver_id.clone(),
                        round: r.round,
                        stored,
                        computed,
                    });
                }
            }
            Ok(computed)
        }
        (None, Some(stored)) => Ok(stored),
        (None, None) => Err(IngestError::NoScore {
            meet_id: r.meet_id.clone(),
            diver_id: r.diver_id.clone(),
            round: r.round,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IngestError {
    #[error("missing required column {0:?}")]
    MissingColumn(String),
    #[error("csv error: {0}")]
    Csv(String),
    #[error("duplicate record for meet {meet_id}, diver {diver_id}, round {round}")]
    DuplicateKey {
        meet_id: String,
        diver_id: String,
        round: u8,
    },
    #[error("diver {diver_id} appears with conflicting genders")]
    GenderConflict { diver_id: String },
    #[error("strict parse failed with {0} row error(s)")]
    Strict(usize),
    #[error(
        "meet {meet_id}, diver {diver_id}, round {round}: stored net {stored} \
         disagrees with net {computed} computed from the marks"
    )]
    InconsistentNet {
        meet_id: String,
        diver_id: String,
        round: u8,
        stored: NetScore,
        computed: NetScore,
    },
    #[error("meet {meet_id}, diver {diver_id}, round {round}: no judge scores and no net score")]
    NoScore {
        meet_id: String,
        diver_id: String,
        round: u8,
    },
    #[error(transparent)]
    Scoring(scoring::ScoringError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowWarning {
    pub line: u64,
    pub message: String,
}

/// Parse result: the dataset plus everything worth telling the operator.
#[derive(Debug)]
pub struct ParseReport {
    pub dataset: Dataset,
    pub errors: Vec<RowError>,
    pub warnings: Vec<RowWarning>,
}

pub const HEADER: [&str; 21] = [
    "meet_id",
    "diver_id",
    "gender",
    "age",
    "round",
    "direction",
    "position",
    "half_somersaults",
    "half_twists",
    "dd",
    "j1",
    "j2",
    "j3",
    "j4",
    "j5",
    "j6",
    "j7",
    "j8",
    "j9",
    "net_score",
    "voluntary",
];

struct ColumnMap {
    idx: [usize; 21],
}

impl ColumnMap {
    fn from_header(header: &csv::StringRecord) -> Result<ColumnMap, IngestError> {
        let mut idx = [0usize; 21];
        for (slot, name) in HEADER.iter().enumerate() {
            let found = header
                .iter()
                .position(|h| h.trim() == *name)
                .ok_or_else(|| IngestError::MissingColumn((*name).to_string()))?;
            idx[slot] = found;
        }
        Ok(ColumnMap { idx })
    }

    fn get<'a>(&self, record: &'a csv::StringRecord, slot: usize) -> &'a str {
        record.get(self.idx[slot]).unwrap_or("").trim()
    }
}

fn parse_row(
    cols: &ColumnMap,
    record: &csv::StringRecord,
    line: u64,
    warnings: &mut Vec<RowWarning>,
) -> Result<RoundRecord, String> {
    let meet_id = cols.get(record, 0).to_string();
    if meet_id.is_empty() {
        return Err("empty meet_id".into());
    }
    let diver_id = cols.get(record, 1).to_string();
    if diver_id.is_empty() {
        return Err("empty diver_id".into());
    }
    let gender = Gender::from_code(cols.get(record, 2))
        .ok_or_else(|| format!("gender {:?} not F or M", cols.get(record, 2)))?;

    let age_raw: f64 = cols
        .get(record, 3)
        .parse()
        .map_err(|_| format!("unparseable age {:?}", cols.get(record, 3)))?;
    let age_floored = age_raw.floor();
    if age_floored != age_raw {
        warnings.push(RowWarning {
            line,
            message: format!("fractional age {age_raw} floored to {age_floored}"),
        });
    }
    if !(5.0..=30.0).contains(&age_floored) {
        return Err(format!("age {age_floored} outside [5, 30]"));
    }
    let age = age_floored as u8;
    if !(10..=20).contains(&age) {
        warnings.push(RowWarning {
            line,
            message: format!("age {age} outside the usual 10-20 range"),
        });
    }

    let round: u8 = cols
        .get(record, 4)
        .parse()
        .map_err(|_| format!("unparseable round {:?}", cols.get(record, 4)))?;
    if !(1..=11).contains(&round) {
        return Err(format!("round {round} outside 1-11"));
    }

    let direction = Direction::from_code(cols.get(record, 5))
        .ok_or_else(|| format!("unknown direction {:?}", cols.get(record, 5)))?;
    let position = Position::from_code(cols.get(record, 6))
        .ok_or_else(|| format!("unknown position {:?}", cols.get(record, 6)))?;
    let half_somersaults: u8 = cols
        .get(record, 7)
        .parse()
        .map_err(|_| format!("unparseable half_somersaults {:?}", cols.get(record, 7)))?;
    let half_twists: u8 = cols
        .get(record, 8)
        .parse()
        .map_err(|_| format!("unparseable half_twists {:?}", cols.get(record, 8)))?;
    let dd_raw: f64 = cols
        .get(record, 9)
        .parse()
        .map_err(|_| format!("unparseable dd {:?}", cols.get(record, 9)))?;
    let dd = Dd::from_f64(dd_raw).map_err(|e| e.to_string())?;

    let dive = DiveDescriptor::new(direction, position, half_somersaults, half_twists, dd);
    match validate_descriptor(&dive) {
        Ok((_, dive_warnings)) => {
            for w in dive_warnings {
                warnings.push(RowWarning {
                    line,
                    message: format!("{w:?}"),
                });
            }
        }
        Err(errors) => {
            return Err(errors
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; "));
        }
    }

    // j1..j9 are left-packed: the first blank ends the panel.
    let mut marks = Vec::new();
    let mut ended = false;
    for j in 0..9 {
        let field = cols.get(record, 10 + j);
        if field.is_empty() {
            ended = true;
            continue;
        }
        if ended {
            return Err(format!("judge score in j{} after a blank column", j + 1));
        }
        let value: f64 = field
            .parse()
            .map_err(|_| format!("unparseable judge score {field:?}"))?;
        let mark = Mark::from_f64(value).map_err(|e| match e {
            scoring::ScoringError::MarkNotHalfStep { value } => {
                format!("score {value} not a multiple of 0.5")
            }
            other => other.to_string(),
        })?;
        marks.push(mark);
    }
    let judge_scores = if marks.is_empty() {
        None
    } else {
        if !matches!(marks.len(), 3 | 5 | 7 | 9) {
            return Err(format!("panel of {} judges; must be 3, 5, 7, or 9", marks.len()));
        }
        Some(marks)
    };

    let net_field = cols.get(record, 19);
    let net_score = if net_field.is_empty() {
        None
    } else {
        let value: f64 = net_field
            .parse()
            .map_err(|_| format!("unparseable net_score {net_field:?}"))?;
        Some(NetScore::from_f64(value).map_err(|e| e.to_string())?)
    };

    if judge_scores.is_none() && net_score.is_none() {
        return Err("row has neither judge scores nor a net score".into());
    }

    let vol_field = cols.get(record, 20);
    let voluntary = match vol_field {
        "" => None,
        "0" => Some(false),
        "1" => Some(true),
        other => return Err(format!("voluntary {other:?} not 0 or 1")),
    };

    Ok(RoundRecord {
        meet_id,
        diver_id,
        gender,
        age,
        round,
        dive,
        judge_scores,
        net_score,
        voluntary,
    })
}

/// Parses archive CSV. Best-effort by default: bad rows go to the error
/// report with their line numbers. Under `strict` any row error (or
/// duplicate key, or gender conflict) fails the parse.
pub fn parse_archive(source: impl Read, strict: bool) -> Result<ParseReport, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(source);
    let header = reader
        .headers()
        .map_err(|e| IngestError::Csv(e.to_string()))?
        .clone();
    let cols = ColumnMap::from_header(&header)?;

    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let mut records = Vec::new();
    let mut keys: BTreeSet<(String, String, u8)> = BTreeSet::new();
    let mut genders: BTreeMap<String, Gender> = BTreeMap::new();

    for row in reader.records() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                errors.push(RowError {
                    line: e.position().map_or(0, csv::Position::line),
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = row.position().map_or(0, csv::Position::line);
        match parse_row(&cols, &row, line, &mut warnings) {
            Ok(record) => {
                let key = (record.meet_id.clone(), record.diver_id.clone(), record.round);
                if !keys.insert(key) {
                    errors.push(RowError {
                        line,
                        message: format!(
                            "duplicate record for meet {}, diver {}, round {}",
                            record.meet_id, record.diver_id, record.round
                        ),
                    });
                    continue;
                }
                match genders.entry(record.diver_id.clone()) {
                    Entry::Vacant(e) => {
                        e.insert(record.gender);
                    }
                    Entry::Occupied(e) => {
                        if *e.get() != record.gender {
                            errors.push(RowError {
                                line,
                                message: format!(
                                    "diver {} gender conflicts with an earlier row",
                                    record.diver_id
                                ),
                            });
                            continue;
                        }
                    }
                }
                records.push(record);
            }
            Err(message) => errors.push(RowError { line, message }),
        }
    }

    if strict && !errors.is_empty() {
        return Err(IngestError::Strict(errors.len()));
    }
    for w in &warnings {
        log::warn!("line {}: {}", w.line, w.message);
    }
    let dataset = Dataset::build(records)?;
    Ok(ParseReport {
        dataset,
        errors,
        warnings,
    })
}

/// Writes the dataset back out in the archive schema. `parse_archive` over
/// the output reproduces the dataset exactly.
pub fn write_archive(d: &Dataset, sink: impl Write) -> Result<(), IngestError> {
    let mut writer = csv::Writer::from_writer(sink);
    writer
        .write_record(HEADER)
        .map_err(|e| IngestError::Csv(e.to_string()))?;
    for r in d.records() {
        let mut row: Vec<String> = Vec::with_capacity(21);
        row.push(r.meet_id.clone());
        row.push(r.diver_id.clone());
        row.push(r.gender.code().to_string());
        row.push(r.age.to_string());
        row.push(r.round.to_string());
        row.push(r.dive.direction.code().to_string());
        row.push(r.dive.position.code().to_string());
        row.push(r.dive.half_somersaults.to_string());
        row.push(r.dive.half_twists.to_string());
        row.push(r.dive.dd.to_string());
        let marks = r.judge_scores.as_deref().unwrap_or(&[]);
        for j in 0..9 {
            row.push(marks.get(j).map(ToString::to_string).unwrap_or_default());
        }
        row.push(r.net_score.map(|n| n.to_string()).unwrap_or_default());
        row.push(
            r.voluntary
                .map(|v| if v { "1" } else { "0" }.to_string())
                .unwrap_or_default(),
        );
        writer
            .write_record(&row)
            .map_err(|e| IngestError::Csv(e.to_string()))?;
    }
    writer.flush().map_err(|e| IngestError::Csv(e.to_string()))?;
    Ok(())
}
