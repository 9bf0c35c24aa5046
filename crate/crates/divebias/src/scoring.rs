//! Meet-scoring arithmetic: judge marks, net scores, awards, meet totals,
//! and standings.
//!
//! Marks live on a 0–10 scale in 0.5 steps and are stored as scaled
//! integers (half-points), so every scoring quantity here is exact: a net
//! score is an integer number of half-points, an award an integer number of
//! 0.05-point units. Decimals appear only at display boundaries.

use crate::dive::Dd;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// One judge's mark, stored in half-points (0..=20 for 0.0..=10.0).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Mark(u8);

impl Mark {
    pub const MAX_HALF_POINTS: u8 = 20;

    pub fn from_half_points(hp: u8) -> Result<Mark, ScoringError> {
        if hp > Self::MAX_HALF_POINTS {
            return Err(ScoringError::MarkOutOfRange {
                value: f64::from(hp) / 2.0,
            });
        }
        Ok(Mark(hp))
    }

    /// Parses a decimal mark that must be a multiple of 0.5 in [0, 10].
    pub fn from_f64(value: f64) -> Result<Mark, ScoringError> {
        let scaled = value * 2.0;
        let rounded = scaled.round();
        if (scaled - rounded).abs() > 1e-6 {
            return Err(ScoringError::MarkNotHalfStep { value });
        }
        if !(0.0..=20.0).contains(&rounded) {
            return Err(ScoringError::MarkOutOfRange { value });
        }
        Ok(Mark(rounded as u8))
    }

    pub fn half_points(self) -> u8 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 2, if self.0 % 2 == 0 { '0' } else { '5' })
    }
}

/// Sum of the middle three marks, in half-points (0..=60 for 0–30).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct NetScore(u16);

impl NetScore {
    pub const MAX_HALF_POINTS: u16 = 60;

    pub fn from_half_points(hp: u16) -> Result<NetScore, ScoringError> {
        if hp > Self::MAX_HALF_POINTS {
            return Err(ScoringError::NetOutOfRange {
                value: f64::from(hp) / 2.0,
            });
        }
        Ok(NetScore(hp))
    }

    /// Parses a decimal net that must be a multiple of 0.5 in [0, 30].
    pub fn from_f64(value: f64) -> Result<NetScore, ScoringError> {
        let scaled = value * 2.0;
        let rounded = scaled.round();
        if (scaled - rounded).abs() > 1e-6 {
            return Err(ScoringError::NetNotHalfStep { value });
        }
        if !(0.0..=60.0).contains(&rounded) {
            return Err(ScoringError::NetOutOfRange { value });
        }
        Ok(NetScore(rounded as u16))
    }

    pub fn half_points(self) -> u16 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for NetScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 2, if self.0 % 2 == 0 { '0' } else { '5' })
    }
}

/// Net score times DD, exact in 0.05-point units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Award {
    pub net: NetScore,
    pub dd: Dd,
    /// net × dd in units of 0.05 points (half-points × tenths).
    pub value_units: u32,
}

impl Award {
    pub fn value(&self) -> f64 {
        f64::from(self.value_units) / 20.0
    }
}

impl fmt::Display for Award {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.value_units / 20, (self.value_units % 20) * 5)
    }
}

/// One diver's place in a meet. Equal totals share a rank and the next
/// rank skips (1, 2, 2, 4).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeetStanding {
    pub diver_id: String,
    pub total: f64,
    pub rank: u32,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoringError {
    #[error("mark {value} not a multiple of 0.5")]
    MarkNotHalfStep { value: f64 },
    #[error("mark {value} outside [0, 10]")]
    MarkOutOfRange { value: f64 },
    #[error("net score {value} not a multiple of 0.5")]
    NetNotHalfStep { value: f64 },
    #[error("net score {value} outside [0, 30]")]
    NetOutOfRange { value: f64 },
    #[error("panel of {0} judges; panels must have 3, 5, 7, or 9")]
    InvalidPanelSize(usize),
    #[error("DD {0} outside [1.0, 4.1]")]
    DdOutOfRange(Dd),
    #[error("duplicate round {0} for one diver in one meet")]
    DuplicateRound(u8),
    #[error("meet has no divers")]
    EmptyMeet,
}

/// Whether a panel unanimously failed the dive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiveOutcome {
    /// Every mark is 0.0.
    Failed,
    /// At least one non-zero mark. `zero_marks` counts stray zeros: a 0 is
    /// only defined for unanimous failure, so a mixed panel is scored but
    /// flagged.
    Scored { zero_marks: usize },
}

impl DiveOutcome {
    pub fn rule_warning(&self) -> bool {
        matches!(self, DiveOutcome::Scored { zero_marks } if *zero_marks > 0)
    }
}

fn check_panel_size(len: usize) -> Result<(), ScoringError> {
    match len {
        3 | 5 | 7 | 9 => Ok(()),
        n => Err(ScoringError::InvalidPanelSize(n)),
    }
}

/// Sum of the three marks in the middle of the sorted panel.
///
/// For 3 judges this is the sum of all three. Larger panels still take
/// exactly the middle three, the rule as stated for these meets; federations
/// that score 7+ panels differently are out of scope.
pub fn net_score(marks: &[Mark]) -> Result<NetScore, ScoringError> {
    check_panel_size(marks.len())?;
    let mut sorted: Vec<u16> = marks.iter().map(|m| u16::from(m.half_points())).collect();
    sorted.sort_unstable();
    let mid = sorted.len() / 2;
    let sum = sorted[mid - 1] + sorted[mid] + sorted[mid + 1];
    NetScore::from_half_points(sum)
}

/// Net score times DD, exact in 0.05-point units.
pub fn award(net: NetScore, dd: Dd) -> Result<Award, ScoringError> {
    if !dd.in_valid_range() {
        return Err(ScoringError::DdOutOfRange(dd));
    }
    Ok(Award {
        net,
        dd,
        value_units: u32::from(net.half_points()) * u32::from(dd.tenths()),
    })
}

/// Failed-dive rule: a 0 net requires the whole panel to agree.
pub fn check_failed_dive(marks: &[Mark]) -> Result<DiveOutcome, ScoringError> {
    check_panel_size(marks.len())?;
    let zeros = marks.iter().filter(|m| m.is_zero()).count();
    if zeros == marks.len() {
        Ok(DiveOutcome::Failed)
    } else {
        Ok(DiveOutcome::Scored { zero_marks: zeros })
    }
}

/// Sum of award values for one diver's rounds in one meet, exact in
/// 0.05-point units. Rounds must be distinct; order is irrelevant.
pub fn meet_total<'a>(
    awards: impl IntoIterator<Item = (u8, &'a Award)>,
) -> Result<f64, ScoringError> {
    let mut seen = [false; 12];
    let mut total_units: u64 = 0;
    for (round, a) in awards {
        let slot = usize::from(round.min(11));
        if seen[slot] {
            return Err(ScoringError::DuplicateRound(round));
        }
        seen[slot] = true;
        total_units += u64::from(a.value_units);
    }
    Ok(total_units as f64 / 20.0)
}

/// Standings by descending total with competition ranking for ties.
pub fn rank_meet(totals: &BTreeMap<String, f64>) -> Result<Vec<MeetStanding>, ScoringError> {
    if totals.is_empty() {
        return Err(ScoringError::EmptyMeet);
    }
    let mut order: Vec<(&String, f64)> = totals.iter().map(|(k, v)| (k, *v)).collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(b.0)));
    let mut standings = Vec::with_capacity(order.len());
    let mut rank = 1u32;
    for (i, (id, total)) in order.iter().enumerate() {
        if i > 0 && order[i - 1].1 > *total {
            rank = i as u32 + 1;
        }
        standings.push(MeetStanding {
            diver_id: (*id).clone(),
            total: *total,
            rank,
        });
    }
    Ok(standings)
}
