//! Dive identity: direction, position, rotation counts, and degree of difficulty.
//!
//! Two dives are "the same dive" when they share direction and rotation
//! content; position is ignored (a forward 1.5 somersault pike and a forward
//! 1.5 somersault tuck are the same dive for list-legality purposes).

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// The five dive groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
    Reverse,
    Inward,
    Twist,
}

impl Direction {
    pub const ALL: [Direction; 5] = [
        Direction::Forward,
        Direction::Backward,
        Direction::Reverse,
        Direction::Inward,
        Direction::Twist,
    ];

    /// Group digit used by dive-number tokens (1–5).
    pub fn group_digit(self) -> u8 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => 2,
            Direction::Reverse => 3,
            Direction::Inward => 4,
            Direction::Twist => 5,
        }
    }

    pub fn from_group_digit(d: u8) -> Option<Direction> {
        match d {
            1 => Some(Direction::Forward),
            2 => Some(Direction::Backward),
            3 => Some(Direction::Reverse),
            4 => Some(Direction::Inward),
            5 => Some(Direction::Twist),
            _ => None,
        }
    }

    /// Archive column encoding.
    pub fn code(self) -> &'static str {
        match self {
            Direction::Forward => "FWD",
            Direction::Backward => "BACK",
            Direction::Reverse => "REV",
            Direction::Inward => "INW",
            Direction::Twist => "TWIST",
        }
    }

    pub fn from_code(s: &str) -> Option<Direction> {
        match s {
            "FWD" => Some(Direction::Forward),
            "BACK" => Some(Direction::Backward),
            "REV" => Some(Direction::Reverse),
            "INW" => Some(Direction::Inward),
            "TWIST" => Some(Direction::Twist),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// The four body positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Position {
    Tuck,
    Pike,
    Straight,
    Free,
}

impl Position {
    pub const ALL: [Position; 4] = [
        Position::Tuck,
        Position::Pike,
        Position::Straight,
        Position::Free,
    ];

    /// Dive-number position letter (A straight, B pike, C tuck, D free).
    pub fn letter(self) -> char {
        match self {
            Position::Straight => 'A',
            Position::Pike => 'B',
            Position::Tuck => 'C',
            Position::Free => 'D',
        }
    }

    pub fn from_letter(c: char) -> Option<Position> {
        match c {
            'A' => Some(Position::Straight),
            'B' => Some(Position::Pike),
            'C' => Some(Position::Tuck),
            'D' => Some(Position::Free),
            _ => None,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Position::Tuck => "TUCK",
            Position::Pike => "PIKE",
            Position::Straight => "STRAIGHT",
            Position::Free => "FREE",
        }
    }

    pub fn from_code(s: &str) -> Option<Position> {
        match s {
            "TUCK" => Some(Position::Tuck),
            "PIKE" => Some(Position::Pike),
            "STRAIGHT" => Some(Position::Straight),
            "FREE" => Some(Position::Free),
            _ => None,
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Degree of difficulty in exact tenths (17 = 1.7).
///
/// Stored scaled so DD sums and awards stay exact integer arithmetic; the
/// legal competitive range is 1.0–4.1 but any tenths value is representable
/// so that dirty archive rows can be parsed first and rejected by
/// [`validate_descriptor`] afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dd(u16);

/// Inclusive DD floor, in tenths.
pub const DD_MIN_TENTHS: u16 = 10;
/// Inclusive DD ceiling, in tenths. The broader competitive range, not the
/// archive maximum, so richer archives ingest cleanly.
pub const DD_MAX_TENTHS: u16 = 41;

impl Dd {
    /// Any tenths value; range is checked by [`validate_descriptor`].
    pub fn from_tenths(tenths: u16) -> Dd {
        Dd(tenths)
    }

    /// Parses a decimal that must be an exact multiple of 0.1.
    pub fn from_f64(value: f64) -> Result<Dd, DiveError> {
        let scaled = value * 10.0;
        let rounded = scaled.round();
        if (scaled - rounded).abs() > 1e-6 || !(0.0..=6553.0).contains(&rounded) {
            return Err(DiveError::DdNotTenths { value });
        }
        Ok(Dd(rounded as u16))
    }

    pub fn tenths(self) -> u16 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 10.0
    }

    pub fn in_valid_range(self) -> bool {
        (DD_MIN_TENTHS..=DD_MAX_TENTHS).contains(&self.0)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

/// One performable dive: group, position, rotation content, and its DD.
///
/// Rotation is stored in integer half-counts (1.5 somersaults = 3
/// half-somersaults) so dive identity never touches fractional equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiveDescriptor {
    pub direction: Direction,
    pub position: Position,
    pub half_somersaults: u8,
    pub half_twists: u8,
    pub dd: Dd,
}

impl DiveDescriptor {
    pub fn new(
        direction: Direction,
        position: Position,
        half_somersaults: u8,
        half_twists: u8,
        dd: Dd,
    ) -> DiveDescriptor {
        DiveDescriptor {
            direction,
            position,
            half_somersaults,
            half_twists,
            dd,
        }
    }

    pub fn somersaults(&self) -> f64 {
        f64::from(self.half_somersaults) / 2.0
    }

    pub fn twists(&self) -> f64 {
        f64::from(self.half_twists) / 2.0
    }

    /// Identity key ignoring position: what [`same_dive`] compares.
    pub fn identity(&self) -> (Direction, u8, u8) {
        (self.direction, self.half_somersaults, self.half_twists)
    }

    /// Canonical dive-number token for this descriptor.
    ///
    /// Groups 1–4 render as `<group><half-somersaults, 2 digits><letter>`
    /// ("105C"); twists render as `5<half-somersaults><half-twists><letter>`
    /// ("523D"). Only single-digit rotation counts have a token form.
    pub fn token(&self) -> Option<String> {
        let letter = self.position.letter();
        match self.direction {
            Direction::Twist => {
                if self.half_somersaults > 9 || self.half_twists > 9 {
                    return None;
                }
                Some(format!(
                    "5{}{}{}",
                    self.half_somersaults, self.half_twists, letter
                ))
            }
            dir => {
                if self.half_twists != 0 || self.half_somersaults > 99 {
                    return None;
                }
                Some(format!(
                    "{}{:02}{}",
                    dir.group_digit(),
                    self.half_somersaults,
                    letter
                ))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiveError {
    #[error("DD {0} out of range [{min}, {max}]", min = 1.0, max = 4.1)]
    DdOutOfRange(Dd),
    #[error("DD {value} is not a multiple of 0.1")]
    DdNotTenths { value: f64 },
    #[error("dive token {token:?}: {reason}")]
    BadToken { token: String, reason: String },
}

/// Soft advisories from [`validate_descriptor`]: the descriptor is accepted
/// but looks unusual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiveWarning {
    /// Twisting rotation recorded under a non-twist group.
    TwistOutsideTwistGroup,
}

/// True iff the two descriptors are the same dive for list-legality
/// purposes: equal direction and rotation content, position ignored.
pub fn same_dive(a: &DiveDescriptor, b: &DiveDescriptor) -> bool {
    a.identity() == b.identity()
}

/// Checks descriptor invariants; returns the descriptor unchanged when all
/// hold, otherwise every violated invariant.
pub fn validate_descriptor(
    d: &DiveDescriptor,
) -> Result<(DiveDescriptor, Vec<DiveWarning>), Vec<DiveError>> {
    let mut errors = Vec::new();
    if !d.dd.in_valid_range() {
        errors.push(DiveError::DdOutOfRange(d.dd));
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    let mut warnings = Vec::new();
    if d.half_twists > 0 && d.direction != Direction::Twist {
        warnings.push(DiveWarning::TwistOutsideTwistGroup);
    }
    Ok((*d, warnings))
}

/// Parsed dive-number token, without a DD (the archive supplies it).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParsedDive {
    pub direction: Direction,
    pub position: Position,
    pub half_somersaults: u8,
    pub half_twists: u8,
}

impl ParsedDive {
    pub fn with_dd(self, dd: Dd) -> DiveDescriptor {
        DiveDescriptor {
            direction: self.direction,
            position: self.position,
            half_somersaults: self.half_somersaults,
            half_twists: self.half_twists,
            dd,
        }
    }
}

/// Parses a dive-number token like "105C" or "5152B".
///
/// Leading digit is the group (1 forward … 5 twist), trailing letter the
/// position. For groups 1–4 the remaining digits are the half-somersault
/// count. For group 5 the final two digits are (half-somersaults,
/// half-twists); a third rotation digit, the underlying-direction digit of
/// conventional 4-digit twist tokens, is accepted and ignored.
pub fn parse_dive_token(token: &str) -> Result<ParsedDive, DiveError> {
    let bad = |reason: &str| DiveError::BadToken {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    let mut chars = token.chars();
    let letter = chars.next_back().ok_or_else(|| bad("empty token"))?;
    let position =
        Position::from_letter(letter).ok_or_else(|| bad("unknown position letter"))?;
    let digits = chars.as_str();
    if digits.is_empty() {
        return Err(bad("missing group digit"));
    }
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad("non-digit character in dive number"));
    }
    let group = digits.as_bytes()[0] - b'0';
    let direction = Direction::from_group_digit(group).ok_or_else(|| bad("group digit outside 1-5"))?;
    let rotation = &digits[1..];
    if rotation.is_empty() {
        return Err(bad("empty rotation digits"));
    }
    match direction {
        Direction::Twist => {
            if rotation.len() < 2 {
                return Err(bad("twist token needs somersault and twist digits"));
            }
            if rotation.len() > 3 {
                return Err(bad("too many rotation digits"));
            }
            let bytes = rotation.as_bytes();
            let half_somersaults = bytes[bytes.len() - 2] - b'0';
            let half_twists = bytes[bytes.len() - 1] - b'0';
            Ok(ParsedDive {
                direction,
                position,
                half_somersaults,
                half_twists,
            })
        }
        _ => {
            let half_somersaults: u8 = rotation
                .parse()
                .map_err(|_| bad("rotation count too large"))?;
            Ok(ParsedDive {
                direction,
                position,
                half_somersaults,
                half_twists: 0,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dive(dir: Direction, pos: Position, ss: u8, tw: u8, dd_tenths: u16) -> DiveDescriptor {
        DiveDescriptor::new(dir, pos, ss, tw, Dd::from_tenths(dd_tenths))
    }

    #[test]
    fn same_dive_ignores_position() {
        let pike = dive(Direction::Forward, Position::Pike, 3, 0, 17);
        let tuck = dive(Direction::Forward, Position::Tuck, 3, 0, 16);
        assert!(same_dive(&pike, &tuck));
    }

    #[test]
    fn same_dive_distinguishes_direction() {
        let back = dive(Direction::Backward, Position::Tuck, 3, 0, 23);
        let fwd = dive(Direction::Forward, Position::Tuck, 3, 0, 16);
        assert!(!same_dive(&back, &fwd));
    }

    #[test]
    fn same_dive_reflexive() {
        let d = dive(Direction::Reverse, Position::Tuck, 5, 0, 34);
        assert!(same_dive(&d, &d));
    }

    #[test]
    fn same_dive_is_equivalence_relation() {
        // Exhaustive over a small grid of descriptors.
        let mut all = Vec::new();
        for dir in Direction::ALL {
            for pos in [Position::Tuck, Position::Pike] {
                for ss in [0u8, 3, 5] {
                    for tw in [0u8, 2] {
                        all.push(dive(dir, pos, ss, tw, 15));
                    }
                }
            }
        }
        for a in &all {
            assert!(same_dive(a, a));
            for b in &all {
                assert_eq!(same_dive(a, b), same_dive(b, a));
                for c in &all {
                    if same_dive(a, b) && same_dive(b, c) {
                        assert!(same_dive(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn validate_accepts_range_endpoints() {
        let jump = dive(Direction::Forward, Position::Straight, 0, 0, 10);
        assert!(validate_descriptor(&jump).is_ok());
        let hard = dive(Direction::Reverse, Position::Tuck, 5, 0, 34);
        assert!(validate_descriptor(&hard).is_ok());
        let ceiling = dive(Direction::Forward, Position::Tuck, 7, 0, 41);
        assert!(validate_descriptor(&ceiling).is_ok());
    }

    #[test]
    fn validate_rejects_dd_below_floor() {
        let d = dive(Direction::Forward, Position::Tuck, 2, 0, 9);
        let errs = validate_descriptor(&d).unwrap_err();
        assert!(matches!(errs[0], DiveError::DdOutOfRange(_)));
    }

    #[test]
    fn validate_warns_on_twist_outside_group() {
        let d = dive(Direction::Forward, Position::Free, 2, 1, 20);
        let (_, warnings) = validate_descriptor(&d).unwrap();
        assert_eq!(warnings, vec![DiveWarning::TwistOutsideTwistGroup]);
    }

    #[test]
    fn dd_from_f64_rejects_non_tenths() {
        assert!(Dd::from_f64(1.75).is_err());
        assert_eq!(Dd::from_f64(1.7).unwrap().tenths(), 17);
    }

    #[test]
    fn parse_105c() {
        let p = parse_dive_token("105C").unwrap();
        assert_eq!(p.direction, Direction::Forward);
        assert_eq!(p.half_somersaults, 5);
        assert_eq!(p.half_twists, 0);
        assert_eq!(p.position, Position::Tuck);
    }

    #[test]
    fn parse_403b() {
        let p = parse_dive_token("403B").unwrap();
        assert_eq!(p.direction, Direction::Inward);
        assert_eq!(p.half_somersaults, 3);
        assert_eq!(p.position, Position::Pike);
    }

    #[test]
    fn parse_rejects_unknown_position_letter() {
        assert!(matches!(
            parse_dive_token("999Z"),
            Err(DiveError::BadToken { .. })
        ));
    }

    #[test]
    fn parse_rejects_bad_group_and_empty_rotation() {
        assert!(parse_dive_token("905C").is_err());
        assert!(parse_dive_token("1C").is_err());
        assert!(parse_dive_token("C").is_err());
        assert!(parse_dive_token("").is_err());
    }

    #[test]
    fn parse_four_digit_twist_token() {
        // "5152B": twist group, underlying direction digit ignored,
        // 5 half-somersaults, 2 half-twists.
        let p = parse_dive_token("5152B").unwrap();
        assert_eq!(p.direction, Direction::Twist);
        assert_eq!(p.half_somersaults, 5);
        assert_eq!(p.half_twists, 2);
        let canonical = parse_dive_token("552B").unwrap();
        assert_eq!(p, canonical);
    }

    #[test]
    fn token_round_trip_on_canonical_fixtures() {
        for tok in ["100A", "105C", "103B", "201A", "305C", "403B", "523D", "532A"] {
            let parsed = parse_dive_token(tok).unwrap();
            let rendered = parsed.with_dd(Dd::from_tenths(20)).token().unwrap();
            assert_eq!(rendered, tok, "round trip failed for {tok}");
        }
    }
}
