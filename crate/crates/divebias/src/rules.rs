//! Legality rules for an 11-round dive list.
//!
//! A list is five voluntary dives (one per direction, DD sum at most 9.0)
//! and six optional dives (all five directions with exactly one direction
//! twice, DD sum at least 11.5 for girls / 12.0 for boys). All five
//! directions must appear in the first eight rounds and all eleven dives
//! must be totally different dives. Voluntary/optional designation is taken
//! as input, never inferred.
//!
//! DD sums are computed in tenths-scaled integers so the 9.0 / 11.5 / 12.0
//! boundaries are exact.

use crate::dive::{same_dive, DiveDescriptor, Direction};
use crate::ingest::Gender;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Voluntary DD ceiling, in tenths.
pub const VOLUNTARY_DD_MAX_TENTHS: u32 = 90;
/// Optional DD floor for girls, in tenths.
pub const OPTIONAL_DD_MIN_F_TENTHS: u32 = 115;
/// Optional DD floor for boys, in tenths.
pub const OPTIONAL_DD_MIN_M_TENTHS: u32 = 120;

pub fn optional_dd_min_tenths(gender: Gender) -> u32 {
    match gender {
        Gender::F => OPTIONAL_DD_MIN_F_TENTHS,
        Gender::M => OPTIONAL_DD_MIN_M_TENTHS,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiveListEntry {
    pub round: u8,
    pub dive: DiveDescriptor,
    pub voluntary: bool,
}

/// An 11-round list for one diver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiveList {
    pub gender: Gender,
    pub entries: Vec<DiveListEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationCode {
    VoluntaryDDSum,
    OptionalDDSum,
    VoluntaryCoverage,
    OptionalCoverage,
    GroupsInFirstEight,
    DuplicateDive,
    ListShape,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleViolation {
    pub code: ViolationCode,
    pub message: String,
    pub rounds: Vec<u8>,
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.code, self.message)?;
        if !self.rounds.is_empty() {
            write!(f, " (rounds {:?})", self.rounds)?;
        }
        Ok(())
    }
}

fn tenths_sum<'a>(entries: impl Iterator<Item = &'a DiveListEntry>) -> u32 {
    entries.map(|e| u32::from(e.dive.dd.tenths())).sum()
}

fn rounds_of<'a>(entries: impl Iterator<Item = &'a DiveListEntry>) -> Vec<u8> {
    let mut rounds: Vec<u8> = entries.map(|e| e.round).collect();
    rounds.sort_unstable();
    rounds
}

/// Checks every composition rule and returns all violations (empty means
/// the list is legal). Shape problems short-circuit: without exactly eleven
/// distinct rounds and a 5/6 voluntary split the other rules are not
/// meaningful.
pub fn validate_dive_list(list: &DiveList) -> Vec<RuleViolation> {
    let mut violations = Vec::new();

    let shape_ok = list.entries.len() == 11 && {
        let mut seen = [false; 12];
        let rounds_ok = list
            .entries
            .iter()
            .all(|e| (1..=11).contains(&e.round) && !std::mem::replace(&mut seen[e.round as usize], true));
        let vol_count = list.entries.iter().filter(|e| e.voluntary).count();
        rounds_ok && vol_count == 5
    };
    if !shape_ok {
        violations.push(RuleViolation {
            code: ViolationCode::ListShape,
            message: "list must have rounds 1-11 once each with exactly 5 voluntary dives".into(),
            rounds: Vec::new(),
        });
        return violations;
    }

    let voluntary: Vec<&DiveListEntry> = list.entries.iter().filter(|e| e.voluntary).collect();
    let optional: Vec<&DiveListEntry> = list.entries.iter().filter(|e| !e.voluntary).collect();

    // (a) voluntary dives cover each direction exactly once
    let mut vol_counts = [0usize; 5];
    for e in &voluntary {
        vol_counts[e.dive.direction as usize] += 1;
    }
    if vol_counts.iter().any(|&c| c != 1) {
        let missing: Vec<&str> = Direction::ALL
            .iter()
            .filter(|d| vol_counts[**d as usize] == 0)
            .map(|d| d.code())
            .collect();
        violations.push(RuleViolation {
            code: ViolationCode::VoluntaryCoverage,
            message: format!(
                "voluntary dives must cover each direction exactly once (missing: {})",
                if missing.is_empty() { "none".into() } else { missing.join(", ") }
            ),
            rounds: rounds_of(voluntary.iter().copied()),
        });
    }

    // (b) voluntary DD sum <= 9.0
    let vol_sum = tenths_sum(voluntary.iter().copied());
    if vol_sum > VOLUNTARY_DD_MAX_TENTHS {
        violations.push(RuleViolation {
            code: ViolationCode::VoluntaryDDSum,
            message: format!(
                "voluntary DD sum {}.{} exceeds 9.0",
                vol_sum / 10,
                vol_sum % 10
            ),
            rounds: rounds_of(voluntary.iter().copied()),
        });
    }

    // (c) optional dives cover all five directions with exactly one twice
    let mut opt_counts = [0usize; 5];
    for e in &optional {
        opt_counts[e.dive.direction as usize] += 1;
    }
    let mut sorted_counts = opt_counts;
    sorted_counts.sort_unstable();
    if sorted_counts != [1, 1, 1, 1, 2] {
        violations.push(RuleViolation {
            code: ViolationCode::OptionalCoverage,
            message:
                "optional dives must cover all five directions with exactly one direction twice"
                    .into(),
            rounds: rounds_of(optional.iter().copied()),
        });
    }

    // (d) optional DD sum >= 11.5 (girls) / 12.0 (boys)
    let opt_sum = tenths_sum(optional.iter().copied());
    let opt_min = optional_dd_min_tenths(list.gender);
    if opt_sum < opt_min {
        violations.push(RuleViolation {
            code: ViolationCode::OptionalDDSum,
            message: format!(
                "optional DD sum {}.{} below the {}.{} minimum",
                opt_sum / 10,
                opt_sum % 10,
                opt_min / 10,
                opt_min % 10
            ),
            rounds: rounds_of(optional.iter().copied()),
        });
    }

    // (e) all five directions within rounds 1-8
    let mut early = [false; 5];
    for e in &list.entries {
        if e.round <= 8 {
            early[e.dive.direction as usize] = true;
        }
    }
    if early.iter().any(|present| !present) {
        let missing: Vec<&str> = Direction::ALL
            .iter()
            .filter(|d| !early[**d as usize])
            .map(|d| d.code())
            .collect();
        violations.push(RuleViolation {
            code: ViolationCode::GroupsInFirstEight,
            message: format!(
                "directions missing from rounds 1-8: {}",
                missing.join(", ")
            ),
            rounds: rounds_of(list.entries.iter().filter(|e| e.round <= 8)),
        });
    }

    // (f) all eleven dives totally different
    let mut duplicate_rounds = Vec::new();
    for i in 0..list.entries.len() {
        for j in (i + 1)..list.entries.len() {
            if same_dive(&list.entries[i].dive, &list.entries[j].dive) {
                duplicate_rounds.push(list.entries[i].round);
                duplicate_rounds.push(list.entries[j].round);
            }
        }
    }
    if !duplicate_rounds.is_empty() {
        duplicate_rounds.sort_unstable();
        duplicate_rounds.dedup();
        violations.push(RuleViolation {
            code: ViolationCode::DuplicateDive,
            message: "two entries are the same dive (direction and rotation match)".into(),
            rounds: duplicate_rounds,
        });
    }

    violations
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ListGenError {
    #[error("catalog has no dives in direction {0}")]
    MissingDirection(Direction),
    #[error(
        "catalog cannot cover the list shape: every direction needs 2 distinct dives and one \
         direction needs 3"
    )]
    InsufficientVariety,
    #[error("no legal list found after {attempts} attempts")]
    AttemptsExhausted { attempts: u32 },
}

const MAX_ATTEMPTS: u32 = 10_000;

/// Draws a legal list by rejection sampling over random assemblies:
/// one random voluntary dive per direction, a random direction doubled for
/// the six optional dives, a shuffled round order. Deterministic per seed.
pub fn legal_list_generator(
    gender: Gender,
    catalog: &[DiveDescriptor],
    seed: u64,
) -> Result<DiveList, ListGenError> {
    // Feasibility first: distinct dive classes per direction.
    let mut classes: [Vec<&DiveDescriptor>; 5] = Default::default();
    for dive in catalog {
        let bucket = &mut classes[dive.direction as usize];
        if !bucket.iter().any(|d| same_dive(d, dive)) {
            bucket.push(dive);
        }
    }
    for direction in Direction::ALL {
        if classes[direction as usize].is_empty() {
            return Err(ListGenError::MissingDirection(direction));
        }
    }
    if classes.iter().any(|c| c.len() < 2) || !classes.iter().any(|c| c.len() >= 3) {
        return Err(ListGenError::InsufficientVariety);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opt_min = optional_dd_min_tenths(gender);

    for attempt in 1..=MAX_ATTEMPTS {
        let mut chosen: Vec<(DiveDescriptor, bool)> = Vec::with_capacity(11);

        // Voluntary: one uniform draw per direction.
        for direction in Direction::ALL {
            let bucket = &classes[direction as usize];
            let dive = bucket[rng.gen_range(0..bucket.len())];
            chosen.push((*dive, true));
        }
        let vol_sum: u32 = chosen.iter().map(|(d, _)| u32::from(d.dd.tenths())).sum();
        if vol_sum > VOLUNTARY_DD_MAX_TENTHS {
            continue;
        }

        // Optional: each direction once plus a random direction twice, all
        // distinct from each other and from the voluntaries.
        let doubled = Direction::ALL[rng.gen_range(0..5)];
        let mut wanted: Vec<Direction> = Direction::ALL.to_vec();
        wanted.push(doubled);
        let mut ok = true;
        for direction in wanted {
            let bucket = &classes[direction as usize];
            let dive = bucket[rng.gen_range(0..bucket.len())];
            if chosen.iter().any(|(d, _)| same_dive(d, dive)) {
                ok = false;
                break;
            }
            chosen.push((*dive, false));
        }
        if !ok {
            continue;
        }
        let opt_sum: u32 = chosen
            .iter()
            .filter(|(_, vol)| !vol)
            .map(|(d, _)| u32::from(d.dd.tenths()))
            .sum();
        if opt_sum < opt_min {
            continue;
        }

        chosen.shuffle(&mut rng);
        let entries: Vec<DiveListEntry> = chosen
            .into_iter()
            .enumerate()
            .map(|(i, (dive, voluntary))| DiveListEntry {
                round: i as u8 + 1,
                dive,
                voluntary,
            })
            .collect();
        let list = DiveList {
            gender,
            entries,
        };
        if validate_dive_list(&list).is_empty() {
            log::debug!("legal list found on attempt {attempt}");
            return Ok(list);
        }
    }

    Err(ListGenError::AttemptsExhausted {
        attempts: MAX_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dive::{Dd, Position};

    fn dd(tenths: u16) -> Dd {
        Dd::from_tenths(tenths)
    }

    fn dive(dir: Direction, ss: u8, tw: u8, dd_tenths: u16) -> DiveDescriptor {
        DiveDescriptor::new(dir, Position::Tuck, ss, tw, dd(dd_tenths))
    }

    /// A hand-checked legal girls' list: voluntary sum 8.2, optional sum
    /// exactly 11.5, every direction early, no repeats.
    fn legal_girls_list() -> DiveList {
        let entries = vec![
            // voluntary: one per direction, DDs 1.4+1.5+1.6+1.8+1.9 = 8.2
            (1, dive(Direction::Forward, 2, 0, 14), true),
            (2, dive(Direction::Backward, 1, 0, 15), true),
            (3, dive(Direction::Inward, 1, 0, 16), true),
            (4, dive(Direction::Reverse, 1, 0, 18), true),
            (5, dive(Direction::Twist, 2, 1, 19), true),
            // optional: all five directions, Forward twice,
            // DDs 1.7+1.8+1.9+2.0+2.0+2.1 = 11.5
            (6, dive(Direction::Forward, 3, 0, 17), false),
            (7, dive(Direction::Backward, 3, 0, 18), false),
            (8, dive(Direction::Inward, 3, 0, 19), false),
            (9, dive(Direction::Reverse, 3, 0, 20), false),
            (10, dive(Direction::Twist, 2, 2, 20), false),
            (11, dive(Direction::Forward, 5, 0, 21), false),
        ];
        DiveList {
            gender: Gender::F,
            entries: entries
                .into_iter()
                .map(|(round, dive, voluntary)| DiveListEntry {
                    round,
                    dive,
                    voluntary,
                })
                .collect(),
        }
    }

    #[test]
    fn legal_list_validates_clean() {
        assert_eq!(validate_dive_list(&legal_girls_list()), Vec::new());
    }

    #[test]
    fn voluntary_sum_boundary_is_exact() {
        let mut list = legal_girls_list();
        // 8.2 -> 9.0 by raising the forward voluntary from 1.4 to 2.2.
        list.entries[0].dive.dd = dd(22);
        assert!(validate_dive_list(&list).is_empty());
        // 9.1 violates.
        list.entries[0].dive.dd = dd(23);
        let violations = validate_dive_list(&list);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].code, ViolationCode::VoluntaryDDSum);
    }

    #[test]
    fn optional_sum_boundary_is_exact() {
        let mut list = legal_girls_list();
        // 11.5 exactly is legal for girls; 11.4 is not.
        list.entries[5].dive.dd = dd(16);
        let violations = validate_dive_list(&list);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].code, ViolationCode::OptionalDDSum);

        // Boys need 12.0: the same 11.5 list fails for boys.
        let mut boys = legal_girls_list();
        boys.gender = Gender::M;
        let violations = validate_dive_list(&boys);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].code, ViolationCode::OptionalDDSum);
        // Raise one optional by 0.5 to reach 12.0 exactly.
        boys.entries[10].dive.dd = dd(26);
        assert!(validate_dive_list(&boys).is_empty());
    }

    #[test]
    fn pike_tuck_duplicate_is_rejected() {
        let mut list = legal_girls_list();
        // Round 6 forward 1.5 som: make round 11 the same dive in pike.
        list.entries[10].dive = DiveDescriptor::new(
            Direction::Forward,
            Position::Pike,
            3,
            0,
            dd(17),
        );
        let violations = validate_dive_list(&list);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].code, ViolationCode::DuplicateDive);
        assert_eq!(violations[0].rounds, vec![6, 11]);
    }

    #[test]
    fn all_directions_must_appear_early() {
        let mut list = legal_girls_list();
        // Swap rounds so Twist only appears in rounds 9-11.
        list.entries.swap(4, 9); // move twist voluntary to round 10
        let (a, b) = (list.entries[4].round, list.entries[9].round);
        list.entries[4].round = b;
        list.entries[9].round = a;
        // entries[9] is now the twist voluntary at round 10; entries[4] the
        // optional twist... keep only one twist early? entries[4] was swapped
        // in from round 10 (optional twist). Move it late too by swapping
        // with a forward optional.
        let violations = validate_dive_list(&list);
        // After the swap both twist dives sit at rounds 5 and 10 — still one
        // early. Force the early one late:
        if violations.is_empty() {
            let mut l2 = legal_girls_list();
            // twist voluntary round 5 <-> forward optional round 11
            l2.entries[4].round = 11;
            l2.entries[10].round = 5;
            let v2 = validate_dive_list(&l2);
            assert_eq!(v2.len(), 1);
            assert_eq!(v2[0].code, ViolationCode::GroupsInFirstEight);
            assert!(v2[0].message.contains("TWIST"));
        }
    }

    #[test]
    fn coverage_violations_detected() {
        let mut list = legal_girls_list();
        // Replace the reverse voluntary with a second forward: voluntary
        // coverage breaks (and optional stays fine).
        list.entries[3].dive = dive(Direction::Forward, 7, 0, 18);
        let violations = validate_dive_list(&list);
        assert!(violations
            .iter()
            .any(|v| v.code == ViolationCode::VoluntaryCoverage));

        let mut list = legal_girls_list();
        // Replace the doubled-forward optional with a third backward.
        list.entries[10].dive = dive(Direction::Backward, 5, 0, 21);
        let violations = validate_dive_list(&list);
        assert!(violations
            .iter()
            .any(|v| v.code == ViolationCode::OptionalCoverage));
    }

    #[test]
    fn shape_violation_short_circuits() {
        let mut list = legal_girls_list();
        list.entries.pop();
        let violations = validate_dive_list(&list);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].code, ViolationCode::ListShape);

        let mut six_vol = legal_girls_list();
        six_vol.entries[5].voluntary = true;
        assert_eq!(
            validate_dive_list(&six_vol)[0].code,
            ViolationCode::ListShape
        );
    }

    #[test]
    fn permuting_within_first_eight_changes_nothing() {
        let base = legal_girls_list();
        let mut permuted = base.clone();
        // Swap the rounds of two early entries and of two late entries.
        permuted.entries[0].round = 3;
        permuted.entries[2].round = 1;
        permuted.entries[8].round = 10;
        permuted.entries[9].round = 9;
        assert_eq!(validate_dive_list(&base), {
            let mut v = validate_dive_list(&permuted);
            // rounds inside violations may differ; both must be empty here
            v.clear();
            v
        });
        assert!(validate_dive_list(&permuted).is_empty());
    }

    fn test_catalog() -> Vec<DiveDescriptor> {
        let mut catalog = Vec::new();
        for direction in Direction::ALL {
            for (i, dd_tenths) in [14u16, 17, 20, 23].iter().enumerate() {
                let tw = if direction == Direction::Twist { i as u8 + 1 } else { 0 };
                catalog.push(dive(direction, i as u8 + 1, tw, *dd_tenths));
            }
        }
        catalog
    }

    #[test]
    fn generated_lists_validate_clean_both_genders() {
        let catalog = test_catalog();
        for gender in Gender::ALL {
            for seed in 0..100u64 {
                let list = legal_list_generator(gender, &catalog, seed).unwrap();
                assert!(
                    validate_dive_list(&list).is_empty(),
                    "seed {seed} gender {gender}"
                );
            }
        }
    }

    #[test]
    fn generator_is_deterministic_per_seed() {
        let catalog = test_catalog();
        let a = legal_list_generator(Gender::F, &catalog, 7).unwrap();
        let b = legal_list_generator(Gender::F, &catalog, 7).unwrap();
        assert_eq!(a, b);
        let c = legal_list_generator(Gender::F, &catalog, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn generator_rejects_insufficient_catalog() {
        let catalog: Vec<DiveDescriptor> = test_catalog()
            .into_iter()
            .filter(|d| d.direction != Direction::Reverse)
            .collect();
        assert_eq!(
            legal_list_generator(Gender::F, &catalog, 1),
            Err(ListGenError::MissingDirection(Direction::Reverse))
        );

        // One class per direction cannot produce 11 distinct dives.
        let thin: Vec<DiveDescriptor> = Direction::ALL
            .iter()
            .map(|&d| dive(d, 1, 0, 15))
            .collect();
        assert_eq!(
            legal_list_generator(Gender::F, &thin, 1),
            Err(ListGenError::InsufficientVariety)
        );
    }
}
