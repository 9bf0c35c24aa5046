//! Scoring and judging-bias analytics for springboard diving meets.
//!
//! The crate reproduces the meet-scoring arithmetic (net scores, awards,
//! standings), enforces 11-dive list legality, measures judging bias as the
//! discrepancy between a dive's net score and the diver's competency (their
//! mean net over all recorded dives), smooths per-meet round trends with
//! loess, fits a random-intercept mixed-effects model of discrepancy on
//! round, age, and DD by profiled REML, and validates the whole pipeline
//! against a seeded synthetic-meet simulator with injectable biases.
//!
//! Start with the runnable examples (`cargo run --example <name>`):
//!
//! - `score_meet` — marks to nets, awards, and standings
//! - `validate_list` — 11-dive list legality checks
//! - `discrepancy_summaries` — competency, discrepancy, groupwise summaries
//! - `round_trend` — per-meet loess round-bias curves
//! - `fit_mixed_model` — REML fit and the per-gender coefficient table
//! - `simulate_archive` — synthetic archive with a ground-truth sidecar
//! - `power_study` — parameter-recovery study over a config grid
//! - `render_plots` — ridgeline and round-trend SVGs
//!
//! The same capabilities are scriptable through the thin `divebias` binary
//! (`ingest validate score analyze trend fit simulate power plot`).

pub mod analytics;
pub mod cli;
pub mod dive;
pub mod ingest;
pub mod lmm;
pub mod loess;
pub mod plot;
pub mod rules;
pub mod scoring;
pub mod sim;

pub use dive::{parse_dive_token, same_dive, validate_descriptor, DiveDescriptor, Direction, Position};
pub use ingest::{parse_archive, Dataset, Gender, RoundRecord};

pub use scoring::{award, net_score, rank_meet, Award, Mark, NetScore};
