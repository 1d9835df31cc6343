//! Brute-force and statistical checkers that tests trust over the
//! production code paths.

mod acd;
mod exact;
mod recover;
mod serene;
pub mod stats;

pub use acd::{check_acd, neighborhood_edges, AcdViolation, AcdViolationKind};
pub use exact::*;
pub use recover::{brute_force_recover, BruteForce};
pub use serene::{check_serene, SereneCheck};
pub use stats::{slack_statistics, wilson, SlackFamily, StatFixture, StatRow};
