//! Codes where only a subset `Θ` of positions has small locality sets:
//! capability checks, the distance bound `n - k + 1 - T·τ`, and the
//! shortening procedure that certifies it on concrete codes.

mod bound;
mod example;
mod locality;
pub mod random;
mod shorten;

pub use bound::{compute_t, BoundParams, BoundReport, ConditionRow};
pub use example::{build_example_code, example_length, ExampleCode, MAX_EXAMPLE_K};
pub use locality::{verify_capability, Capability, LocalityEntry, LocalityFile, LocalityStructure};
pub use shorten::{shorten, ShorteningStep, ShorteningTrace, StopReason};
