//! UAV-assisted data collection from field IoT devices.
//!
//! A rotary-wing UAV launches from a start point, hovers above each subarea of
//! a rectangular field to collect data from the devices inside it over TDMA
//! uplinks, and lands at an end point. A candidate plan fixes the hover
//! coordinates, the visit order, the per-leg flight speeds, and the device
//! transmit powers. Three objectives are minimized jointly: the negated
//! minimum device rate, the total device transmit energy, and the total UAV
//! propulsion-plus-hover energy.
//!
//! The crate provides the channel/rate/energy models ([`channel`], [`energy`],
//! [`objective`]), the mixed continuous–permutation encoding ([`solution`]),
//! Pareto-archive machinery ([`archive`]), a multi-objective artificial
//! hummingbird optimizer with optional chaotic initialization, Cauchy
//! mutation, and permutation-swap operators ([`engine`], [`operators`]),
//! quality indicators and a small-instance exhaustive oracle ([`metrics`]),
//! and a seeded experiment harness with TOML configuration ([`config`],
//! [`experiment`]). The `hoverplan` binary wraps the harness in a CLI.

// Validations use `!(x > 0.0)` instead of `x <= 0.0` so NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod archive;
pub mod channel;
pub mod config;
pub mod energy;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod format;
pub mod metrics;
pub mod objective;
pub mod operators;
pub mod scenario;
pub mod solution;

pub use error::Error;
pub use objective::ObjectiveVector;
pub use scenario::Scenario;
pub use solution::SolutionVector;
