//! Downlink system-level simulator for dense heterogeneous small-cell networks.
//!
//! One Monte-Carlo *drop* places a hexagonal macro grid, pico cells and UEs,
//! builds the static link-gain matrix, associates UEs by strongest biased
//! received power, assigns per-cell resource-block masks according to the
//! configured reuse scheme, and runs a full-buffer TTI loop with a
//! Round-Robin, Proportional-Fair or Best-CQI scheduler. Rates come from a
//! modified Shannon mapping of per-RB SINR.
//!
//! With the `parallel` feature (on by default) the data-parallel parts run on
//! rayon. [`Exec::Sequential`] forces the single-threaded path; both produce
//! bit-identical results.

pub mod config;
pub mod deployment;
pub mod engine;
mod error;
mod exec;
pub mod harness;
pub mod link;
pub mod propagation;
pub mod reuse;
mod rng;
pub mod scheduler;

pub use config::ScenarioConfig;
pub use error::{Error, Result};
pub use exec::Exec;
pub use rng::{substream, Stream};
