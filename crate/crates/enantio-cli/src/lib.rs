//! Batch front-end for the enantio models.
//!
//! A run reads a TOML spec, validates it against the schema of the chosen
//! experiment kind, and writes `summary.json`, `records.csv`, per-trace CSVs
//! and `manifest.json`. A `[sweep]` table turns the run into a Cartesian
//! parameter grid evaluated in parallel.

pub mod app;
pub mod error;
pub mod kinds;
pub mod output;
pub mod schema;
