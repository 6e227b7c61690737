//! Benchmark harness for the 1-D shallow water PAMPA solver: declarative
//! experiment configs, the built-in benchmark presets, error norms and
//! convergence studies, and CSV/SVG artifact output.

pub mod config;
pub mod expr;
pub mod norms;
pub mod output;
pub mod presets;
pub mod runner;
