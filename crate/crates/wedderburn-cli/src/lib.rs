//! Library surface of the command-line driver: input loading, the JSON
//! encodings of exact values, and the three commands (analyze, units,
//! verify). The binary in `main.rs` is a thin argument parser over these.

pub mod analyze;
pub mod fail;
pub mod json;
pub mod source;
pub mod units_cmd;
pub mod verify_cmd;
