//! Command-line front end: sweeps, the verification report and the
//! common-source crossover study.

pub mod config;
pub mod crossover;
pub mod sweep;
pub mod verify;
