//! Support code for the `lietorus` binary.

pub mod config;
