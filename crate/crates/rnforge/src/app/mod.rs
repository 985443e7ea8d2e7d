//! Application layer: persistence schemas, curve-table ingestion, the
//! conjecture and reproduction harnesses, and configuration.

pub mod config;
pub mod conjecture;
pub mod curves;
pub mod jsonl;
pub mod reproduce;
