//! Operator surface: subcommand implementations plus the HTTP graph
//! environment, kept in a library so integration tests can drive them
//! directly.

pub mod commands;
pub mod service;
